"""Verdict records shared by the checkers and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

PASS, FAIL, NA = "pass", "fail", "not-applicable"


@dataclass
class Claim:
    id: str
    anchor: str
    verdict: str
    witness: str | None = None
    case: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL


@dataclass
class Report:
    suite: str
    claims: list[Claim] = field(default_factory=list)
    seed: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def add(self, cid: str, anchor: str, ok: bool, witness: str | None = None, case: str | None = None) -> Claim:
        c = Claim(cid, anchor, PASS if ok else FAIL, None if ok else witness, case)
        self.claims.append(c)
        return c

    def skip(self, cid: str, anchor: str, reason: str, case: str | None = None) -> Claim:
        c = Claim(cid, anchor, NA, reason, case)
        self.claims.append(c)
        return c

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.claims:
            self.claims.append(Claim(prefix + c.id, c.anchor, c.verdict, c.witness, c.case))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.claims)

    def failures(self) -> list[Claim]:
        return [c for c in self.claims if c.verdict == FAIL]

    def find(self, cid: str) -> Claim:
        for c in self.claims:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "ok": self.ok,
            "claims": [asdict(c) for c in self.claims],
            **({"extra": self.extra} if self.extra else {}),
        }
