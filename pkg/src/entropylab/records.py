"""Verification records, suite configuration and report aggregation."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class VerificationRecord:
    """Outcome of one property check on one instance.

    margins are named reals; the sign convention is "bigger is safer":
    for order checks they are Loewner margins, for identity checks they are
    tolerance minus deviation. pass iff every margin >= 0.
    """

    check_id: str
    instance: dict
    margins: dict
    passed: bool
    witness: dict | None = None

    def min_margin(self) -> float:
        return min(self.margins.values()) if self.margins else 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def record_from_margins(check_id: str, instance: dict, margins: dict,
                        witness: dict | None = None) -> VerificationRecord:
    passed = all(v >= 0.0 for v in margins.values())
    return VerificationRecord(check_id, instance, margins, passed,
                              witness if not passed else witness)


@dataclass
class SuiteConfig:
    suite: str = "operator"
    trials: int = 100
    dims: list = field(default_factory=lambda: [1, 2, 3, 4, 5, 6, 7, 8])
    p_values: list = field(default_factory=lambda: [round(0.1 * k, 1)
                                                    for k in range(1, 10)])
    seed: int = 0
    cond_cap: float = 100.0
    x_min: float = -4.0
    x_max: float = 4.0
    n: int = 201
    nodes_means: int = 64
    nodes_entropy: int = 128
    identity_tol: float = 1e-9
    order_tol: float = 1e-8
    crossbackend_tol: float = 1e-3
    slack_c: float = 10.0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n < 2:
            raise ValueError("grid size n must be >= 2")
        if any(p < 0.0 or p > 1.0 for p in self.p_values):
            raise ValueError("all p values must lie in [0, 1]")

    @classmethod
    def from_file(cls, path, **overrides) -> "SuiteConfig":
        data = json.loads(Path(path).read_text())
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CheckAggregate:
    count: int = 0
    failures: int = 0
    min_margin: float = float("inf")
    argmin_instance: dict | None = None
    worst_witness: dict | None = None

    def add(self, rec: VerificationRecord) -> None:
        self.count += 1
        if not rec.passed:
            self.failures += 1
        m = rec.min_margin()
        if m < self.min_margin:
            self.min_margin = m
            self.argmin_instance = rec.instance
            self.worst_witness = rec.witness

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "failures": self.failures,
            "min_margin": self.min_margin,
            "argmin_instance": self.argmin_instance,
            "worst_witness": self.worst_witness,
        }


class VerificationReport:
    """Per-check aggregates of one suite run, serializable to JSON."""

    def __init__(self, config: SuiteConfig):
        self.config = config
        self.checks: dict[str, CheckAggregate] = {}
        self.wall_clock = 0.0
        self.timestamp = ""

    def add(self, rec: VerificationRecord) -> None:
        self.checks.setdefault(rec.check_id, CheckAggregate()).add(rec)

    def extend(self, records) -> None:
        for rec in records:
            self.add(rec)

    @property
    def failures(self) -> int:
        return sum(agg.failures for agg in self.checks.values())

    def finalize(self, started: float) -> "VerificationReport":
        self.wall_clock = time.monotonic() - started
        self.timestamp = time.strftime("%Y-%m-%dT%H:%M:%S%z")
        return self

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "checks": {k: self.checks[k].to_dict()
                       for k in sorted(self.checks)},
            "failures": self.failures,
            "tool_version": TOOL_VERSION,
            "wall_clock_s": self.wall_clock,
            "timestamp": self.timestamp,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2,
                                         sort_keys=True) + "\n")
