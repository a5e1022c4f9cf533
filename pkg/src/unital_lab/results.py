from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .channels import CriterionDefect, EntropyReport
from .serialization import matrix_from_json, matrix_to_json


@dataclass
class ScenarioResult:
    """Structured output of one scenario run.

    ``entropy`` is a single report for one-shot channels and a list of
    per-step reports for trajectories. ``series`` carries ``(N, value)``
    rows for the spin-decay sweep.
    """

    scenario: str
    unitality_max_defect: float | None = None
    criterion: CriterionDefect | None = None
    entropy: EntropyReport | list | None = None
    series: list | None = None
    checks: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def trajectory(self) -> list:
        if self.entropy is None:
            return []
        return self.entropy if isinstance(self.entropy, list) else [self.entropy]

    def to_dict(self) -> dict:
        crit = None
        if self.criterion is not None:
            crit = {"values": matrix_to_json(self.criterion.values), "max_abs": self.criterion.max_abs}
        if isinstance(self.entropy, list):
            entropy: Any = [r.to_dict() for r in self.entropy]
        elif self.entropy is not None:
            entropy = self.entropy.to_dict()
        else:
            entropy = None
        return {
            "scenario": self.scenario,
            "unitality_max_defect": self.unitality_max_defect,
            "criterion": crit,
            "entropy": entropy,
            "series": None if self.series is None else [[int(n), float(v)] for n, v in self.series],
            "checks": self.checks,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ScenarioResult":
        crit = d.get("criterion")
        criterion = None
        if crit is not None:
            criterion = CriterionDefect(matrix_from_json(crit["values"], "criterion.values"), float(crit["max_abs"]))
        raw = d.get("entropy")
        if isinstance(raw, list):
            entropy: Any = [EntropyReport.from_dict(r) for r in raw]
        elif raw is not None:
            entropy = EntropyReport.from_dict(raw)
        else:
            entropy = None
        series = d.get("series")
        umd = d.get("unitality_max_defect")
        return cls(
            scenario=d["scenario"],
            unitality_max_defect=None if umd is None else float(umd),
            criterion=criterion,
            entropy=entropy,
            series=None if series is None else [(int(n), float(v)) for n, v in series],
            checks=dict(d.get("checks", {})),
            metadata=dict(d.get("metadata", {})),
        )

    def same_as(self, other: "ScenarioResult") -> bool:
        """Exact equality, including the criterion matrix."""
        if (self.criterion is None) != (other.criterion is None):
            return False
        if self.criterion is not None and not np.array_equal(self.criterion.values, other.criterion.values):
            return False
        a, b = self.to_dict(), other.to_dict()
        a.pop("criterion")
        b.pop("criterion")
        return a == b
