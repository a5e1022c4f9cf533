"""Decay of the averaged reservoir commutator when a particle rotates many spins.

For ``F = U^(1) ⊗ ... ⊗ U^(N)`` and a product spin state the average
factorizes:

    <[F'^+, F]> = Π_a <U'^(a)+ U^(a)> - Π_a <U^(a) U'^(a)+>
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..linalg import bloch_density_matrix, dagger, unitarity_error
from ..results import ScenarioResult

MODES = ("generic", "commuting-z")


@dataclass(frozen=True)
class NSpinConfig:
    """Per-spin rotation pairs ``(U_ji, U_j'i)`` and Bloch vectors.

    A single entry in ``rotations`` or ``spin_states`` is shared by all
    ``n_spins`` spins.
    """

    n_spins: int
    rotations: list
    spin_states: list = field(default_factory=lambda: [(0.0, 0.0, 1.0)])
    mode: str = "generic"

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError("n_spins must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        rots = [tuple(np.asarray(u, dtype=complex) for u in pair) for pair in self.rotations]
        if len(rots) not in (1, self.n_spins):
            raise ValueError(f"need 1 or {self.n_spins} rotation pairs, got {len(rots)}")
        for k, pair in enumerate(rots):
            if len(pair) != 2:
                raise ValueError(f"spin {k}: rotation entry must be a pair (U_ji, U_j'i)")
            for u in pair:
                if u.shape != (2, 2) or unitarity_error(u) > 1e-12:
                    raise ValueError(f"spin {k}: rotation is not a 2x2 unitary")
                if self.mode == "commuting-z" and abs(u[0, 1]) + abs(u[1, 0]) > 1e-12:
                    raise ValueError(f"spin {k}: commuting-z mode needs rotations diagonal in the z basis")
        states = [tuple(float(x) for x in b) for b in self.spin_states]
        if len(states) not in (1, self.n_spins):
            raise ValueError(f"need 1 or {self.n_spins} spin states, got {len(states)}")
        for b in states:
            if len(b) != 3 or np.linalg.norm(b) > 1 + 1e-12:
                raise ValueError(f"invalid Bloch vector {b}")
        object.__setattr__(self, "rotations", rots)
        object.__setattr__(self, "spin_states", states)

    def spin(self, k: int):
        rot = self.rotations[k if len(self.rotations) > 1 else 0]
        bloch = self.spin_states[k if len(self.spin_states) > 1 else 0]
        return rot, bloch


def per_spin_overlaps(cfg: NSpinConfig) -> list[tuple[complex, complex]]:
    """``(<U'^+ U>, <U U'^+>)`` for each spin."""
    out = []
    for k in range(cfg.n_spins):
        (u, up), bloch = cfg.spin(k)
        pi = bloch_density_matrix(bloch)
        out.append((complex(np.trace(pi @ dagger(up) @ u)), complex(np.trace(pi @ u @ dagger(up)))))
    return out


def measured_q(cfg: NSpinConfig) -> float:
    """Largest per-spin overlap magnitude; the norm is bounded by ``2 q^N``."""
    return max(max(abs(a), abs(b)) for a, b in per_spin_overlaps(cfg))


def nspin_commutator_decay(cfg: NSpinConfig, max_n: int | None = None) -> list[tuple[int, float]]:
    """``(n, |<[F'^+, F]>|)`` for ``n = 1..max_n`` using the first ``n`` spins."""
    max_n = cfg.n_spins if max_n is None else max_n
    if not 1 <= max_n <= cfg.n_spins:
        raise ValueError(f"max_n must lie in 1..{cfg.n_spins}, got {max_n}")
    overlaps = per_spin_overlaps(cfg)
    prod_a = prod_b = 1.0 + 0.0j
    rows = []
    for n in range(1, max_n + 1):
        a, b = overlaps[n - 1]
        prod_a *= a
        prod_b *= b
        rows.append((n, float(abs(prod_a - prod_b))))
    return rows


def decay_slope(rows) -> float:
    """Least-squares slope of ``ln(norm)`` against ``n``."""
    n = np.array([r[0] for r in rows], dtype=float)
    y = np.log(np.array([r[1] for r in rows]))
    return float(np.polyfit(n, y, 1)[0])


def run_nspin(cfg: NSpinConfig, max_n: int | None = None) -> ScenarioResult:
    rows = nspin_commutator_decay(cfg, max_n)
    q = measured_q(cfg)
    checks = {
        "measured_q": q,
        "monotone_non_increasing": all(b[1] <= a[1] for a, b in zip(rows, rows[1:])),
        "max_norm": max(v for _, v in rows),
    }
    if cfg.mode == "generic" and all(v > 0 for _, v in rows) and len(rows) > 1:
        checks["log_slope"] = decay_slope(rows)
        checks["bound_slope"] = float(np.log(q)) if q > 0 else float("-inf")
    return ScenarioResult(
        scenario="nspin",
        series=rows,
        checks=checks,
        metadata={"n_spins": cfg.n_spins, "max_n": len(rows), "mode": cfg.mode},
    )
