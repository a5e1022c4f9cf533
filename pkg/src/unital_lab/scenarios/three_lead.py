"""Particle in a three-lead conductor rotating a nearby spin (the entropy-lowering "demon")."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..channels import (
    EnergyBlock,
    assemble_grand_unitary,
    channel_from_blocks,
    channel_from_stinespring,
    check_unitarity_constraints,
    entropy_gain,
    h_theorem_verdict,
    unitality_criterion_defect,
    unitality_defect,
)
from ..errors import ConstraintViolation, NotCompletable, NotUnitary
from ..linalg import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    bloch_density_matrix,
    block_diagonal,
    dagger,
    max_abs,
    unitarity_error,
)
from ..results import ScenarioResult

DEMON_ROTATIONS = (IDENTITY_2, 1j * SIGMA_X, 1j * SIGMA_Y)


@dataclass(frozen=True)
class SpinState:
    bloch: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        b = tuple(float(x) for x in self.bloch)
        if len(b) != 3:
            raise ValueError(f"Bloch vector needs 3 components, got {len(b)}")
        if math.sqrt(sum(x * x for x in b)) > 1 + 1e-12:
            raise ValueError(f"Bloch vector {b} is longer than 1")
        object.__setattr__(self, "bloch", b)

    def density_matrix(self) -> np.ndarray:
        return bloch_density_matrix(self.bloch)


@dataclass(frozen=True)
class ThreeLeadConfig:
    """Demon setup. ``demon_weight`` is the population of the demon energy block;
    the rest sits in a block where the particle does not couple to the spin."""

    s_offdiag: complex = 2 / 3
    rotations: tuple = DEMON_ROTATIONS
    spin: SpinState = field(default_factory=lambda: SpinState((1 / 3, 1 / 3, 1 / 3)))
    demon_weight: float = 1.0

    def __post_init__(self):
        rots = tuple(np.asarray(r, dtype=complex) for r in self.rotations)
        if len(rots) != 3:
            raise ValueError(f"need three lead rotations, got {len(rots)}")
        for k, r in enumerate(rots):
            if r.shape != (2, 2) or unitarity_error(r) > 1e-12:
                raise NotUnitary(f"rotation {k + 1} is not a 2x2 unitary")
        if not 0.0 <= self.demon_weight <= 1.0:
            raise ValueError(f"demon_weight must lie in [0, 1], got {self.demon_weight}")
        object.__setattr__(self, "rotations", rots)
        object.__setattr__(self, "s_offdiag", complex(self.s_offdiag))


def symmetric_three_lead_smatrix(t12: float, t13: float, t23: float, atol: float = 1e-8) -> np.ndarray:
    """Symmetric unitary 3x3 scattering matrix with ``|s_ij|^2 = T_ij``.

    Off-diagonals are fixed real positive (always reachable by lead phase
    gauge). Orthogonality of the rows then leaves
    ``s_ii = ½ s_jk s_ij s_ik (1/T_jk - 1/T_ij - 1/T_ik) + i v`` with one
    imaginary part ``v`` shared by all three diagonals, fixed by row norms.
    """
    t = {(0, 1): t12, (0, 2): t13, (1, 2): t23}
    for (i, j), value in t.items():
        if not 0.0 < value <= 1.0:
            raise NotCompletable(f"T{i + 1}{j + 1}={value} is outside (0, 1]")
    s = np.zeros((3, 3), dtype=complex)
    for (i, j), value in t.items():
        s[i, j] = s[j, i] = math.sqrt(value)

    def T(a, b):
        return t[(min(a, b), max(a, b))]

    real_parts = []
    for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
        amp = s[j, k].real * s[i, j].real * s[i, k].real
        real_parts.append(0.5 * amp * (1 / T(j, k) - 1 / T(i, j) - 1 / T(i, k)))
    v2 = [1.0 - T(i, j) - T(i, k) - real_parts[i] ** 2 for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1))]
    if min(v2) < -atol or max(v2) - min(v2) > atol:
        raise NotCompletable(f"transmissions ({t12}, {t13}, {t23}) admit no symmetric unitary completion")
    v = math.sqrt(max(0.0, sum(v2) / 3))
    for i in range(3):
        s[i, i] = real_parts[i] + 1j * v
    err = unitarity_error(s)
    if err > atol:
        raise NotCompletable(f"completed matrix misses unitarity by {err:.3e}")
    return s


def demon_smatrix(s_offdiag: complex) -> np.ndarray:
    """Equal-transmission symmetric matrix with every off-diagonal equal to ``s_offdiag``."""
    r = abs(s_offdiag)
    phase = s_offdiag / r if r else 1.0
    return phase * symmetric_three_lead_smatrix(r * r, r * r, r * r)


def demon_block(cfg: ThreeLeadConfig, label: str = "demon", weight: float = 1.0) -> EnergyBlock:
    """Reservoir operators ``F[b, a] = U_b U_a^+``: the spin is rotated back on entry, forward on exit."""
    s = demon_smatrix(cfg.s_offdiag)
    u = cfg.rotations
    family = {(b, a): u[b] @ dagger(u[a]) for b in range(3) for a in range(3)}
    return EnergyBlock(label, s, family, weight)


def decoupled_block(cfg: ThreeLeadConfig, label: str = "decoupled", weight: float = 0.0) -> EnergyBlock:
    s = demon_smatrix(cfg.s_offdiag)
    family = {(b, a): IDENTITY_2 for b in range(3) for a in range(3)}
    return EnergyBlock(label, s, family, weight)


def demon_identity_image_closed_form(s: np.ndarray, bloch) -> np.ndarray:
    """``Φ(1_E)`` for rotations (1, iσx, iσy) and a symmetric ``s``, written out term by term."""
    sx, sy, sz = bloch
    out = np.eye(3, dtype=complex)
    terms = {
        (0, 1): s[0, 2] * np.conj(s[1, 2]) * sx,
        (0, 2): s[0, 1] * np.conj(s[1, 2]) * sy,
        (1, 2): -s[0, 1] * np.conj(s[0, 2]) * sz,
    }
    for (j, k), value in terms.items():
        out[j, k] += 2j * value
        out[k, j] += np.conj(2j * value)
    return out


def three_lead_demon(cfg: ThreeLeadConfig | None = None) -> ScenarioResult:
    cfg = cfg or ThreeLeadConfig()
    pi = cfg.spin.density_matrix()
    block = demon_block(cfg)

    unitarity = check_unitarity_constraints(block)
    if not unitarity.passed:
        raise ConstraintViolation(
            f"three-lead block violates unitarity by {unitarity.max_violation:.3e}", unitarity.max_violation
        )
    crit = unitality_criterion_defect(block, pi, check=False)
    phi = channel_from_stinespring(assemble_grand_unitary(block), pi, 3)
    defect = unitality_defect(phi)
    discrepancy = max_abs(crit.values - defect.matrix)

    w = cfg.demon_weight
    if w >= 1.0:
        report = entropy_gain(phi, np.eye(3) / 3)
        verdict = h_theorem_verdict([block], [np.eye(3) / 3], pi)
    else:
        blocks = [demon_block(cfg, weight=w), decoupled_block(cfg, weight=1.0 - w)]
        rho_blocks = [w * np.eye(3) / 3, (1.0 - w) * np.eye(3) / 3]
        report = entropy_gain(channel_from_blocks(blocks, pi), block_diagonal(*rho_blocks))
        verdict = h_theorem_verdict(blocks, rho_blocks, pi)

    return ScenarioResult(
        scenario="three-lead",
        unitality_max_defect=defect.max_abs,
        criterion=crit,
        entropy=report,
        checks={
            "unitarity_max_violation": unitarity.max_violation,
            "criterion_vs_stinespring": discrepancy,
            "paths_agree": discrepancy <= 1e-10,
            "guaranteed": verdict.guaranteed,
            "witness": None if verdict.witness is None else list(verdict.witness),
        },
        metadata={
            "s_offdiag": [cfg.s_offdiag.real, cfg.s_offdiag.imag],
            "bloch": list(cfg.spin.bloch),
            "demon_weight": w,
            "input_state": "maximally mixed on the demon block",
        },
    )
