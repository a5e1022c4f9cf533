"""Electron scattered by slow heavy scatterers (ions) sitting at classically distributed positions."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..channels import (
    EnergyBlock,
    assemble_grand_unitary,
    channel_from_stinespring,
    entropy_gain,
    unitality_criterion_defect,
    unitality_defect,
)
from ..errors import DimensionMismatch, NotUnitary
from ..linalg import as_matrix, max_abs, unitarity_error
from ..results import ScenarioResult


def diagonal_block(labels: Sequence[str], s_of_position: Mapping[str, np.ndarray], label: str = "E") -> EnergyBlock:
    """``F[j, i] = Σ_r s_r[j, i] |r><r|`` with the trivial factor ``s = 1``."""
    mats = [as_matrix(s_of_position[name]) for name in labels]
    n = mats[0].shape[0]
    for name, m in zip(labels, mats):
        if m.shape != (n, n):
            raise DimensionMismatch(f"s-matrix for position {name!r} has shape {m.shape}, expected {(n, n)}")
    family = {(j, i): np.diag([m[j, i] for m in mats]) for j in range(n) for i in range(n)}
    return EnergyBlock(label, np.ones((n, n), dtype=complex), family)


def diagonal_reservoir_channel(positions_weights, s_of_position, input_state=None) -> ScenarioResult:
    """Channel induced by a reservoir whose operators are diagonal in the position basis.

    Both the commutator criterion and the measured ``Φ(1) - 1`` are
    reported; the entropy report is for the maximally mixed input.
    """
    labels = [str(name) for name, _ in positions_weights]
    probs = np.array([float(p) for _, p in positions_weights])
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError(f"position probabilities must be non-negative and sum to 1, got {probs.tolist()}")
    for name in labels:
        if name not in s_of_position:
            raise KeyError(f"no s-matrix for position {name!r}")
        if unitarity_error(s_of_position[name]) > 1e-10:
            raise NotUnitary(f"s-matrix for position {name!r} is not unitary")

    block = diagonal_block(labels, s_of_position)
    pi = np.diag(probs).astype(complex)
    crit = unitality_criterion_defect(block, pi)
    phi = channel_from_stinespring(assemble_grand_unitary(block), pi, block.dim_sys)
    defect = unitality_defect(phi)
    n = block.dim_sys
    report = entropy_gain(phi, np.eye(n) / n)
    checks = {
        "criterion_vs_stinespring": max_abs(crit.values - defect.matrix),
    }
    if input_state is not None:
        checks["input_state_entropy"] = entropy_gain(phi, input_state).to_dict()
    return ScenarioResult(
        scenario="diagonal",
        unitality_max_defect=defect.max_abs,
        criterion=crit,
        entropy=report,
        checks=checks,
        metadata={"positions": labels, "probabilities": probs.tolist()},
    )
