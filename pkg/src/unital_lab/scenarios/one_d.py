"""Electron on a 1D barrier whose backscattering changes the reservoir state."""
from __future__ import annotations

import numpy as np

from ..channels import (
    EnergyBlock,
    assemble_grand_unitary,
    channel_from_stinespring,
    check_unitarity_constraints,
    entropy_gain,
    unitality_criterion_defect,
    unitality_defect,
)
from ..errors import ConstraintViolation, NotUnitary
from ..linalg import as_matrix, dagger, unitarity_error
from ..results import ScenarioResult

L, R = 0, 1


def scatterer_block(s2, f_rr, label: str = "E") -> EnergyBlock:
    """Transmission leaves the reservoir alone; reflection applies ``f_rr`` or its adjoint.

    Basis order is (L, R); ``s2[j, i]`` is the amplitude for ``i -> j``.
    """
    s2 = as_matrix(s2)
    f_rr = as_matrix(f_rr)
    eye = np.eye(f_rr.shape[0], dtype=complex)
    family = {(L, R): eye, (R, L): eye, (R, R): f_rr, (L, L): dagger(f_rr)}
    return EnergyBlock(label, s2, family)


def one_d_scatterer(s2, f_rr, reservoir_state=None, input_state=None) -> ScenarioResult:
    """Build the 1D channel and confirm ``Φ(1) = 1``.

    The reservoir defaults to its first basis state and the electron to an
    incoming left-lead state.
    """
    s2 = as_matrix(s2)
    f_rr = as_matrix(f_rr)
    if s2.shape != (2, 2) or unitarity_error(s2) > 1e-10:
        raise NotUnitary("s2 must be a 2x2 unitary scattering matrix")
    if f_rr.shape[0] != f_rr.shape[1] or unitarity_error(f_rr) > 1e-10:
        raise NotUnitary("f_rr must be a unitary reservoir operator")
    dim_res = f_rr.shape[0]
    if reservoir_state is None:
        reservoir_state = np.zeros((dim_res, dim_res), dtype=complex)
        reservoir_state[0, 0] = 1.0
    if input_state is None:
        input_state = np.diag([1.0, 0.0]).astype(complex)

    block = scatterer_block(s2, f_rr)
    unitarity = check_unitarity_constraints(block)
    if not unitarity.passed:
        raise ConstraintViolation(
            f"1D block violates unitarity by {unitarity.max_violation:.3e}", unitarity.max_violation
        )
    crit = unitality_criterion_defect(block, reservoir_state, check=False)
    phi = channel_from_stinespring(assemble_grand_unitary(block), reservoir_state, 2)
    defect = unitality_defect(phi)
    report = entropy_gain(phi, input_state)
    return ScenarioResult(
        scenario="one-d",
        unitality_max_defect=defect.max_abs,
        criterion=crit,
        entropy=report,
        checks={
            "unitarity_max_violation": unitarity.max_violation,
            "unital": defect.max_abs <= 1e-12,
        },
        metadata={"dim_res": dim_res},
    )
