"""Quantum channels for energy-isolated systems coupled to a reservoir.

A fixed-energy block factorizes the grand evolution operator as

    U = sum_{j,i} |j><i| (x) s[j, i] F[j, i]

with ``s`` a scattering matrix on the system block and ``F[j, i]`` operators
on the reservoir. The channel on the system is ``tr_R U (rho (x) pi) U^+``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    ConstraintViolation,
    DimensionMismatch,
    NotTracePreserving,
    NotUnitary,
    SingularBound,
)
from .linalg import (
    ZERO_EIGENVALUE,
    as_matrix,
    block_diagonal,
    dagger,
    hermitian_eigendecompose,
    max_abs,
    unitarity_error,
    validate_density_matrix,
    von_neumann_entropy,
)

UNITARITY_TOL = 1e-10
CRITERION_TOL = 1e-10
ENTROPY_TOL = 1e-8


@dataclass(frozen=True)
class KrausChannel:
    """``Φ(ρ) = Σ_a K_a ρ K_a†`` with the completeness relation checked on creation."""

    kraus_ops: tuple
    atol: float = UNITARITY_TOL

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus_ops)
        if not ops:
            raise DimensionMismatch("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise DimensionMismatch(f"Kraus operator of shape {k.shape}, expected {(dim, dim)}")
        completeness = sum(dagger(k) @ k for k in ops)
        err = max_abs(completeness - np.eye(dim))
        if err > self.atol:
            raise NotTracePreserving(f"sum K^+K deviates from identity by {err:.3e}")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __call__(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        return sum(k @ rho @ dagger(k) for k in self.kraus_ops)

    def identity_image(self) -> np.ndarray:
        """``Φ(1) = Σ_a K_a K_a†``."""
        return sum(k @ dagger(k) for k in self.kraus_ops)


@dataclass(frozen=True)
class EnergyBlock:
    """One fixed-energy subspace: scattering matrix plus reservoir operator family.

    ``f_family`` maps ``(j, i)`` to the reservoir operator attached to the
    transition ``i -> j``; every pair must be present.
    """

    label: str
    s: np.ndarray
    f_family: Mapping[tuple, np.ndarray]
    weight: float = 1.0

    def __post_init__(self):
        s = as_matrix(self.s)
        if s.shape[0] != s.shape[1]:
            raise DimensionMismatch(f"block {self.label!r}: s-matrix must be square, got {s.shape}")
        n = s.shape[0]
        family = {}
        dim_res = None
        for j in range(n):
            for i in range(n):
                if (j, i) not in self.f_family:
                    raise DimensionMismatch(f"block {self.label!r}: missing reservoir operator F[{j},{i}]")
                f = as_matrix(self.f_family[(j, i)])
                if dim_res is None:
                    dim_res = f.shape[0]
                if f.shape != (dim_res, dim_res):
                    raise DimensionMismatch(
                        f"block {self.label!r}: F[{j},{i}] has shape {f.shape}, expected {(dim_res, dim_res)}"
                    )
                family[(j, i)] = f
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "f_family", family)
        object.__setattr__(self, "weight", float(self.weight))

    @property
    def dim_sys(self) -> int:
        return self.s.shape[0]

    @property
    def dim_res(self) -> int:
        return self.f_family[(0, 0)].shape[0]

    def f(self, j: int, i: int) -> np.ndarray:
        return self.f_family[(j, i)]


@dataclass(frozen=True)
class EntropyReport:
    """Entropies in units of k_B (natural log)."""

    s_in: float
    s_out: float
    delta_s: float
    eq1_bound: float | None

    def to_dict(self) -> dict:
        return {"s_in": self.s_in, "s_out": self.s_out, "delta_s": self.delta_s, "eq1_bound": self.eq1_bound}

    @classmethod
    def from_dict(cls, d: Mapping) -> "EntropyReport":
        bound = d.get("eq1_bound")
        return cls(float(d["s_in"]), float(d["s_out"]), float(d["delta_s"]), None if bound is None else float(bound))

    def satisfies_bound(self, tol: float = ENTROPY_TOL) -> bool:
        return self.eq1_bound is None or self.delta_s >= self.eq1_bound - tol


@dataclass(frozen=True)
class CriterionDefect:
    """``values[j, j'] = Σ_i s[j,i] s*[j',i] <[F[j',i]^+, F[j,i]]>``."""

    values: np.ndarray
    max_abs: float

    def value(self, j: int, jp: int) -> complex:
        return complex(self.values[j, jp])


@dataclass(frozen=True)
class UnitalityDefect:
    matrix: np.ndarray
    max_abs: float


class UnitarityCheck(NamedTuple):
    passed: bool
    max_violation: float
    left_violation: float
    right_violation: float


class Witness(NamedTuple):
    block_index: int
    block: str
    j: int
    jp: int
    magnitude: float


@dataclass(frozen=True)
class Verdict:
    guaranteed: bool
    witness: Witness | None = None
    block_defects: tuple = field(default=())


def assemble_grand_unitary(block: EnergyBlock) -> np.ndarray:
    """``U[(j,m),(i,n)] = s[j,i] F[j,i][m,n]`` on the system-major composite space."""
    n, r = block.dim_sys, block.dim_res
    u = np.zeros((n * r, n * r), dtype=complex)
    for (j, i), f in block.f_family.items():
        u[j * r:(j + 1) * r, i * r:(i + 1) * r] = block.s[j, i] * f
    return u


def block_from_unitary(u, dim_sys: int, s=None, label: str = "E", weight: float = 1.0) -> EnergyBlock:
    """Factorize a grand unitary into ``s[j,i] F[j,i]`` given a nowhere-zero ``s``.

    The factorization is not unique; by default ``s`` is all ones so that the
    reservoir operators are the raw ``(j, i)`` blocks of ``u``.
    """
    u = as_matrix(u)
    if u.shape[0] % dim_sys:
        raise DimensionMismatch(f"dimension {u.shape[0]} is not a multiple of dim_sys={dim_sys}")
    r = u.shape[0] // dim_sys
    s = np.ones((dim_sys, dim_sys), dtype=complex) if s is None else as_matrix(s)
    if np.any(np.abs(s) == 0):
        raise ValueError("s must be nonzero everywhere to factor out of U")
    family = {
        (j, i): u[j * r:(j + 1) * r, i * r:(i + 1) * r] / s[j, i]
        for j in range(dim_sys)
        for i in range(dim_sys)
    }
    return EnergyBlock(label, s, family, weight)


def check_unitarity_constraints(block: EnergyBlock, atol: float = UNITARITY_TOL) -> UnitarityCheck:
    """Evaluate both grand-unitarity relations directly on ``(s, F)``.

    The first is ``U^+U = 1`` written blockwise,
    ``Σ_i s*[i,j'] s[i,j] F[i,j']^+ F[i,j] = δ_{jj'} 1``; the second is
    ``UU^+ = 1``, ``Σ_i s[j,i] s*[j',i] F[j,i] F[j',i]^+ = δ_{jj'} 1``.
    """
    n, r = block.dim_sys, block.dim_res
    s = block.s
    eye = np.eye(r)
    left = right = 0.0
    for j in range(n):
        for jp in range(n):
            lhs_left = np.zeros((r, r), dtype=complex)
            lhs_right = np.zeros((r, r), dtype=complex)
            for i in range(n):
                lhs_left += np.conj(s[i, jp]) * s[i, j] * dagger(block.f(i, jp)) @ block.f(i, j)
                lhs_right += s[j, i] * np.conj(s[jp, i]) * block.f(j, i) @ dagger(block.f(jp, i))
            target = eye if j == jp else 0.0
            left = max(left, max_abs(lhs_left - target))
            right = max(right, max_abs(lhs_right - target))
    worst = max(left, right)
    return UnitarityCheck(worst <= atol, worst, left, right)


def channel_from_stinespring(u, pi, dim_sys: int, atol: float = UNITARITY_TOL) -> KrausChannel:
    """Kraus form of ``ρ -> tr_R U (ρ ⊗ π) U^+``.

    With ``π = Σ_k λ_k |e_k><e_k|`` the operators are
    ``K_{m,k} = √λ_k (1 ⊗ <m|) U (1 ⊗ |e_k>)``; components with
    ``λ_k < 1e-14`` are dropped.
    """
    u = as_matrix(u)
    pi = validate_density_matrix(pi)
    dim_res = pi.shape[0]
    if u.shape != (dim_sys * dim_res, dim_sys * dim_res):
        raise DimensionMismatch(
            f"grand unitary has shape {u.shape}, expected {dim_sys * dim_res} for {dim_sys} x {dim_res}"
        )
    err = unitarity_error(u)
    if err > atol:
        raise NotUnitary(f"grand evolution operator is not unitary (deviation {err:.3e})")

    dec = hermitian_eigendecompose(pi)
    keep = dec.eigenvalues >= ZERO_EIGENVALUE
    lam = dec.eigenvalues[keep]
    vecs = dec.eigenvectors[:, keep]
    u4 = u.reshape(dim_sys, dim_res, dim_sys, dim_res)
    # kraus[m, k] = sqrt(lam_k) * sum_n U[(., m), (., n)] e_k[n]
    kraus = np.einsum("jmin,nk->mkji", u4, vecs * np.sqrt(lam))
    ops = [kraus[m, k] for m in range(dim_res) for k in range(lam.size)]
    return KrausChannel(tuple(ops), atol=atol)


def apply_channel(phi: KrausChannel, rho, atol: float = UNITARITY_TOL) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (phi.dim, phi.dim):
        raise DimensionMismatch(f"state of shape {rho.shape} does not match channel dimension {phi.dim}")
    out = phi(rho)
    out = 0.5 * (out + dagger(out))
    return validate_density_matrix(out, atol=atol)


def unitality_defect(phi: KrausChannel) -> UnitalityDefect:
    d = phi.identity_image() - np.eye(phi.dim)
    return UnitalityDefect(d, max_abs(d))


def unitality_criterion_defect(block: EnergyBlock, pi, check: bool = True) -> CriterionDefect:
    """Commutator form of ``Φ(1_E) - 1_E`` for one energy block.

    Raises ``ConstraintViolation`` if the block does not describe a unitary
    grand evolution, since the identity only holds under unitarity.
    """
    pi = validate_density_matrix(pi)
    if pi.shape[0] != block.dim_res:
        raise DimensionMismatch(f"reservoir state has dim {pi.shape[0]}, block expects {block.dim_res}")
    if check:
        result = check_unitarity_constraints(block)
        if not result.passed:
            raise ConstraintViolation(
                f"block {block.label!r} violates unitarity constraints by {result.max_violation:.3e}",
                result.max_violation,
            )
    n = block.dim_sys
    s = block.s
    values = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for jp in range(n):
            total = 0.0j
            for i in range(n):
                coeff = s[j, i] * np.conj(s[jp, i])
                if coeff == 0:
                    continue
                a, b = dagger(block.f(jp, i)), block.f(j, i)
                total += coeff * np.trace(pi @ (a @ b - b @ a))
            values[j, jp] = total
    return CriterionDefect(values, max_abs(values))


def entropy_gain(phi: KrausChannel, rho) -> EntropyReport:
    """Entropy change under ``phi`` together with the ``-tr Φ(ρ) ln Φ(1)`` lower bound.

    When ``Φ(1)`` has a (numerically) zero eigenvalue on which ``Φ(ρ)``
    carries weight the bound is reported as ``-inf`` and ``SingularBound``
    is warned.
    """
    rho = validate_density_matrix(rho)
    out = apply_channel(phi, rho)
    s_in = von_neumann_entropy(rho)
    s_out = von_neumann_entropy(out)

    dec = hermitian_eigendecompose(phi.identity_image())
    bound = 0.0
    for mu, vec in zip(dec.eigenvalues, dec.eigenvectors.T):
        weight = float(np.real(np.conj(vec) @ out @ vec))
        if mu <= ZERO_EIGENVALUE:
            if weight > 1e-12:
                warnings.warn(
                    f"Φ(1) eigenvalue {mu:.3e} carries output weight {weight:.3e}; bound is -inf",
                    SingularBound,
                    stacklevel=2,
                )
                bound = -np.inf
                break
            continue
        bound -= weight * np.log(mu)
    return EntropyReport(s_in, s_out, s_out - s_in, float(bound))


def channel_from_blocks(blocks: Sequence[EnergyBlock], pi) -> KrausChannel:
    """Channel on the direct sum of all block subspaces (blocks evolve independently)."""
    _check_block_list(blocks)
    n = blocks[0].dim_sys
    r = blocks[0].dim_res
    grand = [assemble_grand_unitary(b) for b in blocks]
    # reorder each block's (sys, res) grid into the overall system-major layout
    total = len(blocks) * n
    u = np.zeros((total * r, total * r), dtype=complex)
    for b, ub in enumerate(grand):
        off = b * n * r
        u[off:off + n * r, off:off + n * r] = ub
    return channel_from_stinespring(u, pi, total)


def h_theorem_verdict(blocks: Sequence[EnergyBlock], rho_blocks, pi, atol: float = CRITERION_TOL) -> Verdict:
    """Whether non-decreasing entropy is guaranteed for the given block populations.

    ``rho_blocks`` holds the (unnormalized) restriction of the state to each
    block; only blocks with trace weight above 1e-12 are inspected. A failed
    check means "not guaranteed", not "entropy will decrease".
    """
    _check_block_list(blocks)
    if len(rho_blocks) != len(blocks):
        raise DimensionMismatch(f"{len(rho_blocks)} state blocks for {len(blocks)} energy blocks")
    defects = []
    witness = None
    for index, (block, rho_b) in enumerate(zip(blocks, rho_blocks)):
        occupied = abs(np.trace(as_matrix(rho_b))) > 1e-12
        if not occupied:
            defects.append(None)
            continue
        crit = unitality_criterion_defect(block, pi)
        defects.append(crit.max_abs)
        if witness is None and crit.max_abs > atol:
            hits = np.argwhere(np.abs(crit.values) > atol)
            j, jp = (int(x) for x in hits[0])
            witness = Witness(index, block.label, j, jp, float(abs(crit.values[j, jp])))
    return Verdict(witness is None, witness, tuple(defects))


def block_diagonal_state(rho_blocks) -> np.ndarray:
    return block_diagonal(*rho_blocks)


def _check_block_list(blocks: Sequence[EnergyBlock]) -> None:
    if not blocks:
        raise DimensionMismatch("at least one energy block is required")
    n, r = blocks[0].dim_sys, blocks[0].dim_res
    for b in blocks:
        if (b.dim_sys, b.dim_res) != (n, r):
            raise DimensionMismatch(
                f"block {b.label!r} has dims ({b.dim_sys}, {b.dim_res}), expected ({n}, {r})"
            )
    weights = [b.weight for b in blocks]
    if abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError(f"block weights sum to {sum(weights):.15g}, expected 1")
