"""Dense complex linear algebra used by the channel and entropy code.

Matrices are plain ``numpy`` complex arrays. Composite system-reservoir
spaces always use the system-major index ``i * dim_res + n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidDensityMatrix, NoConvergence, NonHermitian

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

# eigenvalues below this are treated as exact zeros in entropies and logs
ZERO_EIGENVALUE = 1e-14


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def max_abs(m) -> float:
    a = np.asarray(m)
    return float(np.max(np.abs(a))) if a.size else 0.0


def allclose(a, b, atol: float) -> bool:
    """Element-wise equality within an absolute tolerance (no relative slack)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and max_abs(a - b) <= atol


def is_hermitian(m, atol: float = 1e-10) -> bool:
    a = as_matrix(m)
    return a.shape[0] == a.shape[1] and max_abs(a - dagger(a)) <= atol


def is_unitary(m, atol: float = 1e-10) -> bool:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return max_abs(a @ dagger(a) - np.eye(a.shape[0])) <= atol


def unitarity_error(m) -> float:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return float("inf")
    eye = np.eye(a.shape[0])
    return max(max_abs(a @ dagger(a) - eye), max_abs(dagger(a) @ a - eye))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order with eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    b = a[p, q]
    abs_b = abs(b)
    phase = b / abs_b
    theta = (a[q, q].real - a[p, p].real) / (2.0 * abs_b)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # phase removal diag(1, e^{-i phi}) followed by the real rotation
    g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = dagger(g) @ a[idx, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ g


def hermitian_eigendecompose(m, atol: float = 1e-10, max_sweeps: int | None = None) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Raises ``NonHermitian`` when ``m`` deviates from its adjoint by more than
    ``atol`` and ``NoConvergence`` after ``max_sweeps`` full sweeps
    (default ``100 * n**2``).
    """
    a = as_matrix(m)
    n, cols = a.shape
    if n != cols:
        raise DimensionMismatch(f"eigendecomposition needs a square matrix, got {a.shape}")
    deviation = max_abs(a - dagger(a))
    if deviation > atol:
        raise NonHermitian(f"matrix is not Hermitian (max deviation {deviation:.3e})")
    a = 0.5 * (a + dagger(a))
    v = np.eye(n, dtype=complex)
    if max_sweeps is None:
        max_sweeps = 100 * n * n

    scale = float(np.linalg.norm(a))
    if n < 2 or scale == 0.0:
        return _sorted(np.real(np.diag(a)).copy(), v)

    converge = 1e-15 * scale
    negligible = 1e-18 * scale
    offdiag = ~np.eye(n, dtype=bool)
    sweeps = 0
    while True:
        off = float(np.sqrt(np.sum(np.abs(a[offdiag]) ** 2)))
        if off <= converge:
            break
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > negligible:
                    _jacobi_rotate(a, v, p, q)
                    rotated = True
        sweeps += 1
        if not rotated:
            break
    return _sorted(np.real(np.diag(a)).copy(), v)


def _sorted(eigenvalues: np.ndarray, vectors: np.ndarray) -> EigenDecomposition:
    order = np.argsort(eigenvalues, kind="stable")
    return EigenDecomposition(eigenvalues[order], vectors[:, order])


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product, ``(A⊗B)[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(*ops) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = tensor_product(out, op)
    return out


def partial_trace(m, dim_sys: int, dim_res: int, traced: str = "reservoir") -> np.ndarray:
    """Trace out one factor of a system-major composite operator."""
    a = as_matrix(m)
    dim = dim_sys * dim_res
    if a.shape != (dim, dim):
        raise DimensionMismatch(f"operator of shape {a.shape} does not factor as {dim_sys} x {dim_res}")
    t = a.reshape(dim_sys, dim_res, dim_sys, dim_res)
    if traced == "reservoir":
        return np.einsum("ikjk->ij", t)
    if traced == "system":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"traced must be 'system' or 'reservoir', not {traced!r}")


def validate_density_matrix(rho, atol: float = 1e-12) -> np.ndarray:
    """Return ``rho`` as a complex array, raising if it is not a density matrix."""
    a = as_matrix(rho)
    if a.shape[0] != a.shape[1]:
        raise InvalidDensityMatrix(f"density matrix must be square, got {a.shape}")
    herm = max_abs(a - dagger(a))
    if herm > atol:
        raise InvalidDensityMatrix(f"density matrix not Hermitian (deviation {herm:.3e})")
    trace = np.trace(a)
    if abs(trace - 1.0) > atol:
        raise InvalidDensityMatrix(f"density matrix trace is {trace.real:.15g}, expected 1")
    lowest = hermitian_eigendecompose(a, atol=atol).eigenvalues[0]
    if lowest < -atol:
        raise InvalidDensityMatrix(f"density matrix has negative eigenvalue {lowest:.3e}")
    return a


def _clamped_eigenvalues(rho: np.ndarray, atol: float) -> np.ndarray:
    w = hermitian_eigendecompose(rho, atol=atol).eigenvalues
    return np.where((w < 0.0) & (w >= -1e-12), 0.0, w)


def von_neumann_entropy(rho, atol: float = 1e-12) -> float:
    """``-tr(rho ln rho)`` in units of k_B; eigenvalues under 1e-14 contribute 0."""
    a = validate_density_matrix(rho, atol=atol)
    w = _clamped_eigenvalues(a, atol)
    w = w[w > ZERO_EIGENVALUE]
    return max(0.0, float(-np.sum(w * np.log(w))))


def hermitian_function(m, func, atol: float = 1e-10) -> np.ndarray:
    """Apply a scalar function to the spectrum of a Hermitian matrix."""
    dec = hermitian_eigendecompose(m, atol=atol)
    v = dec.eigenvectors
    return (v * func(dec.eigenvalues)) @ dagger(v)


def ket(index: int, dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=complex)
    out[index] = 1.0
    return out


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, np.conj(v))


def bloch_density_matrix(bloch) -> np.ndarray:
    """Spin-1/2 density matrix ``(1 + b·σ) / 2``."""
    bx, by, bz = (float(x) for x in bloch)
    return 0.5 * (IDENTITY_2 + bx * SIGMA_X + by * SIGMA_Y + bz * SIGMA_Z)


def block_diagonal(*blocks) -> np.ndarray:
    mats = [as_matrix(b) for b in blocks]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out
