"""Seeded random matrices for property suites and randomized scenarios."""
from __future__ import annotations

import numpy as np

from .linalg import dagger


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase fix on R's diagonal."""
    q, r = np.linalg.qr(ginibre(dim, dim, rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(dim, dim, rng)
    return 0.5 * (g + dagger(g))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = ginibre(dim, 1, rng)[:, 0]
    return psi / np.linalg.norm(psi)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Induced-measure random state of the given rank (full rank by default)."""
    g = ginibre(dim, rank or dim, rng)
    rho = g @ dagger(g)
    rho = 0.5 * (rho + dagger(rho))
    return rho / np.trace(rho).real


def random_unital_kraus(dim: int, n_terms: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Kraus operators of a random mixture of unitary conjugations."""
    weights = rng.dirichlet(np.ones(n_terms))
    return [np.sqrt(w) * random_unitary(dim, rng) for w in weights]
