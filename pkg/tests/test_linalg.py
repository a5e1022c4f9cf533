import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import entropy_oracle, kron_oracle, partial_trace_oracle
from unital_lab.errors import DimensionMismatch, InvalidDensityMatrix, NoConvergence, NonHermitian
from unital_lab.linalg import (
    SIGMA_X,
    SIGMA_Y,
    bloch_density_matrix,
    dagger,
    hermitian_eigendecompose,
    hermitian_function,
    max_abs,
    partial_trace,
    projector,
    tensor_product,
    validate_density_matrix,
    von_neumann_entropy,
)
from unital_lab.random_ops import random_density_matrix, random_hermitian, random_pure_state, random_unitary


def test_eigendecompose_identity():
    dec = hermitian_eigendecompose(np.eye(2))
    np.testing.assert_allclose(dec.eigenvalues, [1.0, 1.0])


def test_eigendecompose_pauli_x():
    dec = hermitian_eigendecompose(SIGMA_X)
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_eigendecompose_random_6x6_reconstructs(rng):
    m = random_hermitian(6, rng)
    dec = hermitian_eigendecompose(m)
    assert max_abs(dec.reconstruct() - m) <= 1e-10
    assert max_abs(dagger(dec.eigenvectors) @ dec.eigenvectors - np.eye(6)) <= 1e-10
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(m), atol=1e-10)


def test_eigendecompose_degenerate_spectrum(rng):
    u = random_unitary(5, rng)
    m = u @ np.diag([1.0, 1.0, 1.0, 3.0, 3.0]) @ dagger(u)
    dec = hermitian_eigendecompose(m)
    np.testing.assert_allclose(dec.eigenvalues, [1, 1, 1, 3, 3], atol=1e-12)
    assert max_abs(dec.reconstruct() - m) <= 1e-12


def test_eigendecompose_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        hermitian_eigendecompose(np.array([[0, 1], [0, 0]]))


def test_eigendecompose_sweep_cap():
    with pytest.raises(NoConvergence):
        hermitian_eigendecompose(SIGMA_X, max_sweeps=0)


def test_tensor_identity():
    np.testing.assert_array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_entry_forced_by_definition():
    out = tensor_product(SIGMA_X, SIGMA_Y)
    assert out[0 * 2 + 0, 1 * 2 + 1] == -1j


def test_tensor_matches_index_oracle(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    np.testing.assert_allclose(tensor_product(a, b), kron_oracle(a, b), atol=1e-15)


def test_partial_trace_product_state(rng):
    rho_a = random_density_matrix(3, rng)
    rho_b = random_density_matrix(2, rng)
    out = partial_trace(tensor_product(rho_a, rho_b), 3, 2)
    np.testing.assert_allclose(out, rho_a, atol=1e-15)
    out = partial_trace(tensor_product(rho_a, rho_b), 3, 2, traced="system")
    np.testing.assert_allclose(out, rho_b, atol=1e-15)


def test_partial_trace_bell_state():
    bell = projector(np.array([1, 0, 0, 1]) / math.sqrt(2))
    np.testing.assert_allclose(partial_trace(bell, 2, 2), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_matches_index_oracle(rng):
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert max_abs(partial_trace(m, 3, 2) - partial_trace_oracle(m, 3, 2)) <= 1e-14
    assert max_abs(partial_trace(m, 3, 2, "system") - partial_trace_oracle(m, 3, 2, "system")) <= 1e-14


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(6), 4, 2)


def test_entropy_pure_state(rng):
    assert von_neumann_entropy(projector(random_pure_state(4, rng))) == pytest.approx(0.0, abs=1e-12)


def test_entropy_maximally_mixed():
    assert von_neumann_entropy(np.eye(3) / 3) == pytest.approx(math.log(3), abs=1e-14)


def test_entropy_diag_three_quarters():
    expected = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
    assert expected == pytest.approx(0.5623, abs=1e-4)
    assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(expected, abs=1e-14)


def test_entropy_rejects_invalid_state():
    with pytest.raises(InvalidDensityMatrix):
        von_neumann_entropy(np.diag([1.2, -0.2]))
    with pytest.raises(InvalidDensityMatrix):
        validate_density_matrix(np.diag([0.5, 0.6]))


def test_entropy_clamps_small_negative_noise():
    rho = np.diag([1.0 + 5e-13, -5e-13])
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-11)


def test_hermitian_function_log_matches_eigh(rng):
    rho = random_density_matrix(4, rng)
    w, v = np.linalg.eigh(rho)
    expected = (v * np.log(w)) @ v.conj().T
    np.testing.assert_allclose(hermitian_function(rho, np.log), expected, atol=1e-10)


def test_bloch_density_matrix_expectations():
    rho = bloch_density_matrix((0.1, -0.2, 0.3))
    assert np.trace(rho @ SIGMA_X).real == pytest.approx(0.1)
    assert np.trace(rho @ SIGMA_Y).real == pytest.approx(-0.2)


dims = st.integers(min_value=1, max_value=7)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(dims, seeds)
def test_property_eigendecomposition(n, seed):
    m = random_hermitian(n, np.random.default_rng(seed))
    dec = hermitian_eigendecompose(m)
    assert max_abs(dec.reconstruct() - m) <= 1e-10
    assert max_abs(dagger(dec.eigenvectors) @ dec.eigenvectors - np.eye(n)) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(dims, dims, seeds)
def test_property_partial_trace_preserves_trace_and_hermiticity(ds, dr, seed):
    m = random_hermitian(ds * dr, np.random.default_rng(seed))
    for traced in ("reservoir", "system"):
        out = partial_trace(m, ds, dr, traced)
        assert abs(np.trace(out) - np.trace(m)) <= 1e-14 * max(1.0, max_abs(m) * ds * dr)
        assert max_abs(out - dagger(out)) <= 1e-14 * max(1.0, max_abs(m) * ds * dr)


@settings(max_examples=60, deadline=None)
@given(dims, dims, seeds)
def test_property_tensor_trace_multiplies(da, db, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(da, da)) + 1j * rng.normal(size=(da, da))
    b = rng.normal(size=(db, db)) + 1j * rng.normal(size=(db, db))
    scale = max(1.0, abs(np.trace(a)) * abs(np.trace(b)))
    assert abs(np.trace(tensor_product(a, b)) - np.trace(a) * np.trace(b)) <= 1e-13 * scale


@settings(max_examples=40, deadline=None)
@given(dims, seeds)
def test_property_entropy_unitary_invariance(n, seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(n, rng)
    u = random_unitary(n, rng)
    assert abs(von_neumann_entropy(u @ rho @ dagger(u)) - von_neumann_entropy(rho)) <= 1e-10
    assert 0.0 <= von_neumann_entropy(rho) <= math.log(n) + 1e-12
    assert abs(von_neumann_entropy(rho) - entropy_oracle(rho)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), seeds)
def test_property_entropy_additive_on_products(da, db, seed):
    rng = np.random.default_rng(seed)
    a = random_density_matrix(da, rng)
    b = random_density_matrix(db, rng)
    total = von_neumann_entropy(tensor_product(a, b))
    assert abs(total - von_neumann_entropy(a) - von_neumann_entropy(b)) <= 1e-9
