import numpy as np
import pytest
from scipy.linalg import expm

from unital_lab.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def kron_oracle(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def partial_trace_oracle(m, dim_sys, dim_res, traced="reservoir"):
    if traced == "reservoir":
        out = np.zeros((dim_sys, dim_sys), dtype=complex)
        for i in range(dim_sys):
            for j in range(dim_sys):
                for k in range(dim_res):
                    out[i, j] += m[i * dim_res + k, j * dim_res + k]
        return out
    out = np.zeros((dim_res, dim_res), dtype=complex)
    for i in range(dim_res):
        for j in range(dim_res):
            for k in range(dim_sys):
                out[i, j] += m[k * dim_res + i, k * dim_res + j]
    return out


def dilation_oracle(u, rho, pi):
    """tr_R U (rho ⊗ pi) U^+ evaluated with numpy only."""
    ds, dr = rho.shape[0], pi.shape[0]
    joint = u @ np.kron(rho, pi) @ u.conj().T
    return partial_trace_oracle(joint, ds, dr)


def spin_rotation(axis, angle):
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    return expm(-0.5j * angle * (n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z))


def entropy_oracle(rho):
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-14]
    return float(-np.sum(w * np.log(w)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
