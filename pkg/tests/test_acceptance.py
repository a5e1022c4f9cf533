"""Acceptance gate: one test per headline criterion, each printing a PASS/FAIL line.

The lines are collected into an "acceptance criteria" section of the terminal summary.
"""
import math
import time

import numpy as np
from scipy.linalg import expm

from conftest import ACCEPTANCE_LINES, kron_oracle, partial_trace_oracle
from unital_lab.channels import (
    KrausChannel,
    assemble_grand_unitary,
    block_from_unitary,
    channel_from_stinespring,
    entropy_gain,
    unitality_criterion_defect,
    unitality_defect,
)
from unital_lab.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, dagger, hermitian_eigendecompose, max_abs, partial_trace, tensor_product
from unital_lab.random_ops import random_density_matrix, random_hermitian, random_unitary
from unital_lab.scenarios import (
    NSpinConfig,
    SpinState,
    ThreeLeadConfig,
    TlsWalkConfig,
    nspin_commutator_decay,
    one_d_scatterer,
    three_lead_demon,
    tls_random_walk,
)
from unital_lab.scenarios.nspin import decay_slope, measured_q
from unital_lab.scenarios.three_lead import DEMON_ROTATIONS


def report(name, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)
    assert passed, detail


def test_demon_entropy_decrease():
    start = time.perf_counter()
    cfg = ThreeLeadConfig(s_offdiag=2 / 3, rotations=DEMON_ROTATIONS, spin=SpinState((1 / 3, 1 / 3, 1 / 3)))
    delta_s = three_lead_demon(cfg).entropy.delta_s
    elapsed = time.perf_counter() - start
    ok = -0.06 <= delta_s <= -0.04 and elapsed < 1.0
    report("demon entropy decrease", ok, f"delta_s = {delta_s:.6f} (window [-0.06, -0.04]), {elapsed:.3f} s")


def test_one_d_unitality():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for k in range(100):
        r = 1 + k % 4
        result = one_d_scatterer(random_unitary(2, rng), random_unitary(r, rng), random_density_matrix(r, rng))
        worst = max(worst, result.unitality_max_defect)
    elapsed = time.perf_counter() - start
    report("1D unitality", worst <= 1e-12 and elapsed < 5.0, f"max defect {worst:.2e} over 100 triples, {elapsed:.2f} s")


def test_entropy_gain_bound():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst = math.inf
    for _ in range(200):
        ds, dr = rng.integers(1, 5, size=2)
        u = random_unitary(int(ds * dr), rng)
        phi = channel_from_stinespring(u, random_density_matrix(int(dr), rng), int(ds))
        r = entropy_gain(phi, random_density_matrix(int(ds), rng))
        worst = min(worst, r.delta_s - r.eq1_bound)
    elapsed = time.perf_counter() - start
    ok = worst >= -1e-8 and elapsed < 30.0
    report("entropy-gain lower bound", ok, f"min(delta_s - bound) = {worst:.3e} over 200 channels, {elapsed:.2f} s")


def test_unital_monotonicity():
    rng = np.random.default_rng(303)
    worst = math.inf
    for _ in range(200):
        dim = int(rng.integers(1, 7))
        n_terms = int(rng.integers(1, 5))
        weights = rng.dirichlet(np.ones(n_terms))
        ops = tuple(math.sqrt(w) * random_unitary(dim, rng) for w in weights)
        phi = KrausChannel(ops)
        worst = min(worst, entropy_gain(phi, random_density_matrix(dim, rng)).delta_s)
    report("unital monotonicity", worst >= -1e-8, f"min delta_s = {worst:.3e} over 200 mixtures")


def test_criterion_equivalence():
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(100):
        n, r = (int(x) for x in rng.integers(1, 5, size=2))
        s = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        block = block_from_unitary(random_unitary(n * r, rng), n, s)
        pi = random_density_matrix(r, rng)
        crit = unitality_criterion_defect(block, pi)
        stinespring = unitality_defect(channel_from_stinespring(assemble_grand_unitary(block), pi, n))
        worst = max(worst, max_abs(crit.values - stinespring.matrix))
    report("criterion equivalence", worst <= 1e-10, f"max element-wise gap {worst:.2e} over 100 blocks")


def test_nspin_decay():
    up = expm(-1j * math.pi / 4 * SIGMA_Y)
    cfg = NSpinConfig(12, [(1j * SIGMA_X, up)], [(0.6, 0.0, 0.5)])
    q = measured_q(cfg)
    rows = nspin_commutator_decay(cfg)
    slope = decay_slope(rows)
    bound = -math.log(1 / q)
    # linearity: residuals of the log fit stay small next to the total decay
    n = np.array([k for k, _ in rows], dtype=float)
    y = np.log([v for _, v in rows])
    resid = float(np.max(np.abs(y - np.polyval(np.polyfit(n, y, 1), n))))
    rng = np.random.default_rng(505)
    phases = rng.uniform(0, 2 * math.pi, size=(12, 2))
    commuting = NSpinConfig(
        12,
        [(expm(-0.5j * a * SIGMA_Z), expm(-0.5j * b * SIGMA_Z)) for a, b in phases],
        [(0.3, 0.2, 0.5)],
        mode="commuting-z",
    )
    worst_commuting = max(v for _, v in nspin_commutator_decay(commuting))
    ok = abs(slope - bound) <= 0.1 * abs(bound) and resid < 0.1 * abs(y[-1] - y[0]) and worst_commuting <= 1e-14
    report(
        "N-spin decay",
        ok,
        f"q = {q:.5f}, slope {slope:.5f} vs bound {bound:.5f} ({abs(slope - bound) / abs(bound):.1%}),"
        f" fit residual {resid:.3f}, commuting max {worst_commuting:.1e}",
    )


def test_tls_monotone_entropy():
    worst_fresh = math.inf
    for seed in range(20):
        result = tls_random_walk(TlsWalkConfig(n_sites=4, n_steps=10, tls_open_prob=0.5, seed=seed))
        worst_fresh = min(worst_fresh, min(r.delta_s for r in result.trajectory))
    reuse = tls_random_walk(
        TlsWalkConfig(n_sites=2, n_steps=4, tls_open_prob=0.5, refresh_policy="reuse", initial_state="localized")
    )
    worst_reuse = min(r.delta_s for r in reuse.trajectory)
    ok = worst_fresh >= -1e-9 and worst_reuse < -1e-6
    report("TLS monotone entropy", ok, f"fresh min step delta_s {worst_fresh:.2e}, reuse min {worst_reuse:.4f}")


def test_linear_algebra_oracles():
    rng = np.random.default_rng(606)
    worst_eig = worst_pt = worst_kron = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 9))
        m = random_hermitian(n, rng)
        dec = hermitian_eigendecompose(m)
        worst_eig = max(worst_eig, max_abs(dec.reconstruct() - m), max_abs(dagger(dec.eigenvectors) @ dec.eigenvectors - np.eye(n)))

        ds, dr = (int(x) for x in rng.integers(1, 5, size=2))
        big = rng.normal(size=(ds * dr, ds * dr)) + 1j * rng.normal(size=(ds * dr, ds * dr))
        for traced in ("reservoir", "system"):
            worst_pt = max(worst_pt, max_abs(partial_trace(big, ds, dr, traced) - partial_trace_oracle(big, ds, dr, traced)))

        a = rng.normal(size=(ds, ds)) + 1j * rng.normal(size=(ds, ds))
        b = rng.normal(size=(dr, dr)) + 1j * rng.normal(size=(dr, dr))
        worst_kron = max(worst_kron, max_abs(tensor_product(a, b) - kron_oracle(a, b)))
    ok = max(worst_eig, worst_pt, worst_kron) <= 1e-10
    report(
        "linear-algebra oracles",
        ok,
        f"eigen {worst_eig:.1e}, partial trace {worst_pt:.1e}, tensor {worst_kron:.1e} over 500 instances",
    )
