"""Acceptance gate: ten criteria, each with its tolerance and runtime budget.

Every criterion records one ``PASS``/``FAIL`` line; the lines are printed
in the terminal summary (see ``conftest.py``) and also when this file is
run directly with ``python tests/test_acceptance.py``.
"""

import json
import math
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from freeineq import operators as ops
from freeineq.cheb import ChebSeries, OmegaKernel, default_nodes, divided_difference, omega_double_integral, project
from freeineq.cli import main
from freeineq.equilibrium import Potential, equilibrium, solve_support
from freeineq.inequalities import run_brascamp_lieb, run_equality_case, run_v_independence, run_wishart
from freeineq.rmt import estimate_fluctuation
from freeineq.tensor import (
    TensorSeries,
    adjoint_partial,
    apply_M_k,
    basis_tensors,
    inner_alpha_k,
    nc_derivative,
    nc_derivative_k,
    partial_first_slot,
)

RESULTS: list[str] = []

GAUSSIAN = Potential(((2, 0.5),))
QUARTIC = Potential(((4, 0.25),))
QUARTIC_REF = Potential(((4, 1 / 12),))
MIXED = Potential(((2, 0.5), (4, 0.05)))


def random_phi(rng, degree):
    return ChebSeries.phi(rng.normal(size=degree + 1) / (1.0 + np.arange(degree + 1)))


def record(number, title, ok, detail, elapsed, budget):
    in_time = elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    RESULTS.append(f"[{status}] {number:2d} {title}: {detail}; {elapsed:.2f}s (budget {budget:g}s)")
    print(RESULTS[-1])
    return ok and in_time


def criterion(number, title, budget):
    def wrap(fn):
        def test():
            t0 = time.perf_counter()
            ok, detail = fn()
            assert record(number, title, ok, detail, time.perf_counter() - t0, budget), RESULTS[-1]

        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test

    return wrap


@criterion(1, "spectral identity", 1.0)
def test_01_spectral_identity():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        phi = random_phi(rng, int(rng.integers(0, 26)))
        worst = max(worst, abs(ops.n_form(phi) - ops.resolvent_form(phi)))
    return worst <= 1e-12, f"max |<N phi,phi> - 2<(M+I)^-1 phi',phi'>| = {worst:.2e} (tol 1e-12)"


@criterion(2, "quadrature vs spectral omega-variance", 5.0)
def test_02_quadrature_spectral():
    rng = np.random.default_rng(2)
    worst = 0.0
    for degree in range(1, 16):
        for _ in range(3):
            phi = random_phi(rng, degree)
            dd = divided_difference(phi)
            q = omega_double_integral(lambda x, y: dd(x, y) ** 2, OmegaKernel(default_nodes(degree)))
            worst = max(worst, abs(q - ops.omega_variance(phi)))
    anchors = []
    for fn, expected in ((lambda x: x, 1.0), (lambda x: x**2, 2.0)):
        phi = project(fn, 2)
        dd = divided_difference(phi)
        q = omega_double_integral(lambda x, y: dd(x, y) ** 2, OmegaKernel(20))
        anchors.append(max(abs(q - expected), abs(ops.omega_variance(phi) - expected)))
    ok = worst <= 1e-10 and max(anchors) <= 1e-10
    return ok, f"max deviation {worst:.2e}, anchors x->1, x^2->2 off by {max(anchors):.1e} (tol 1e-10)"


@criterion(3, "tensor calculus (exact integers)", 2.0)
def test_03_tensor_exact():
    m_ok = all(adjoint_partial(nc_derivative(TensorSeries.basis(n))) == TensorSeries(1, {(n,): n}) for n in range(31))
    comm_ok, checked = True, 0
    for k in range(1, 4):
        for t in basis_tensors(k, 10):
            d = partial_first_slot(t)
            comm_ok &= partial_first_slot(apply_M_k(t)) == apply_M_k(d) + d
            checked += 1
    norm_ok = True
    for k in range(0, 4):
        for l in range(0, 21):
            t = nc_derivative_k(TensorSeries.basis(l), k)
            v = inner_alpha_k(t, t)
            norm_ok &= isinstance(v, int) and v == math.comb(l, k)
    ok = m_ok and comm_ok and norm_ok
    return ok, f"M = d*d on psi_0..30: {m_ok}; commutation on {checked} basis tensors: {comm_ok}; norms C(l,k): {norm_ok}"


@criterion(4, "expansion with remainder and sandwich", 10.0)
def test_04_refinement():
    rng = np.random.default_rng(4)
    worst_id = 0.0
    for degree in range(1, 21):
        phi = random_phi(rng, degree)
        var = ops.omega_variance(phi)
        for k in range(1, 7):
            total = sum(ops.houdre_kagan_terms(phi, k, tensor_check=False)) + ops.remainder_term(phi, k)
            worst_id = max(worst_id, abs(total - var))
    worst_t = 0.0
    for degree in range(1, 16):
        phi = random_phi(rng, degree)
        for k in range(1, 5):
            worst_t = max(worst_t, abs(ops.remainder_term_tensor(phi, k) - ops.remainder_term(phi, k)))
    sandwich = True
    for fn in (np.exp, np.cosh, lambda x: 1 / (5 - x)):
        phi = project(fn, 24, trim=False)
        var = ops.omega_variance(phi)
        for k, s in enumerate(ops.partial_sums(ops.houdre_kagan_terms(phi, 8)), start=1):
            sandwich &= (s >= var - 1e-12) if k % 2 else (s <= var + 1e-12)
    ok = worst_id <= 1e-11 and worst_t <= 1e-12 and sandwich
    return ok, f"identity err {worst_id:.1e} (1e-11), tensor remainder err {worst_t:.1e} (1e-12), sandwich {sandwich}"


@criterion(5, "equilibrium measures", 5.0)
def test_05_equilibrium():
    x = np.linspace(-2, 2, 512)
    mu = equilibrium(GAUSSIAN)
    semi = np.sqrt(np.clip(4 - x * x, 0, None)) / (2 * np.pi)
    err_semi = float(np.max(np.abs(mu.density(x) - semi)))
    a, b = solve_support(QUARTIC)
    edge = 2 * 3 ** (-0.25)
    err_edge = max(abs(a + edge), abs(b - edge))
    mu_q = equilibrium(QUARTIC_REF)
    expected = (x * x + 2) * np.sqrt(np.clip(4 - x * x, 0, None)) / (6 * np.pi)
    err_q = float(np.max(np.abs(mu_q.reference_density(x) - expected)))
    ok = err_semi <= 1e-12 and err_edge <= 1e-8 and err_q <= 1e-10
    return ok, f"semicircle err {err_semi:.1e} (1e-12), quartic edge err {err_edge:.1e} (1e-8), rescaled density err {err_q:.1e} (1e-10)"


@criterion(6, "V-independence of the Galerkin resolvent form", 30.0)
def test_06_v_independence():
    pots = [GAUSSIAN, QUARTIC_REF, MIXED]
    fns = [ChebSeries.phi([0, 0, 1]), ChebSeries.phi([0, 0, 0, 1]), project(lambda x: x + x**3 / 10, 3)]
    worst, monotone = 0.0, True
    for phi in fns:
        rep = run_v_independence(pots, phi, 40)
        target = rep.lhs
        for v_m, v_2m in rep.trace["values"]:
            d_m, d_2m = abs(v_m - target), abs(v_2m - target)
            worst = max(worst, d_m)
            monotone &= d_2m <= 1.1 * d_m or d_2m <= 1e-11
    ok = worst <= 1e-6 and monotone
    return ok, f"max |2<K^-1 phi',phi'> - <N phi,phi>| at m=40: {worst:.1e} (1e-6); non-increasing at 2m: {monotone}"


@criterion(7, "Brascamp-Lieb", 30.0)
def test_07_brascamp_lieb():
    rng = np.random.default_rng(7)
    min_slack = math.inf
    for v in (GAUSSIAN, QUARTIC_REF, MIXED):
        mu = equilibrium(v)
        for _ in range(30):
            c = rng.normal(size=int(rng.integers(2, 10)))
            rep = run_brascamp_lieb(v, lambda x, c=c: np.polynomial.polynomial.polyval(x, c), mu=mu)
            min_slack = min(min_slack, rep.slack)
    eq_err, id_err = 0.0, 0.0
    for v in (GAUSSIAN, QUARTIC_REF, QUARTIC, MIXED):
        rep = run_equality_case(v, 0.5)
        eq_err = max(eq_err, abs(rep.slack))
        id_err = max(id_err, abs(rep.meta["n_form_vprime"] - rep.meta["twice_mean_v2"]))
    anchor = run_equality_case(QUARTIC_REF)
    anchor_err = max(abs(anchor.lhs - 4 / 3), abs(anchor.rhs - 4 / 3), abs(anchor.meta["n_form_vprime"] - 8 / 3))
    ok = min_slack >= -1e-9 and eq_err <= 1e-8 and id_err <= 1e-8 and anchor_err <= 1e-8
    return ok, (
        f"min slack {min_slack:.2e} (>= -1e-9), equality err {eq_err:.1e}, "
        f"<NV',V'> = 2∫V'' err {id_err:.1e}, quartic anchors 4/3, 8/3 err {anchor_err:.1e} (1e-8)"
    )


@criterion(8, "Wishart corollary", 10.0)
def test_08_wishart():
    q = Potential(((1, 1.0),))
    inv = run_wishart(q, 1.0, lambda x: 1 / x)
    lin = run_wishart(q, 1.0, lambda x: x)
    weak_eq = abs(inv.meta["weak_slack"])
    ok = weak_eq <= 1e-6 and lin.slack > 0 and lin.meta["weak_slack"] > 0
    return ok, f"phi=1/x weak-bound gap {weak_eq:.1e} (1e-6); phi=x slack {lin.slack:.3f} > 0"


@criterion(9, "GUE Monte Carlo fluctuations", 180.0)
def test_09_monte_carlo():
    lin = estimate_fluctuation(project(lambda x: x, 1), 150, 2000, 9, label="x")
    t0 = time.perf_counter()
    quad = estimate_fluctuation(project(lambda x: x**2, 2), 150, 2000, 10, label="x^2")
    t_single = time.perf_counter() - t0
    t0 = time.perf_counter()
    quad4 = estimate_fluctuation(project(lambda x: x**2, 2), 150, 2000, 10, label="x^2", threads=4)
    t_par = time.perf_counter() - t0
    rel = abs(quad.variance - 2.0) / 2.0
    ok = abs(lin.z_oracle) <= 3 and abs(quad.z_oracle) <= 3 and rel <= 0.05 and quad4 == quad and t_par < 60.0
    return ok, (
        f"x: var {lin.variance:.4f}, z {lin.z_oracle:+.2f}; x^2 (n=150, 2000): var {quad.variance:.4f}, "
        f"z {quad.z_oracle:+.2f}, {100 * rel:.1f}% from 2; x^2 single {t_single:.1f}s, 4 threads {t_par:.1f}s (identical {quad4 == quad})"
    )


@criterion(10, "determinism of suite JSON", 60.0)
def test_10_determinism():
    with tempfile.TemporaryDirectory() as d:
        outs = []
        for threads in ("1", "1", "4"):
            path = Path(d) / f"run{len(outs)}.json"
            code = main(["suite", "--format", "json", "--threads", threads, "--out", str(path)])
            outs.append((code, path.read_bytes()))
    same = outs[0][1] == outs[1][1] == outs[2][1]
    reports = [json.loads(l) for l in outs[0][1].decode().splitlines()]
    ok = same and all(c == 0 for c, _ in outs)
    return ok, f"{len(reports)} reports, byte-identical across 2 runs and threads 1/4: {same}"


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
