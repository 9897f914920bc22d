"""One test per acceptance criterion, each at its stated tolerance and time budget.

A per-criterion PASS/FAIL line is printed at the end of the pytest run.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from legendre_fd import reference
from legendre_fd.fd import solve
from legendre_fd.potential import GAMMA, PotentialSpec
from legendre_fd.quadrature import build_mesh, int_ab, int_az
from legendre_fd.special_functions import build_delta_table, legendre_p
from legendre_fd.theory import (
    generating_function_check,
    generating_function_tail,
    kernel_bound_check,
    stirling_coefficient_check,
    v_closed_form,
    v_sequence,
)
from oracles import galerkin_eigenvalues


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, budget {seconds}s"


def test_criterion_1_zero_potential_exactness():
    failures = []
    with budget(10):
        mesh = build_mesh(100)
        for n in range(11):
            sol = solve(n, 5, PotentialSpec.zero(), mesh)
            assert abs(sol.lambda_m - n * (n + 1)) <= 1e-10
            assert np.all(np.abs(sol.lambda_steps[1:]) <= 1e-10)
            assert np.all(sol.unorm_l2[1:] <= 1e-10)
            if sol.eta.max() > 1e-8:
                failures.append(f"n={n}: eta {sol.eta.max():.3e}")
    assert not failures, "; ".join(failures)


def test_criterion_2_constant_shift_exactness():
    with budget(30):
        mesh = build_mesh(250)
        for c in (-5.0, 1.0, 17.3):
            spec = PotentialSpec.constant(c)
            for n in range(7):
                sol = solve(n, 5, spec, mesh)
                assert abs(sol.lambda_m - (n * (n + 1) + c)) <= 1e-9
                assert np.all(np.abs(sol.lambda_steps[2:]) <= 1e-9)
                assert np.all(sol.unorm_l2[2:] <= 1e-9)


def test_criterion_3_eigenvalues_at_30_steps(bench_spec, bench_mesh):
    with budget(300):
        for n, expected in reference.LAMBDA_M30.items():
            sol = solve(n, 30, bench_spec, bench_mesh)
            assert abs(sol.lambda_m - expected) <= 1e-9, (n, sol.lambda_m, expected)


def test_criterion_4_convergence_history_of_lambda_0(bench_spec, bench_mesh):
    with budget(120):
        sol = solve(0, 10 + reference.CONVERGENCE_STEP_OFFSET, bench_spec, bench_mesh)
    failures = []
    for row, lam, _, eta in reference.CONVERGENCE_N0:
        d = row + reference.CONVERGENCE_STEP_OFFSET
        if abs(sol.lambda_partial[d] - lam) > 1e-6:
            failures.append(f"row {row}: lambda {sol.lambda_partial[d]:.10f} vs {lam}")
        tol = max(1e-3 * abs(eta), 1e-4)
        if abs(sol.eta[d] - eta) > tol:
            failures.append(f"row {row}: eta {sol.eta[d]:.6e} vs {eta:.6e}")
    assert not failures, "; ".join(failures)


def test_criterion_5_subdivision_study(bench_spec):
    failures = []
    with budget(300):
        for label, bps in reference.SUBDIVISION_BREAKPOINTS.items():
            mesh = build_mesh(reference.BENCH_K, bps)
            lam = solve(0, 30, bench_spec, mesh, allow_interior_singularities=True).lambda_m
            expected = reference.SUBDIVISION[label][0]
            if abs(lam - expected) > 1e-6:
                failures.append(f"{label}: {lam:.10f} vs {expected:.10f}")
    assert not failures, "; ".join(failures)


def test_criterion_6_residual_floor(bench_spec, bench_mesh):
    for n in reference.BENCH_N:
        assert solve(n, 30, bench_spec, bench_mesh).eta.min() <= 1e-10
    mesh = build_mesh(reference.BENCH_K, reference.BENCH_BREAKPOINTS, precision="extended")
    extended = solve(0, 60, bench_spec, mesh)
    assert extended.eta[60] <= 1e-24


def test_criterion_7_theory_suite():
    with budget(30):
        v = v_sequence(30)
        for j in range(1, 32):
            assert abs(v_closed_form(j) - v[j - 1]) <= 1e-9 * v[j - 1]
        for z in (0.1, -0.15, 0.9 * GAMMA):
            for jmax in (40, 80):
                assert generating_function_check(z, jmax) <= generating_function_tail(z, jmax)
        for n in range(21):
            assert kernel_bound_check(n, 100_000) <= 1 + 1e-8
        assert stirling_coefficient_check(50) < 1


def test_criterion_8_quadrature_suite():
    with budget(30):
        mesh = build_mesh(250)
        sub = mesh.subintervals[0]
        Ps = [legendre_p(n, sub.nodes) for n in range(11)]
        G = np.array([[int_ab(sub, [p, q]) for q in Ps] for p in Ps])
        assert np.max(np.abs(G - np.diag([2 / (2 * n + 1) for n in range(11)]))) <= 1e-9
        rho = 1 / np.sqrt(sub.one_minus_x * sub.one_plus_x)
        assert abs(int_ab(sub, [rho]) - math.pi) <= 1e-5
        f = [np.cos(3 * sub.nodes) * np.exp(sub.nodes)]
        assert abs(int_az(sub, 250, f, mesh.delta) - int_ab(sub, f)) <= 1e-6
        for K in (1, 7, 250):
            t = build_delta_table(K)
            i = np.arange(1, 2 * K + 1)
            assert abs(t[0] - 0.5) <= 1e-12
            assert np.max(np.abs(t.values[2 * K + i] + t.values[2 * K - i] - 1)) <= 1e-12


def test_criterion_9_galerkin_oracle():
    with budget(60):
        oracle = galerkin_eigenvalues([0, 0, 1], size=41, count=5)
        mesh = build_mesh(250)
        spec = PotentialSpec.polynomial([0, 0, 1])
        for n in range(5):
            assert abs(solve(n, 30, spec, mesh).lambda_m - oracle[n]) <= 1e-6
