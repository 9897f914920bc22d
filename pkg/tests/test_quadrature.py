import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legendre_fd.errors import ConfigurationError, ContractViolation
from legendre_fd.quadrature import (
    build_mesh,
    cumulative,
    cumulative_int,
    int_ab,
    int_az,
    integrate,
)
from legendre_fd.special_functions import legendre_functions, legendre_p


@pytest.fixture(scope="module")
def mesh250():
    return build_mesh(250)


def rho(sub):
    # 1/sqrt(1-x^2) from the accurate complements; nodes near +-1 round onto the ends
    return 1.0 / np.sqrt(sub.one_minus_x * sub.one_plus_x)


def test_small_mesh_shapes():
    m = build_mesh(4)
    assert m.N == 1
    assert m.subintervals[0].nodes.shape == (9,)
    assert m.subintervals[0].node(0) == 0.0
    two = build_mesh(4, [-1, 0, 1])
    assert two.N == 2
    assert two.subintervals[0].node(0) == -0.5


def test_bench_mesh_has_four_subintervals():
    m = build_mesh(250, [-1, Fraction(-1, 3), 0, Fraction(5, 12), 1])
    assert m.N == 4
    assert m.h == pytest.approx(math.sqrt(2 * math.pi / 250), rel=1e-16)
    assert all(s.K == 250 and s.h == m.h for s in m.subintervals)


@settings(max_examples=40, deadline=None)
@given(K=st.integers(1, 20), a=st.floats(-1, 0.9), w=st.floats(0.05, 1.0))
def test_nodes_and_weights(K, a, w):
    b = min(a + w, 1.0)
    bps = sorted({-1.0, a, b, 1.0})
    if len(bps) < 2 or any(y - x < 1e-3 for x, y in zip(bps, bps[1:])):
        return
    mesh = build_mesh(K, bps, use_cache=False)
    for sub in mesh.subintervals:
        z, mu = sub.nodes, sub.weights
        assert np.all(np.diff(z) > 0)
        assert np.all((z > sub.a) & (z < sub.b))
        assert np.all(mu > 0)
        np.testing.assert_allclose(mu, mu[::-1], rtol=1e-14)


def test_distances_stay_monotone_where_nodes_collapse(mesh250):
    sub = mesh250.subintervals[0]
    assert np.sum(sub.nodes == 1.0) > 0  # double rounding at K=250
    # each distance carries full relative accuracy on its own half
    assert np.all(np.diff(sub.dist_a[:251]) > 0)
    assert np.all(np.diff(sub.dist_b[250:]) < 0)
    assert np.all(sub.one_minus_x > 0) and np.all(sub.one_plus_x > 0)


def test_bad_meshes_rejected():
    for bps in ([-1, 0.5, 0.2, 1], [0, 1], [-1, 2], [-1], [-1, 0, 0, 1], [-1, "a", 1]):
        with pytest.raises(ConfigurationError):
            build_mesh(4, bps)
    for K in (0, -3, 2.5, True):
        with pytest.raises(ConfigurationError):
            build_mesh(K)
    with pytest.raises(ConfigurationError):
        build_mesh(4, precision="quad")


def test_int_ab_examples(mesh250):
    sub = mesh250.subintervals[0]
    assert int_ab(sub, [lambda x: 1.0]) == pytest.approx(2.0, abs=1e-12)
    p3 = lambda x: legendre_p(3, x)  # noqa: E731
    assert int_ab(sub, [p3, p3]) == pytest.approx(2 / 7, abs=1e-10)
    assert int_ab(sub, [rho(sub)]) == pytest.approx(math.pi, abs=1e-6)


def test_rho_integral_converges_in_K():
    subs = [build_mesh(K).subintervals[0] for K in (25, 100, 250)]
    errs = [abs(int_ab(sub, [rho(sub)]) - math.pi) for sub in subs]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-5


def test_int_az_examples(mesh250):
    sub, delta = mesh250.subintervals[0], mesh250.delta
    for j in (-250, -100, -7, 0, 33, 250):
        assert int_az(sub, j, [lambda x: 1.0], delta) == pytest.approx(sub.dist_a[j + 250], abs=1e-8)
    assert int_az(sub, 0, [lambda x: x], delta) == pytest.approx(-0.5, abs=1e-8)
    P, Q, _, _ = legendre_functions(1, sub.nodes, sub.one_minus_x, sub.one_plus_x)
    assert int_az(sub, 250, [P, Q], delta) == pytest.approx(int_ab(sub, [P, Q]), abs=1e-6)


def test_int_az_at_left_end_is_small(mesh250):
    sub = mesh250.subintervals[0]
    f = lambda x: np.cos(3 * x) + 2  # noqa: E731
    bound = sub.h * sub.weights[0] * 3 + 1e-10
    assert abs(int_az(sub, -250, [f], mesh250.delta)) <= bound


def test_contract_violations(mesh250):
    sub = mesh250.subintervals[0]
    with pytest.raises(ContractViolation):
        int_ab(sub, [np.ones(10)])
    with pytest.raises(ContractViolation):
        int_az(sub, 251, [lambda x: 1.0], mesh250.delta)
    with pytest.raises(ContractViolation):
        cumulative_int(mesh250, 1, 0, [lambda x: 1.0])
    with pytest.raises(ContractViolation):
        integrate(mesh250, np.ones((2, 501)))


def test_cumulative_int_examples():
    one = build_mesh(60)
    sub = one.subintervals[0]
    f = [lambda x: x * x]
    for j in (-60, -5, 0, 31):
        assert cumulative_int(one, 0, j, f) == int_az(sub, j, f, one.delta)
    mesh = build_mesh(100, [-1, Fraction(-1, 3), 0, Fraction(5, 12), 1])
    for k in range(mesh.N):
        s = mesh.subintervals[k]
        for j in (-100, -20, 0, 57, 100):
            z1 = s.a + s.dist_a[j + 100] if j < 0 else s.b - s.dist_b[j + 100]
            assert cumulative_int(mesh, k, j, [lambda x: 1.0]) == pytest.approx(z1 + 1, abs=1e-8)


def test_cumulative_int_refinement_consistency():
    # x = 0 is node j=0 of the single interval and the breakpoint of the split mesh
    one, two = build_mesh(250), build_mesh(250, [-1, 0, 1])
    f = [lambda x: x * x]
    assert abs(cumulative_int(one, 0, 0, f) - cumulative_int(two, 1, -250, f)) <= 1e-6


def test_exactness_trend():
    errs = []
    for K in (25, 50, 100, 200):
        sub = build_mesh(K).subintervals[0]
        errs.append(abs(int_ab(sub, [np.exp]) - (math.e - 1 / math.e)))
    assert all(b * 10 <= a for a, b in zip(errs, errs[1:]))


def test_orthogonality_matrix(mesh250):
    sub = mesh250.subintervals[0]
    Ps = [legendre_p(n, sub.nodes) for n in range(11)]
    G = np.array([[int_ab(sub, [p, q]) for q in Ps] for p in Ps])
    expected = np.diag([2 / (2 * n + 1) for n in range(11)])
    assert np.max(np.abs(G - expected)) <= 1e-9


@pytest.mark.parametrize("c", [Fraction(-1, 3), Fraction(0), Fraction(5, 12)])
def test_additivity(c):
    f = [lambda x: np.exp(x) * np.cos(2 * x)]
    whole = int_ab(build_mesh(250).subintervals[0], f)
    split = build_mesh(250, [-1, c, 1])
    assert whole == pytest.approx(sum(int_ab(s, f) for s in split.subintervals), abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(k=st.integers(0, 3), j=st.integers(-40, 40))
def test_vectorised_cumulative_matches_per_node(k, j):
    mesh = build_mesh(40, [-1, Fraction(-1, 3), 0, Fraction(5, 12), 1])
    values = np.cos(mesh.nodes) * mesh.nodes
    vec = cumulative(mesh, values)
    per_node = cumulative_int(mesh, k, j, [lambda x: np.cos(x) * x])
    assert vec[k, j + 40] == pytest.approx(per_node, abs=1e-14)


def test_extended_mesh_agrees_with_double():
    d = build_mesh(30, [-1, Fraction(1, 7), 1])
    e = build_mesh(30, [-1, Fraction(1, 7), 1], precision="extended")
    np.testing.assert_allclose(e.nodes.to_float(), d.nodes, atol=1e-16)
    np.testing.assert_allclose(e.weights.to_float(), d.weights, rtol=4e-15)
    assert float(integrate(e, e.nodes * e.nodes)) == pytest.approx(float(integrate(d, d.nodes ** 2)), rel=1e-14)
