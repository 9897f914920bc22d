"""Tanh-rule meshes and sinc quadrature on a subdivided ``(-1, 1)``.

Each subinterval ``(a, b)`` gets nodes ``z_i = (a + b e^{ih}) / (1 + e^{ih})``
and weights ``mu_i = (b - a) / (e^{-ih/2} + e^{ih/2})^2`` for ``i = -K..K``
with ``h = sqrt(2 pi / K)``. Definite integrals use the tanh rule and
indefinite integrals ``int_a^{z_j}`` use Stenger's formula with the
coefficients from :mod:`legendre_fd.special_functions`.

Node arrays are indexed ``0..2K`` in memory; the public per-node
functions take the symmetric index ``j`` in ``-K..K``.

Distances to both subinterval ends are stored alongside the nodes. Close
to an end the node itself rounds onto the endpoint in double precision
while the distance keeps full relative accuracy, which is what singular
factors (``Q_n``, logarithmic potentials) need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ddarray import DDArray
from .errors import ConfigurationError, ContractViolation
from .special_functions import build_delta_table_dd, delta_table

PRECISIONS = ("double", "extended")


def as_fraction(value):
    """Exact rational for a breakpoint given as int, float, Fraction or ``"p/q"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    value = float(value)
    if not math.isfinite(value):
        raise ConfigurationError(f"breakpoint {value} is not finite")
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class Subinterval:
    """Nodes and weights of the tanh rule on one subinterval ``(a, b)``.

    Array fields are float64 arrays in double precision and
    :class:`~legendre_fd.ddarray.DDArray` in extended precision.
    """

    a: float
    b: float
    K: int
    h: float
    nodes: object
    weights: object
    dist_a: object  # z - a
    dist_b: object  # b - z
    one_minus_x: object
    one_plus_x: object
    a_exact: Fraction
    b_exact: Fraction
    mp_nodes: dict | None = field(default=None, repr=False)

    @property
    def size(self):
        return 2 * self.K + 1

    def node(self, j):
        return float(_to_float(self.nodes)[j + self.K])


@dataclass(frozen=True, eq=False)
class Mesh:
    """Tanh-rule nodes on every subinterval plus Stenger's coefficient table."""

    K: int
    h: float
    breakpoints: tuple
    subintervals: tuple
    delta: object
    precision: str = "double"
    breakpoints_exact: tuple = ()
    h_dd: object = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def N(self):
        return len(self.subintervals)

    @property
    def extended(self):
        return self.precision == "extended"

    def _stacked(self, name):
        key = ("stack", name)
        if key not in self._cache:
            parts = [getattr(s, name) for s in self.subintervals]
            if self.extended:
                self._cache[key] = DDArray(
                    np.stack([p.hi for p in parts]), np.stack([p.lo for p in parts])
                )
            else:
                self._cache[key] = np.stack(parts)
        return self._cache[key]

    @property
    def nodes(self):
        """Nodes, shape ``(N, 2K+1)``."""
        return self._stacked("nodes")

    @property
    def weights(self):
        return self._stacked("weights")

    @property
    def one_minus_x(self):
        return self._stacked("one_minus_x")

    @property
    def one_plus_x(self):
        return self._stacked("one_plus_x")

    @property
    def one_minus_x2(self):
        key = ("one_minus_x2",)
        if key not in self._cache:
            self._cache[key] = self.one_minus_x * self.one_plus_x
        return self._cache[key]

    def delta_matrix(self):
        key = ("delta_matrix",)
        if key not in self._cache:
            if self.extended:
                self._cache[key] = DDArray(self.delta.matrix(), self.delta.matrix_lo())
            else:
                self._cache[key] = self.delta.matrix()
        return self._cache[key]

    def nodes_float(self):
        return _to_float(self.nodes)

    def zeros(self):
        shape = (self.N, 2 * self.K + 1)
        return DDArray(np.zeros(shape)) if self.extended else np.zeros(shape)

    def ones(self):
        shape = (self.N, 2 * self.K + 1)
        return DDArray(np.ones(shape)) if self.extended else np.ones(shape)


def _to_float(arr):
    return arr.to_float() if isinstance(arr, DDArray) else np.asarray(arr)


def _validate_K(K):
    if isinstance(K, bool) or not isinstance(K, (int, np.integer)) or K < 1:
        raise ConfigurationError(f"K must be a positive integer, got {K!r}")
    return int(K)


def _validate_breakpoints(breakpoints):
    try:
        exact = [as_fraction(b) for b in breakpoints]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"invalid breakpoint: {exc}") from None
    if len(exact) < 2:
        raise ConfigurationError("at least two breakpoints (-1 and 1) are required")
    if exact[0] != -1 or exact[-1] != 1:
        raise ConfigurationError("breakpoints must start at -1 and end at 1")
    if any(b <= a for a, b in zip(exact, exact[1:])):
        raise ConfigurationError("breakpoints must be strictly increasing")
    return exact


def _subinterval_double(a, b, K, h):
    af, bf = float(a), float(b)
    width = float(b - a)
    t = np.arange(-K, K + 1) * h
    with np.errstate(over="ignore"):
        dist_a = width / (1.0 + np.exp(-t))
        dist_b = width / (1.0 + np.exp(t))
        weights = width / (np.exp(-0.5 * t) + np.exp(0.5 * t)) ** 2
    nodes = np.where(t < 0, af + dist_a, bf - dist_b)
    return Subinterval(
        a=af, b=bf, K=K, h=h,
        nodes=nodes, weights=weights, dist_a=dist_a, dist_b=dist_b,
        one_minus_x=float(1 - b) + dist_b,
        one_plus_x=float(1 + a) + dist_a,
        a_exact=a, b_exact=b,
    )


def _subinterval_extended(a, b, K, h_mp, dps):
    import mpmath

    with mpmath.workdps(dps):
        am = mpmath.mpf(a.numerator) / a.denominator
        bm = mpmath.mpf(b.numerator) / b.denominator
        width = bm - am
        da, db, z, mu = [], [], [], []
        for i in range(-K, K + 1):
            t = i * h_mp
            da.append(width / (1 + mpmath.exp(-t)))
            db.append(width / (1 + mpmath.exp(t)))
            z.append(am + da[-1] if i < 0 else bm - db[-1])
            mu.append(width / (mpmath.exp(-t / 2) + mpmath.exp(t / 2)) ** 2)
        omx = [(1 - bm) + d for d in db]
        opx = [(1 + am) + d for d in da]
    mp_nodes = dict(nodes=z, dist_a=da, dist_b=db, one_minus_x=omx, one_plus_x=opx,
                    a=am, b=bm)
    return Subinterval(
        a=float(a), b=float(b), K=K, h=float(h_mp),
        nodes=DDArray.from_mpf(z), weights=DDArray.from_mpf(mu),
        dist_a=DDArray.from_mpf(da), dist_b=DDArray.from_mpf(db),
        one_minus_x=DDArray.from_mpf(omx), one_plus_x=DDArray.from_mpf(opx),
        a_exact=a, b_exact=b, mp_nodes=mp_nodes,
    )


def build_mesh(K, breakpoints=(-1, 1), precision="double", delta=None,
               cache_path=None, use_cache=True, dps=40):
    """Build a :class:`Mesh` with half-width ``K`` on the given breakpoints.

    Parameters
    ----------
    K : int
        Tanh-rule half-width; each subinterval gets ``2K + 1`` nodes.
    breakpoints : sequence
        Strictly increasing, from ``-1`` to ``1``. Rationals given as
        :class:`fractions.Fraction` or ``"p/q"`` strings are kept exact for
        extended precision.
    precision : {"double", "extended"}
        ``"extended"`` builds double-double node data (needs mpmath).
    delta : DeltaTable, optional
        Reuse a precomputed coefficient table of the same ``K``.
    """
    K = _validate_K(K)
    exact = _validate_breakpoints(breakpoints)
    if precision not in PRECISIONS:
        raise ConfigurationError(f"precision must be one of {PRECISIONS}, got {precision!r}")

    if precision == "double":
        h = math.sqrt(2.0 * math.pi / K)
        subs = tuple(_subinterval_double(a, b, K, h) for a, b in zip(exact, exact[1:]))
        if delta is None:
            delta = delta_table(K, cache_path=cache_path, use_cache=use_cache)
        h_dd = None
    else:
        import mpmath

        with mpmath.workdps(dps):
            h_mp = mpmath.sqrt(2 * mpmath.pi / K)
        h = float(h_mp)
        subs = tuple(_subinterval_extended(a, b, K, h_mp, dps) for a, b in zip(exact, exact[1:]))
        if delta is None or delta.lo is None:
            delta = build_delta_table_dd(K, dps=dps)
        h_dd = DDArray.from_mpf(h_mp)
    if delta.K != K:
        raise ConfigurationError(f"delta table has K={delta.K}, mesh needs K={K}")
    return Mesh(
        K=K, h=h, breakpoints=tuple(float(b) for b in exact), subintervals=subs,
        delta=delta, precision=precision, breakpoints_exact=tuple(exact), h_dd=h_dd,
    )


# ---------------------------------------------------------------------------
# Per-node API mirroring the tanh rule and Stenger's formula literally
# ---------------------------------------------------------------------------

def _factor_product(sub, factors):
    size = sub.size
    extended = isinstance(sub.weights, DDArray)
    prod = sub.weights
    for f in factors:
        if callable(f):
            x = sub.nodes.hi if extended else sub.nodes
            v = np.broadcast_to(np.asarray(f(x), dtype=float), (size,))
        else:
            v = f
            if not isinstance(v, DDArray):
                v = np.asarray(v, dtype=float)
            if v.shape != (size,):
                raise ContractViolation(
                    f"factor array has shape {v.shape}, expected ({size},) for K={sub.K}"
                )
        prod = prod * v
    return prod


def _check_j(sub, j):
    if isinstance(j, bool) or int(j) != j or abs(j) > sub.K:
        raise ContractViolation(f"node index {j} outside -K..K (K={sub.K})")
    return int(j)


def int_ab(sub, factors):
    """Tanh-rule approximation of ``int_a^b prod(factors) dx`` on ``sub``.

    ``factors`` mixes callables (evaluated at the nodes) and arrays of
    node samples of length ``2K + 1``.
    """
    prod = _factor_product(sub, factors)
    if isinstance(prod, DDArray):
        return float(prod.sum()) * sub.h
    return sub.h * float(np.sum(prod))


def int_az(sub, j, factors, delta):
    """Stenger approximation of ``int_a^{z_j} prod(factors) dx``.

    ``delta`` is the mesh's :class:`DeltaTable`; ``j`` runs over ``-K..K``.
    """
    j = _check_j(sub, j)
    prod = _factor_product(sub, factors)
    if isinstance(prod, DDArray):
        prod = prod.to_float()
    i = np.arange(-sub.K, sub.K + 1)
    coeffs = delta.values[(j - i) + 2 * delta.K]
    return sub.h * float(np.dot(coeffs, prod))


def cumulative_int(mesh, k, j, factors):
    """``int_{-1}^{z_{k,j}} prod(factors) dx`` across the subdivided mesh.

    Full tanh-rule integrals over subintervals ``0..k-1`` plus Stenger's
    partial integral in subinterval ``k``.
    """
    if isinstance(k, bool) or int(k) != k or not 0 <= k < mesh.N:
        raise ContractViolation(f"subinterval index {k} outside 0..{mesh.N - 1}")
    subs = mesh.subintervals
    total = 0.0
    for sub in subs[:k]:
        total += int_ab(sub, factors)
    return total + int_az(subs[k], j, factors, mesh.delta)


# ---------------------------------------------------------------------------
# Vectorised forms used by the solver
# ---------------------------------------------------------------------------

def _check_values(mesh, values):
    shape = (mesh.N, 2 * mesh.K + 1)
    if tuple(values.shape[-2:]) != shape:
        raise ContractViolation(f"node samples have shape {values.shape}, expected (..., {shape[0]}, {shape[1]})")


def integrate(mesh, values):
    """Sum of tanh-rule integrals over all subintervals.

    ``values`` has shape ``(..., N, 2K+1)``; the result drops the last two
    axes. Returns floats in double precision and DDArray in extended.
    """
    _check_values(mesh, values)
    weighted = mesh.weights * values
    if mesh.extended:
        per_sub = weighted.sum(axis=-1)
        return per_sub.sum(axis=-1) * mesh.h_dd
    return mesh.h * np.sum(np.sum(weighted, axis=-1), axis=-1)


def cumulative(mesh, values):
    """``int_{-1}^{z_{k,j}}`` of the sampled integrand at every node.

    Same shape as ``values``.
    """
    _check_values(mesh, values)
    weighted = mesh.weights * values
    D = mesh.delta_matrix()
    if mesh.extended:
        partial = weighted.matvec_last(D) * mesh.h_dd
        totals = (weighted.sum(axis=-1) * mesh.h_dd).cumsum(axis=-1)
        prefix = DDArray(_shift_right(totals.hi), _shift_right(totals.lo))
        return partial + DDArray(prefix.hi[..., None], prefix.lo[..., None])
    partial = mesh.h * (weighted @ D.T)
    totals = np.cumsum(mesh.h * np.sum(weighted, axis=-1), axis=-1)
    return partial + _shift_right(totals)[..., None]


def _shift_right(arr):
    # exclusive prefix: sum over subintervals strictly before k
    out = np.zeros_like(arr)
    out[..., 1:] = arr[..., :-1]
    return out
