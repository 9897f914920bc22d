"""Potentials ``q(x)``, their rho-weighted norm and the convergence threshold."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from .ddarray import DDArray
from .errors import ConfigurationError, DomainError, PrecisionWarning
from .quadrature import as_fraction, build_mesh, integrate

GAMMA = 3.0 - 2.0 * math.sqrt(2.0)
# n0 = [C * ||q||] + 1 and alpha_n = 3 sqrt(2) pi ||q|| / n
_RATE = 3.0 * math.sqrt(2.0) * math.pi
_COINCIDE = 1e-15

KINDS = ("zero", "constant", "polynomial", "log_product", "custom")


@dataclass(frozen=True)
class PotentialSpec:
    """Declarative description of ``q(x)`` on ``(-1, 1)``.

    Build instances with the classmethods rather than directly. Parameters
    may be :class:`fractions.Fraction` so that extended-precision runs see
    the exact singularity locations.
    """

    kind: str
    params: tuple = ()
    singularities: tuple = ()
    func: Callable | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown potential kind {self.kind!r}")
        for s in self.singularities:
            if not -1 < float(s) < 1:
                raise ConfigurationError(f"singularity {s} is not inside (-1, 1)")
        if self.kind == "custom" and not callable(self.func):
            raise ConfigurationError("custom potential needs a callable")
        if self.kind in ("log_product", "custom"):
            bps = [-1, *sorted(as_fraction(s) for s in set(self.singularities)), 1]
            norm = weighted_l1_norm(self, build_mesh(32, bps, use_cache=False))
            if not math.isfinite(norm):
                raise ConfigurationError(f"potential {self.label} has no finite weighted norm")

    # -- catalogue ----------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def constant(cls, c):
        return cls("constant", (c,))

    @classmethod
    def polynomial(cls, coeffs):
        """``q(x) = sum_k coeffs[k] x**k`` (ascending powers)."""
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ConfigurationError("polynomial potential needs at least one coefficient")
        return cls("polynomial", coeffs)

    @classmethod
    def log_product(cls, r, s):
        """``q(x) = ln|(r - x)(s + x)|``, singular at ``r`` and ``-s``."""
        sing = tuple(p for p in (r, -s) if -1 < float(p) < 1)
        return cls("log_product", (r, s), tuple(dict.fromkeys(sing)))

    @classmethod
    def custom(cls, func, singularities=()):
        """Arbitrary vectorised callable with an explicit singularity list."""
        return cls("custom", (), tuple(singularities), func)

    @property
    def label(self):
        if self.kind == "custom":
            return f"custom({getattr(self.func, '__name__', 'callable')})"
        if not self.params:
            return self.kind
        return f"{self.kind}:" + ",".join(str(p) for p in self.params)

    # -- evaluation -----------------------------------------------------------
    def __call__(self, x):
        return eval_q(self, x)

    def sample(self, mesh):
        """``q`` at every mesh node, shape ``(N, 2K+1)``; memoised per mesh."""
        key = ("q", self)
        cache = mesh._cache
        if key not in cache:
            cache[key] = _sample_extended(self, mesh) if mesh.extended else _sample_double(self, mesh)
        return cache[key]


def _log_roots(spec):
    r, s = spec.params
    return (as_fraction(r), -as_fraction(s))


def eval_q(spec, x):
    """Evaluate ``q`` at ``x``; scalars in, float out."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    sing = np.array([float(s) for s in spec.singularities])
    if sing.size and np.any(x[..., None] == sing):
        raise DomainError(f"{spec.label} is singular at x = {x}")
    if spec.kind == "zero":
        out = np.zeros_like(x)
    elif spec.kind == "constant":
        out = np.full_like(x, float(spec.params[0]))
    elif spec.kind == "polynomial":
        out = np.polynomial.polynomial.polyval(x, [float(c) for c in spec.params])
    elif spec.kind == "log_product":
        r, s = (float(p) for p in spec.params)
        with np.errstate(divide="ignore"):
            out = np.log(np.abs(r - x)) + np.log(np.abs(s + x))
        if np.any(np.isinf(out)):
            raise DomainError(f"{spec.label} is singular at x = {x}")
    else:
        out = _call_custom(spec.func, x)
    return float(out) if scalar else out


def _call_custom(func, x):
    out = np.asarray(func(x), dtype=float)
    if out.shape != x.shape:
        out = np.broadcast_to(out, x.shape) if out.ndim == 0 else np.vectorize(func, otypes=[float])(x)
    return out


def _distance(sub, root, ext=False):
    """``|x - root|`` at the nodes of ``sub``, exact near a coinciding end."""
    if abs(float(root - sub.b_exact)) <= _COINCIDE:
        return sub.mp_nodes["dist_b"] if ext else sub.dist_b
    if abs(float(root - sub.a_exact)) <= _COINCIDE:
        return sub.mp_nodes["dist_a"] if ext else sub.dist_a
    if ext:
        import mpmath

        rm = mpmath.mpf(root.numerator) / root.denominator
        return [abs(z - rm) for z in sub.mp_nodes["nodes"]]
    return np.abs(sub.nodes - float(root))


def _sample_double(spec, mesh):
    if spec.kind == "log_product":
        roots = _log_roots(spec)
        rows = []
        for sub in mesh.subintervals:
            with np.errstate(divide="ignore"):
                rows.append(sum(np.log(_distance(sub, rt)) for rt in roots))
        return np.stack(rows)
    return eval_q(spec, mesh.nodes)


def _dd_constant(value):
    import mpmath

    c = as_fraction(value)
    with mpmath.workdps(40):
        return DDArray.from_mpf(mpmath.mpf(c.numerator) / c.denominator)


def _sample_extended(spec, mesh):
    import mpmath

    if spec.kind == "zero":
        return mesh.zeros()
    if spec.kind == "constant":
        return mesh.ones() * _dd_constant(spec.params[0])
    if spec.kind == "polynomial":
        acc = mesh.zeros()
        for c in reversed(spec.params):
            acc = acc * mesh.nodes + _dd_constant(c)
        return acc
    if spec.kind == "log_product":
        roots = _log_roots(spec)
        rows = []
        with mpmath.workdps(40):
            for sub in mesh.subintervals:
                d1, d2 = (_distance(sub, rt, ext=True) for rt in roots)
                rows.append([mpmath.log(u) + mpmath.log(v) for u, v in zip(d1, d2)])
        return DDArray.from_mpf(rows)
    warnings.warn(
        f"{spec.label} is sampled in double precision on an extended mesh",
        PrecisionWarning, stacklevel=3,
    )
    return DDArray(_call_custom(spec.func, mesh.nodes.hi))


def interior_singularities(spec, mesh):
    """Singularities of ``spec`` lying strictly inside a mesh subinterval."""
    bad = []
    for s in spec.singularities:
        s = as_fraction(s)
        if any(abs(float(s - b)) <= _COINCIDE for b in mesh.breakpoints_exact):
            continue
        bad.append(float(s))
    return bad


def check_mesh(spec, mesh, allow_interior_singularities=False):
    """Raise :class:`ConfigurationError` unless every singularity is a breakpoint."""
    bad = interior_singularities(spec, mesh)
    if bad and not allow_interior_singularities:
        raise ConfigurationError(
            f"singularities {bad} of {spec.label} lie inside mesh subintervals; "
            "add them as breakpoints or pass allow_interior_singularities=True"
        )
    return bad


def weighted_l1_norm(spec, mesh, allow_interior_singularities=False):
    """``int_{-1}^{1} |q(x)| / sqrt(1 - x^2) dx`` by the tanh rule."""
    check_mesh(spec, mesh, allow_interior_singularities)
    if spec.kind == "zero":
        return 0.0
    q = spec.sample(mesh)
    if mesh.extended:
        q = q.to_float()
        rho = 1.0 / np.sqrt(mesh.one_minus_x2.to_float())
        return float(mesh.h * np.sum(mesh.weights.to_float() * np.abs(q) * rho))
    rho = 1.0 / np.sqrt(mesh.one_minus_x2)
    return float(integrate(mesh, np.abs(q) * rho))


class Threshold(NamedTuple):
    """Convergence threshold ``n0`` and rate factor ``alpha(n)``."""

    n0: int
    alpha: Callable[[int], float]
    gamma: float = GAMMA


def convergence_threshold(norm):
    """``n0 = [3 sqrt(2) pi ||q|| / gamma] + 1`` and ``alpha(n) = 3 sqrt(2) pi ||q|| / n``."""
    if norm < 0 or not math.isfinite(norm):
        raise DomainError(f"weighted norm must be finite and non-negative, got {norm}")
    n0 = math.floor(_RATE / GAMMA * norm) + 1

    def alpha(n):
        if n <= 0:
            return math.inf if norm > 0 else 0.0
        return _RATE * norm / n

    return Threshold(n0, alpha)


def as_exact_params(*values):
    """Convenience for catalogue parameters written as ``"p/q"`` strings."""
    return tuple(Fraction(v) if isinstance(v, str) else v for v in values)
