"""Numerical checks of the analytical estimates behind the FD-method.

Covers the Legendre kernel inequality, the majorant sequence ``V_j`` (its
recurrence, closed form, generating function and coefficient bound) and the
a-priori error bounds for the truncated eigenpair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .errors import DomainError
from .potential import GAMMA, convergence_threshold
from .special_functions import check_order, legendre_functions

BETA_BOUND = math.sqrt(3.0 / math.pi)
_EXACT_LIMIT = 150


# ---------------------------------------------------------------------------
# Majorant sequence
# ---------------------------------------------------------------------------

def v_sequence_exact(jmax):
    """``V_0..V_jmax`` as Python ints (the large Schroeder numbers)."""
    if jmax < 0:
        raise DomainError(f"jmax must be non-negative, got {jmax}")
    v = [1]
    for j in range(jmax):
        v.append(sum(v[i] * v[j - i] for i in range(j + 1)) + v[j])
    return v


def v_sequence(jmax):
    """``V_0 = 1``, ``V_{j+1} = sum_{i<=j} V_i V_{j-i} + V_j`` as floats."""
    try:
        return np.array([float(v) for v in v_sequence_exact(jmax)])
    except OverflowError:
        raise DomainError(f"V_j overflows double precision before j = {jmax}") from None


def double_factorial_ratio(p):
    """``(2p - 3)!! / (2p)!!`` with ``(-1)!! = 1``.

    Exact rational arithmetic up to ``p = 150``, log-gamma beyond.
    """
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}")
    if p <= _EXACT_LIMIT:
        num = math.prod(range(2 * p - 3, 0, -2)) if p > 1 else 1
        den = math.prod(range(2 * p, 0, -2))
        return float(Fraction(num, den))
    # (2p-3)!! = (2p-2)! / (2^{p-1} (p-1)!) and (2p)!! = 2^p p!
    log_num = math.lgamma(2 * p - 1) - (p - 1) * math.log(2) - math.lgamma(p)
    log_den = p * math.log(2) + math.lgamma(p + 1)
    return math.exp(log_num - log_den)


def v_closed_form(j):
    """``V_{j-1}`` from the closed-form expression in ``gamma = 3 - 2 sqrt 2``."""
    if isinstance(j, bool) or int(j) != j or j < 1:
        raise DomainError(f"j must be an integer >= 1, got {j!r}")
    j = int(j)
    if j == 1:
        return 1.0
    c = [0.0] + [double_factorial_ratio(p) for p in range(1, j + 1)]
    head = c[j] * (GAMMA ** j + GAMMA ** (-j))
    tail = math.fsum(c[p] * c[j - p] * GAMMA ** (2 * p - j) for p in range(1, j))
    return 0.5 * (head - tail)


def stirling_coefficient_check(jmax=50):
    """``(2j-3)!!/(2 (2j)!!) < 1/((2j-1) sqrt(pi j))`` for ``j = 2..jmax``.

    Returns the largest ratio of left to right side; the bound holds iff
    it is below 1.
    """
    ratios = [
        double_factorial_ratio(j) / 2 * (2 * j - 1) * math.sqrt(math.pi * j)
        for j in range(2, jmax + 1)
    ]
    return max(ratios)


# ---------------------------------------------------------------------------
# Generating function
# ---------------------------------------------------------------------------

def generating_function(z):
    """``f(z) = (1 - z - sqrt(1 - z/gamma) sqrt(1 - gamma z)) / (2z)``.

    Evaluated as ``2 / (1 - z + sqrt(...))``, which is the same function
    without the cancellation at small ``z``.
    """
    if abs(z) >= GAMMA:
        raise DomainError(f"|z| = {abs(z)} is outside the radius of convergence {GAMMA}")
    root = math.sqrt(1.0 - z / GAMMA) * math.sqrt(1.0 - GAMMA * z)
    return 2.0 / (1.0 - z + root)


def generating_function_tail(z, jmax):
    """Allowed discrepancy ``2 |z/gamma|^{jmax+1} / (1 - |z/gamma|) + 1e-10``."""
    r = abs(z) / GAMMA
    return 2.0 * r ** (jmax + 1) / (1.0 - r) + 1e-10


def generating_function_check(z, jmax):
    """``|sum_{j<=jmax} V_j z^j - f(z)|``."""
    f = generating_function(z)
    v = v_sequence_exact(jmax)
    partial = math.fsum(float(vj) * z ** j for j, vj in enumerate(v))
    return abs(partial - f)


# ---------------------------------------------------------------------------
# Kernel inequality
# ---------------------------------------------------------------------------

def _kernel_scale(n):
    return math.sqrt(2.0 / (0.25 + (n + 0.5) ** 2))


def _weighted_kernel(n, omx, opx, x, omxi, opxi, xi):
    p, q, _, _ = legendre_functions(n, x, omx, opx)
    pi_, qi, _, _ = legendre_functions(n, xi, omxi, opxi)
    weight = np.sqrt(np.sqrt(omx * opx * omxi * opxi))
    return weight * np.abs(p * qi - pi_ * q)


def kernel_ratio(n, x, xi):
    """Weighted Cauchy kernel at ``(x, xi)`` divided by its claimed bound."""
    n = check_order(n)
    x, xi = np.asarray(x, dtype=float), np.asarray(xi, dtype=float)
    if np.any(np.abs(x) >= 1) or np.any(np.abs(xi) >= 1):
        raise DomainError("kernel_ratio needs x, xi in (-1, 1)")
    out = _weighted_kernel(n, 1 - x, 1 + x, x, 1 - xi, 1 + xi, xi) / _kernel_scale(n)
    return float(out) if out.ndim == 0 else out


def kernel_bound_check(n, samples=100_000):
    """Max of :func:`kernel_ratio` over ``samples`` Halton pairs.

    Points are mapped through ``x = -cos(pi u)``, which crowds them toward
    the endpoints where the bound is tight; ``1 -+ x`` are formed from
    half-angle sines so they keep full relative accuracy there.
    """
    n = check_order(n)
    if samples < 1:
        raise DomainError(f"samples must be positive, got {samples}")
    u = qmc.Halton(d=2, scramble=False).random(samples + 1)[1:]
    half = 0.5 * np.pi * u
    opx = 2.0 * np.sin(half) ** 2
    omx = 2.0 * np.cos(half) ** 2
    x = -np.cos(np.pi * u)
    ratio = _weighted_kernel(
        n, omx[:, 0], opx[:, 0], x[:, 0], omx[:, 1], opx[:, 1], x[:, 1],
    ) / _kernel_scale(n)
    return float(np.max(ratio))


# ---------------------------------------------------------------------------
# A-priori bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    """Threshold, rate factor and a-priori error bounds for one ``n``.

    ``applicable`` is false for ``n = 0``, where the rate factor is not
    defined. Bounds are infinite whenever ``alpha_tilde >= 1``.
    """

    n: int
    norm_q: float
    n0: int
    alpha_tilde: float
    beta_n: float
    beta_bound: float = BETA_BOUND
    applicable: bool = True
    stirling_ratio: float = field(default=math.nan)
    m: int | None = None

    @property
    def convergent(self):
        return self.applicable and self.n > self.n0

    @property
    def finite(self):
        return self.applicable and self.alpha_tilde < 1

    def lambda_bound(self, m=None):
        """Bound on ``|lambda_n - sum_{j<=m} lambda_n^(j)|``."""
        m = self.m if m is None else m
        if not self.finite:
            return math.inf
        a = self.alpha_tilde
        return self.norm_q * a ** m / ((2 * m + 1) * math.sqrt(math.pi * (m + 1)) * (1 - a))

    def u_bound(self, m=None):
        """Bound on the weighted sup-norm error of the truncated eigenfunction."""
        m = self.m if m is None else m
        if not self.finite:
            return math.inf
        a = self.alpha_tilde
        return a ** (m + 1) / ((2 * m + 3) * math.sqrt(math.pi * (m + 2)) * (1 - a))

    def as_dict(self):
        m = self.m
        out = {
            "n": self.n, "norm_q": self.norm_q, "n0": self.n0,
            "alpha_tilde": self.alpha_tilde, "beta_n": self.beta_n,
            "beta_bound": self.beta_bound, "applicable": self.applicable,
            "convergent": self.convergent,
        }
        if m is not None:
            out["lambda_bound"] = self.lambda_bound(m)
            out["u_bound"] = self.u_bound(m)
        return out


def apriori_bounds(n, m, norm_q):
    """Build the :class:`BoundReport` for eigen-index ``n`` after ``m`` steps."""
    n = check_order(n)
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    threshold = convergence_threshold(norm_q)
    stirling = stirling_coefficient_check(50)
    if n == 0:
        return BoundReport(n, norm_q, threshold.n0, math.inf, math.inf,
                           applicable=False, stirling_ratio=stirling, m=m)
    beta_n = math.sqrt(2 * (n + 0.5) / (math.pi * n))
    return BoundReport(n, norm_q, threshold.n0, threshold.alpha(n), beta_n,
                       stirling_ratio=stirling, m=m)
