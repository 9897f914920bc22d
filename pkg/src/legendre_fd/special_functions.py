"""Legendre functions of integer order and Stenger's sinc coefficients.

The Legendre routines accept scalars or numpy arrays. Where the caller
knows ``1 - x`` and ``1 + x`` more accurately than they can be recovered
from ``x`` (tanh-rule nodes crowd against the endpoints), the complements
may be passed explicitly so that ``Q_n`` stays finite and accurate.
"""

from __future__ import annotations

import cmath
import logging
import math
import os
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DomainError, PrecisionWarning

logger = logging.getLogger(__name__)

MAX_ORDER = 128
DELTA_CACHE_ENV = "LEGENDRE_FD_DELTA_CACHE"

_EPS = np.finfo(float).eps


def check_order(n, max_order=MAX_ORDER):
    """Validate an eigen-index ``n`` and return it as ``int``."""
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"Legendre order must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise DomainError(f"Legendre order must be non-negative, got {n}")
    if n > max_order:
        raise DomainError(f"Legendre order {n} exceeds the maximum {max_order}")
    return n


def _recurrence(n, x, y0, y1):
    # (k+1) y_{k+1} = (2k+1) x y_k - k y_{k-1}; works for arrays and mpf
    ys = [y0, y1]
    for k in range(1, n):
        ys.append(((2 * k + 1) * x * ys[k] - k * ys[k - 1]) / (k + 1))
    return ys


def _p_derivatives(n, x, ps, zero, one):
    # P'_{k+1} = x P'_k + (k+1) P_k, exact at x = +-1
    dps = [zero, one]
    for k in range(1, n):
        dps.append(x * dps[k] + (k + 1) * ps[k])
    return dps


def _output(value, scalar):
    return float(value) if scalar else value


def legendre_functions(n, x, one_minus_x=None, one_plus_x=None):
    """Evaluate ``P_n, Q_n`` and their derivatives on an array of points.

    Parameters
    ----------
    n : int
        Order, ``0 <= n <= MAX_ORDER``.
    x : array_like
        Points in ``(-1, 1)``.
    one_minus_x, one_plus_x : array_like, optional
        Accurate values of ``1 - x`` and ``1 + x``. Both must be positive.

    Returns
    -------
    P, Q, dP, dQ : ndarray
    """
    n = check_order(n)
    x = np.asarray(x, dtype=float)
    omx = 1.0 - x if one_minus_x is None else np.asarray(one_minus_x, dtype=float)
    opx = 1.0 + x if one_plus_x is None else np.asarray(one_plus_x, dtype=float)
    if np.any(omx <= 0) or np.any(opx <= 0):
        raise DomainError("Q_n is only defined for |x| < 1")
    ps = _recurrence(max(n, 1), x, np.ones_like(x), x.copy())
    q0 = 0.5 * (np.log(opx) - np.log(omx))
    qs = _recurrence(max(n, 1), x, q0, x * q0 - 1.0)
    dps = _p_derivatives(max(n, 1), x, ps, np.zeros_like(x), np.ones_like(x))
    one_minus_x2 = omx * opx
    if n == 0:
        dq = 1.0 / one_minus_x2
    else:
        dq = n * (qs[n - 1] - x * qs[n]) / one_minus_x2
    return ps[n], qs[n], dps[n], dq


def legendre_functions_mp(n, x, one_minus_x, one_plus_x):
    """Multiple-precision counterpart of :func:`legendre_functions`.

    All arguments are ``mpmath.mpf`` scalars; the working precision is
    whatever the caller's mpmath context is set to.
    """
    import mpmath

    n = check_order(n)
    ps = _recurrence(max(n, 1), x, mpmath.mpf(1), x)
    q0 = (mpmath.log(one_plus_x) - mpmath.log(one_minus_x)) / 2
    qs = _recurrence(max(n, 1), x, q0, x * q0 - 1)
    dps = _p_derivatives(max(n, 1), x, ps, mpmath.mpf(0), mpmath.mpf(1))
    one_minus_x2 = one_minus_x * one_plus_x
    if n == 0:
        dq = 1 / one_minus_x2
    else:
        dq = n * (qs[n - 1] - x * qs[n]) / one_minus_x2
    return ps[n], qs[n], dps[n], dq


def legendre_p(n, x):
    """Legendre polynomial ``P_n(x)`` by the three-term recurrence.

    ``x = +-1`` is allowed and returns ``(+-1)**n`` exactly.
    """
    n = check_order(n)
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1):
        raise DomainError("legendre_p is defined on [-1, 1]")
    p = _recurrence(max(n, 1), x, np.ones_like(x), x.copy())[n]
    p = np.where(x == 1.0, 1.0, p)
    p = np.where(x == -1.0, (-1.0) ** n, p)
    return _output(p, scalar)


def _interior(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1):
        raise DomainError(f"{name} requires |x| < 1")
    if np.any(1.0 - np.abs(x) <= 10 * _EPS):
        warnings.warn(
            f"{name}: |x| is within 10 machine epsilons of 1; "
            "result has lost most of its significant digits",
            PrecisionWarning,
            stacklevel=3,
        )
    return x


def legendre_q(n, x):
    """Legendre function of the second kind ``Q_n(x)`` for ``|x| < 1``.

    Issues a :class:`PrecisionWarning` when ``|x|`` is within ten machine
    epsilons of one.
    """
    scalar = np.ndim(x) == 0
    x = _interior(x, "legendre_q")
    return _output(legendre_functions(n, x)[1], scalar)


def legendre_p_deriv(n, x):
    """``dP_n/dx`` for ``|x| < 1``."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1):
        raise DomainError("legendre_p_deriv requires |x| < 1")
    return _output(legendre_functions(n, x)[2], scalar)


def legendre_q_deriv(n, x):
    """``dQ_n/dx`` from ``(1 - x^2) Q_n' = n (Q_{n-1} - x Q_n)``."""
    scalar = np.ndim(x) == 0
    x = _interior(x, "legendre_q_deriv")
    return _output(legendre_functions(n, x)[3], scalar)


# ---------------------------------------------------------------------------
# Sine integral and Stenger coefficients
# ---------------------------------------------------------------------------

_SERIES_LIMIT = 4.0
_CF_TINY = 1e-300


def sine_integral(z):
    """Sine integral ``Si(z) = int_0^z sin(t)/t dt`` for real ``z``.

    Power series for ``|z| <= 4``; beyond that the continued fraction for
    ``E1(i z)`` (modified Lentz), which converges for every ``z > 0``.
    Absolute accuracy is a few units of ``1e-16``.
    """
    z = float(z)
    if z < 0:
        return -sine_integral(-z)
    if z == 0:
        return 0.0
    if z <= _SERIES_LIMIT:
        term = z
        total = z
        k = 0
        while True:
            term *= -z * z / ((2 * k + 2) * (2 * k + 3))
            k += 1
            contrib = term / (2 * k + 1)
            total += contrib
            if abs(contrib) < 1e-18 * abs(total):
                return total
    b = complex(1.0, z)
    c = 1.0 / _CF_TINY
    d = h = 1.0 / b
    for i in range(2, 10_000):
        a = -float((i - 1) ** 2)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        step = c * d
        h *= step
        if abs(step.real - 1.0) + abs(step.imag) < 1e-17:
            break
    else:  # pragma: no cover - the fraction always converges for z > 4
        raise ArithmeticError(f"sine integral continued fraction stalled at z={z}")
    h *= cmath.exp(complex(0.0, -z))
    return 0.5 * math.pi + h.imag


@dataclass(frozen=True)
class DeltaTable:
    """Stenger coefficients ``delta_i = 1/2 + Si(pi i)/pi`` for ``|i| <= 2K``.

    ``values`` holds the indices ``-2K..2K`` in order. ``lo`` carries the
    low-order words when the table was built in double-double precision.
    """

    K: int
    values: np.ndarray
    lo: np.ndarray | None = None

    def __post_init__(self):
        if len(self.values) != 4 * self.K + 1:
            raise ConfigurationError("delta table length does not match K")
        self.values.setflags(write=False)

    def __getitem__(self, i):
        if abs(i) > 2 * self.K:
            raise IndexError(f"delta index {i} outside -2K..2K (K={self.K})")
        return float(self.values[i + 2 * self.K])

    @property
    def indices(self):
        return np.arange(-2 * self.K, 2 * self.K + 1)

    def _toeplitz(self, arr):
        j = np.arange(-self.K, self.K + 1)
        return arr[(j[:, None] - j[None, :]) + 2 * self.K]

    def matrix(self):
        """Matrix ``D[j, i] = delta_{j-i}`` for node indices ``-K..K``."""
        return self._toeplitz(self.values)

    def matrix_lo(self):
        if self.lo is None:
            return np.zeros((2 * self.K + 1, 2 * self.K + 1))
        return self._toeplitz(self.lo)

    def truncate(self, K):
        """Return the sub-table for a smaller half-width ``K``."""
        if K > self.K:
            raise ConfigurationError(f"cannot extend a delta table from K={self.K} to {K}")
        cut = slice(2 * (self.K - K), 2 * (self.K + K) + 1)
        lo = None if self.lo is None else self.lo[cut].copy()
        return DeltaTable(K, self.values[cut].copy(), lo)


def build_delta_table(K):
    """Compute the double-precision :class:`DeltaTable` of half-width ``K``."""
    if isinstance(K, bool) or int(K) != K or K < 1:
        raise ConfigurationError(f"K must be a positive integer, got {K!r}")
    K = int(K)
    values = np.empty(4 * K + 1)
    values[2 * K] = 0.5
    for i in range(1, 2 * K + 1):
        s = sine_integral(math.pi * i) / math.pi
        values[2 * K + i] = 0.5 + s
        values[2 * K - i] = 0.5 - s
    return DeltaTable(K, values)


def build_delta_table_dd(K, dps=40):
    """Double-double :class:`DeltaTable` via mpmath at ``dps`` digits."""
    import mpmath

    if isinstance(K, bool) or int(K) != K or K < 1:
        raise ConfigurationError(f"K must be a positive integer, got {K!r}")
    K = int(K)
    hi = np.empty(4 * K + 1)
    lo = np.empty(4 * K + 1)
    with mpmath.workdps(dps):
        half = mpmath.mpf(1) / 2
        for i in range(-2 * K, 2 * K + 1):
            v = half + mpmath.si(mpmath.pi * i) / mpmath.pi
            h = float(v)
            hi[i + 2 * K] = h
            lo[i + 2 * K] = float(v - h)
    return DeltaTable(K, hi, lo)


def save_delta_table(table, path):
    """Write ``table`` in the plain-text cache format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"delta K={table.K}"]
    lines += [f"{i} {v:.17g}" for i, v in zip(table.indices, table.values)]
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


def load_delta_table(path):
    """Read a table written by :func:`save_delta_table`."""
    text = Path(path).read_text().split("\n")
    header = text[0].strip()
    if not header.startswith("delta K="):
        raise ConfigurationError(f"{path}: not a delta cache file")
    K = int(header[len("delta K="):])
    rows = [line.split() for line in text[1:] if line.strip()]
    if len(rows) != 4 * K + 1:
        raise ConfigurationError(f"{path}: expected {4 * K + 1} rows, found {len(rows)}")
    idx = np.array([int(r[0]) for r in rows])
    if not np.array_equal(idx, np.arange(-2 * K, 2 * K + 1)):
        raise ConfigurationError(f"{path}: indices are not -2K..2K in order")
    return DeltaTable(K, np.array([float(r[1]) for r in rows]))


def default_cache_path():
    env = os.environ.get(DELTA_CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "legendre_fd" / "delta.txt"


def delta_table(K, cache_path=None, use_cache=True):
    """Return a double-precision table for ``K``, going through the cache.

    A cached table with a larger ``K`` is truncated; a smaller or unreadable
    one is regenerated and the cache rewritten.
    """
    if not use_cache:
        return build_delta_table(K)
    path = Path(cache_path) if cache_path is not None else default_cache_path()
    if path.exists():
        try:
            cached = load_delta_table(path)
        except (OSError, ValueError) as exc:
            logger.warning("ignoring unreadable delta cache %s: %s", path, exc)
        else:
            if cached.K >= K:
                return cached.truncate(K)
    table = build_delta_table(K)
    try:
        save_delta_table(table, path)
    except OSError as exc:
        logger.warning("could not write delta cache %s: %s", path, exc)
    return table
