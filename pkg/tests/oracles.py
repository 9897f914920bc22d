"""Independent reference computations used to freeze expected values.

None of these share code with the package: exact rationals, mpmath
special functions, scipy adaptive quadrature and a dense Galerkin matrix.
"""

from fractions import Fraction

import mpmath
import numpy as np
from scipy import integrate


def legendre_p_exact(n, x):
    """``P_n(x)`` by the recurrence in exact rational arithmetic."""
    x = Fraction(x)
    p0, p1 = Fraction(1), x
    if n == 0:
        return p0
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1


def legendre_q_mp(n, x, dps=50):
    """Ferrers function of the second kind ``Q_n(x)`` on ``(-1, 1)``."""
    with mpmath.workdps(dps):
        return mpmath.legenq(n, 0, mpmath.mpf(x), type=2)


def legendre_q_deriv_mp(n, x, dps=50):
    with mpmath.workdps(dps):
        return mpmath.diff(lambda t: mpmath.legenq(n, 0, t, type=2), mpmath.mpf(x))


def delta_quad(i):
    """``1/2 + int_0^i sin(pi t)/(pi t) dt`` by adaptive quadrature."""
    val, _ = integrate.quad(np.sinc, 0.0, i, limit=400, epsabs=1e-14, epsrel=1e-14)
    return 0.5 + val


def weighted_norm_quad(q, singularities=()):
    """``int |q(x)| / sqrt(1 - x^2) dx`` via ``x = cos(theta)``.

    The substitution removes the endpoint weight; interior singular points
    are passed to quad as break points in ``theta``.
    """
    pts = sorted(float(np.arccos(float(s))) for s in singularities)
    val, _ = integrate.quad(lambda th: abs(q(np.cos(th))), 0.0, np.pi,
                            points=pts or None, limit=500, epsabs=1e-13, epsrel=1e-13)
    return val


def galerkin_eigenvalues(poly_coeffs, size=41, count=5):
    """Lowest eigenvalues for ``q(x) = sum c_k x^k`` in the ``P_0..P_{size-1}`` basis.

    The operator is ``diag(n(n+1)) + q(J)`` where ``J`` is the Jacobi matrix
    of multiplication by ``x`` in the orthonormal Legendre basis. The
    polynomial of ``J`` is formed on an enlarged basis and then truncated,
    so the entries of the leading block are exact.
    """
    big = size + len(poly_coeffs)
    k = np.arange(1, big)
    off = k / np.sqrt((2 * k - 1) * (2 * k + 1))
    J = np.diag(off, 1) + np.diag(off, -1)
    Q = np.zeros((big, big))
    power = np.eye(big)
    for c in poly_coeffs:
        Q += float(c) * power
        power = power @ J
    n = np.arange(size)
    A = np.diag(n * (n + 1.0)) + Q[:size, :size]
    return np.linalg.eigvalsh(A)[:count]


def stenger_residual_mp(n, K, dps=30):
    """Residual of ``P_n`` for ``q = 0`` by a direct O(K^2) Stenger sum in mpmath.

    ``sqrt(sum_j w_j g_j^2)`` with ``g = (1 - x^2) P_n' + int_{-1}^x n(n+1) P_n``
    on the single-interval tanh mesh. Slow; used to freeze values.
    """
    with mpmath.workdps(dps):
        h = mpmath.sqrt(2 * mpmath.pi / K)
        idx = range(-K, K + 1)
        z = {k: mpmath.tanh(k * h / 2) for k in idx}
        w = {k: h / (2 * mpmath.cosh(k * h / 2) ** 2) for k in idx}
        delta = {i: mpmath.mpf(1) / 2 + mpmath.si(mpmath.pi * i) / mpmath.pi
                 for i in range(-2 * K, 2 * K + 1)}
        f = {k: n * (n + 1) * mpmath.legendre(n, z[k]) for k in idx}
        total = 0
        for j in idx:
            cum = mpmath.fsum(delta[j - k] * w[k] * f[k] for k in idx)
            dp = mpmath.diff(lambda t: mpmath.legendre(n, t), z[j])
            total += w[j] * ((1 - z[j] ** 2) * dp + cum) ** 2
        return mpmath.sqrt(total)
