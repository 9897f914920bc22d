"""Vectorised double-double arithmetic on numpy arrays.

A :class:`DDArray` stores each value as an unevaluated sum ``hi + lo`` of
two float64 arrays, giving roughly 32 significant decimal digits. Only the
operations needed by the FD recurrence are provided: ``+ - *``, division,
reductions in a fixed order, and the Toeplitz products used by Stenger's
indefinite-integration rule.

Error-free transforms follow Dekker and Knuth; products split operands
with the 2**27 + 1 splitter since numpy exposes no fused multiply-add.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def _add(ahi, alo, bhi, blo):
    s, e = _two_sum(ahi, bhi)
    t, f = _two_sum(alo, blo)
    e = e + t
    s, e = _quick_two_sum(s, e)
    e = e + f
    return _quick_two_sum(s, e)


def _mul(ahi, alo, bhi, blo):
    p, e = _two_prod(ahi, bhi)
    e = e + (ahi * blo + alo * bhi)
    return _quick_two_sum(p, e)


class DDArray:
    """Array of double-double numbers; broadcasting follows numpy."""

    __slots__ = ("hi", "lo")
    __array_ufunc__ = None  # make ndarray operators defer to ours

    def __init__(self, hi, lo=None):
        self.hi = np.asarray(hi, dtype=float)
        self.lo = np.zeros_like(self.hi) if lo is None else np.asarray(lo, dtype=float)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_mpf(cls, values):
        """Build from a (nested) sequence of ``mpmath.mpf``."""
        import mpmath

        arr = np.asarray(values, dtype=object)
        hi = np.empty(arr.shape)
        lo = np.empty(arr.shape)
        # the default 15-digit context would round v - hi and drop the low word
        with mpmath.workprec(256):
            for idx, v in np.ndenumerate(arr):
                v = mpmath.mpf(v)
                h = float(v)
                hi[idx] = h
                lo[idx] = float(v - h)
        return cls(hi, lo)

    @staticmethod
    def _coerce(other):
        if isinstance(other, DDArray):
            return other.hi, other.lo
        other = np.asarray(other, dtype=float)
        return other, np.zeros_like(other)

    # -- array protocol ---------------------------------------------------
    @property
    def shape(self):
        return self.hi.shape

    @property
    def ndim(self):
        return self.hi.ndim

    def __len__(self):
        return len(self.hi)

    def __getitem__(self, key):
        return DDArray(self.hi[key], self.lo[key])

    def copy(self):
        return DDArray(self.hi.copy(), self.lo.copy())

    def __float__(self):
        return float(self.hi + self.lo)

    def to_float(self):
        return self.hi + self.lo

    def to_mpf(self):
        """Exact conversion of a 0-d value to ``mpmath.mpf``."""
        import mpmath

        with mpmath.workprec(256):
            return mpmath.mpf(float(self.hi)) + mpmath.mpf(float(self.lo))

    def __repr__(self):
        return f"DDArray(hi={self.hi!r}, lo={self.lo!r})"

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        bhi, blo = self._coerce(other)
        return DDArray(*_add(self.hi, self.lo, bhi, blo))

    __radd__ = __add__

    def __neg__(self):
        return DDArray(-self.hi, -self.lo)

    def __sub__(self, other):
        bhi, blo = self._coerce(other)
        return DDArray(*_add(self.hi, self.lo, -bhi, -blo))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        bhi, blo = self._coerce(other)
        return DDArray(*_mul(self.hi, self.lo, bhi, blo))

    __rmul__ = __mul__

    def __truediv__(self, other):
        bhi, blo = self._coerce(other)
        b = DDArray(bhi, blo)
        q1 = self.hi / bhi
        r = self - b * q1
        q2 = r.hi / bhi
        r = r - b * q2
        q3 = r.hi / bhi
        s, e = _quick_two_sum(q1, q2)
        return DDArray(*_add(s, e, q3, np.zeros_like(q3)))

    def __rtruediv__(self, other):
        return DDArray(*self._coerce(other)) / self

    def __abs__(self):
        sign = np.where(self.hi < 0, -1.0, 1.0)
        return DDArray(self.hi * sign, self.lo * sign)

    def sqrt(self):
        """Square root by one Newton correction of the float64 root."""
        hi = self.hi
        with np.errstate(divide="ignore", invalid="ignore"):
            x = np.where(hi > 0, 1.0 / np.sqrt(np.where(hi > 0, hi, 1.0)), 0.0)
        ax = hi * x
        sq_hi, sq_lo = _two_prod(ax, ax)
        diff = self - DDArray(sq_hi, sq_lo)
        corr = diff.hi * x * 0.5
        return DDArray(*_quick_two_sum(ax, corr))

    # -- reductions -------------------------------------------------------
    def sum(self, axis=None):
        """Sum in a fixed left-to-right order along ``axis``."""
        if axis is None:
            flat = DDArray(self.hi.ravel(), self.lo.ravel())
            return flat.sum(axis=0)
        hi = np.moveaxis(self.hi, axis, 0)
        lo = np.moveaxis(self.lo, axis, 0)
        acc_hi = np.zeros(hi.shape[1:])
        acc_lo = np.zeros(hi.shape[1:])
        for k in range(hi.shape[0]):
            acc_hi, acc_lo = _add(acc_hi, acc_lo, hi[k], lo[k])
        return DDArray(acc_hi, acc_lo)

    def cumsum(self, axis=0):
        hi = np.moveaxis(self.hi, axis, 0)
        lo = np.moveaxis(self.lo, axis, 0)
        out_hi = np.empty_like(hi)
        out_lo = np.empty_like(lo)
        acc_hi = np.zeros(hi.shape[1:])
        acc_lo = np.zeros(hi.shape[1:])
        for k in range(hi.shape[0]):
            acc_hi, acc_lo = _add(acc_hi, acc_lo, hi[k], lo[k])
            out_hi[k] = acc_hi
            out_lo[k] = acc_lo
        return DDArray(np.moveaxis(out_hi, 0, axis), np.moveaxis(out_lo, 0, axis))

    def matvec_last(self, matrix):
        """``out[..., j] = sum_i matrix[j, i] * self[..., i]`` in fixed order.

        ``matrix`` is a 2-d :class:`DDArray`.
        """
        n = self.shape[-1]
        acc_hi = np.zeros(self.shape[:-1] + (matrix.shape[0],))
        acc_lo = np.zeros_like(acc_hi)
        for i in range(n):
            p_hi, p_lo = _mul(
                matrix.hi[:, i], matrix.lo[:, i],
                self.hi[..., i, None], self.lo[..., i, None],
            )
            acc_hi, acc_lo = _add(acc_hi, acc_lo, p_hi, p_lo)
        return DDArray(acc_hi, acc_lo)


def stack(arrays, axis=0):
    return DDArray(
        np.stack([a.hi for a in arrays], axis=axis),
        np.stack([a.lo for a in arrays], axis=axis),
    )
