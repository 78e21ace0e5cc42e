"""Truncated Laurent series in 1/θ (elements of K_∞ known to finite precision).

A series stores coefficients of θ^{-val}, θ^{-val-1}, ... as a numpy array;
entries past the end of the array are zero.  ``known_to`` is the largest
valuation up to which the coefficients are correct; it is ``inf`` for exact
values (polynomials, the zero series).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import MalformedInput, PrecisionInsufficient
from .field import GF
from .poly import Poly, RatFunc

INF = math.inf


class LaurentInf:
    __slots__ = ("F", "val", "coeffs", "known_to")

    def __init__(self, F: GF, val, coeffs, known_to=INF):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if known_to != INF:
            coeffs = coeffs[: max(0, int(known_to) - val + 1)]
        nz = np.flatnonzero(coeffs)
        if len(nz) == 0:
            coeffs = coeffs[:0]
            val = 0 if known_to == INF else int(known_to) + 1
        else:
            first, last = nz[0], nz[-1]
            coeffs = coeffs[first:last + 1]
            val = val + int(first)
        self.F = F
        self.val = val
        self.coeffs = coeffs
        self.known_to = known_to

    # -- constructors
    @classmethod
    def zero(cls, F):
        return cls(F, 0, [], INF)

    @classmethod
    def from_poly(cls, p: Poly):
        if not p:
            return cls.zero(p.F)
        return cls(p.F, -p.deg(), list(reversed(p.c)), INF)

    @classmethod
    def from_ratfunc(cls, r, known_to):
        """Expansion of r correct up to valuation ``known_to``."""
        if isinstance(r, Poly):
            r = RatFunc(r)
        F = r.F
        if not r.num:
            return cls.zero(F)
        if r.den.is_one():
            return cls.from_poly(r.num).truncate(known_to)
        v = r.den.deg() - r.num.deg()
        length = int(known_to) - v + 1
        if length <= 0:
            return cls(F, v, [], known_to)
        num = np.array(list(reversed(r.num.c)), dtype=np.int64)
        den = np.array(list(reversed(r.den.c)), dtype=np.int64)
        inv = _series_inverse(F, den, length)
        coeffs = F.conv(num[:length], inv)[:length]
        return cls(F, v, coeffs, known_to)

    # -- queries
    def is_exact(self):
        return self.known_to == INF

    def is_zero_known(self):
        """True if every known coefficient vanishes."""
        return len(self.coeffs) == 0

    def valuation(self):
        """Valuation of the first nonzero known coefficient.

        For a series with no nonzero known coefficient this is
        ``known_to + 1`` (a lower bound), and ``inf`` for the exact zero.
        """
        return self.val

    def coefficient(self, v):
        if v > self.known_to:
            raise PrecisionInsufficient(f"coefficient at valuation {v} is beyond known_to={self.known_to}")
        k = v - self.val
        if 0 <= k < len(self.coeffs):
            return int(self.coeffs[k])
        return 0

    def window(self, lo, hi):
        """Coefficients for valuations lo..hi as an array."""
        if hi > self.known_to:
            raise PrecisionInsufficient(f"valuation {hi} is beyond known_to={self.known_to}")
        out = np.zeros(hi - lo + 1, dtype=np.int64)
        if len(self.coeffs) == 0:
            return out
        a, b = max(lo, self.val), min(hi, self.val + len(self.coeffs) - 1)
        if a <= b:
            out[a - lo:b - lo + 1] = self.coeffs[a - self.val:b - self.val + 1]
        return out

    def truncate(self, known_to):
        if known_to >= self.known_to:
            return self
        return LaurentInf(self.F, self.val, self.coeffs, known_to)

    def __repr__(self):
        head = ", ".join(str(int(c)) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"LaurentInf(val={self.val}, known_to={self.known_to}, [{head}{more}])"

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, LaurentInf):
            return other
        if isinstance(other, Poly):
            return LaurentInf.from_poly(other)
        if isinstance(other, RatFunc):
            if other.den.is_one():
                return LaurentInf.from_poly(other.num)
            return None
        if isinstance(other, int):
            return LaurentInf.from_poly(Poly.const(self.F, self.F.from_int(other)))
        return None

    def __add__(self, other):
        if isinstance(other, RatFunc) and not other.den.is_one():
            return self + _expand_for(other, self)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.F
        known = min(self.known_to, o.known_to)
        if len(self.coeffs) == 0:
            return o.truncate(known)
        if len(o.coeffs) == 0:
            return self.truncate(known)
        lo = min(self.val, o.val)
        hi = max(self.val + len(self.coeffs), o.val + len(o.coeffs)) - 1
        if known != INF:
            hi = min(hi, int(known))
        if hi < lo:
            return LaurentInf(F, lo, [], known)
        a = np.zeros(hi - lo + 1, dtype=np.int64)
        b = np.zeros(hi - lo + 1, dtype=np.int64)
        _place(a, self, lo, hi)
        _place(b, o, lo, hi)
        return LaurentInf(F, lo, F.vadd(a, b), known)

    __radd__ = __add__

    def __neg__(self):
        return LaurentInf(self.F, self.val, self.F.vneg(self.coeffs), self.known_to)

    def __sub__(self, other):
        if isinstance(other, RatFunc) and not other.den.is_one():
            return self - _expand_for(other, self)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatFunc) and not other.den.is_one():
            return self * _expand_for(other, self)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.F
        if self.known_to == INF and len(self.coeffs) == 0:
            return self
        if o.known_to == INF and len(o.coeffs) == 0:
            return o
        val = self.val + o.val
        known = min(self.val + o.known_to, o.val + self.known_to)
        if len(self.coeffs) == 0 or len(o.coeffs) == 0:
            return LaurentInf(F, val, [], known)
        a, b = self.coeffs, o.coeffs
        if known != INF:
            n = int(known) - val + 1
            if n <= 0:
                return LaurentInf(F, val, [], known)
            a, b = a[:n], b[:n]
        return LaurentInf(F, val, F.conv(a, b), known)

    __rmul__ = __mul__

    def scale(self, c):
        return LaurentInf(self.F, self.val, self.F.vscale(c, self.coeffs), self.known_to)

    def inverse(self, known_to=None):
        """1/self; exact inputs need an explicit target precision."""
        F = self.F
        if len(self.coeffs) == 0:
            raise PrecisionInsufficient("cannot invert a series with no known nonzero coefficient")
        v = self.val
        if self.known_to == INF:
            if known_to is None:
                raise ValueError("inverse of an exact series needs known_to")
            target = known_to
        else:
            target = -v + (self.known_to - v)
            if known_to is not None:
                target = min(target, known_to)
        length = int(target) + v + 1
        if length <= 0:
            return LaurentInf(F, -v, [], target)
        inv = _series_inverse(F, self.coeffs, length)
        return LaurentInf(F, -v, inv, target)

    def __truediv__(self, other):
        if isinstance(other, RatFunc) and not other.den.is_one():
            return self * other.inverse()
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.known_to == INF:
            if self.known_to == INF:
                raise ValueError("dividing exact series needs a precision; use from_ratfunc")
            rel = self.known_to - self.val
            return self * o.inverse(known_to=-o.val + rel)
        return self * o.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentInf.from_poly(Poly.const(self.F, 1))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero_known()

    __hash__ = None

    def residual_valuation(self, other):
        """v_∞(self - other), capped by the jointly known precision."""
        return (self - other).valuation()

    def to_json(self):
        return {"valuation": self.val,
                "known_to": None if self.known_to == INF else int(self.known_to),
                "coeffs": [self.F.format(int(c)) for c in self.coeffs]}


def _place(out, s: LaurentInf, lo, hi):
    n = len(s.coeffs)
    a, b = max(lo, s.val), min(hi, s.val + n - 1)
    if a <= b:
        out[a - lo:b - lo + 1] = s.coeffs[a - s.val:b - s.val + 1]


def _expand_for(r: RatFunc, s: LaurentInf):
    """Expansion of an exact fraction deep enough not to limit arithmetic with s."""
    if s.known_to == INF:
        raise ValueError("mixing an exact series with a non-polynomial fraction needs a precision")
    v = r.valuation_inf()
    return LaurentInf.from_ratfunc(r, int(s.known_to) + abs(int(v)) + abs(s.val) + 2)


def _series_inverse(F: GF, d, length):
    """First ``length`` coefficients of 1/d(x) for a power series d with d[0] != 0."""
    d = np.asarray(d, dtype=np.int64)
    if d[0] == 0:
        raise ZeroDivisionError("series with vanishing constant term")
    inv0 = F.INV[int(d[0])]
    g = np.array([inv0], dtype=np.int64)
    n = 1
    while n < length:
        n = min(2 * n, length)
        dg = F.conv(d[:n], g)[:n]
        # g <- g * (2 - d g)
        corr = F.vneg(dg)
        corr[0] = F.ADD[int(corr[0])][F.from_int(2)]
        g = F.conv(g, corr)[:n]
    return g[:length]


def laurent_expand(r, n: int) -> LaurentInf:
    """Expansion of r with ``n`` coefficients from its leading term on."""
    if n < 1:
        raise MalformedInput("precision must be at least 1")
    if isinstance(r, Poly):
        r = RatFunc(r)
    if not r.num:
        return LaurentInf.zero(r.F)
    v = r.valuation_inf()
    return LaurentInf.from_ratfunc(r, v + n - 1)
