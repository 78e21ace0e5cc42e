"""Polynomials over F_q and their fractions.

``Poly`` is used for A = F_q[θ] and equally for F_q[y] or F_q[t]; the variable
name only matters when printing.  ``RatFunc`` is a reduced fraction with a
monic denominator, so equal values compare equal.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import MalformedInput
from .field import GF, field

_NUMPY_MUL = 3000       # len(a)*len(b) above which numpy convolution wins
_NUMPY_DIV = 40         # divisor degree above which numpy division wins


def _trim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _mul(F: GF, a, b):
    if not a or not b:
        return ()
    if len(a) * len(b) > _NUMPY_MUL:
        return tuple(F.conv(a, b).tolist())
    out = [0] * (len(a) + len(b) - 1)
    if F.prime:
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        p = F.p
        return tuple(v % p for v in out)
    ADD, MUL = F.ADD, F.MUL
    for i, x in enumerate(a):
        if x:
            row = MUL[x]
            for j, y in enumerate(b):
                out[i + j] = ADD[out[i + j]][row[y]]
    return tuple(out)


def _divmod(F: GF, a, b):
    """Quotient and remainder of coefficient tuples; b must be nonzero."""
    m = len(b) - 1
    n = len(a) - 1
    if n < m:
        return (), a
    inv = F.INV[b[-1]]
    if m > _NUMPY_DIV and n - m > 4:
        r = np.array(a, dtype=np.int64)
        bb = np.array(b, dtype=np.int64)
        quo = [0] * (n - m + 1)
        for i in range(n - m, -1, -1):
            top = int(r[i + m])
            if top:
                c = F.MUL[top][inv]
                quo[i] = c
                r[i:i + m + 1] = F.vsub(r[i:i + m + 1], F.vscale(c, bb))
        return tuple(quo), _trim(tuple(r[:m].tolist()))
    r = list(a)
    quo = [0] * (n - m + 1)
    if F.prime:
        p = F.p
        for i in range(n - m, -1, -1):
            top = r[i + m]
            if top:
                c = top * inv % p
                quo[i] = c
                for j in range(m):
                    r[i + j] = (r[i + j] - c * b[j]) % p
                r[i + m] = 0
    else:
        SUB, MUL = F.SUB, F.MUL
        for i in range(n - m, -1, -1):
            top = r[i + m]
            if top:
                c = MUL[top][inv]
                quo[i] = c
                row = MUL[c]
                for j in range(m):
                    r[i + j] = SUB[r[i + j]][row[b[j]]]
                r[i + m] = 0
    return tuple(quo), _trim(tuple(r[:m]))


class Poly:
    """Polynomial over F_q, coefficients stored low degree first."""

    __slots__ = ("F", "c")

    def __init__(self, F: GF, coeffs=()):
        self.F = F
        self.c = _trim(tuple(coeffs))

    @classmethod
    def _raw(cls, F, c):
        obj = object.__new__(cls)
        obj.F = F
        obj.c = c
        return obj

    # -- constructors
    @classmethod
    def const(cls, F, a):
        return cls._raw(F, (a,) if a else ())

    @classmethod
    def monomial(cls, F, e, a=1):
        if not a:
            return cls._raw(F, ())
        return cls._raw(F, (0,) * e + (a,))

    @classmethod
    def var(cls, F):
        return cls._raw(F, (0, 1))

    # -- basic queries
    def deg(self):
        return len(self.c) - 1 if self.c else -1

    def __bool__(self):
        return bool(self.c)

    def is_one(self):
        return self.c == (1,)

    def lead(self):
        return self.c[-1] if self.c else 0

    def order_at_zero(self):
        """Multiplicity of the root 0; infinite for the zero polynomial."""
        for i, a in enumerate(self.c):
            if a:
                return i
        return float("inf")

    def coeff(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c and self.F.q == other.F.q
        if isinstance(other, int):
            return self.c == ((other,) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({self.format()})"

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.const(self.F, self.F.from_int(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        F = self.F
        if F.prime:
            p = F.p
            out = [(x + y) % p for x, y in zip(a, b)]
        else:
            ADD = F.ADD
            out = [ADD[x][y] for x, y in zip(a, b)]
        return Poly._raw(F, _trim(tuple(out) + a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        F = self.F
        return Poly._raw(F, tuple(F.NEG[x] for x in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly._raw(self.F, _mul(self.F, self.c, o.c))

    __rmul__ = __mul__

    def scale(self, a):
        """Multiply by the field element a."""
        if not a:
            return Poly._raw(self.F, ())
        row = self.F.MUL[a]
        return Poly._raw(self.F, tuple(row[x] for x in self.c))

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.F, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        quo, rem = _divmod(self.F, self.c, o.c)
        return Poly._raw(self.F, quo), Poly._raw(self.F, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        quo, rem = divmod(self, other)
        if rem:
            raise ArithmeticError("division is not exact")
        return quo

    def monic(self):
        if not self.c:
            return self
        return self.scale(self.F.INV[self.c[-1]])

    def shift(self, n):
        """Multiply by var**n."""
        if not self.c:
            return self
        return Poly._raw(self.F, (0,) * n + self.c)

    def __call__(self, x: int) -> int:
        """Evaluate at a field element."""
        F = self.F
        acc = 0
        for a in reversed(self.c):
            acc = F.ADD[F.MUL[acc][x]][a]
        return acc

    def compose(self, x: "Poly") -> "Poly":
        acc = Poly(self.F)
        for a in reversed(self.c):
            acc = acc * x + Poly.const(self.F, a)
        return acc

    def frobenius(self, i=1):
        """Substitute var -> var**(q**i); equals raising to the q**i-th power."""
        if i == 0 or not self.c:
            return self
        step = self.F.q ** i
        out = [0] * ((len(self.c) - 1) * step + 1)
        for j, a in enumerate(self.c):
            out[j * step] = a
        return Poly._raw(self.F, tuple(out))

    def derivative(self):
        F = self.F
        return Poly(F, [F.MUL[F.from_int(i)][a] for i, a in enumerate(self.c)][1:])

    # -- text
    def format(self, var="θ"):
        if not self.c:
            return "0"
        F = self.F
        terms = [f"{F.format(a)}*{var}^{e}" if e else F.format(a)
                 for e, a in reversed(list(enumerate(self.c))) if a]
        return " + ".join(terms)

    __str__ = format

    @classmethod
    def parse(cls, F: GF, text: str, var="θ"):
        text = text.strip()
        if text in ("", "0"):
            return cls(F)
        coeffs = {}
        for term in _split_terms(text):
            m = _TERM.fullmatch(term)
            if not m:
                raise MalformedInput(f"cannot parse polynomial term {term!r}")
            c_txt, v, e_txt = m.group("c"), m.group("v"), m.group("e")
            if v and v not in (var, "theta", "θ", "y", "t"):
                raise MalformedInput(f"unexpected variable {v!r}")
            a = F.parse(c_txt) if c_txt else 1
            e = int(e_txt) if e_txt else (1 if v else 0)
            coeffs[e] = F.ADD[coeffs.get(e, 0)][a]
        top = max(coeffs)
        return cls(F, [coeffs.get(i, 0) for i in range(top + 1)])


_TERM = re.compile(r"\s*(?:(?P<c>\[[\d,\s]+\]|\d+)\s*\*?\s*)?(?:(?P<v>[^\s\d\^\*\[\]\+]+)\s*(?:\^\s*(?P<e>\d+))?)?\s*")


def _split_terms(text):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p.strip()]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    F = a.F
    x, y = a.c, b.c
    while y:
        x, y = y, _divmod(F, x, y)[1]
    return Poly(F, x).monic()


class RatFunc:
    """Element of F_q(var) in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RatFunc):
            if den is not None:
                raise TypeError("RatFunc(RatFunc, den) is not supported")
            self.num, self.den = num.num, num.den
            return
        F = num.F
        if den is None or den.is_one():
            self.num, self.den = num, Poly.const(F, 1)
            return
        if not den:
            raise MalformedInput("zero denominator")
        if not num:
            self.num, self.den = num, Poly.const(F, 1)
            return
        g = poly_gcd(num, den)
        if not g.is_one():
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lead()
        if lc != 1:
            inv = F.INV[lc]
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @property
    def F(self):
        return self.num.F

    @classmethod
    def const(cls, F, a):
        return cls._raw(Poly.const(F, a), Poly.const(F, 1))

    @classmethod
    def from_int(cls, F, n):
        return cls.const(F, F.from_int(n))

    def is_poly(self):
        return self.den.is_one()

    def __bool__(self):
        return bool(self.num)

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def valuation_inf(self):
        """v_∞ with v_∞(θ) = -1; +inf for zero."""
        if not self.num:
            return float("inf")
        return self.den.deg() - self.num.deg()

    def order_at_zero(self):
        if not self.num:
            return float("inf")
        return self.num.order_at_zero() - self.den.order_at_zero()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other, Poly.const(other.F, 1))
        if isinstance(other, int):
            return RatFunc.from_int(self.F, other)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num.c, self.den.c))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RatFunc._raw(self.num + o.num, self.den)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        g = poly_gcd(self.den, o.den)
        if g.is_one():
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        a = self.den.exact_div(g)
        b = o.den.exact_div(g)
        return RatFunc(self.num * b + o.num * a, a * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RatFunc._raw(self.num * o.num, self.den)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def scale(self, a):
        return RatFunc._raw(self.num.scale(a), self.den) if a else RatFunc.const(self.F, 0)

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, self.den ** n)

    def compose(self, x):
        """Substitute a Poly or RatFunc for the variable."""
        x = self._coerce(x)
        return _horner(self.num, x) / _horner(self.den, x)

    def frobenius(self, i=1):
        return RatFunc._raw(self.num.frobenius(i), self.den.frobenius(i))

    def format(self, var="θ"):
        if self.den.is_one():
            return self.num.format(var)
        return f"({self.num.format(var)})/({self.den.format(var)})"

    __str__ = format

    def __repr__(self):
        return f"RatFunc({self.format()})"

    @classmethod
    def parse(cls, F, text, var="θ"):
        text = text.strip()
        m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", text)
        if m:
            return cls(Poly.parse(F, m.group(1), var), Poly.parse(F, m.group(2), var))
        return cls(Poly.parse(F, text, var))


def _horner(p: Poly, x: RatFunc) -> RatFunc:
    F = p.F
    acc = RatFunc.const(F, 0)
    for a in reversed(p.c):
        acc = acc * x + RatFunc.const(F, a)
    return acc


def theta(q) -> Poly:
    return Poly.var(field(q))


def ratfunc(x, F=None) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc._raw(x, Poly.const(x.F, 1))
    if isinstance(x, int):
        return RatFunc.from_int(F, x)
    raise TypeError(f"cannot make a RatFunc from {type(x).__name__}")
