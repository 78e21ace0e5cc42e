"""Carlitz-type constants in A = F_q[θ] and polynomials in the auxiliary variable t."""

from __future__ import annotations

from functools import lru_cache

from .errors import DomainError
from .field import field
from .poly import Poly, RatFunc


@lru_cache(maxsize=None)
def ell(q: int, d: int) -> Poly:
    """ℓ_d = (θ - θ^q)(θ - θ^{q^2})...(θ - θ^{q^d})."""
    if d < 0:
        raise DomainError("ℓ_d needs d >= 0")
    F = field(q)
    if d == 0:
        return Poly.const(F, 1)
    th = Poly.var(F)
    return ell(q, d - 1) * (th - Poly.monomial(F, q ** d))


def ell_degree(q: int, d: int) -> int:
    """deg ℓ_d = q + q^2 + ... + q^d."""
    return sum(q ** i for i in range(1, d + 1))


@lru_cache(maxsize=None)
def ell_ratio(q: int, e: int, d: int) -> Poly:
    """ℓ_d / ℓ_e for e <= d."""
    F = field(q)
    th = Poly.var(F)
    out = Poly.const(F, 1)
    for i in range(e + 1, d + 1):
        out = out * (th - Poly.monomial(F, q ** i))
    return out


@lru_cache(maxsize=None)
def bracket(q: int, k: int) -> Poly:
    """[k] = θ^{q^k} - θ."""
    F = field(q)
    return Poly.monomial(F, q ** k) - Poly.var(F)


@lru_cache(maxsize=None)
def factorial_D(q: int, k: int) -> Poly:
    """D_k = [k] [k-1]^q ... [1]^{q^{k-1}}, with D_0 = 1."""
    F = field(q)
    if k == 0:
        return Poly.const(F, 1)
    return bracket(q, k) * factorial_D(q, k - 1).frobenius(1)


def D1(q: int) -> Poly:
    return bracket(q, 1)


def base_q_digits(n: int, q: int):
    out = []
    while n:
        out.append(n % q)
        n //= q
    return out


@lru_cache(maxsize=None)
def gamma_factor(q: int, n: int) -> Poly:
    """Γ_n = ∏ D_j^{n_j} where n - 1 = Σ n_j q^j."""
    if n < 1:
        raise DomainError("Γ_n needs n >= 1")
    F = field(q)
    out = Poly.const(F, 1)
    for j, nj in enumerate(base_q_digits(n - 1, q)):
        if nj:
            out = out * factorial_D(q, j) ** nj
    return out


class PolyT:
    """Polynomial in t whose coefficients are RatFunc in θ (low t-degree first)."""

    __slots__ = ("F", "c")

    def __init__(self, F, coeffs=()):
        cs = [c if isinstance(c, RatFunc) else RatFunc(c) if isinstance(c, Poly)
              else RatFunc.from_int(F, c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.F = F
        self.c = tuple(cs)

    @classmethod
    def t(cls, F):
        return cls(F, [0, 1])

    @classmethod
    def const(cls, F, a):
        return cls(F, [a])

    @classmethod
    def from_terms(cls, F, terms):
        """Build Σ a * t^i θ^j from a dict {(i, j): a}."""
        width = max((i for i, _ in terms), default=-1) + 1
        rows = [dict() for _ in range(width)]
        for (i, j), a in terms.items():
            rows[i][j] = F.ADD[rows[i].get(j, 0)][a]
        cs = []
        for row in rows:
            top = max(row, default=-1)
            cs.append(Poly(F, [row.get(j, 0) for j in range(top + 1)]))
        return cls(F, cs)

    def deg_t(self):
        return len(self.c) - 1

    def deg_theta(self):
        """θ-degree; requires polynomial coefficients."""
        out = -1
        for a in self.c:
            if not a.den.is_one():
                raise ValueError("θ-degree of a non-polynomial coefficient")
            out = max(out, a.num.deg())
        return out

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if not isinstance(other, PolyT):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"PolyT({self.format()})"

    def format(self):
        if not self.c:
            return "0"
        return " + ".join(f"({a})*t^{i}" for i, a in reversed(list(enumerate(self.c))) if a)

    def _coerce(self, other):
        if isinstance(other, PolyT):
            return other
        return PolyT(self.F, [other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.c), len(o.c))
        zero = RatFunc.const(self.F, 0)
        return PolyT(self.F, [(self.c[i] if i < len(self.c) else zero) +
                              (o.c[i] if i < len(o.c) else zero) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return PolyT(self.F, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.c or not o.c:
            return PolyT(self.F)
        out = [RatFunc.const(self.F, 0)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return PolyT(self.F, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = PolyT.const(self.F, 1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, x):
        """Substitute t = x for a RatFunc/Poly x in θ."""
        x = x if isinstance(x, RatFunc) else RatFunc(x)
        acc = RatFunc.const(self.F, 0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def swap(self):
        """Exchange the roles of t and θ (polynomial coefficients only)."""
        terms = {}
        for i, a in enumerate(self.c):
            if not a.den.is_one():
                raise ValueError("swap needs polynomial coefficients")
            for j, b in enumerate(a.num.c):
                if b:
                    terms[(j, i)] = b
        return PolyT.from_terms(self.F, terms)


def twist(f: PolyT, i: int) -> PolyT:
    """f^{(i)}: raise every θ-coefficient to the q^i-th power."""
    if i < 0:
        raise DomainError("inverse twisting is not provided")
    return PolyT(f.F, [a.frobenius(i) for a in f.c])
