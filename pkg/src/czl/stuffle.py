"""Quasi-shuffle expansions of products of power sums.

For a family X (``"S"`` or ``"Si"``) and arrays a, b:

* ``diag_product``:   X_d(a) X_d(b)     = Σ F(u) X_d(u)
* ``mixed_product``:  X_d(a) X_{<d}(b)  = Σ H(u) X_d(u)
* ``strict_product``: X_{<d}(a) X_{<d}(b) = Σ G(u) X_{<d}(u)

all for every d.  Internally coefficients are F_p elements kept in plain
dicts; the public functions return :class:`FormalSum` objects over K.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .compositions import Array, EMPTY, format_array, parse_array
from .field import field
from .poly import Poly, RatFunc


class FormalSum:
    """Finitely supported map Array -> K."""

    __slots__ = ("F", "terms")

    def __init__(self, F, terms=None):
        self.F = F
        self.terms = {}
        for a, c in (terms or {}).items():
            c = _as_ratfunc(F, c)
            if c:
                self.terms[a] = c

    @classmethod
    def single(cls, F, a, c=1):
        return cls(F, {a: c})

    @classmethod
    def from_fp(cls, F, d):
        return cls(F, {a: RatFunc.const(F, c) for a, c in d.items()})

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms))

    def items(self):
        return [(a, self.terms[a]) for a in sorted(self.terms)]

    def get(self, a):
        return self.terms.get(a, RatFunc.const(self.F, 0))

    def support(self):
        return sorted(self.terms)

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for a, c in other.terms.items():
            v = out.get(a)
            v = c if v is None else v + c
            if v:
                out[a] = v
            else:
                out.pop(a, None)
        return FormalSum._raw(self.F, out)

    def __neg__(self):
        return FormalSum._raw(self.F, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _as_ratfunc(self.F, c)
        if not c:
            return FormalSum(self.F)
        return FormalSum._raw(self.F, {a: v * c for a, v in self.terms.items()})

    def map_arrays(self, fn):
        """Apply fn to every array, merging coefficients."""
        out = FormalSum(self.F)
        for a, c in self.terms.items():
            out = out + FormalSum._raw(self.F, {fn(a): c})
        return out

    def prepend(self, s, e):
        return FormalSum._raw(self.F, {a.prepend(s, e): c for a, c in self.terms.items()})

    def weights(self):
        return {a.weight for a in self.terms}

    @classmethod
    def _raw(cls, F, terms):
        obj = object.__new__(cls)
        obj.F = F
        obj.terms = terms
        return obj

    def __repr__(self):
        inner = ", ".join(f"{format_array(a)}: {c.format()}" for a, c in self.items())
        return "{" + inner + "}"

    def to_json(self):
        return [{"array": format_array(a), "coeff": c.format()} for a, c in self.items()]

    @classmethod
    def from_json(cls, F, rows):
        q = F.q
        return cls(F, {parse_array(r["array"], q): RatFunc.parse(F, r["coeff"]) for r in rows})


def _as_ratfunc(F, c):
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, Poly):
        return RatFunc(c)
    return RatFunc.const(F, c % F.q if F.prime else c)


# -- F_p-coefficient dicts

def _acc(F, out, a, c):
    if not c:
        return
    v = F.ADD[out.get(a, 0)][c]
    if v:
        out[a] = v
    else:
        out.pop(a, None)


def _prepend(d, s, e):
    return {a.prepend(s, e): c for a, c in d.items()}


def chen_delta(s, t, i, q):
    """Δ^i_{s,t} in F_p (Chen's coefficient); zero unless (q-1) | i and 0 < i < s+t."""
    F = field(q)
    p = F.p
    if i <= 0 or i >= s + t or i % (q - 1):
        return 0
    val = (-1) ** (s - 1) * comb(i - 1, s - 1) + (-1) ** (t - 1) * comb(i - 1, t - 1)
    return val % p


def _head_merge(q, family, a: Array, b: Array):
    """Expansion of X_d(a_1) X_d(b_1) as [(coeff, array)] with X_d of each array."""
    e = (a.e[0] + b.e[0]) % (q - 1)
    s, t = a.s[0], b.s[0]
    out = [(1, Array((s + t,), (e,)))]
    if family == "S":
        for i in range(q - 1, s + t, q - 1):
            c = chen_delta(s, t, i, q)
            if c:
                out.append((c, Array((s + t - i, i), (e, 0))))
    return out


@lru_cache(maxsize=None)
def _diag(q, family, a: Array, b: Array):
    F = field(q)
    if a.depth == 0:
        return {b: 1} if b.depth else {}
    if b.depth == 0:
        return {a: 1}
    rest = _strict(q, family, a.tail(), b.tail())
    out = {}
    for c, h in _head_merge(q, family, a, b):
        for u, cu in rest.items():
            tails = _strict(q, family, h.tail(), u) if h.depth > 1 else {u: 1}
            for v, cv in tails.items():
                _acc(F, out, v.prepend(h.s[0], h.e[0]), F.MUL[c][F.MUL[cu][cv]])
    return out


@lru_cache(maxsize=None)
def _mixed(q, family, a: Array, b: Array):
    if a.depth == 0:
        raise ValueError("mixed product needs a nonempty first array")
    rest = _strict(q, family, a.tail(), b)
    return _prepend(rest, a.s[0], a.e[0])


@lru_cache(maxsize=None)
def _strict(q, family, a: Array, b: Array):
    F = field(q)
    if a.depth == 0:
        return {b: 1}
    if b.depth == 0:
        return {a: 1}
    out = {}
    for part in (_diag(q, family, a, b), _mixed(q, family, a, b), _mixed(q, family, b, a)):
        for u, c in part.items():
            _acc(F, out, u, c)
    return out


def _canon(q, a):
    return Array(a.s, tuple(x % (q - 1) for x in a.e))


def diag_product(q, a: Array, b: Array, family="Si") -> FormalSum:
    return FormalSum.from_fp(field(q), _diag(q, family, _canon(q, a), _canon(q, b)))


def mixed_product(q, a: Array, b: Array, family="Si") -> FormalSum:
    return FormalSum.from_fp(field(q), _mixed(q, family, _canon(q, a), _canon(q, b)))


def strict_product(q, a: Array, b: Array, family="Si") -> FormalSum:
    return FormalSum.from_fp(field(q), _strict(q, family, _canon(q, a), _canon(q, b)))


def value_product(q, a: Array, b: Array, family="Si") -> FormalSum:
    """V with value(a) value(b) = Σ V(u) value(u) (zeta values for S, polylogs for Si)."""
    F = field(q)
    a, b = _canon(q, a), _canon(q, b)
    if a.depth == 0 or b.depth == 0:
        return FormalSum.from_fp(F, {b if a.depth == 0 else a: 1})
    return FormalSum.from_fp(F, _strict(q, family, a, b))
