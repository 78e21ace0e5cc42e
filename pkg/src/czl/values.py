"""Power sums, alternating zeta values and polylogarithms, π̃ powers, Anderson-Thakur data.

Two families share one nested-sum recursion ``X_d(a) = X_d(head) * X_{<d}(tail)``:

* ``"S"``:  depth-one terms ``Σ_{a monic, deg a = d} ε^d / a^s`` (zeta values),
* ``"Si"``: depth-one terms ``ε^d / ℓ_d^s`` (Carlitz polylogarithms).

Series are computed to an absolute precision ``known_to``; every term has
non-negative valuation, so products of terms keep that precision.
"""

from __future__ import annotations

import math
from functools import lru_cache, reduce

import numpy as np

from .carlitz import PolyT, ell, ell_degree, factorial_D, gamma_factor, twist, D1
from .compositions import Array, EMPTY
from .errors import DomainError, MalformedInput, ResourceLimit
from .field import field
from .laurent import LaurentInf
from .poly import Poly, RatFunc

FAMILIES = ("S", "Si")
_ALIASES = {"s": "S", "mzv": "S", "amzv": "S", "zeta": "S",
            "si": "Si", "cmpl": "Si", "acmpl": "Si", "li": "Si"}

# direct monic enumeration costs q^d; beyond this Si terms stand in when allowed
D_MAX = {2: 10, 3: 7}


def family_name(name: str) -> str:
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise MalformedInput(f"unknown family {name!r}") from None


def d_max(q: int) -> int:
    return D_MAX.get(q, int(math.log(2500, q)))


# -- batched arithmetic over all monic polynomials of a given degree

def _batch_mul(F, A, B):
    """Row-wise polynomial products of two 2-D coefficient arrays."""
    M, la = A.shape
    lb = B.shape[1]
    out = np.zeros((M, la + lb - 1), dtype=np.int64)
    for i in range(lb):
        col = B[:, i:i + 1]
        if F.prime:
            out[:, i:i + la] = (out[:, i:i + la] + A * col) % F.p
        else:
            out[:, i:i + la] = F.ADD_np[out[:, i:i + la], F.MUL_np[A, col]]
    return out


def _monic_table(F, d):
    rows = np.array(np.meshgrid(*[np.arange(F.q)] * d, indexing="ij")).reshape(d, -1).T if d else \
        np.zeros((1, 0), dtype=np.int64)
    ones = np.ones((rows.shape[0], 1), dtype=np.int64)
    return np.hstack([rows.astype(np.int64), ones])


def _batch_inverse_sum(F, R, length):
    """Σ over rows of the power series 1/r(x), r = row of R with r[0] = 1."""
    M, n = R.shape
    g = np.zeros((M, length), dtype=np.int64)
    g[:, 0] = 1
    negR = F.vneg(R)
    for i in range(1, length):
        k = min(i, n - 1)
        window = g[:, i - k:i][:, ::-1]
        if F.prime:
            g[:, i] = (negR[:, 1:k + 1] * window).sum(axis=1) % F.p
        else:
            terms = F.MUL_np[negR[:, 1:k + 1], window]
            g[:, i] = reduce(lambda x, y: F.ADD_np[x, y], terms.T)
    if F.prime:
        return g.sum(axis=0) % F.p
    return reduce(lambda x, y: F.ADD_np[x, y], g)


@lru_cache(maxsize=4096)
def monic_power_sum_series(q, d, s, known_to):
    """Σ_{a monic, deg a = d} a^{-s} as a series known to valuation ``known_to``."""
    F = field(q)
    if d < 0:
        return LaurentInf.zero(F)
    if d == 0:
        return LaurentInf.from_poly(Poly.const(F, 1))
    if d > d_max(q):
        raise ResourceLimit(f"monic enumeration at degree {d} exceeds d_max={d_max(q)} for q={q}")
    length = int(known_to) - s * d + 1
    if length <= 0:
        return LaurentInf(F, s * d, [], known_to)
    base = _monic_table(F, d)
    P = base
    for _ in range(s - 1):
        P = _batch_mul(F, P, base)
    R = P[:, ::-1]  # reversed: constant term is the leading coefficient 1
    coeffs = _batch_inverse_sum(F, R, length)
    return LaurentInf(F, s * d, coeffs, known_to)


# -- depth-one terms

def _char_power(F, e, d):
    return F.char(e * d)


@lru_cache(maxsize=None)
def _exact_depth1_S(q, d, s):
    F = field(q)
    if d < 0:
        return RatFunc.const(F, 0)
    L = ell_degree(q, d)
    series = monic_power_sum_series(q, d, s, s * L)
    scaled = series * (ell(q, d) ** s)
    top = -scaled.val if len(scaled.coeffs) else 0
    coeffs = scaled.window(-top, 0)[::-1] if top >= 0 else []
    num = Poly(F, [int(c) for c in coeffs])
    return RatFunc(num, ell(q, d) ** s)


def _exact_depth1(q, family, d, s, e):
    F = field(q)
    if d < 0:
        return RatFunc.const(F, 0)
    if family == "Si":
        base = RatFunc(Poly.const(F, 1), ell(q, d) ** s)
    else:
        base = _exact_depth1_S(q, d, s)
    return base.scale(_char_power(F, e, d))


def _series_depth1(q, family, d, s, e, known_to):
    F = field(q)
    if d < 0:
        return LaurentInf.zero(F)
    c = _char_power(F, e, d)
    if family == "Si" or (d > d_max(q) and s <= q):
        # the Si term equals the S term whenever s <= q
        r = RatFunc(Poly.const(F, c), ell(q, d) ** s)
        return LaurentInf.from_ratfunc(r, known_to)
    return monic_power_sum_series(q, d, s, known_to).scale(c)


# -- nested sums

@lru_cache(maxsize=None)
def power_sum(q: int, d: int, a: Array, strict: bool = False, family: str = "Si") -> RatFunc:
    """Exact X_d(a) (or X_{<d}(a) when ``strict``) as an element of K."""
    F = field(q)
    if a.depth == 0:
        if strict:
            return RatFunc.const(F, 1)
        raise DomainError("X_d of the empty array is undefined; use the strict form")
    if strict:
        acc = RatFunc.const(F, 0)
        for e in range(a.depth - 1, d):
            acc = acc + power_sum(q, e, a, False, family)
        return acc
    if d < a.depth - 1:
        return RatFunc.const(F, 0)
    head = _exact_depth1(q, family, d, a.s[0], a.e[0])
    if a.depth == 1:
        return head
    return head * power_sum(q, d, a.tail(), True, family)


@lru_cache(maxsize=65536)
def power_sum_series(q, d, a: Array, strict, family, known_to):
    F = field(q)
    if a.depth == 0:
        if strict:
            return LaurentInf.from_poly(Poly.const(F, 1))
        raise DomainError("X_d of the empty array is undefined; use the strict form")
    if strict:
        if d <= a.depth - 1:
            return LaurentInf.zero(F)
        return (power_sum_series(q, d - 1, a, True, family, known_to) +
                power_sum_series(q, d - 1, a, False, family, known_to))
    if d < a.depth - 1:
        return LaurentInf.zero(F)
    head = _series_depth1(q, family, d, a.s[0], a.e[0], known_to)
    if a.depth == 1:
        return head
    return head * power_sum_series(q, d, a.tail(), True, family, known_to)


# -- valuation bounds for the truncation loop

@lru_cache(maxsize=None)
def _h_degree_data(q, s):
    """Pairs (t-degree, θ-degree) of the monomials of H_s."""
    H = anderson_thakur_H(q, s)
    out = []
    for i, c in enumerate(H.c):
        if c:
            out.append((i, c.num.deg()))
    return tuple(out)


def at_numerator_degree_bound(q, s, d):
    """Upper bound for deg h_{s,d} (θ ↦ θ^{q^d}, t ↦ θ in H_s)."""
    return max(j * q ** d + i for i, j in _h_degree_data(q, s))


def term_valuation_bound(q, family, s, d):
    """Lower bound for v_∞ of any degree-d term X_d(a) with first entry s."""
    L = s * ell_degree(q, d)
    if family == "Si":
        return L
    if s <= q:
        return L
    return L - at_numerator_degree_bound(q, s, d) + gamma_factor(q, s).deg()


def _sum_over_degrees(q, a: Array, family, N, term):
    F = field(q)
    if a.depth == 0:
        raise MalformedInput("empty array")
    acc = LaurentInf.zero(F).truncate(N)
    d = a.depth - 1
    while True:
        if (term_valuation_bound(q, family, a.s[0], d) > N and
                term_valuation_bound(q, family, a.s[0], d + 1) > N):
            return acc
        acc = acc + term(d)
        d += 1


def nested_sum(q, a: Array, family, N) -> LaurentInf:
    """Σ_{d >= 0} X_d(a) known to valuation N."""
    family = family_name(family)
    if family == "S" and any(x > q for x in a.s):
        last = a.depth - 1
        while term_valuation_bound(q, "S", a.s[0], last) <= N or \
                term_valuation_bound(q, "S", a.s[0], last + 1) <= N:
            last += 1
        if last - 1 > d_max(q):
            raise ResourceLimit(f"zeta value {a} needs degree {last - 1} > d_max={d_max(q)}")
    return _sum_over_degrees(q, a, family, N,
                             lambda d: power_sum_series(q, d, a, False, family, N))


def amzv(q: int, a: Array, N: int) -> LaurentInf:
    return nested_sum(q, a, "S", N)


def acmpl(q: int, a: Array, N: int) -> LaurentInf:
    return nested_sum(q, a, "Si", N)


def value(q, a, family, N):
    return nested_sum(q, a, family, N)


def carlitz_pi_power(q: int, w: int, N: int) -> LaurentInf:
    """π̃^w for (q-1) | w, via π̃^{q-1} = -D_1 ζ_A(q-1)."""
    if w % (q - 1):
        raise DomainError(f"π̃^{w} is not in K_∞ when q-1 = {q - 1} does not divide w")
    m = w // (q - 1)
    F = field(q)
    if m == 0:
        return LaurentInf.from_poly(Poly.const(F, 1))
    z = amzv(q, Array((q - 1,), (0,)), N + q * m)
    base = -(z * D1(q))
    return (base ** m).truncate(N)


# -- Anderson-Thakur polynomials

def _gamma_poly(q, j):
    """γ_j(t) = ∏_{l=1}^{j} (θ^{q^j} - t^{q^l}), γ_0 = 1."""
    F = field(q)
    out = PolyT.const(F, 1)
    for l in range(1, j + 1):
        out = out * PolyT(F, [Poly.monomial(F, q ** j)] + [0] * (q ** l - 1) + [F.NEG[1]])
    return out


@lru_cache(maxsize=None)
def anderson_thakur_alpha(q: int, n: int) -> PolyT:
    """α_n(t) from the generating series x (1 - Σ_j γ_j/D_j x^{q^j})^{-1}, times Γ_n."""
    if n < 1:
        raise DomainError("n >= 1 required")
    u = _at_u(q, n)
    out = u * PolyT.const(field(q), gamma_factor(q, n))
    for c in out.c:
        if not c.is_poly():
            raise AssertionError(f"α_{n} has a non-polynomial coefficient")
    return out


@lru_cache(maxsize=None)
def _at_u(q, n):
    F = field(q)
    if n == 1:
        return PolyT.const(F, 1)
    acc = PolyT(F)
    j = 0
    while q ** j < n:
        weight = PolyT(F, [c * RatFunc(Poly.const(F, 1), factorial_D(q, j))
                           for c in _gamma_poly(q, j).c])
        acc = acc + weight * _at_u(q, n - q ** j)
        j += 1
    return acc


def anderson_thakur_H(q: int, n: int) -> PolyT:
    """H_n: α_n with the roles of t and θ exchanged."""
    return anderson_thakur_alpha(q, n).swap()


@lru_cache(maxsize=None)
def at_eval(q: int, n: int, d: int) -> RatFunc:
    """h_{n,d}: H_n twisted d times and evaluated at t = θ."""
    F = field(q)
    return twist(anderson_thakur_H(q, n), d).evaluate(Poly.var(F))


def _at_series_depth1(q, d, s, e, known_to):
    F = field(q)
    if d < 0:
        return LaurentInf.zero(F)
    r = at_eval(q, s, d) * RatFunc(Poly.const(F, F.char(e * d)), ell(q, d) ** s)
    return LaurentInf.from_ratfunc(r, known_to)


def _at_nested(q, d, a: Array, strict, N, memo):
    F = field(q)
    key = (d, a, strict)
    if key in memo:
        return memo[key]
    if a.depth == 0:
        out = LaurentInf.from_poly(Poly.const(F, 1))
    elif strict:
        if d <= a.depth - 1:
            out = LaurentInf.zero(F)
        else:
            out = _at_nested(q, d - 1, a, True, N, memo) + _at_nested(q, d - 1, a, False, N, memo)
    elif d < a.depth - 1:
        out = LaurentInf.zero(F)
    else:
        out = _at_series_depth1(q, d, a.s[0], a.e[0], N) * _at_nested(q, d, a.tail(), True, N, memo)
    memo[key] = out
    return out


def at_zeta_check(q: int, a: Array, N: int):
    """v_∞ of Σ ∏ ε^{i} h_{s,i}/ℓ_i^{s}  -  Γ_{s_1}...Γ_{s_r} ζ_A(a), known to N."""
    F = field(q)
    memo = {}
    # tail factors may have negative valuation (down to -deg h_{s,0})
    slack = sum(at_numerator_degree_bound(q, s, 0) for s in a.s[1:])
    inner = N + slack
    lhs = LaurentInf.zero(F).truncate(inner)
    d = a.depth - 1
    bound = lambda d: a.s[0] * ell_degree(q, d) - at_numerator_degree_bound(q, a.s[0], d) - slack
    while bound(d) <= N or bound(d + 1) <= N:
        lhs = lhs + _at_nested(q, d, a, False, inner, memo)
        d += 1
    gam = Poly.const(F, 1)
    for s in a.s:
        gam = gam * gamma_factor(q, s)
    rhs = amzv(q, a, N + gam.deg()) * gam
    return (lhs - rhs).truncate(N).valuation()


def linear_combination(q, terms, family, N) -> LaurentInf:
    """Σ c_u value(u) known to valuation N (coefficients in K)."""
    F = field(q)
    items = list(terms.items()) if hasattr(terms, "items") else list(terms)
    shift = 0
    for _, c in items:
        v = c.valuation_inf()
        if v != math.inf:
            shift = max(shift, -int(v))
    P = N + shift
    acc = LaurentInf.zero(F).truncate(N)
    for u, c in items:
        if not c:
            continue
        x = nested_sum(q, u, family, P)
        if c.is_poly():
            acc = acc + x * c.num
        else:
            acc = acc + x * LaurentInf.from_ratfunc(c, N + 2 * shift + 1)
    return acc.truncate(N)


def residual_valuation(q, a, terms, family, N, basis_family=None):
    """v_∞(value(a) - Σ c_u value(u)), capped at N + 1 when everything cancels."""
    lhs = nested_sum(q, a, family, N)
    rhs = linear_combination(q, terms, basis_family or family, N)
    return (lhs - rhs).valuation()
