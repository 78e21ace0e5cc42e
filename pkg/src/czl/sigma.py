"""The σ-difference system behind the unique relation between π̃^w and polylogarithms.

Work in the coordinates T = t - t^q and X = t^q - θ^q.  A node of parameter m
stands for a prefix of weight w - m(q-1); its δ-polynomial has the shape

    δ = f_m (X^m + Σ_{i<m} P_i(T) X^i)

and its children are the nodes k with 0 <= k < m, k ≢ m (mod q), reached by
appending the entry (m - k)(q - 1).  Expanding

    ε F^{(1)} = F (t - θ)^w + Σ_children δ_k

in powers of X gives a square linear system over F_q(y) (y standing for T)
in the unknowns f_0, ..., f_m.  Everything below is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import comb

from .carlitz import D1
from .compositions import Array, format_tuple
from .errors import DomainError, PrecisionInsufficient, TheoremViolation
from .field import field
from .laurent import LaurentInf
from .poly import Poly, RatFunc
from .values import acmpl, carlitz_pi_power


def children(m, q):
    """Child parameters of a node: 0 <= k < m with k ≢ m (mod q)."""
    if m < 1:
        raise DomainError("children() needs m >= 1")
    return [k for k in range(m) if (m - k) % q]


def _y(F):
    return RatFunc(Poly.var(F))


def _zero(F):
    return RatFunc.const(F, 0)


def _one(F):
    return RatFunc.const(F, 1)


@dataclass
class NodeSolution:
    m: int
    P: list                     # P_i(y), i = 0..m-1: δ / f_m = X^m + Σ P_i X^i
    edge_P: dict                # child k -> multiplier with f_k = f_m · P(T)
    det_order: int = 0          # v_y of the determinant of the solved block


@dataclass
class SystemReport:
    """The root system for given (w, ε): its matrix and kernel over F_q(y)."""
    q: int
    w: int
    eps: int
    m: int
    r: int
    children: list
    matrix: list
    kernel: list                # basis vectors indexed by f_0..f_m
    det_order: int = None


def _build_system(q, m, r, eps, child_solutions):
    """Rows X^0..X^m, columns f_0..f_m, for ε F^{(1)} - F (t-θ)^w - Σ δ_k = 0.

    F = Σ_i f_{m-r-iq} (t-θ)^{m-r-iq}, so F^{(1)} contributes (T + X)^k and
    F (t-θ)^w contributes X^{m-i}.  Children are k <= m with k ≢ m - r (mod q).
    """
    F = field(q)
    y = _y(F)
    M = [[_zero(F) for _ in range(m + 1)] for _ in range(m + 1)]
    eps_c = RatFunc.const(F, eps)
    top = m - r
    i = 0
    while top - i * q >= 0:
        k = top - i * q
        for j in range(k + 1):
            c = comb(k, j) % F.p
            if c:
                M[j][k] = M[j][k] + eps_c * (y ** (k - j)).scale(c)
        M[m - i][k] = M[m - i][k] - _one(F)
        i += 1
    kids = [k for k in range(m + 1) if (top - k) % q]
    for k in kids:
        M[k][k] = M[k][k] - _one(F)
        for j, p in enumerate(child_solutions[k].P):
            if p:
                M[j][k] = M[j][k] - p
    return M, kids


def _gauss(F, M, ncols):
    """Row-reduce a copy of M over F_q(y); returns (rref rows, pivot columns)."""
    A = [list(row) for row in M]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * z for x, z in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _kernel(F, M, n):
    R, pivots = _gauss(F, M, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [_zero(F) for _ in range(n)]
        v[f] = _one(F)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def _det(F, M):
    n = len(M)
    A = [list(row) for row in M]
    det = _one(F)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return _zero(F)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det = det * A[c][c]
        inv = A[c][c].inverse()
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [x - f * z for x, z in zip(A[i], A[c])]
    return det


@lru_cache(maxsize=None)
def solve_node(m, q) -> NodeSolution:
    """Node of parameter m (children solved recursively; the data depends on m only)."""
    F = field(q)
    if m == 0:
        return NodeSolution(0, [], {})
    kids = {k: solve_node(k, q) for k in children(m, q)}
    M, _ = _build_system(q, m, 0, 1, kids)
    # the X^m row is identically zero; f_m = 1 fixes the scale
    block = [row[:m] for row in M[:m]]
    det = _det(F, block)
    if not det or det.order_at_zero() != 0:
        raise TheoremViolation(f"node m={m}: v_y(det B) != 0")
    rhs = [-row[m] for row in M[:m]]
    R, pivots = _gauss(F, [b + [c] for b, c in zip(block, rhs)], m)
    f = [_zero(F)] * m
    for row, pc in zip(R, pivots):
        f[pc] = row[m]
    for k, v in enumerate(f):
        if v and v.order_at_zero() < 1:
            raise TheoremViolation(f"node m={m}: f_{k}/f_m has v_y < 1")
    P = [_zero(F)] * m
    i = 1
    while m - i * q >= 0:
        P[m - i] = f[m - i * q]
        i += 1
    return NodeSolution(m, P, {k: f[k] for k in kids}, int(det.order_at_zero()))


def solve_root(w, q, eps=1) -> SystemReport:
    """The top-level system for weight w and character exponent eps (ε = g^eps)."""
    F = field(q)
    m, r = divmod(w, q - 1)
    eps_val = F.char(eps)
    top = m - r
    if top < 0:
        # every child would need a negative parameter; nothing but the zero solution
        return SystemReport(q, w, eps, m, r, [], [], [], None)
    kids_needed = [k for k in range(m + 1) if (top - k) % q]
    sols = {k: solve_node(k, q) for k in kids_needed}
    M, kids = _build_system(q, m, r, eps_val, sols)
    ker = _kernel(F, M, m + 1)
    det = _det(F, M)
    return SystemReport(q, w, eps, m, r, kids, M, ker,
                        None if not det else int(det.order_at_zero()))


@dataclass
class SigmaOutcome:
    kind: str                                   # "NoRelation" or "UniqueRelation"
    q: int
    w: int
    eps: int = 0
    terms: dict = dc_field(default_factory=dict)    # tuple -> coefficient (RatFunc in y, then in θ)
    pi_coefficient: RatFunc = None
    clearing_factor: Poly = None
    reason: str = ""

    @property
    def is_unique(self):
        return self.kind == "UniqueRelation"


def _leaf_paths(q, m):
    """(tuple, [multipliers]) for every root-to-leaf path below a node of parameter m."""
    if m == 0:
        return [((), [])]
    node = solve_node(m, q)
    out = []
    for k, mult in node.edge_P.items():
        for rest, ms in _leaf_paths(q, k):
            out.append((((m - k) * (q - 1),) + rest, [mult] + ms))
    return out


def solve_sigma_system(w, q, eps=0) -> SigmaOutcome:
    """Decide whether π̃^w satisfies a K-relation with weight-w polylogarithms of character ε.

    ``eps`` is the exponent of the character, ε = g^eps.  In the unique case
    the returned terms are a_i(y) = ∏ (edge multipliers) along each path,
    i.e. the leaf values with f_∅ = 1, as elements of F_q(y).
    """
    if w < 1:
        raise DomainError("weight must be positive")
    F = field(q)
    eps %= q - 1
    report = solve_root(w, q, eps)
    if w % (q - 1):
        if report.kernel:
            raise TheoremViolation(f"w={w}: homogeneous system has a nonzero solution")
        return SigmaOutcome("NoRelation", q, w, eps, reason=f"q-1 = {q - 1} does not divide w")
    if eps:
        if report.kernel:
            raise TheoremViolation(f"w={w}, ε≠1: system has a nonzero solution")
        return SigmaOutcome("NoRelation", q, w, eps, reason="nontrivial character forces f_m = 0")
    if len(report.kernel) != 1:
        raise TheoremViolation(f"w={w}: kernel dimension {len(report.kernel)} != 1")
    m = w // (q - 1)
    terms = {}
    for tup, mults in _leaf_paths(q, m):
        c = _one(F)
        for x in mults:
            c = c * x
        terms[tup] = c
    return SigmaOutcome("UniqueRelation", q, w, eps, terms=terms)


def _lcm(a: Poly, b: Poly) -> Poly:
    from .poly import poly_gcd
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def relation_coefficients(w, q) -> SigmaOutcome:
    """The relation π̃^w + Σ c_i Li(s_i) = 0 with c_i ∈ K.

    The leaf polynomials a_i(T) = f_∅ ∏ P(T) are made polynomial by taking
    f_∅ = lcm of the denominators (the clearing factor), then specialized at
    t = θ, where T = θ - θ^q = -D_1.  The coefficient of π̃^w in the same
    relation is -f_∅(θ); dividing by it normalizes π̃^w to 1.
    """
    out = solve_sigma_system(w, q, 0)
    if not out.is_unique:
        return out
    F = field(q)
    clear = Poly.const(F, 1)
    for c in out.terms.values():
        clear = _lcm(clear, c.den)
    at_theta = RatFunc(-D1(q))
    lead = RatFunc(clear).compose(at_theta)
    terms = {}
    for tup, c in out.terms.items():
        a_t = (c * RatFunc(clear))
        if not a_t.is_poly():
            raise TheoremViolation(f"leaf {tup} is not polynomial after clearing")
        terms[tup] = a_t.compose(at_theta) / (-lead)
    out.terms = terms
    out.pi_coefficient = _one(F)
    out.clearing_factor = clear
    return out


def relation_residual(q, w, terms, N) -> LaurentInf:
    """π̃^w + Σ c_i Li(s_i), known to valuation N."""
    F = field(q)
    shift = 0
    terms = {t: c for t, c in terms.items() if c}
    for c in terms.values():
        shift = max(shift, -int(c.valuation_inf()))
    acc = carlitz_pi_power(q, w, N)
    for tup, c in terms.items():
        x = acmpl(q, Array(tup, (0,) * len(tup)), N + shift)
        if c.is_poly():
            acc = acc + x * c.num
        else:
            acc = acc + x * LaurentInf.from_ratfunc(c, N + 2 * shift + 1)
    return acc.truncate(N)


def verify_unique_relation(w, q, N) -> int:
    """v_∞ of the residual of the normalized relation (N + 1 means exact to precision)."""
    out = relation_coefficients(w, q)
    if not out.is_unique:
        raise DomainError(f"no relation for w={w}, q={q}: {out.reason}")
    v = relation_residual(q, w, out.terms, N).valuation()
    return v


def outcome_to_json(out: SigmaOutcome, residual=None, precision=None):
    d = {"schema": "czl-1", "kind": "unique-relation" if out.is_unique else "no-relation",
         "q": out.q, "w": out.w, "character": out.eps}
    if not out.is_unique:
        d["reason"] = out.reason
        return d
    d["pi_coefficient"] = out.pi_coefficient.format() if out.pi_coefficient else None
    d["clearing_factor"] = out.clearing_factor.format("y") if out.clearing_factor else None
    d["terms"] = [{"tuple": "(" + format_tuple(t) + ")", "coeff": c.format()}
                  for t, c in sorted(out.terms.items())]
    d["residual_valuation"] = None if residual is None else (
        "inf" if residual == float("inf") else int(residual))
    d["precision"] = precision
    return d


def check_precision(v, N):
    if v <= N:
        raise PrecisionInsufficient(f"relation residual only reaches valuation {v} <= {N}")
    return v
