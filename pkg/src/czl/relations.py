"""Binary relations, the operators B*, C and BC, and reduction onto AT_w / AS_w.

A binary relation stands for ``Σ part_d(u) X_d(u) + Σ part_d1(v) X_{d+1}(v) = 0``
for every d ∈ Z.  Summing over all d turns it into a linear relation among the
full values Σ_d X_d, which is how decompositions are read off.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .carlitz import D1
from .compositions import Array, collapse, enum_AS, enum_AT, in_AT, initial_tuple, iota
from .errors import NotApplicable, ResourceLimit, TheoremViolation
from .field import field
from .linalg import solve_left_sparse
from .poly import Poly, RatFunc
from .stuffle import FormalSum, _diag, _mixed
from .values import family_name, power_sum


@dataclass(frozen=True)
class BinaryRelation:
    q: int
    family: str
    part_d: FormalSum
    part_d1: FormalSum

    @property
    def F(self):
        return field(self.q)

    def is_fixed(self):
        return not self.part_d1

    def __add__(self, other):
        return BinaryRelation(self.q, self.family, self.part_d + other.part_d, self.part_d1 + other.part_d1)

    def __sub__(self, other):
        return BinaryRelation(self.q, self.family, self.part_d - other.part_d, self.part_d1 - other.part_d1)

    def scale(self, c):
        return BinaryRelation(self.q, self.family, self.part_d.scale(c), self.part_d1.scale(c))

    def summed(self) -> FormalSum:
        """The relation Σ_u c_u value(u) = 0 obtained by summing over all d."""
        return self.part_d + self.part_d1

    def weights(self):
        return self.part_d.weights() | self.part_d1.weights()


def _expand(q, family, fs: FormalSum, fn) -> FormalSum:
    F = field(q)
    out = FormalSum(F)
    for u, c in fs.items():
        out = out + FormalSum.from_fp(F, fn(u)).scale(c)
    return out


def fundamental_relation(q, e, family="Si") -> BinaryRelation:
    """R_ε: X_d(ε; q) + ε^{-1} D_1 X_{d+1}((ε, 1); (1, q-1)) = 0, with ε = g^e."""
    F = field(q)
    e %= q - 1
    inv = F.INV[F.char(e)]
    part_d = FormalSum.single(F, Array((q,), (e,)))
    part_d1 = FormalSum.single(F, Array((1, q - 1), (e, 0)), D1(q).scale(inv))
    return BinaryRelation(q, family_name(family), part_d, part_d1)


def apply_B_star(rel: BinaryRelation, e, v) -> BinaryRelation:
    """B*_{σ,v}: multiply Σ_{j<d} R(j) by X_d(σ; v); the result is fixed."""
    q, fam = rel.q, rel.family
    h = Array((v,), (e % (q - 1),))
    part = (_expand(q, fam, rel.part_d, lambda u: _mixed(q, fam, h, u)) +
            _expand(q, fam, rel.part_d1, lambda u: _mixed(q, fam, h, u)) +
            _expand(q, fam, rel.part_d1, lambda u: _diag(q, fam, h, u)))
    return BinaryRelation(q, fam, part, FormalSum(rel.F))


def apply_B_star_seq(rel: BinaryRelation, sigma: Array) -> BinaryRelation:
    """B*_{Σ,V} = B*_{σ_1,v_1} ∘ ... ∘ B*_{σ_n,v_n}."""
    for v, e in reversed(list(zip(sigma.s, sigma.e))):
        rel = apply_B_star(rel, e, v)
    return rel


def apply_C(rel: BinaryRelation, W: Array) -> BinaryRelation:
    """C_W: multiply R(d) by X_{<d+1}(W)."""
    q, fam = rel.q, rel.family
    part_d = (_expand(q, fam, rel.part_d, lambda u: _diag(q, fam, u, W)) +
              _expand(q, fam, rel.part_d, lambda u: _mixed(q, fam, u, W)))
    part_d1 = _expand(q, fam, rel.part_d1, lambda u: _mixed(q, fam, u, W))
    return BinaryRelation(q, fam, part_d, part_d1)


def apply_BC(rel: BinaryRelation, e) -> BinaryRelation:
    """BC_ε = B*_{ε,q}(R) - Σ b_i C_{t_i}(R_ε) over the d+1 part of R."""
    q = rel.q
    out = apply_B_star(rel, e, q)
    r_eps = fundamental_relation(q, e, rel.family)
    for v, b in rel.part_d1.items():
        out = out - apply_C(r_eps, v).scale(b)
    return out


def verify_binary_relation(rel: BinaryRelation, d_range) -> bool:
    """Exact check of the relation at every d in ``d_range``."""
    q, fam = rel.q, rel.family
    F = rel.F
    for d in d_range:
        acc = RatFunc.const(F, 0)
        for u, c in rel.part_d.items():
            acc = acc + c * power_sum(q, d, u, False, fam)
        for u, c in rel.part_d1.items():
            acc = acc + c * power_sum(q, d + 1, u, False, fam)
        if acc:
            return False
    return True


# -- decomposition

@dataclass
class Step:
    array: Array
    part: int
    k: int
    eps: int

    def describe(self):
        from .compositions import format_array
        return f"part{self.part} k={self.k} eps={self.eps} on {format_array(self.array)}"


def active_position(a: Array, q):
    """(part, k) for a non-AT array, k 1-based; None when a is in AT_w."""
    if in_AT(a.s, q):
        return None
    init = initial_tuple(a.s, q)
    if len(init) < a.depth:
        return 1, len(init) + 1
    # every entry <= q and the last one equals q
    return 2, a.depth


def decompose_relation(q, a: Array, e=0, family="Si"):
    """The fixed (or binary) relation built by the decomposition pipeline for a."""
    family = family_name(family)
    pos = active_position(a, q)
    if pos is None:
        raise NotApplicable(f"{a} is already in AT_w")
    part, k = pos
    s, eps = a.s, a.e
    if part == 1:
        W = Array((s[k - 1] - q,) + s[k:], ((eps[k - 1] - e) % (q - 1),) + eps[k:])
        rel = apply_C(fundamental_relation(q, e, family), W)
        top = k - 1  # positions 1..k-1 still to be prepended
    else:
        rel = fundamental_relation(q, eps[k - 1], family)
        top = k - 1
    j = 0
    for i in range(top, 0, -1):
        if s[i - 1] < q:
            j = i
            break
    for i in range(top, j, -1):
        rel = apply_BC(rel, eps[i - 1])
    if j:
        rel = apply_B_star_seq(rel, Array(s[:j], eps[:j]))
    return rel, Step(a, part, k, e % (q - 1))


def decompose_step(q, a: Array, e=0, family="Si") -> FormalSum:
    """value(a) = Σ c_u value(u) read off the summed decomposition relation."""
    rel, _ = decompose_relation(q, a, e, family)
    summed = rel.summed()
    c = summed.get(a)
    if not c:
        raise TheoremViolation(f"decomposition of {a} lost its leading term")
    rest = summed - FormalSum.single(summed.F, a, c)
    return rest.scale(-c.inverse())


@dataclass
class DecompCertificate:
    q: int
    family: str
    basis: str
    input: Array
    terms: FormalSum
    step_log: list = dc_field(default_factory=list)
    residual_valuation: object = None
    precision: int = None

    @property
    def weight(self):
        return self.input.weight

    def to_json(self):
        from .compositions import format_array
        return {"schema": "czl-1", "kind": "decomposition", "q": self.q, "weight": self.weight,
                "family": self.family, "basis": self.basis, "input": format_array(self.input),
                "terms": self.terms.to_json(),
                "residual_valuation": _json_val(self.residual_valuation),
                "precision": self.precision, "step_log": list(self.step_log)}


def _json_val(v):
    if v is None:
        return None
    return "inf" if v == float("inf") else int(v)


class Reducer:
    """Memoized reduction onto AT_w for one (q, family)."""

    def __init__(self, q, family="Si", guard=200000):
        self.q = q
        self.family = family_name(family)
        self.F = field(q)
        self.memo = {}
        self.log = {}
        self.guard = guard
        self.steps = 0

    def reduce(self, a: Array, schedule=None) -> FormalSum:
        """Express value(a) over AT_w.

        ``schedule`` maps 1-based positions to character exponents used for the
        type-1 chain starting at a; all other steps use ε = 1.
        """
        if schedule is None:
            return self._reduce(a, ())
        return self._reduce_chain(a, schedule, ())

    def _reduce_chain(self, a, schedule, stack):
        pos = active_position(a, self.q)
        if pos is None:
            return FormalSum.single(self.F, a)
        e = schedule.get(pos[1], 0) if pos[0] == 1 else 0
        rhs = self._step(a, e)
        out = FormalSum(self.F)
        for u, c in rhs.items():
            sub = self._reduce_chain(u, schedule, stack + (a,)) if self._is_type1(a, u, pos) \
                else self._reduce(u, stack + (a,))
            out = out + sub.scale(c)
        return out

    def _is_type1(self, a, u, pos):
        part, k = pos
        return part == 1 and u.depth == a.depth + 1 and u.s[:k] == a.s[:k - 1] + (self.q,) and \
            u.s[k] == a.s[k - 1] - self.q and u.s[k + 1:] == a.s[k:]

    def _step(self, a, e):
        self.steps += 1
        if self.steps > self.guard:
            raise ResourceLimit(f"reduction exceeded the iteration guard ({self.guard} steps)")
        rel, step = decompose_relation(self.q, a, e, self.family)
        self.log.setdefault(a, step.describe())
        summed = rel.summed()
        c = summed.get(a)
        if not c:
            raise TheoremViolation(f"decomposition of {a} lost its leading term")
        rest = summed - FormalSum.single(self.F, a, c)
        return rest.scale(-c.inverse())

    def _reduce(self, a, stack):
        if a in self.memo:
            return self.memo[a]
        if active_position(a, self.q) is None:
            return FormalSum.single(self.F, a)
        if a in stack:
            raise TheoremViolation(f"reduction cycle through {a}")
        rhs = self._step(a, 0)
        out = FormalSum(self.F)
        for u, c in rhs.items():
            out = out + self._reduce(u, stack + (a,)).scale(c)
        self.memo[a] = out
        return out


_REDUCERS = {}


def reducer(q, family="Si") -> Reducer:
    key = (q, family_name(family))
    if key not in _REDUCERS:
        _REDUCERS[key] = Reducer(q, key[1])
    return _REDUCERS[key]


def reduce_to_AT(q, a: Array, family="Si") -> DecompCertificate:
    r = reducer(q, family)
    terms = r.reduce(a)
    return DecompCertificate(q, r.family, "AT", a, terms, [r.log[a]] if a in r.log else [])


# -- AT -> AS transition

def schedule_for(b: Array, q):
    """Type-1 character schedule reproducing b from its collapsed AS array."""
    return {i + 1: e for i, (x, e) in enumerate(zip(b.s, b.e)) if x == q}


@dataclass
class Transition:
    q: int
    w: int
    rows: list          # AT elements b (row i reduces collapse(b) with b's schedule)
    sources: list       # collapse(b) for each row
    matrix: dict        # (i, j) -> RatFunc, column j indexes rows[j] as an AT element
    index: dict         # AT element -> column

    def mod_D1_signs(self):
        """Diagonal residues mod D_1 (as F_q elements) and whether the rest vanish."""
        q = self.q
        d1 = D1(q)
        diag, clean = [], True
        for (i, j), c in self.matrix.items():
            if not c.den.is_one() and poly_mod(c.den, d1).deg() < 0:
                clean = False
                continue
            r = _residue_mod(c, d1)
            if i == j:
                diag.append(r)
            elif r:
                clean = False
        return diag, clean

    def is_signed_permutation_mod_D1(self):
        diag, clean = self.mod_D1_signs()
        F = field(self.q)
        minus_one = F.NEG[1]
        return clean and len(diag) == len(self.rows) and all(
            r.deg() == 0 and r.c[0] in (1, minus_one) for r in diag)


def poly_mod(a: Poly, m: Poly) -> Poly:
    return divmod(a, m)[1]


def _residue_mod(c: RatFunc, m: Poly) -> Poly:
    """c mod m for c with denominator prime to m."""
    num = poly_mod(c.num, m)
    if c.den.is_one():
        return num
    den = poly_mod(c.den, m)
    # invert den modulo m by extended Euclid
    inv = _inverse_mod(den, m)
    return poly_mod(num * inv, m)


def _inverse_mod(a: Poly, m: Poly) -> Poly:
    F = a.F
    r0, r1 = m, a
    s0, s1 = Poly(F), Poly.const(F, 1)
    while r1:
        qq, rr = divmod(r0, r1)
        r0, r1 = r1, rr
        s0, s1 = s1, s0 - qq * s1
    if r0.deg() != 0:
        raise ZeroDivisionError("not invertible modulo D_1")
    return s0.scale(F.INV[r0.c[0]])


_TRANSITIONS = {}


def transition_AT_to_AS(q, w) -> Transition:
    """Square t(w) x t(w) matrix: row b expresses Li(collapse(b)) over AT_w."""
    key = (q, w)
    if key in _TRANSITIONS:
        return _TRANSITIONS[key]
    r = reducer(q, "Si")
    rows = enum_AT(w, q)
    index = {b: i for i, b in enumerate(rows)}
    sources, matrix = [], {}
    for i, b in enumerate(rows):
        src = collapse(b, q)
        sources.append(src)
        terms = r.reduce(src, schedule_for(b, q))
        for u, c in terms.items():
            if u not in index:
                raise TheoremViolation(f"reduction of {src} left AT_{w}: {u}")
            matrix[(i, index[u])] = c
    tr = Transition(q, w, rows, sources, matrix, index)
    _TRANSITIONS[key] = tr
    return tr


_INVERSES = {}


def _at_over_as(q, w):
    """For each AT element b: Li(b) as a FormalSum over AS_w."""
    key = (q, w)
    if key in _INVERSES:
        return _INVERSES[key]
    tr = transition_AT_to_AS(q, w)
    F = field(q)
    n = len(tr.rows)
    # x_i = Σ_j M[i,j] y_j with x_i = Li(sources[i]), y_j = Li(rows[j]); solve for y
    cols = solve_left_sparse(F, n, tr.matrix)
    out = {}
    for j, b in enumerate(tr.rows):
        fs = FormalSum(F)
        for i, c in cols[j].items():
            fs = fs + FormalSum.single(F, tr.sources[i], c)
        out[b] = fs
    _INVERSES[key] = out
    return out


def reduce_to_AS(q, a: Array, family="Si") -> DecompCertificate:
    """Express value(a) over AS_w (Li values; ζ(AT) = Li(AT) bridges the S family)."""
    family = family_name(family)
    at = reduce_to_AT(q, a, family)
    table = _at_over_as(q, a.weight)
    F = field(q)
    out = FormalSum(F)
    for b, c in at.terms.items():
        out = out + table[b].scale(c)
    return DecompCertificate(q, family, "AS", a, out, at.step_log)
