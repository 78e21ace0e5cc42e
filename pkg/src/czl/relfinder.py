"""Bounded-degree A-linear relations among truncated K_∞ values, and dimension certificates.

An A-relation Σ a_i v_i = 0 with deg a_i <= B is an F_q-linear condition on
the (B + 1) n coefficients of the a_i.  Column ``j * n + i`` holds θ^j v_i,
rows are valuations of the combined series starting at its top coefficient.
The system uses (B + 1) n + N rows (N surplus equations); candidates are then
re-checked on N further rows.

Finite precision proves rank lower bounds only for relations whose
coefficients have degree <= B, and never proves that a relation holds; the
certificates say "verified to valuation V".
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .compositions import (all_arrays, count_d, count_s, enum_AJ1, enum_AS, enum_S, format_array,
                           parse_array)
from .errors import MalformedInput, PrecisionInsufficient, ResourceLimit, TheoremViolation
from .field import field
from .laurent import LaurentInf
from .linalg import kernel
from .poly import Poly
from .values import carlitz_pi_power, family_name, linear_combination, nested_sum

DEFAULT_N = 150
DEFAULT_B = 40


# -- the linear system

def _top(values, B):
    """Valuation of the first row: the highest possible θ-power of Σ a_i v_i."""
    vals = [v.valuation() for v in values if len(v.coeffs)]
    return (min(vals) if vals else 0) - B


def precision_needed(n, B, N, top_valuation=0):
    """Smallest known_to for which solving and re-checking both fit."""
    return top_valuation + (B + 1) * n + 2 * N + B


def precision_ladder(q, start, cap):
    """start, q*start, q^2*start, ... up to cap.

    Truncated values are finite sums of 1/ℓ_d-type terms whose valuations grow
    by a factor about q per degree, so spurious relations among the finite sums
    can only break once the precision grows by that factor.
    """
    P = start
    while True:
        yield min(P, cap)
        if P >= cap:
            return
        P *= q


def _system(values, B, lo, hi):
    """Coefficient matrix for valuations lo..hi, columns j*n + i."""
    n = len(values)
    rows = hi - lo + 1
    A = np.zeros((rows, (B + 1) * n), dtype=np.uint8 if values[0].F.q < 256 else np.int64)
    for i, v in enumerate(values):
        w = v.window(lo, hi + B)
        for j in range(B + 1):
            # θ^j v at valuation u is v at u + j
            A[:, j * n + i] = w[j:j + rows]
    return A


def _generators(F, basis, free, n):
    """A-module generators of a bounded-degree kernel.

    Each basis vector leads (highest column) at its free column f; θ times
    the vector leading at f - n leads at f, so only free columns whose
    predecessor f - n is not free need a new generator.
    """
    free_set = set(free)
    out = []
    for vec, f in zip(basis, free):
        if f < n or (f - n) not in free_set:
            out.append(vec)
    return out


def _to_polys(F, vec, n, B):
    """Coefficient polynomials, scaled so the first nonzero one is monic."""
    polys = [Poly(F, [int(vec[j * n + i]) for j in range(B + 1)]) for i in range(n)]
    lead = next(p for p in polys if p)
    inv = F.INV[lead.c[-1]]
    return [p.scale(inv) for p in polys] if inv != 1 else polys


def combine(values, coeffs) -> LaurentInf:
    F = values[0].F
    acc = LaurentInf.zero(F)
    for v, c in zip(values, coeffs):
        if c:
            acc = acc + v * c
    return acc


def find_A_relations(values, B, N=DEFAULT_N):
    """Basis (over A, within degree B) of relations Σ a_i v_i = 0, as lists of Poly.

    Solves on every known row except the last N, which re-check each
    candidate; at least (B + 1) n + N solving rows are required.
    """
    if not values:
        return []
    F = values[0].F
    n = len(values)
    lo = _top(values, B)
    known = min(v.known_to for v in values) - B
    check_hi = int(known)
    solve_hi = check_hi - N
    if solve_hi - lo + 1 < (B + 1) * n + N:
        raise PrecisionInsufficient(
            f"{n} values with B={B}, N={N} need known_to >= {precision_needed(n, B, N, lo + B)}, "
            f"have {known + B}")
    A = _system(values, B, lo, solve_hi)
    basis, free = kernel(F, A)
    gens = _generators(F, basis, free, n)
    out = []
    for vec in gens:
        coeffs = _to_polys(F, vec, n, B)
        residual = combine(values, coeffs).truncate(check_hi)
        if residual.valuation() <= check_hi:
            raise PrecisionInsufficient(
                f"candidate relation fails at valuation {residual.valuation()} <= {check_hi}")
        out.append(coeffs)
    return out


def truncation_rank(values, B=DEFAULT_B):
    """n minus the number of A-independent relations of degree <= B visible at full precision.

    Relations of degree <= B among the true values are always visible, so
    this bounds from below the rank modulo such relations; it can only grow
    with precision.
    """
    if not values:
        return 0
    F = values[0].F
    n = len(values)
    lo = _top(values, B)
    hi = min(v.known_to for v in values) - B
    if hi - lo + 1 < (B + 1) * n:
        raise PrecisionInsufficient(f"{hi - lo + 1} rows for {(B + 1) * n} unknowns")
    A = _system(values, B, lo, int(hi))
    basis, free = kernel(F, A)
    return n - len(_generators(F, basis, free, n))


# -- value identifiers

def value_id(kind, a=None, w=None):
    if kind == "pi":
        return f"pi^{w}"
    return f"{kind}({format_array(a)})"


def evaluate_id(q, vid, N) -> LaurentInf:
    vid = vid.strip()
    if vid.startswith("pi^"):
        return carlitz_pi_power(q, int(vid[3:]), N)
    if vid.endswith(")") and "(" in vid:
        kind, body = vid[:-1].split("(", 1)
        return nested_sum(q, parse_array(body, q), family_name(kind), N)
    raise MalformedInput(f"unknown value id {vid!r}")


@dataclass
class RelationCertificate:
    q: int
    value_ids: list
    coefficients: list          # Poly per value
    degree_bound: int
    verified_valuation: object
    precision: int

    def to_json(self):
        return {"schema": "czl-1", "kind": "relation", "q": self.q,
                "value_ids": list(self.value_ids),
                "coefficients": [c.format() for c in self.coefficients],
                "degree_bound": self.degree_bound,
                "verified_valuation": _jv(self.verified_valuation),
                "precision": self.precision}

    @classmethod
    def from_json(cls, d):
        F = field(d["q"])
        return cls(d["q"], d["value_ids"], [Poly.parse(F, c) for c in d["coefficients"]],
                   d["degree_bound"], d.get("verified_valuation"), d["precision"])


def _jv(v):
    if v is None:
        return None
    return "inf" if v == float("inf") else int(v)


def relation_residual(cert: RelationCertificate, N) -> int:
    """Recompute v_∞(Σ a_i v_i) with every value known to N + B."""
    if not any(cert.coefficients):
        raise MalformedInput("all coefficients are zero")
    values = [evaluate_id(cert.q, vid, N + cert.degree_bound) for vid in cert.value_ids]
    return combine(values, cert.coefficients).truncate(N).valuation()


MAX_PRECISION = 60000


def _evaluate_all(q, ids, P):
    return [evaluate_id(q, vid, P) for vid in ids]


def search_relations(q, ids, B, N=DEFAULT_N, max_precision=MAX_PRECISION):
    """Evaluate the named values and search for relations of degree <= B.

    An empty kernel is final (kernels only shrink with precision).  Candidates
    must survive re-evaluation at q times the precision; otherwise the search
    moves one step up the precision ladder.
    """
    top = 0
    for vid in ids:
        if vid.startswith("pi^"):
            w = int(vid[3:])
            top = min(top, -(w * q) // (q - 1))
    start = precision_needed(len(ids), B, N, top)
    for P in precision_ladder(q, start, max_precision):
        values = _evaluate_all(q, ids, P)
        try:
            rels = find_A_relations(values, B, N)
        except PrecisionInsufficient:
            continue
        if not rels:
            return []
        P2 = q * P
        check = _evaluate_all(q, ids, P2 + B)
        certs = []
        for coeffs in rels:
            v = combine(check, coeffs).truncate(P2).valuation()
            if v <= P2:
                break
            certs.append(RelationCertificate(q, list(ids), coeffs, B, v, P2))
        else:
            return certs
    raise PrecisionInsufficient(f"relations among {len(ids)} values unresolved up to precision {max_precision}")


def search_by_character(q, ids, B, N=DEFAULT_N, max_precision=MAX_PRECISION):
    """search_relations run separately on each character block.

    Values of different characters cannot mix in a relation, so splitting is
    exact and keeps the systems small.  π̃ powers join the trivial block.
    """
    blocks = {}
    for vid in ids:
        chi = 0 if vid.startswith("pi^") else parse_id_array(q, vid).chi(q)
        blocks.setdefault(chi, []).append(vid)
    out = {}
    for chi, block in sorted(blocks.items()):
        out[chi] = search_relations(q, block, B, N, max_precision)
    return out


def parse_id_array(q, vid):
    if not (vid.endswith(")") and "(" in vid):
        raise MalformedInput(f"unknown value id {vid!r}")
    return parse_array(vid[:-1].split("(", 1)[1], q)


# -- dimension certificates

_KINDS = {"mzv": ("S", True), "amzv": ("S", False), "s": ("S", False), "zeta": ("S", False),
          "acmpl": ("Si", False), "si": ("Si", False), "cmpl": ("Si", False), "li": ("Si", False)}


def _kind(family):
    key = family.lower()
    if key not in _KINDS:
        raise MalformedInput(f"unknown family {family!r}")
    return key if key in ("mzv", "amzv", "acmpl") else {"S": "amzv", "Si": "acmpl"}[_KINDS[key][0]]


@dataclass
class DimensionCertificate:
    q: int
    w: int
    family: str
    upper_bound: object
    lower_bound: object
    target: int
    verdict: str
    degree_bound: int = None
    precision: int = None
    blocks: dict = dc_field(default_factory=dict)      # character -> (size, rank)
    diagnostics: list = dc_field(default_factory=list)

    def to_json(self):
        return {"schema": "czl-1", "kind": "dimension", "q": self.q, "weight": self.w,
                "family": self.family, "upper_bound": self.upper_bound,
                "lower_bound": self.lower_bound, "target": self.target,
                "verdict": self.verdict, "degree_bound": self.degree_bound,
                "precision": self.precision,
                "blocks": {str(k): {"size": s, "rank": r} for k, (s, r) in sorted(self.blocks.items())},
                "diagnostics": list(self.diagnostics)}


def basis_arrays(w, q, kind):
    """The claimed basis whose values are ranked: S_w, AT¹_w (zeta values) or AS_w (polylogs)."""
    if kind == "mzv":
        return enum_S(w, q)
    return enum_AJ1(w, q) if kind == "amzv" else enum_AS(w, q)


def _span_arrays(w, q, kind):
    """Polylog arrays the generator sweep must land on."""
    return enum_S(w, q) if kind == "mzv" else enum_AS(w, q)


def generator_sweep(w, q, kind, check_precision=None):
    """Reduce every generator onto the basis; returns (upper bound or None, diagnostics)."""
    from .relations import reduce_to_AS
    fam = _KINDS[kind][0]
    basis = set(_span_arrays(w, q, kind))
    gens = all_arrays(w, q)
    if kind == "mzv":
        gens = [a for a in gens if a.is_trivial()]
    diags = []
    for a in gens:
        try:
            cert = reduce_to_AS(q, a, fam)
        except (TheoremViolation, ResourceLimit) as exc:
            diags.append(f"{format_array(a)}: {exc}")
            continue
        stray = [u for u in cert.terms.support() if u not in basis]
        if stray:
            diags.append(f"{format_array(a)}: reduction leaves the basis at {format_array(stray[0])}")
            continue
        if check_precision:
            lhs = nested_sum(q, a, fam, check_precision)
            rhs = linear_combination(q, cert.terms, "Si", check_precision)
            v = (lhs - rhs).valuation()
            if v <= check_precision:
                diags.append(f"{format_array(a)}: residual valuation {v}")
    return (None if diags else len(basis)), diags


def block_rank(q, arrays, family, B, N=DEFAULT_N, max_precision=MAX_PRECISION):
    """Truncation rank of one block, climbing the precision ladder until full or capped."""
    r, P = 0, 0
    for P in precision_ladder(q, precision_needed(len(arrays), B, N), max_precision):
        values = [nested_sum(q, a, family, P) for a in arrays]
        r = truncation_rank(values, B)
        if r == len(arrays):
            break
    return r, P


def dimension_certificate(w, q, family="amzv", N=DEFAULT_N, B=DEFAULT_B, check_precision=60,
                          max_precision=MAX_PRECISION):
    """Upper bound from the generator sweep, lower bound from per-character truncation ranks."""
    kind = _kind(family)
    target = count_d(w, q) if kind == "mzv" else count_s(w, q)
    upper, diags = generator_sweep(w, q, kind, check_precision)
    fam = _KINDS[kind][0]
    blocks = {}
    by_char = {}
    for a in basis_arrays(w, q, kind):
        by_char.setdefault(a.chi(q), []).append(a)
    lower, top = 0, 0
    for chi, arrays in sorted(by_char.items()):
        r, P = block_rank(q, arrays, fam, B, N, max_precision)
        blocks[chi] = (len(arrays), r)
        lower += r
        top = max(top, P)
    if upper is not None and lower > upper:
        verdict = "inconsistent"
        diags.append(f"lower bound {lower} exceeds upper bound {upper}")
    elif upper == lower == target:
        verdict = "confirmed"
    else:
        verdict = "inconclusive"
    return DimensionCertificate(q, w, kind, upper, lower, target, verdict, B, top, blocks, diags)


# -- certificate verification

@dataclass
class Verification:
    ok: bool
    kind: str
    residual_valuation: object = None
    precision: int = None
    detail: str = ""

    def to_json(self):
        return {"schema": "czl-1", "kind": "verification", "certificate": self.kind,
                "ok": self.ok, "residual_valuation": _jv(self.residual_valuation),
                "precision": self.precision, "detail": self.detail}


def _verify_decomposition(doc, N):
    from .stuffle import FormalSum
    from .values import residual_valuation
    q = doc["q"]
    a = parse_array(doc["input"], q)
    family = family_name(doc["family"])
    terms = FormalSum.from_json(field(q), doc["terms"])
    basis_family = "Si" if doc["basis"] == "AS" else family
    v = residual_valuation(q, a, terms, family, N, basis_family)
    return Verification(v > N, "decomposition", v, N)


def _verify_relation(doc, N):
    cert = RelationCertificate.from_json(doc)
    v = relation_residual(cert, N)
    return Verification(v > N, "relation", v, N)


def _verify_unique_relation(doc, N):
    from .compositions import parse_tuple
    from .poly import RatFunc
    from .sigma import relation_residual as sigma_residual
    q, w = doc["q"], doc["w"]
    F = field(q)
    pi_coeff = RatFunc.parse(F, doc.get("pi_coefficient") or "1")
    if not pi_coeff:
        return Verification(False, "unique-relation", None, N, "zero coefficient on the π̃ power")
    scale = pi_coeff.inverse()
    terms = {}
    for row in doc["terms"]:
        tup = parse_tuple(row["tuple"])
        if sum(tup) != w:
            return Verification(False, "unique-relation", None, N, f"term {row['tuple']} has the wrong weight")
        terms[tup] = RatFunc.parse(F, row["coeff"]) * scale
    v = sigma_residual(q, w, terms, N).valuation()
    return Verification(v > N, "unique-relation", v, N)


def _verify_no_relation(doc, N):
    from .sigma import solve_sigma_system
    out = solve_sigma_system(doc["w"], doc["q"], doc.get("character", 0))
    ok = not out.is_unique
    return Verification(ok, "no-relation", None, N, out.reason if ok else "a unique relation exists")


def _verify_dimension(doc, N):
    B = doc.get("degree_bound") or DEFAULT_B
    fresh = dimension_certificate(doc["weight"], doc["q"], doc["family"], N=N, B=B)
    claimed = (doc.get("upper_bound"), doc.get("lower_bound"), doc.get("target"), doc.get("verdict"))
    got = (fresh.upper_bound, fresh.lower_bound, fresh.target, fresh.verdict)
    ok = claimed == got and fresh.verdict == "confirmed"
    detail = "" if ok else f"claimed (upper, lower, target, verdict) = {claimed}, recomputed {got}"
    return Verification(ok, "dimension", None, N, detail)


_VERIFIERS = {"decomposition": _verify_decomposition, "relation": _verify_relation,
              "unique-relation": _verify_unique_relation, "no-relation": _verify_no_relation,
              "dimension": _verify_dimension}


def verify_certificate(doc, N) -> Verification:
    """Recompute a certificate's claim at precision N."""
    if not isinstance(doc, dict) or doc.get("schema") != "czl-1":
        raise MalformedInput("not a czl-1 certificate")
    kind = doc.get("kind")
    if kind not in _VERIFIERS:
        raise MalformedInput(f"unknown certificate kind {kind!r}")
    try:
        return _VERIFIERS[kind](doc, N)
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"{kind} certificate is missing or mangles {exc}") from exc
