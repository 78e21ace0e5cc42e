"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py`` to print them directly.
"""

import itertools
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import pytest  # noqa: E402

from acceptance_log import record  # noqa: E402
from czl.carlitz import D1, PolyT  # noqa: E402
from czl.compositions import (Array, all_arrays, count_d, count_s, count_t, enum_AS,  # noqa: E402
                              enum_AT, enum_S)
from czl.field import field  # noqa: E402
from czl.poly import RatFunc  # noqa: E402
from czl.relations import (apply_B_star, apply_BC, apply_C, fundamental_relation,  # noqa: E402
                           reduce_to_AS, reduce_to_AT, transition_AT_to_AS,
                           verify_binary_relation)
from czl.relfinder import dimension_certificate, search_by_character, value_id  # noqa: E402
from czl.sigma import relation_coefficients, solve_sigma_system, verify_unique_relation  # noqa: E402
from czl.stuffle import value_product  # noqa: E402
from czl.values import (anderson_thakur_H, at_zeta_check, linear_combination,  # noqa: E402
                        nested_sum, power_sum, residual_valuation)

# pinned tolerances
N_RESIDUAL = 100          # precision for residual checks
MIN_RESIDUAL = 100        # required residual valuation at N_RESIDUAL
STUFFLE_MIN = 95          # stuffle criterion: residual >= 95 at N = 100
RELFIND_B, RELFIND_N = 20, 120
DIM_N = 150


def _compositions_bitmask(w):
    """Every composition of w, from the 2^(w-1) cut patterns."""
    for mask in range(1 << (w - 1)):
        parts, run = [], 1
        for i in range(w - 1):
            if mask >> i & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def test_1_counting():
    t0 = time.time()
    bad = []
    for q in (2, 3, 4, 5):
        for w in range(1, 11):
            at = as_ = s = 0
            for c in _compositions_bitmask(w):
                chars = sum(1 for _ in itertools.product(range(q - 1), repeat=len(c)))
                if all(x <= q for x in c) and c[-1] < q:
                    at += chars
                if all(x % q for x in c):
                    as_ += chars
                    s += 1
            if (at, as_, s) != (count_t(w, q), count_s(w, q), count_d(w, q)):
                bad.append((q, w, at, as_, s))
            if q <= 3 and (len(enum_AT(w, q)), len(enum_AS(w, q)), len(enum_S(w, q))) != (at, as_, s):
                bad.append(("enum", q, w))
    ok = not bad and time.time() - t0 < 60
    record("1 counting |AT_w|=t(w), |AS_w|=s(w), |S_w|=d(w), q in 2..5, w <= 10", ok,
           f"{time.time() - t0:.1f}s" + (f", mismatches {bad[:3]}" if bad else ""))
    assert ok


def test_2_lemma_agree():
    t0 = time.time()
    bad = []
    for q in (2, 3):
        for w in range(1, q + 4):
            for a in all_arrays(w, q, max_entry=q):
                for d in range(5):
                    for strict in (False, True):
                        if not strict and d < a.depth - 1:
                            continue
                        if power_sum(q, d, a, strict, "S") != power_sum(q, d, a, strict, "Si"):
                            bad.append((q, a, d, strict))
    ok = not bad
    record("2 S_d = Si_d and S_<d = Si_<d, entries <= q, weight <= q+3, d <= 4", ok,
           f"{time.time() - t0:.1f}s" + (f", first mismatch {bad[0]}" if bad else ""))
    assert ok


def _random_operator_chain(q, rng):
    rel = fundamental_relation(q, rng.randrange(q - 1), "Si")
    for _ in range(rng.randint(1, 3)):
        op = rng.choice("BCX")
        e = rng.randrange(q - 1)
        if op == "B":
            rel = apply_B_star(rel, e, rng.randint(1, q))
        elif op == "C":
            depth = rng.randint(1, 2)
            W = Array(tuple(rng.randint(1, q) for _ in range(depth)),
                      tuple(rng.randrange(q - 1) for _ in range(depth)))
            rel = apply_C(rel, W)
        else:
            rel = apply_BC(rel, e)
    return rel


def test_3_fundamental_relation_and_operators():
    t0 = time.time()
    bad = []
    for q in (2, 3, 4):
        for e in range(q - 1):
            for fam in ("Si", "S"):
                if not verify_binary_relation(fundamental_relation(q, e, fam), range(5)):
                    bad.append(("R", q, e, fam))
    rng = random.Random(20240)
    chains = 0
    for q in (2, 3, 4):
        for _ in range(8 if q < 4 else 4):
            rel = _random_operator_chain(q, rng)
            chains += 1
            if not verify_binary_relation(rel, range(4)):
                bad.append(("op", q, rel))
    ok = not bad and time.time() - t0 < 300
    record("3 R_eps exact for d <= 4, q in 2..4; random B*/C/BC chains exact for d <= 3", ok,
           f"{chains} chains, {time.time() - t0:.1f}s" + (f", failures {bad[:2]}" if bad else ""))
    assert ok


def test_4_stuffle_soundness():
    t0 = time.time()
    q, N = 3, 100
    rng = random.Random(7)
    worst = {}
    for fam in ("S", "Si"):
        pool = [a for w in range(1, 6) for a in all_arrays(w, q)]
        done = 0
        worst[fam] = N + 1
        while done < 50:
            a, b = rng.choice(pool), rng.choice(pool)
            if a.weight + b.weight > 6:
                continue
            terms = value_product(q, a, b, fam)
            lhs = nested_sum(q, a, fam, N) * nested_sum(q, b, fam, N)
            v = (lhs - linear_combination(q, terms, fam, N)).truncate(N).valuation()
            worst[fam] = min(worst[fam], v)
            done += 1
    ok = all(v >= STUFFLE_MIN for v in worst.values()) and time.time() - t0 < 300
    record("4 stuffle: 50 random pairs per family, residual >= 95 at N=100", ok,
           f"worst {worst}, {time.time() - t0:.1f}s")
    assert ok


def test_5_decomposition():
    t0 = time.time()
    q = 3
    worst, count, perm = N_RESIDUAL + 1, 0, True
    for w in range(1, 6):
        for a in all_arrays(w, q, max_entry=w, max_depth=w):
            at = reduce_to_AT(q, a, "Si")
            as_ = reduce_to_AS(q, a, "Si")
            worst = min(worst, residual_valuation(q, a, at.terms, "Si", N_RESIDUAL),
                        residual_valuation(q, a, as_.terms, "Si", N_RESIDUAL))
            count += 1
        perm = perm and transition_AT_to_AS(q, w).is_signed_permutation_mod_D1()
    ok = worst >= MIN_RESIDUAL and perm and time.time() - t0 < 900
    record("5 q=3, w <= 5: every array reduces onto AT_w and AS_w; transition = signed permutation mod D_1",
           ok, f"{count} arrays, worst residual {worst}, {time.time() - t0:.1f}s")
    assert ok


def _oracle_weight4_q3():
    """π̃^4 = D_1^2 ζ(2)^2 with ζ(2)^2 expanded by the stuffle and reduced onto AS_4."""
    q = 3
    F = field(q)
    z2 = Array((2,), (0,))
    sq = value_product(q, z2, z2, "S")
    out = {}
    for u, c in sq.items():
        for v, cv in reduce_to_AS(q, u, "S").terms.items():
            out[v] = out.get(v, RatFunc.const(F, 0)) + c * cv
    d1sq = RatFunc(D1(q) * D1(q))
    # the relation reads π̃^4 - D_1^2 Σ c_v Li(v) = 0
    return {v.s: -(c * d1sq) for v, c in out.items() if c}


def test_6_unique_relation():
    t0 = time.time()
    notes = []
    q = 3
    w2 = relation_coefficients(2, q)
    ok2 = w2.is_unique and w2.terms == {(2,): RatFunc(D1(q))} and verify_unique_relation(2, q, N_RESIDUAL) > N_RESIDUAL
    notes.append(f"w=2 {'exact' if ok2 else 'wrong'}")

    w4 = relation_coefficients(4, q)
    sigma_terms = {t: c for t, c in w4.terms.items() if c}
    oracle = _oracle_weight4_q3()
    v4 = verify_unique_relation(4, q, N_RESIDUAL)
    ok4 = w4.is_unique and sigma_terms == oracle and set(sigma_terms) == {(4,), (2, 2)} and v4 >= MIN_RESIDUAL
    notes.append(f"w=4 residual {v4}, oracle {'matches' if sigma_terms == oracle else 'differs'}")

    ok_none = True
    for w in (3, 5):
        out = solve_sigma_system(w, q, 0)
        ids = [value_id("Si", a) for a in enum_AS(w, q)]
        blocks = search_by_character(q, ids, RELFIND_B, RELFIND_N)
        empty = all(not rels for rels in blocks.values())
        ok_none = ok_none and not out.is_unique and empty
        notes.append(f"w={w} {out.kind}, kernel {'empty' if empty else 'nonempty'}")

    ok_q2 = True
    for w in range(1, 5):
        v = verify_unique_relation(w, 2, N_RESIDUAL)
        ok_q2 = ok_q2 and v >= MIN_RESIDUAL
    notes.append(f"q=2 w<=4 {'verified' if ok_q2 else 'failed'}")
    ok = ok2 and ok4 and ok_none and ok_q2 and time.time() - t0 < 600
    record("6 unique relation (q=3 w=2,4; NoRelation w=3,5; q=2 w<=4)", ok,
           "; ".join(notes) + f"; {time.time() - t0:.1f}s")
    assert ok


def test_7_dimension_certificates():
    t0 = time.time()
    cases = [(w, 3, fam) for w in range(1, 5) for fam in ("amzv", "mzv")] + \
            [(w, 2, fam) for w in range(1, 7) for fam in ("amzv", "mzv")]
    failed = []
    for w, q, fam in cases:
        cert = dimension_certificate(w, q, fam, N=DIM_N)
        expected = count_d(w, q) if fam == "mzv" else count_s(w, q)
        if cert.verdict != "confirmed" or cert.lower_bound != expected or cert.upper_bound != expected:
            failed.append((w, q, fam, cert.upper_bound, cert.lower_bound, expected))
    ok = not failed and time.time() - t0 < 1800
    record("7 dimension certificates q=3 w<=4, q=2 w<=6 (AMZV s(w), MZV d(w))", ok,
           f"{len(cases)} certificates, {time.time() - t0:.1f}s" + (f", failed {failed}" if failed else ""))
    assert ok


def test_8_anderson_thakur():
    t0 = time.time()
    bad = []
    for q in (2, 3, 4, 5):
        F = field(q)
        for n in range(1, q + 1):
            if anderson_thakur_H(q, n) != PolyT.const(F, 1):
                bad.append(("H=1", q, n))
        for n in range(1, 21):
            # deg_θ H_n <= (n-1) q / (q-1)
            if anderson_thakur_H(q, n).deg_theta() * (q - 1) > (n - 1) * q:
                bad.append(("deg", q, n))
    worst = N_RESIDUAL + 1
    for q in (2, 3):
        arrays = [a for w in range(1, q + 3) for a in all_arrays(w, q)]
        arrays.append(Array((q + 1,), (0,)))
        for a in arrays:
            worst = min(worst, at_zeta_check(q, a, N_RESIDUAL))
    ok = not bad and worst >= MIN_RESIDUAL and time.time() - t0 < 300
    record("8 Anderson-Thakur: H_n=1 for n<=q, degree bound n<=20, at_zeta_check", ok,
           f"worst residual {worst}, {time.time() - t0:.1f}s" + (f", {bad[:3]}" if bad else ""))
    assert ok


def test_9_bridge():
    t0 = time.time()
    q = 3
    worst, count = N_RESIDUAL + 1, 0
    basis = {w: set(enum_AS(w, q)) for w in range(1, 5)}
    stray = []
    for w in range(1, 5):
        for a in all_arrays(w, q):
            cert = reduce_to_AS(q, a, "S")
            if not set(cert.terms.support()) <= basis[w]:
                stray.append(a)
            worst = min(worst, residual_valuation(q, a, cert.terms, "S", N_RESIDUAL, "Si"))
            count += 1
    ok = not stray and worst >= MIN_RESIDUAL and time.time() - t0 < 600
    record("9 bridge: every AMZV of weight <= 4 (q=3) over ACMPL AS_w", ok,
           f"{count} arrays, worst residual {worst}, {time.time() - t0:.1f}s")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
