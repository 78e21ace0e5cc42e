import pytest

from czl.carlitz import D1, ell
from czl.compositions import Array, all_arrays
from czl.errors import DomainError
from czl.field import field
from czl.laurent import LaurentInf
from czl.poly import Poly, RatFunc
from czl.values import (acmpl, amzv, anderson_thakur_H, at_zeta_check, carlitz_pi_power,
                        family_name, nested_sum, power_sum)


def _monics(F, d):
    import itertools
    for tail in itertools.product(range(F.q), repeat=d):
        yield Poly(F, list(reversed(tail)) + [1]) if d else Poly.const(F, 1)


@pytest.mark.parametrize("q", (2, 3))
@pytest.mark.parametrize("s", (1, 2, 3))
def test_depth1_power_sum_against_monic_enumeration(q, s):
    F = field(q)
    for d in range(4):
        for e in range(q - 1):
            direct = RatFunc.const(F, 0)
            for a in _monics(F, d):
                direct = direct + RatFunc(Poly.const(F, 1), a ** s)
            direct = direct.scale(F.char(e * d))
            assert power_sum(q, d, Array((s,), (e,)), False, "S") == direct


@pytest.mark.parametrize("q", (2, 3))
def test_polylog_power_sum_is_inverse_ell(q):
    F = field(q)
    for d in range(4):
        got = power_sum(q, d, Array((2,), (0,)), False, "Si")
        assert got == RatFunc(Poly.const(F, 1), ell(q, d) ** 2)


def test_strict_sum_of_empty_array_is_one():
    F = field(3)
    assert power_sum(3, 2, Array((), ()), True, "S") == RatFunc.const(F, 1)
    with pytest.raises(DomainError):
        power_sum(3, 2, Array((), ()), False, "S")


@pytest.mark.parametrize("q", (2, 3))
def test_series_agree_with_exact_partial_sums(q):
    # once ℓ_d outgrows the precision, the tail cannot reach valuation N
    a = Array((2, 1), (0, 0))
    N = 40
    series = nested_sum(q, a, "Si", N)
    exact = RatFunc.const(field(q), 0)
    for d in range(6):
        exact = exact + power_sum(q, d, a, False, "Si")
    assert (series - LaurentInf.from_ratfunc(exact, N)).valuation() > N


@pytest.mark.parametrize("q", (2, 3, 4, 5))
def test_pi_power_relation_at_q_minus_1(q):
    # π̃^{q-1} = -D_1 ζ(q-1)
    N = 80
    z = amzv(q, Array((q - 1,), (0,)), N)
    pi = carlitz_pi_power(q, q - 1, N)
    r = pi + z * D1(q)
    assert r.known_to >= N - q
    assert r.valuation() > r.known_to


def test_amzv_and_acmpl_agree_in_depth_one_below_q():
    q, N = 3, 60
    for s in (1, 2):
        assert (amzv(q, Array((s,), (1,)), N) - acmpl(q, Array((s,), (1,)), N)).valuation() > N


def test_family_aliases():
    assert family_name("mzv") == family_name("AMZV") == "S"
    assert family_name("cmpl") == family_name("li") == "Si"


@pytest.mark.parametrize("q", (2, 3))
def test_anderson_thakur_small_cases(q):
    F = field(q)
    from czl.carlitz import PolyT
    for n in range(1, q + 1):
        assert anderson_thakur_H(q, n) == PolyT.const(F, 1)
    for a in all_arrays(3, q):
        assert at_zeta_check(q, a, 60) > 60
