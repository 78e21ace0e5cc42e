import pytest
from hypothesis import given, settings, strategies as st

from czl.compositions import Array
from czl.field import field
from czl.stuffle import FormalSum, diag_product, mixed_product, strict_product, value_product
from czl.values import linear_combination, nested_sum, power_sum

Q = 3


def small_arrays(q=Q, max_entry=4):
    def build(parts):
        return Array(tuple(s for s, _ in parts), tuple(e for _, e in parts))
    return st.lists(st.tuples(st.integers(1, max_entry), st.integers(0, q - 2)),
                    min_size=1, max_size=2).map(build)


def _exact(q, fs: FormalSum, d, strict, family):
    from czl.poly import RatFunc
    acc = RatFunc.const(field(q), 0)
    for u, c in fs.items():
        acc = acc + c * power_sum(q, d, u, strict, family)
    return acc


@pytest.mark.parametrize("family", ("S", "Si"))
@settings(max_examples=25, deadline=None)
@given(a=small_arrays(), b=small_arrays())
def test_degree_level_products_are_exact(family, a, b):
    for d in range(4):
        if d >= a.depth - 1 and d >= b.depth - 1:
            lhs = power_sum(Q, d, a, False, family) * power_sum(Q, d, b, False, family)
            assert lhs == _exact(Q, diag_product(Q, a, b, family), d, False, family)
            lhs = power_sum(Q, d, a, False, family) * power_sum(Q, d, b, True, family)
            assert lhs == _exact(Q, mixed_product(Q, a, b, family), d, False, family)
        lhs = power_sum(Q, d, a, True, family) * power_sum(Q, d, b, True, family)
        assert lhs == _exact(Q, strict_product(Q, a, b, family), d, True, family)


@pytest.mark.parametrize("family", ("S", "Si"))
@settings(max_examples=15, deadline=None)
@given(a=small_arrays(), b=small_arrays())
def test_value_product_is_commutative_and_weight_graded(family, a, b):
    ab = value_product(Q, a, b, family)
    assert ab == value_product(Q, b, a, family)
    assert ab.weights() <= {a.weight + b.weight}


@pytest.mark.parametrize("family", ("S", "Si"))
def test_value_product_numerics(family):
    a, b = Array((2,), (1,)), Array((1, 1), (0, 1))
    N = 80
    terms = value_product(Q, a, b, family)
    lhs = nested_sum(Q, a, family, N) * nested_sum(Q, b, family, N)
    assert (lhs - linear_combination(Q, terms, family, N)).valuation() > N


def test_formal_sum_json_roundtrip():
    F = field(Q)
    fs = value_product(Q, Array((2,), (0,)), Array((2,), (0,)), "S")
    assert FormalSum.from_json(F, fs.to_json()) == fs
    assert not (fs - fs)
