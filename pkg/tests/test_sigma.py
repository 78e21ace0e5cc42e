import pytest

from czl.carlitz import D1
from czl.compositions import compositions
from czl.errors import DomainError
from czl.poly import RatFunc
from czl.sigma import (_leaf_paths, children, outcome_to_json, relation_coefficients,
                       solve_node, solve_sigma_system, verify_unique_relation)


@pytest.mark.parametrize("q", (2, 3))
@pytest.mark.parametrize("m", range(1, 9))
def test_node_system_determinant_is_a_unit_at_zero(q, m):
    node = solve_node(m, q)
    assert node.det_order == 0
    # every child coefficient vanishes at y = 0
    for k, mult in node.edge_P.items():
        if mult:
            assert mult.order_at_zero() >= 1


def test_children_rule():
    assert children(5, 3) == [k for k in range(5) if (5 - k) % 3]
    with pytest.raises(DomainError):
        children(0, 3)


@pytest.mark.parametrize("q", (2, 3, 4))
@pytest.mark.parametrize("m", range(1, 7))
def test_tree_support_is_compositions_prime_to_q(q, m):
    paths = {tup for tup, _ in _leaf_paths(q, m)}
    expected = {tuple((q - 1) * x for x in c) for c in compositions(m) if all(x % q for x in c)}
    assert paths == expected


@pytest.mark.parametrize("q,w", [(3, 1), (3, 3), (3, 5), (4, 4), (5, 6)])
def test_no_relation_when_q_minus_1_does_not_divide_w(q, w):
    assert not solve_sigma_system(w, q).is_unique


@pytest.mark.parametrize("q,w", [(3, 2), (3, 4), (4, 3)])
def test_nontrivial_character_has_no_relation(q, w):
    for eps in range(1, q - 1):
        assert not solve_sigma_system(w, q, eps).is_unique


def test_weight_q_minus_1_is_the_carlitz_relation():
    for q in (2, 3, 4, 5):
        out = relation_coefficients(q - 1, q)
        assert out.terms == {(q - 1,): RatFunc(D1(q))}


@pytest.mark.parametrize("q,w", [(2, 1), (2, 2), (2, 3), (3, 4), (3, 6), (5, 8)])
def test_unique_relations_verify(q, w):
    assert verify_unique_relation(w, q, 80) > 80


def test_outcome_json():
    doc = outcome_to_json(relation_coefficients(2, 3), 101, 100)
    assert doc["kind"] == "unique-relation"
    assert doc["terms"] == [{"tuple": "(2)", "coeff": "1*θ^3 + 2*θ^1"}]
    assert outcome_to_json(solve_sigma_system(3, 3))["kind"] == "no-relation"
