import random

import pytest

from czl.compositions import Array, all_arrays, enum_AS, enum_AT, in_AT
from czl.errors import NotApplicable
from czl.relations import (BinaryRelation, active_position, apply_B_star, apply_BC, apply_C, decompose_step,
                           fundamental_relation, reduce_to_AS, reduce_to_AT, transition_AT_to_AS,
                           verify_binary_relation)
from czl.values import residual_valuation


@pytest.mark.parametrize("q", (2, 3, 4))
def test_fundamental_relation_exact(q):
    for e in range(q - 1):
        rel = fundamental_relation(q, e)
        assert verify_binary_relation(rel, range(4))
        assert not rel.is_fixed()


def test_operators_preserve_validity():
    q = 3
    rel = fundamental_relation(q, 1)
    out = apply_B_star(rel, 0, 2)
    assert out.is_fixed() and verify_binary_relation(out, range(4))
    out = apply_C(rel, Array((1,), (1,)))
    assert verify_binary_relation(out, range(4))
    out = apply_BC(rel, 1)
    assert verify_binary_relation(out, range(3))


def test_broken_relation_is_caught():
    q = 3
    rel = fundamental_relation(q, 0)
    tampered = BinaryRelation(q, rel.family, rel.part_d.scale(2), rel.part_d1)
    assert not verify_binary_relation(tampered, range(3))


@pytest.mark.parametrize("q", (2, 3))
def test_reduction_lands_in_AT(q):
    for w in range(1, 5):
        basis = set(enum_AT(w, q))
        for a in all_arrays(w, q):
            cert = reduce_to_AT(q, a)
            assert set(cert.terms.support()) <= basis
            if in_AT(a.s, q):
                assert active_position(a, q) is None
                assert cert.terms.support() == [a]


def test_decompose_step_refuses_AT_arrays():
    with pytest.raises(NotApplicable):
        decompose_step(3, Array((2, 1), (0, 0)))


@pytest.mark.parametrize("q", (2, 3))
def test_reduction_onto_AS_is_numerically_right(q):
    rng = random.Random(q)
    arrays = [a for w in range(1, 6) for a in all_arrays(w, q)]
    for a in rng.sample(arrays, 12):
        cert = reduce_to_AS(q, a)
        assert set(cert.terms.support()) <= set(enum_AS(a.weight, q))
        assert residual_valuation(q, a, cert.terms, "Si", 60) > 60


def test_reducing_a_basis_element_is_identity():
    q = 3
    for a in enum_AS(4, q):
        terms = reduce_to_AS(q, a).terms
        assert terms.support() == [a]
        assert terms.get(a).is_one()


@pytest.mark.parametrize("q,w", [(2, 5), (3, 4), (4, 3)])
def test_transition_is_signed_permutation_mod_D1(q, w):
    tr = transition_AT_to_AS(q, w)
    assert len(tr.rows) == len(enum_AT(w, q))
    assert tr.is_signed_permutation_mod_D1()


def test_certificate_json_shape():
    cert = reduce_to_AS(3, Array((3, 1), (1, 0)))
    doc = cert.to_json()
    assert doc["schema"] == "czl-1" and doc["kind"] == "decomposition"
    assert doc["input"] == "3,1;1,0" and doc["basis"] == "AS"
