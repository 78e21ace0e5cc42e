import pytest

from czl.compositions import Array, enum_AS
from czl.errors import MalformedInput, PrecisionInsufficient
from czl.field import field
from czl.poly import Poly
from czl.relations import reduce_to_AS
from czl.relfinder import (RelationCertificate, dimension_certificate, evaluate_id, find_A_relations,
                           precision_ladder, relation_residual, search_by_character, search_relations,
                           truncation_rank, verify_certificate)
from czl.sigma import outcome_to_json, relation_coefficients
from czl.values import nested_sum

Q = 3


def test_finds_the_weight_two_relation():
    certs = search_relations(Q, ["pi^2", "S(2;0)"], 4, 60)
    assert len(certs) == 1
    F = field(Q)
    theta = Poly.var(F)
    assert certs[0].coefficients == [Poly.const(F, 1), theta ** 3 - theta]


def test_relations_respect_characters():
    # Li(2; ε) carries a nontrivial character and cannot join the relation
    blocks = search_by_character(Q, ["pi^2", "Si(2;0)", "Si(2;1)"], 4, 60)
    assert set(blocks) == {0, 1}
    assert len(blocks[0]) == 1 and blocks[1] == []
    mixed = search_relations(Q, ["pi^2", "Si(2;0)", "Si(2;1)"], 4, 60)
    assert len(mixed) == 1 and not mixed[0].coefficients[2]


def test_independent_values_have_empty_kernel():
    assert search_relations(Q, ["S(2;0)", "S(1,1;0,0)"], 6, 40) == []


def test_insufficient_precision_is_reported():
    values = [nested_sum(Q, Array((2,), (0,)), "Si", 20), nested_sum(Q, Array((1, 1), (0, 0)), "Si", 20)]
    with pytest.raises(PrecisionInsufficient):
        find_A_relations(values, 10, 30)


def test_truncation_rank_grows_with_precision():
    arrays = enum_AS(3, Q)[:8]
    ranks = []
    for P in (500, 1500, 4500):
        ranks.append(truncation_rank([nested_sum(Q, a, "Si", P) for a in arrays], 8))
    assert ranks == sorted(ranks)
    assert ranks[-1] <= len(arrays)


def test_precision_ladder():
    assert list(precision_ladder(3, 100, 1000)) == [100, 300, 900, 1000]


def test_relation_certificate_roundtrip_and_tamper():
    cert = search_relations(Q, ["pi^2", "S(2;0)"], 4, 60)[0]
    doc = cert.to_json()
    again = RelationCertificate.from_json(doc)
    assert relation_residual(again, 200) > 200
    doc["coefficients"][0] = "2"
    assert not verify_certificate(doc, 200).ok
    with pytest.raises(MalformedInput):
        relation_residual(RelationCertificate(Q, ["pi^2"], [Poly(field(Q))], 0, None, 10), 10)


def test_evaluate_id_rejects_junk():
    with pytest.raises(MalformedInput):
        evaluate_id(Q, "zeta2", 10)


def test_verify_decomposition_and_unique_relation():
    cert = reduce_to_AS(Q, Array((3, 1), (1, 0)))
    cert.precision = 50
    assert verify_certificate(cert.to_json(), 120).ok
    doc = outcome_to_json(relation_coefficients(4, Q))
    assert verify_certificate(doc, 120).ok
    doc["terms"][0]["coeff"] = "1"
    assert not verify_certificate(doc, 120).ok


def test_verify_rejects_unknown_documents():
    with pytest.raises(MalformedInput):
        verify_certificate({"schema": "other"}, 10)
    with pytest.raises(MalformedInput):
        verify_certificate({"schema": "czl-1", "kind": "decomposition"}, 10)


@pytest.mark.parametrize("family", ("amzv", "acmpl", "mzv"))
def test_small_dimension_certificates(family):
    cert = dimension_certificate(3, Q, family, N=60, B=10)
    assert cert.verdict == "confirmed"
    assert cert.upper_bound == cert.lower_bound == cert.target
    assert verify_certificate(cert.to_json(), 60).ok
