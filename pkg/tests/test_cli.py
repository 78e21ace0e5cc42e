import json

import pytest

from czl.cli import main
from czl.compositions import count_d, count_s, count_t


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dims_matches_recurrences(capsys):
    code, out, _ = run(capsys, "dims", "--q", "3", "--max-weight", "6", "--check")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [(r["d"], r["s"], r["t"]) for r in rows] == [
        (count_d(w, 3), count_s(w, 3), count_t(w, 3)) for w in range(1, 7)]


def test_unique_relation_weight_two(capsys):
    code, out, _ = run(capsys, "unique-relation", "--q", "3", "--weight", "2", "--precision", "100")
    doc = json.loads(out)
    assert code == 0
    assert doc["terms"] == [{"tuple": "(2)", "coeff": "1*θ^3 + 2*θ^1"}]
    assert doc["residual_valuation"] >= 100


def test_no_relation_exit_zero(capsys):
    code, out, _ = run(capsys, "unique-relation", "--weight", "3")
    assert code == 0 and json.loads(out)["kind"] == "no-relation"


def test_output_is_deterministic(capsys):
    args = ("reduce", "2,2;1,1", "--precision", "60")
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first


def test_reduce_verify_roundtrip_and_tamper(capsys, tmp_path):
    code, out, _ = run(capsys, "reduce", "3,1;1,0", "--precision", "100")
    assert code == 0
    cert = tmp_path / "cert.json"
    cert.write_text(out)
    code, out, _ = run(capsys, "verify", str(cert), "--precision", "200")
    assert code == 0 and json.loads(out)["ok"]

    doc = json.loads(cert.read_text())
    doc["terms"][0]["coeff"] = "1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(bad), "--precision", "300")
    assert code == 1 and not json.loads(out)["ok"]


def test_weight_sweep_with_workers(capsys):
    code, out, _ = run(capsys, "reduce", "--weight", "3", "--threads", "2", "--precision", "40")
    certs = json.loads(out)
    assert code == 0 and len(certs) == 18
    serial = json.loads(run(capsys, "reduce", "--weight", "3", "--precision", "40")[1])
    assert certs == serial


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "eval", "2,x")[0] == 2
    assert run(capsys, "enum", "--basis", "AS")[0] == 2          # missing --weight
    assert run(capsys, "eval", "2", "--q", "6")[0] == 2
    assert run(capsys, "eval", "2;1", "--family", "mzv")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_unreadable_certificate(capsys, tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(capsys, "verify", str(junk))[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2


def test_resource_limit_exit_three(capsys):
    code, _, err = run(capsys, "find-relations", "pi^2", "S(2;0)", "-B", "4", "-N", "60",
                       "--max-precision", "50")
    assert code == 3 and "PrecisionInsufficient" in err


def test_find_relations_and_text_format(capsys):
    code, out, _ = run(capsys, "find-relations", "pi^2", "S(2;0)", "-B", "4", "-N", "60", "--format", "text")
    assert code == 0 and "1 relation(s)" in out


def test_enum_eval_product_at_check(capsys):
    code, out, _ = run(capsys, "enum", "--weight", "3", "--basis", "AT")
    assert code == 0 and json.loads(out)["count"] == count_t(3, 3)
    code, out, _ = run(capsys, "eval", "2;1", "--precision", "10")
    assert json.loads(out)["values"][0]["valuation"] == 0
    code, out, _ = run(capsys, "product", "1;1", "2;0", "--precision", "80")
    assert code == 0 and json.loads(out)["residual_valuation"] > 80
    code, out, _ = run(capsys, "product", "--random", "3", "--seed", "5", "--precision", "60")
    assert len(json.loads(out)["products"]) == 3
    code, out, _ = run(capsys, "at-check", "4;0", "--precision", "80")
    assert code == 0


def test_dimension_command(capsys):
    code, out, _ = run(capsys, "dimension", "--weight", "2", "--family", "amzv", "-N", "60", "-B", "10")
    assert code == 0 and json.loads(out)["verdict"] == "confirmed"
