from __future__ import annotations

import json

import pytest

from lietype.cli import main
from lietype.datafile import write_datum
from lietype.rootdata import default_twist, parse_label


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out.strip().splitlines()[-1])


def test_degrees_json_is_deterministic(capsys):
    first = main(["degrees", "--type", "A2", "--json"])
    out_first = capsys.readouterr().out
    second = main(["degrees", "--type", "A2", "--json"])
    out_second = capsys.readouterr().out
    assert first == second == 0
    assert out_first == out_second
    data = json.loads(out_first)["data"]
    assert data["degrees"] == [2, 3]
    assert data["weyl_order"] == 6
    assert data["pi1"] == []


def test_degrees_with_twist_lists_eigenvalues(capsys):
    code, body = run_json(capsys, "degrees", "--type", "D4", "--tau", "triality")
    assert code == 0
    assert body["data"]["eigenvalues"] == [[2, "0"], [4, "1/3"], [4, "2/3"], [6, "0"]]


def test_text_output(capsys):
    assert main(["degrees", "--type", "G2"]) == 0
    out = capsys.readouterr().out
    assert "degrees: [2, 6]" in out


def test_invalid_type_exits_with_input_error(capsys):
    code, body = run_json(capsys, "degrees", "--type", "Z9")
    assert code == 2
    assert body["error"]["code"] == "INVALID_TYPE"
    assert body["ok"] is False
    assert body["error"]["correlation_id"] is None
    assert body["error"]["details"] == {"label": "Z9"}


def test_missing_required_option_is_an_argparse_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["untwist", "--type", "A2", "--q", "2"])
    assert excinfo.value.code == 2


def test_fixed_datum_with_all_lifts(capsys):
    code, body = run_json(capsys, "fixed-datum", "--type", "D4", "--tau", "triality", "--ell", "2", "--all-lifts")
    assert code == 0
    assert body["data"]["fingerprint"] == {"degrees": [2, 6], "weyl_order": 12, "pi1": []}
    assert body["data"]["lift_diagnostics"]["agree"]


def test_untwist_and_tezuka(capsys):
    code, body = run_json(capsys, "untwist", "--type", "A2", "--q", "2", "--ell", "3", "--precision", "6")
    assert code == 0
    assert body["data"]["e"] == 2
    assert body["data"]["classification_key"]["valuation"] == 1

    code, body = run_json(capsys, "tezuka", "--type", "A1", "--q", "3", "--ell", "2", "--trunc", "12")
    assert code == 0
    assert body["data"]["checks_passed"]


def test_verdict(capsys):
    code, body = run_json(capsys, "verdict", "--type", "E8", "--ell", "3")
    assert code == 0
    assert body["data"]["status"] == "UNKNOWN"


def test_subgroup(capsys):
    code, body = run_json(capsys, "subgroup", "--ell", "3", "--q", "2", "--other", "1/2", "--descriptor", "mu:2:1")
    assert code == 0
    assert body["data"]["closed_subgroup_equal"] is True
    assert body["data"]["member_of"]["member"] is True


def test_validate_exit_codes(tmp_path, capsys):
    good = tmp_path / "b2.json"
    write_datum(good, parse_label("B2"))
    assert main(["validate", "--file", str(good)]) == 0

    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"rank": 1, "weyl_generators": [[[1]]], "coroot_basis": [[1]]}))
    code, body = run_json(capsys, "validate", "--file", str(broken))
    assert code == 1
    assert body["data"]["ok"] is False

    garbage = tmp_path / "garbage.json"
    garbage.write_text("{")
    code, body = run_json(capsys, "validate", "--file", str(garbage))
    assert code == 2
    assert body["error"]["code"] == "INVALID_DATUM_FILE"


def test_file_automorphisms_are_usable_by_name(tmp_path, capsys):
    a2 = parse_label("A2")
    path = tmp_path / "a2.json"
    write_datum(path, a2, {"flip": default_twist(a2, "diagram")})
    code, body = run_json(capsys, "verdict", "--file", str(path), "--tau", "flip", "--ell", "3")
    assert code == 0
    assert body["data"]["status"] == "GUARANTEED_THM_EXAMPLES"
