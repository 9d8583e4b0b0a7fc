from __future__ import annotations

import json

import pytest

from lietype.datafile import FORMAT, dumps, from_file, loads, read_datum, to_file, write_datum
from lietype.errors import AppError
from lietype.rootdata import default_twist, parse_label, validate


def test_written_file_reads_back_as_the_labeled_datum(tmp_path):
    d4 = parse_label("D4")
    path = tmp_path / "d4.json"
    write_datum(path, d4, {"triality": default_twist(d4, "triality")})
    datum, automorphisms = read_datum(path)
    assert datum.label.text == "D4sc"
    assert automorphisms["triality"].order == 3
    assert json.loads(path.read_text())["format"] == FORMAT


def test_dumps_is_canonical():
    doc = to_file(parse_label("B2"))
    text = dumps(doc)
    assert text == dumps(loads(text))
    assert " " not in text


def test_unlabeled_file_is_accepted_and_validated():
    doc = to_file(parse_label("G2"))
    doc.label = None
    datum, _ = from_file(doc)
    assert datum.label is None
    assert validate(datum) == []


def test_label_must_match_matrices():
    doc = to_file(parse_label("B2"))
    doc.label = "C2"
    with pytest.raises(AppError) as excinfo:
        from_file(doc)
    assert excinfo.value.code == "INVALID_DATUM_FILE"


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        json.dumps({"rank": 2, "weyl_generators": [[[1, 0]]], "coroot_basis": [[1], [0]]}),
        json.dumps({"format": "other/9", "rank": 1, "weyl_generators": [], "coroot_basis": [[1]]}),
        json.dumps({"rank": 1, "weyl_generators": [], "coroot_basis": [[1]], "modulus": 1}),
    ],
)
def test_malformed_documents(text):
    with pytest.raises(AppError) as excinfo:
        loads(text)
    assert excinfo.value.code == "INVALID_DATUM_FILE"


def test_missing_file(tmp_path):
    with pytest.raises(AppError) as excinfo:
        read_datum(tmp_path / "missing.json")
    assert excinfo.value.code == "INVALID_DATUM_FILE"
