from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from lietype import main
from lietype.datafile import to_file
from lietype.rootdata import parse_label


@pytest.fixture
def client():
    main.report_store.clear()
    return TestClient(main.app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["data"]["status"] == "ok"


def test_degrees(client):
    response = client.post("/degrees", json={"type": "B3"})
    body = response.json()
    assert response.status_code == 200
    assert body["ok"] is True
    assert body["data"]["degrees"] == [2, 4, 6]
    assert body["data"]["reflection_count"] == 9


def test_invalid_type_envelope(client):
    response = client.post("/degrees", json={"type": "Q7"})
    body = response.json()
    assert response.status_code == 400
    assert body["ok"] is False
    assert body["error"]["code"] == "INVALID_TYPE"
    assert body["error"]["correlation_id"]


def test_request_needs_exactly_one_source(client):
    response = client.post("/degrees", json={})
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "INVALID_INPUT"
    datum = to_file(parse_label("A1")).model_dump()
    response = client.post("/degrees", json={"type": "A1", "datum": datum})
    assert response.status_code == 400


def test_error_message_follows_accept_language(client):
    response = client.post("/degrees", json={"type": "Q7"}, headers={"Accept-Language": "pt-BR"})
    assert response.json()["error"]["user_message"].startswith("Tipo de Lie invalido")


def test_untwist_reports_are_cached(client):
    payload = {"type": "A2", "q": "2", "ell": 3, "precision": 6}
    first = client.post("/untwist", json=payload).json()
    second = client.post("/untwist", json=payload).json()
    assert first == second
    assert first["data"]["fingerprint"]["degrees"] == [2]
    assert len(main.report_store._reports) == 1


def test_fixed_datum_and_verdict(client):
    response = client.post("/fixed-datum", json={"type": "D4", "tau": "triality", "ell": 2})
    assert response.json()["data"]["relative_weyl_order"] == 12
    response = client.post("/verdict", json={"type": "B3ad", "ell": 2})
    assert response.json()["data"]["status"] == "GUARANTEED_THM_EXAMPLES2"


def test_tezuka(client):
    response = client.post("/tezuka", json={"type": "GL3", "q": "4", "ell": 3, "truncation": 20})
    data = response.json()["data"]
    assert data["checks_passed"] is True
    assert data["group_order"] == "181440"


def test_subgroup_at_two(client):
    response = client.post("/subgroup", json={"ell": 2, "q": "3", "precision": 8})
    data = response.json()["data"]
    assert data["closure"] == "H'_3 u (3)H'_3"
    assert data["mod4"] == {"q_prime_mod_4": 3, "valuation": 1}


def test_validate_endpoint(client):
    datum = to_file(parse_label("F4")).model_dump()
    response = client.post("/validate", json={"datum": datum})
    assert response.json()["data"] == {"ok": True, "rank": 4, "modulus": None, "violations": []}
