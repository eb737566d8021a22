import math

import pytest

from chsh_games import witnesses
from chsh_games.app_flask import app

CHSH_VALUE = math.cos(math.pi / 8) ** 2


@pytest.fixture
def client():
    app.config["TESTING"] = True
    with app.test_client() as client:
        yield client


def test_resources(client):
    resp = client.get("/resources")
    assert resp.status_code == 200
    listing = {r["name"]: r["players"] for r in resp.get_json()["resources"]}
    assert listing == {"epr": [2], "ghz": [2, 3, 4], "w": [3], "ghz-j": [3]}


def test_classical(client):
    resp = client.post("/classical", json={"f": "x*y", "g": "a^b"})
    data = resp.get_json()
    assert data["status"] == "success"
    assert data["value"] == 0.75
    assert (data["value_num"], data["value_den"]) == (3, 4)
    assert len(data["strategies"]) == 8


def test_classical_bad_expression(client):
    resp = client.post("/classical", json={"f": "x*q", "g": "a^b"})
    assert resp.status_code == 200
    assert resp.get_json()["status"] == "error"


def test_malformed_requests(client):
    assert client.post("/classical", data="not json").status_code == 400
    assert client.post("/classical", json={"f": "x*y"}).status_code == 400
    assert client.post("/quantum", json={"f": "x*y", "g": "a^b"}).status_code == 400
    assert client.post("/operators", json={"operator": "m4"}).status_code == 400


def test_quantum(client):
    payload = {"f": "x*y", "g": "a^b", "resource": "epr", "angles": witnesses.CHSH_ANGLES}
    data = client.post("/quantum", json=payload).get_json()
    assert data["status"] == "success"
    assert abs(data["value"] - CHSH_VALUE) < 1e-12
    assert len(data["per_question"]) == 4


def test_quantum_wrong_resource(client):
    payload = {"f": "x*y", "g": "a^b", "resource": "w", "angles": witnesses.CHSH_ANGLES}
    assert client.post("/quantum", json=payload).get_json()["status"] == "error"


def test_optimize(client):
    payload = {
        "f": "x*y", "g": "a^b", "resource": "epr",
        "restarts": 2, "max_evals": 300, "screen_samples": 10,
    }  # fmt: skip
    data = client.post("/optimize", json=payload).get_json()
    assert data["status"] == "success"
    assert data["value"] >= CHSH_VALUE - 1e-9
    assert len(data["angles"]) == 12
    assert data["trace"][0]["source"] == "witness"


def test_optimize_invalid_budget(client):
    payload = {"f": "x*y", "g": "a^b", "resource": "epr", "restarts": 0}
    data = client.post("/optimize", json=payload).get_json()
    assert data["status"] == "error"


def test_operators(client):
    data = client.post("/operators", json={"operator": "bell"}).get_json()
    assert abs(data["expectation"] - 2 * math.sqrt(2)) < 1e-10
    assert data["classical_bound"] == pytest.approx(2.0)
    data = client.post("/operators", json={"operator": "t1"}).get_json()
    assert abs(data["expectation"] - 4 * math.sqrt(2)) < 1e-9
    assert data["classical_bound"] == pytest.approx(4.0)


@pytest.mark.parametrize(
    "route, body",
    [
        ("/classical", {"f": 3, "g": "a^b"}),
        ("/classical", {"f": "x*y", "g": ["a", "b"]}),
        ("/classical", {"arity": "three", "f": "x*y", "g": "a^b"}),
        ("/quantum", {"f": "x*y", "g": "a^b", "resource": "epr", "angles": ["x"] * 12}),
        ("/quantum", {"f": "x*y", "g": "a^b", "resource": ["epr"], "angles": [0.0] * 12}),
        ("/optimize", {"f": "x*y", "g": "a^b", "resource": 2}),
        ("/operators", {"operator": "t1", "angles": [None] * 18}),
    ],
)
def test_bad_values_get_400(client, route, body):
    assert client.post(route, json=body).status_code == 400


def test_arity_out_of_range_is_a_user_error(client):
    resp = client.post("/classical", json={"arity": 9, "f": "x*y", "g": "a^b"})
    assert resp.status_code == 200
    assert resp.get_json()["status"] == "error"
