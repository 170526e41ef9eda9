#!/usr/bin/env python3

import os
import sys

import pytest
from fastapi.testclient import TestClient

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from geometry.automorphism import cayley_matrix
from server import app
from verification.catalog import CHECKS, SUITES


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    response = client.get("/api/v1/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_root(client):
    assert client.get("/").json()["status"] == "running"


def test_suites_lists_every_check(client):
    data = client.get("/api/v1/suites").json()
    assert data["suites"] == list(SUITES)
    assert len(data["checks"]) == len(CHECKS)


def test_run_small_config(client):
    response = client.post("/api/v1/run", json={"n_list": [2], "samples": 3, "suites": ["grading"]})
    assert response.status_code == 200
    data = response.json()
    assert data["kind"] == "run"
    assert data["summary"]["failed"] == 0
    assert data["config"]["suites"] == ["grading"]


def test_run_rejects_bad_config(client):
    response = client.post("/api/v1/run", json={"n_list": [12]})
    assert response.status_code == 400
    assert "n_list" in response.json()["detail"]


def test_classify_psi0(client):
    response = client.post("/api/v1/classify", json={"n": 2})
    assert response.status_code == 200
    assert response.json()["verdict"]["kind"] == "Canonical"


def test_classify_bad_input(client):
    response = client.post("/api/v1/classify", json={"n": 2, "generators": [{"type": "T2k", "k": 4, "s": 0.1}]})
    assert response.status_code == 400
    assert response.json()["detail"].startswith("generators[0].k")
    response = client.post("/api/v1/classify", json={"n": 2, "kappa": 3.0})
    assert response.status_code == 400


def test_mobius_on_cayley_matrix(client):
    entries = [[v.real, v.imag] for v in cayley_matrix(3).reshape(-1)]
    response = client.post("/api/v1/mobius", json={"entries": entries})
    assert response.status_code == 200
    data = response.json()
    assert data["verdict"] == "CayleyUpToRotation"
    assert all(check["passed"] for check in data["checks"])


def test_mobius_rejects_non_square(client):
    response = client.post("/api/v1/mobius", json={"entries": [1, 0, 0]})
    assert response.status_code == 400


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
