import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from webapp.app import app


@pytest.fixture
def client():
    app.config["TESTING"] = True
    with app.test_client() as c:
        yield c


def test_index_page(client):
    res = client.get("/")
    assert res.status_code == 200
    assert b"prescheck" in res.data


def test_run_usage_on_get(client):
    data = client.get("/run").get_json()
    assert data["ok"] and data["example"]["argv"][0] == "ring"


def test_run_h1(client):
    res = client.post("/run", json={"argv": ["ring", "h1", "--ring", "Z/6", "--cover", "3,4"]})
    assert res.status_code == 200
    data = res.get_json()
    assert data["ok"] and data["exit_code"] == 0
    assert data["report"]["summary"]["failed"] == 0
    assert "<h2>Check Report</h2>" in data["report_html"]


def test_run_reports_failed_verdict(client):
    res = client.post("/run", json={"argv": ["site", "presentation", "--presentation", "at-most:2", "--bound", "3"]})
    data = res.get_json()
    assert res.status_code == 200
    assert data["exit_code"] == 1


def test_run_diagnostic(client):
    res = client.post("/run", json={"argv": ["ring", "h1", "--ring", "Z/6", "--cover", "2,4"]})
    assert res.status_code == 400
    data = res.get_json()
    assert data["exit_code"] == 2
    assert data["error"]["error"] == "NotUnimodular"


def test_run_bad_argv(client):
    assert client.post("/run", json={"argv": "ring h1"}).status_code == 400
    res = client.post("/run", json={"argv": ["ring", "nope"]})
    assert res.status_code == 400
    assert res.get_json()["exit_code"] == 2


def test_listings(client):
    data = client.get("/lattices?q=chain").get_json()
    assert data["ok"] and all("chain" in r["name"] for r in data["lattices"])
    data = client.get("/rings").get_json()
    assert any(r["name"] == "z6" for r in data["rings"])


def test_method_not_allowed(client):
    res = client.post("/rings")
    assert res.status_code == 405
    assert res.get_json()["ok"] is False
    assert client.post("/").status_code == 303
