import pytest
from fastapi.testclient import TestClient

from flatkern.diagram import diagram_to_json
from flatkern.presets import load_preset
from flatkern.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_presets_endpoint(client):
    r = client.get("/presets")
    assert r.status_code == 200
    body = r.json()
    assert body["schema"] == "flatkern/1"
    ids = [p["id"] for p in body["payload"]["presets"]]
    assert "prym1111-base" in ids


def test_check_with_preset(client):
    r = client.post("/check", json={"preset": "prym1111-s1"})
    assert r.status_code == 200
    assert r.json()["payload"]["genus"] == 3


def test_check_with_inline_diagram(client):
    obj = diagram_to_json(load_preset("genus2").diagram("unit-rational"))
    r = client.post("/check", json={"diagram": obj})
    assert r.status_code == 200
    assert r.json()["payload"]["valid"] is True


def test_check_requires_exactly_one_source(client):
    r = client.post("/check", json={})
    assert r.status_code == 422
    r = client.post("/check", json={"preset": "genus2", "diagram": {}})
    assert r.status_code == 422


def test_unknown_preset_is_422(client):
    r = client.post("/check", json={"preset": "nope"})
    assert r.status_code == 422


def test_enumerate_endpoint(client):
    r = client.post("/enumerate", json={"base": "prym1111-base", "fixed_cylinders": 2})
    assert r.status_code == 200
    got = [s["matching"] for s in r.json()["payload"]["survivors"]]
    assert got == ["cafbed", "cdefab", "cefbda", "fabced", "faecdb"]


def test_property_p_endpoint(client):
    r = client.post(
        "/property-p",
        json={"preset": "prym22odd", "metric": "golden-irrational", "locus": "prym"},
    )
    assert r.status_code == 200
    payload = r.json()["payload"]
    assert payload["property_p"]["holds"] is True
    assert payload["dimension_certificate"]["kernel_dim"] == 1


def test_prym_scan_endpoint(client):
    r = client.post("/prym-scan", json={"preset": "prym211", "metric": "golden-irrational"})
    assert r.status_code == 200
    assert r.json()["payload"]["count"] == 1


def test_homology_endpoint(client):
    r = client.post("/homology", json={"preset": "genus2"})
    assert r.status_code == 200
    assert r.json()["payload"]["betti1"] == 4


def test_service_and_cli_reports_agree(client):
    import json as _json

    from click.testing import CliRunner

    from flatkern.cli import main

    cli_out = CliRunner().invoke(
        main, ["enumerate", "--base", "prym1111-base"], catch_exceptions=False
    ).output
    cli_obj = _json.loads(cli_out)
    cli_obj.pop("schema")
    srv = client.post("/enumerate", json={"base": "prym1111-base"}).json()["payload"]
    assert srv == cli_obj
