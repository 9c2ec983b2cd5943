import json

import pytest
from click.testing import CliRunner

from flatkern.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


class TestCheck:
    def test_preset_report(self, runner):
        r = invoke(runner, "check", "prym1111-s1")
        assert r.exit_code == 0
        obj = json.loads(r.output)
        assert obj["schema"] == "flatkern/1"
        assert obj["valid"] is True
        assert obj["genus"] == 3
        assert obj["kappa"] == [1, 1, 1, 1]

    def test_unknown_preset_is_usage_error(self, runner):
        r = invoke(runner, "check", "nope")
        assert r.exit_code == 2

    def test_invalid_diagram_file_exit_one(self, runner, tmp_path):
        from flatkern.presets import load_preset
        from flatkern.diagram import diagram_to_json

        obj = diagram_to_json(load_preset("genus2").diagram("unit-rational"))
        obj["positive"] = obj["positive"][:-1] + [obj["positive"][0]]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(obj))
        r = invoke(runner, "check", str(path))
        assert r.exit_code == 1
        assert json.loads(r.output)["valid"] is False

    def test_malformed_json_exit_two(self, runner, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{not json")
        r = invoke(runner, "check", str(path))
        assert r.exit_code == 2

    def test_summary_mode(self, runner):
        r = invoke(runner, "check", "genus2", "--summary")
        assert r.exit_code == 0
        assert "ok" in r.output


class TestEnumerate:
    def test_golden_survivors(self, runner):
        r = invoke(runner, "enumerate", "--base", "prym1111-base", "--fixed-cylinders", "2")
        assert r.exit_code == 0
        obj = json.loads(r.output)
        got = [s["matching"] for s in obj["survivors"]]
        assert got == ["cafbed", "cdefab", "cefbda", "fabced", "faecdb"]

    def test_byte_identical_output(self, runner):
        a = invoke(runner, "enumerate", "--base", "prym1111-base")
        b = invoke(runner, "enumerate", "--base", "prym1111-base")
        assert a.output == b.output


class TestPropertyP:
    def test_genus2_golden(self, runner):
        r = invoke(runner, "property-p", "genus2", "--metric", "golden-irrational",
                   "--locus", "full")
        assert r.exit_code == 0
        obj = json.loads(r.output)
        assert obj["property_p"]["holds"] is True
        assert obj["property_p"]["witness"]["degree"] >= 1

    def test_genus2_rational_fails(self, runner):
        r = invoke(runner, "property-p", "genus2", "--metric", "unit-rational",
                   "--locus", "full")
        obj = json.loads(r.output)
        assert obj["property_p"]["holds"] is False

    def test_explicit_locus_from_file(self, runner, tmp_path):
        basis = {
            "basis": [[
                {"a": "1", "b": "0", "d": 2},
                {"a": "0", "b": "0", "d": 2},
                {"a": "0", "b": "0", "d": 2},
            ]]
        }
        path = tmp_path / "basis.json"
        path.write_text(json.dumps(basis))
        r = invoke(runner, "property-p", "genus2", "--metric", "golden-irrational",
                   "--locus", f"explicit:{path}")
        assert r.exit_code == 0
        obj = json.loads(r.output)
        assert obj["property_p"]["holds"] is False
        assert obj["property_p"]["reason"] == "absolute locus slice"


class TestOtherVerbs:
    def test_prym_scan(self, runner):
        r = invoke(runner, "prym-scan", "prym211", "--metric", "golden-irrational")
        assert r.exit_code == 0
        obj = json.loads(r.output)
        assert obj["count"] == 1
        assert obj["involutions"][0]["fixed_counts"] == [1, 1, 1]

    def test_homology(self, runner):
        r = invoke(runner, "homology", "prym22odd")
        assert r.exit_code == 0
        obj = json.loads(r.output)
        assert obj["betti1"] == 6

    def test_presets_listing(self, runner):
        r = invoke(runner, "presets")
        assert r.exit_code == 0
        obj = json.loads(r.output)
        ids = [p["id"] for p in obj["presets"]]
        assert "prym1111-base" in ids and "genus2" in ids


def test_metric_from_file(runner, tmp_path):
    import json as _json

    metric = {
        "d": 0,
        "lengths": {f"S{2*i}": {"a": str(i + 1), "b": "0", "d": 0} for i in range(4)},
    }
    # genus2 equalities force l(S0)=l(S6) and l(S2)=l(S4); build a valid file
    metric["lengths"]["S6"] = metric["lengths"]["S0"]
    metric["lengths"]["S4"] = metric["lengths"]["S2"]
    path = tmp_path / "metric.json"
    path.write_text(_json.dumps(metric))
    r = runner.invoke(main, ["check", "genus2", "--metric", str(path)], catch_exceptions=False)
    assert r.exit_code == 0
    assert _json.loads(r.output)["valid"] is True


def test_check_bare_prediagram_file(runner, tmp_path):
    import json as _json

    from flatkern.diagram import prediagram_to_json
    from flatkern.presets import load_preset

    obj = prediagram_to_json(load_preset("prym1111-base").prediagram)
    path = tmp_path / "base.json"
    path.write_text(_json.dumps(obj))
    r = runner.invoke(main, ["check", str(path)], catch_exceptions=False)
    assert r.exit_code == 0
    rep = _json.loads(r.output)
    assert rep["valid"] is True and rep["kappa"] == [1, 1, 1, 1]


def test_enumerate_from_base_file(runner, tmp_path):
    import json as _json

    from flatkern.presets import load_preset

    raw = load_preset("prym1111-base").raw
    path = tmp_path / "base.json"
    path.write_text(_json.dumps(raw))
    r = runner.invoke(main, ["enumerate", "--base", str(path)], catch_exceptions=False)
    assert r.exit_code == 0
    got = [s["matching"] for s in _json.loads(r.output)["survivors"]]
    assert got == ["cafbed", "cdefab", "cefbda", "fabced", "faecdb"]


def test_json_flag_explicit(runner):
    import json as _json

    a = runner.invoke(main, ["check", "genus2", "--json"], catch_exceptions=False)
    b = runner.invoke(main, ["check", "genus2"], catch_exceptions=False)
    assert a.output == b.output
    assert _json.loads(a.output)["valid"] is True
