"""Spec-file parsing, report generation, portraits, the claims battery."""

import json
import os

import pytest

from isochrone import claims
from isochrone.cli import analyze, load_spec, main, parse_spec_data
from isochrone.errors import SpecParseError
from isochrone.system import build_eq2, counterexample_system

SYS9_TOML = """\
Q = [["2", 2, 1], ["-3", 1, 2], ["1", 0, 3]]
a = ["1", "1"]

[settings]
boundary_grid = 96
"""

SYS9_JSON = json.dumps(
    {"Q": "2*x^2*y - 3*x*y^2 + y^3", "a": ["1", "1"], "settings": {"boundary_grid": 96}}
)


@pytest.fixture
def sys9_path(tmp_path):
    path = tmp_path / "sys9.toml"
    path.write_text(SYS9_TOML)
    return str(path)


class TestSpecParsing:
    def test_toml_and_json_agree(self, tmp_path):
        t = tmp_path / "s.toml"
        t.write_text(SYS9_TOML)
        j = tmp_path / "s.json"
        j.write_text(SYS9_JSON)
        st = load_spec(str(t))
        sj = load_spec(str(j))
        assert st.factored.H == sj.factored.H
        assert st.settings.boundary_grid == 96

    def test_exactly_one_form(self):
        with pytest.raises(SpecParseError):
            parse_spec_data({"Q": "y", "H": "y", "a": ["1"]})
        with pytest.raises(SpecParseError):
            parse_spec_data({})

    def test_missing_radial(self):
        with pytest.raises(SpecParseError):
            parse_spec_data({"Q": "y"})

    def test_unknown_setting(self):
        with pytest.raises(SpecParseError):
            parse_spec_data({"H": "y", "settings": {"nope": 1}})

    def test_bad_toml_exit_code(self, tmp_path, capsys):
        p = tmp_path / "bad.toml"
        p.write_text('Q = [["2", 2')
        assert main(["analyze", str(p)]) == 1
        assert "parse error" in capsys.readouterr().err.lower()

    def test_thm2_form(self):
        spec = parse_spec_data({"thm2": {"p": "x*y", "c": "1", "h": [["1", 0, 1]]}})
        assert spec.kind == "thm2"
        assert spec.H.degree() == 4

    def test_usage_error_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["not-a-command"])
        assert exc.value.code == 1
        assert "error" in capsys.readouterr().err


class TestAnalyze:
    def test_counterexample_report(self, sys9_path, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["analyze", sys9_path, "--out", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["report_version"] == 1
        assert rep["is_center"] is True
        assert rep["center"]["nu"] == 1
        assert rep["center"]["type_label"] == "B^1"
        assert rep["reversibility"] == {"axes": [], "reversible": False}
        assert rep["commutant"]["dimension"] == 1
        assert rep["commutant"]["contains_self"] is True
        assert rep["commutant"]["admissible_top_degrees"] == [1, 6]
        assert rep["form7"]["matches"] is False
        assert rep["form8"]["matches"] is False
        assert rep["counterexample"] is True
        assert rep["darboux"]["identity_holds"] is True
        assert rep["isochronous_deviation"]["value"] <= 1e-9
        assert rep["conserved_drift"]["value"] <= 1e-7

    def test_byte_stable_reports(self, sys9_path, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        main(["analyze", sys9_path, "--out", str(a)])
        main(["analyze", sys9_path, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_non_center_exits_2(self, tmp_path, capsys):
        p = tmp_path / "nc.json"
        p.write_text(json.dumps({"Q": [["1", 2, 0]], "a": ["1"]}))
        code = main(["analyze", str(p)])
        assert code == 2
        rep = json.loads(capsys.readouterr().out)
        assert rep["is_center"] is False
        assert rep["center"] is None
        # Darboux data exists regardless of the center condition
        assert rep["darboux"]["identity_holds"] is True

    def test_raw_h_subset(self, tmp_path, capsys):
        p = tmp_path / "h.toml"
        p.write_text('H = "-y - x*y"\n')
        assert main(["analyze", str(p)]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["is_center"] is None
        assert rep["center"] is None and rep["darboux"] is None
        assert rep["form8"]["matches"] is True
        assert rep["counterexample"] is False

    def test_degenerate_rotation(self, tmp_path, capsys):
        p = tmp_path / "rot.json"
        p.write_text(json.dumps({"Q": [["1", 1, 0]], "a": ["0"]}))
        assert main(["analyze", str(p)]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["center"]["degenerate"] is True
        assert rep["center"]["nu"] == 0
        assert rep["commutant"] is None


class TestPortrait:
    def test_svg_content(self, sys9_path, tmp_path):
        out = tmp_path / "p.svg"
        assert main(["portrait", sys9_path, "--out", str(out), "--trajectories", "6"]) == 0
        svg = out.read_text()
        assert svg.startswith("<svg")
        assert 'stroke="#1f77b4"' in svg  # trajectories
        assert 'stroke-dasharray="6,4"' in svg  # boundary
        assert 'stroke="#9467bd"' in svg  # asymptote ray

    def test_svg_deterministic(self, sys9_path, tmp_path):
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        main(["portrait", sys9_path, "--out", str(a), "--seed", "3", "--trajectories", "5"])
        main(["portrait", sys9_path, "--out", str(b), "--seed", "3", "--trajectories", "5"])
        assert a.read_bytes() == b.read_bytes()

    def test_env_seed_overrides(self, sys9_path, tmp_path):
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        main(["portrait", sys9_path, "--out", str(a), "--seed", "3", "--trajectories", "5"])
        os.environ["ISOCHRONE_SEED"] = "99"
        try:
            main(["portrait", sys9_path, "--out", str(b), "--seed", "3", "--trajectories", "5"])
        finally:
            del os.environ["ISOCHRONE_SEED"]
        assert a.read_bytes() != b.read_bytes()

    def test_csv_format(self, sys9_path, tmp_path):
        out = tmp_path / "p.csv"
        assert main(
            ["portrait", sys9_path, "--format", "csv", "--out", str(out),
             "--trajectories", "3"]
        ) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "trajectory,theta,rho"
        ids = {row.split(",")[0] for row in lines[1:]}
        assert ids == {"0", "1", "2"}
        # rows carry parsable floats
        _, th, r = lines[1].split(",")
        float(th), float(r)

    def test_pure_rotation_circles(self, tmp_path):
        p = tmp_path / "rot.json"
        p.write_text(json.dumps({"Q": [["1", 1, 0]], "a": ["0"]}))
        out = tmp_path / "rot.svg"
        assert main(["portrait", str(p), "--out", str(out), "--trajectories", "4"]) == 0
        svg = out.read_text()
        # closed circular trajectories, no boundary, no rays
        assert 'stroke="#1f77b4"' in svg
        assert 'stroke-dasharray="6,4"' not in svg
        assert 'stroke="#9467bd"' not in svg


class TestPaperVerify:
    def test_battery_passes(self, capsys):
        assert main(["paper-verify", "--json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["all_passed"] is True
        assert len(out["claims"]) == 8
        names = [c["name"] for c in out["claims"]]
        assert "commutant-proportionality" in names
        assert all(c["passed"] for c in out["claims"])

    def test_table_output(self, capsys):
        assert main(["paper-verify"]) == 0
        text = capsys.readouterr().out
        assert text.count("PASS") == 8
        assert "all claims verified" in text

    def test_mutation_control(self):
        # flipping the sign of Q breaks the Fourier equality, the asymptote
        # direction and the closed-form first integral; the battery must
        # notice (this guards against a vacuously green battery)
        s9 = counterexample_system()
        mutated = build_eq2(-s9.Q, (1, 1))
        results = claims.run_claims(mutated)
        by_name = {r.name: r.passed for r in results}
        assert not by_name["fourier-restriction"]
        assert not by_name["first-integral"]
        assert not by_name["type-classification"]
        # structurally unchanged claims still hold for the mutant
        assert by_name["center-condition"]
        assert by_name["return-map-periodicity"]
