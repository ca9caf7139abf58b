"""CLI surface: schemas, determinism, round-trip, exit codes."""

import json

from padicgeo.cli import ExperimentConfig, emit_report, main, parse_report


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


class TestRoots:
    def test_plus_minus_one(self, capsys):
        code, out = run_cli(
            ["roots", "--coeffs", "1,0,-1", "--prime", "5", "--no-files"], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["count"] == 2
        assert payload["config"]["params"]["prime"] == 5

    def test_annulus_chart(self, capsys):
        code, out = run_cli(
            ["roots", "--coeffs=-1,0,9", "--prime", "3", "--chart", "annulus:1", "--no-files"],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["results"]["count"] == 2

    def test_p1_chart(self, capsys):
        code, out = run_cli(
            ["roots", "--coeffs", "0,1,0", "--prime", "7", "--chart", "p1", "--no-files"],
            capsys,
        )
        assert json.loads(out)["results"]["count"] == 2


class TestCountAndVolume:
    def test_conic_level_three(self, capsys, tmp_path):
        code, out = run_cli(
            [
                "count",
                "--outdir",
                str(tmp_path),
                "--gens",
                "x0*x2-x1^2",
                "--prime",
                "3",
                "--level",
                "3",
                "--dim",
                "1",
                "--degree",
                "2",
                "--csv",
                "seq.csv",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["count"]["n_lo"] == 36
        assert payload["results"]["volume"]["value"] == {"num": 4, "den": 3}
        seq = (tmp_path / "seq.csv").read_text().splitlines()
        assert seq[0] == "m,n_lo,n_hi"
        assert seq[1:] == ["1,4,4", "2,12,12", "3,36,36"]
        assert (tmp_path / "report-count.json").exists()

    def test_volume_degree_bound(self, capsys):
        code, out = run_cli(
            [
                "volume",
                "--gens",
                "x2",
                "--prime",
                "3",
                "--max-level",
                "2",
                "--dim",
                "1",
                "--degree",
                "1",
                "--no-files",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        db = payload["results"]["degree_bound"]
        assert db["normalized_ok"] is True and db["raw_ok"] is False

    def test_not_stabilized_exit_code(self, capsys):
        code, out = run_cli(
            [
                "volume",
                "--gens",
                "x0*x1",
                "--prime",
                "3",
                "--max-level",
                "2",
                "--dim",
                "1",
                "--no-files",
            ],
            capsys,
        )
        assert code == 1
        assert json.loads(out)["results"]["stabilized"] is False


class TestVeronese:
    def test_isometry_check(self, capsys):
        code, out = run_cli(
            [
                "veronese",
                "--kind",
                "standard",
                "--n",
                "1",
                "--d",
                "2",
                "--prime",
                "3",
                "--check",
                "isometry",
                "--pairs",
                "50",
                "--no-files",
            ],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["results"]["failures"] == 0

    def test_arclength_values(self, capsys):
        code, out = run_cli(
            [
                "veronese",
                "--kind",
                "mahler",
                "--d",
                "3",
                "--prime",
                "3",
                "--check",
                "arclength",
                "--no-files",
            ],
            capsys,
        )
        res = json.loads(out)["results"]
        assert res["affine_image_volume"] == {"num": 3, "den": 1}
        assert res["annulus_volumes"]["m=1"] == {"num": 2, "den": 27}


class TestIgf:
    def test_expected_zeros_json(self, capsys):
        code, out = run_cli(
            [
                "igf",
                "--experiment",
                "expected-zeros",
                "--model",
                "mahler",
                "--prime",
                "3",
                "--degree",
                "3",
                "--region",
                "zp",
                "--samples",
                "600",
                "--seed",
                "4",
                "--no-files",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["target_num"] == 9
        assert payload["results"]["target_den"] == 4
        assert payload["results"]["pass"] is True
        assert payload["config"]["params"]["seed"] == 4

    def test_csv_output(self, capsys, tmp_path):
        code, out = run_cli(
            [
                "igf",
                "--outdir",
                str(tmp_path),
                "--experiment",
                "curve",
                "--curve",
                "line",
                "--prime",
                "3",
                "--degree",
                "1",
                "--samples",
                "200",
                "--output",
                "csv",
            ],
            capsys,
        )
        assert code == 0
        lines = (tmp_path / "report-igf.csv").read_text().splitlines()
        assert lines[0].split(",")[0] == "excluded"


class TestDeterminism:
    def test_identical_config_identical_bytes(self, capsys):
        args = [
            "igf",
            "--experiment",
            "expected-zeros",
            "--model",
            "monomial",
            "--prime",
            "3",
            "--degree",
            "2",
            "--samples",
            "400",
            "--seed",
            "11",
            "--no-files",
        ]
        _, out1 = run_cli(args, capsys)
        _, out2 = run_cli(args, capsys)
        assert out1 == out2

    def test_seed_echoed(self, capsys):
        _, out = run_cli(
            [
                "igf",
                "--experiment",
                "expected-zeros",
                "--prime",
                "3",
                "--samples",
                "200",
                "--seed",
                "123",
                "--no-files",
            ],
            capsys,
        )
        assert json.loads(out)["config"]["params"]["seed"] == 123


class TestReportRoundTrip:
    def test_config_and_results_round_trip(self):
        config = ExperimentConfig("roots", {"prime": 5, "coeffs": [1, 0, -1]})
        results = {"count": 2, "status": "exact"}
        text = emit_report(config, results, None)
        config2, results2 = parse_report(text)
        assert config2 == config
        assert results2 == results

    def test_rational_encoding(self):
        from fractions import Fraction

        text = emit_report(ExperimentConfig("volume", {}), {"v": Fraction(4, 3)}, None)
        assert json.loads(text)["results"]["v"] == {"num": 4, "den": 3}

    def test_float_rendering(self):
        text = emit_report(ExperimentConfig("igf", {}), {"mean": 0.1234567890123456}, None)
        assert json.loads(text)["results"]["mean"] == "0.123456789012"

    def test_outdir_env(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("PADICGEO_OUTDIR", str(tmp_path))
        code, _ = run_cli(
            ["roots", "--coeffs", "1,1", "--prime", "3"], capsys
        )
        assert code == 0
        assert (tmp_path / "report-roots.json").exists()


class TestReproduceSubset:
    def test_fast_criteria_table(self, capsys, tmp_path):
        code, out = run_cli(
            [
                "reproduce-paper",
                "--outdir",
                str(tmp_path),
                "--seed",
                "42",
                "--only",
                "1",
                "2",
            ],
            capsys,
        )
        assert code == 0
        assert "criterion  1  pass" in out
        assert "all criteria passed" in out
        payload = json.loads((tmp_path / "report-reproduce-paper.json").read_text())
        assert payload["results"]["all_pass"] is True
        assert len(payload["results"]["criteria"]) == 2


class TestUsageErrors:
    def test_unknown_chart(self, capsys):
        code = main(["roots", "--coeffs", "1,1", "--prime", "3", "--chart", "weird", "--no-files"])
        assert code == 2
        assert "usage error" in capsys.readouterr().err
