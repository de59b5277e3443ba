import json

import pytest

from cuspzeros.cli import EXIT_OK, EXIT_USAGE, main, parse_complex
from cuspzeros.errors import UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParseComplex:
    def test_forms(self):
        assert parse_complex("2+0i") == 2.0
        assert parse_complex("0.5+9.2224i") == complex(0.5, 9.2224)
        assert parse_complex("1-2j") == complex(1, -2)

    def test_malformed(self):
        with pytest.raises(UsageError):
            parse_complex("half+i")


class TestCoeffs:
    def test_csv_rows(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--weight", "12", "--n", "100")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert len(lines) == 101
        assert lines[2].split(",")[1] == "-24"

    def test_unsupported_weight(self, capsys):
        code, _, err = run(capsys, "coeffs", "--weight", "14", "--n", "5")
        assert code == EXIT_USAGE
        assert "one-dimensional" in err

    def test_zero_rows(self, capsys):
        code, _, _ = run(capsys, "coeffs", "--weight", "12", "--n", "0")
        assert code == EXIT_USAGE

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--weight", "16", "--n", "3",
                           "--format", "json")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert doc["rows"][1]["a"] == "216"


class TestEval:
    def test_both_methods_agree(self, capsys):
        code, out, _ = run(capsys, "eval", "--s", "2+0i", "--method", "both")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["agreement"]["ok"]
        assert len(doc["results"]) == 2

    def test_near_first_zero(self, capsys):
        code, out, _ = run(capsys, "eval", "--s", "0.5+9.2224i", "--method", "exact")
        assert code == EXIT_OK
        doc = json.loads(out)
        v = doc["results"][0]["value"]
        assert abs(complex(v["re"], v["im"])) <= 1e-3

    def test_malformed_literal(self, capsys):
        code, _, err = run(capsys, "eval", "--s", "nonsense")
        assert code == EXIT_USAGE
        assert "complex" in err


class TestZeros:
    def test_scan_with_contour_verify(self, capsys):
        code, out, _ = run(capsys, "zeros", "--t0", "0", "--t1", "30")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == "gamma,beta,radius,method"
        assert len(lines) == 9  # eight zeros below 30
        assert lines[1].startswith("9.2223")


class TestCount:
    def test_json_payload(self, capsys):
        code, out, _ = run(capsys, "count", "--sigma0", "0.75", "--t0", "0",
                           "--t1", "30")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert doc["count"] == 0
        assert doc["winding_residual"] <= 0.1


class TestDensity:
    def test_report_consistent(self, capsys):
        code, out, _ = run(
            capsys, "density", "--T", "40", "--sigmas", "0.5,0.75,1.0",
            "--delta", "8",
        )
        assert code == EXIT_OK
        doc = json.loads(out)
        rep = doc["reports"][0]
        assert rep["all_consistent"]
        assert rep["config"]["delta"] == 8
        assert {row["sigma"] for row in rep["density_table"]} == {0.5, 0.75, 1.0}

    def test_deterministic_output(self, capsys):
        args = ("density", "--T", "30", "--sigmas", "0.75", "--delta", "6")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2


class TestLemmas:
    def test_default_corpus(self, capsys):
        code, out, _ = run(capsys, "lemmas", "--corpus", "default")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["all_passed"]
        assert len(doc["constants"]) >= 12


class TestConfigFile:
    def test_overrides_flags(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("t1 = 10\nweight = 12\n")
        code, out, _ = run(capsys, "--config", str(cfg), "zeros",
                           "--t0", "0", "--t1", "100")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert len(lines) == 2  # one zero below t = 10

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 1\n")
        code, _, err = run(capsys, "--config", str(cfg), "count", "--t1", "5")
        assert code == EXIT_USAGE
        assert "bogus" in err

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "--config", "/nonexistent.cfg", "count",
                         "--t1", "5")
        assert code == EXIT_USAGE


class TestOutputFiles:
    def test_out_writes_file(self, capsys, tmp_path):
        out_path = tmp_path / "z.csv"
        code, out, _ = run(capsys, "zeros", "--t0", "0", "--t1", "12",
                           "--out", str(out_path))
        assert code == EXIT_OK
        assert out == ""
        assert out_path.read_text().startswith("gamma,beta,radius,method")
