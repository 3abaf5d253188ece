"""Command-line interface tests.

Everything runs in-process through main(argv) so exit codes and emitted
JSON are checked without subprocess overhead.  Determinism tests compare
raw stdout bytes, not parsed documents.
"""

import json

import pytest

from tljones.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsage:
    def test_no_arguments_is_usage_error(self, capsys):
        assert run(capsys, )[0] == 1

    def test_help_exits_zero(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0
        assert "rep" in out and "simulate" in out

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_bad_diagram_string(self, capsys):
        code, _, err = run(capsys, "verify", "--r", "5", "--diagram", "4;2")
        assert code == 1
        assert "diagram" in err

    def test_unknown_gate_name(self, capsys):
        code, _, err = run(capsys, "compile", "--gate", "toffoli")
        assert code == 1


class TestRep:
    def test_emits_fixture_document(self, capsys):
        code, out, _ = run(capsys, "rep", "--r", "5", "--diagram", "2,1")
        assert code == 0
        doc = json.loads(out)
        assert doc["r"] == 5
        assert doc["diagram"] == [2, 1]
        assert len(doc["matrices"]) == 2

    def test_out_flag_writes_file_and_keeps_stdout_quiet(self, capsys, tmp_path):
        dest = tmp_path / "rep.json"
        code, out, _ = run(capsys, "rep", "--r", "5", "--diagram", "2,1",
                           "--out", str(dest))
        assert code == 0
        assert out == ""
        assert json.loads(dest.read_text())["diagram"] == [2, 1]


class TestVerify:
    def test_clean_sector_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--r", "5", "--diagram", "4,2")
        assert code == 0
        doc = json.loads(out)
        assert doc["pass"] is True
        assert doc["max_deviation"] < 1e-9

    def test_fixture_roundtrip(self, capsys, tmp_path):
        fx = tmp_path / "fx.json"
        assert run(capsys, "rep", "--r", "5", "--diagram", "3,3",
                   "--out", str(fx))[0] == 0
        code, out, _ = run(capsys, "verify", "--r", "5", "--diagram", "3,3",
                           "--fixture", str(fx))
        assert code == 0
        doc = json.loads(out)
        assert doc["fixture_deviation"] < 1e-12

    def test_fixture_dir_env_var(self, capsys, tmp_path, monkeypatch):
        fx = tmp_path / "golden.json"
        run(capsys, "rep", "--r", "5", "--diagram", "2,1", "--out", str(fx))
        monkeypatch.setenv("TLJONES_FIXTURE_DIR", str(tmp_path))
        code, out, _ = run(capsys, "verify", "--r", "5", "--diagram", "2,1",
                           "--fixture", "golden.json")
        assert code == 0
        assert json.loads(out)["pass"] is True

    def test_corrupted_fixture_fails_with_exit_two(self, capsys, tmp_path):
        fx = tmp_path / "bad.json"
        run(capsys, "rep", "--r", "5", "--diagram", "2,1", "--out", str(fx))
        doc = json.loads(fx.read_text())
        name = sorted(doc["matrices"])[0]
        doc["matrices"][name]["data"][0][0] += 1e-3
        fx.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "verify", "--r", "5", "--diagram", "2,1",
                           "--fixture", str(fx))
        assert code == 2
        assert json.loads(out)["pass"] is False

    def test_wrong_sector_fixture_is_usage_error(self, capsys, tmp_path):
        fx = tmp_path / "other.json"
        run(capsys, "rep", "--r", "5", "--diagram", "3,3", "--out", str(fx))
        code, _, err = run(capsys, "verify", "--r", "5", "--diagram", "2,1",
                           "--fixture", str(fx))
        assert code == 1
        assert "different sector" in err

    def test_bundled_fixture(self, capsys, fixture_dir):
        code, out, _ = run(capsys, "verify", "--r", "5", "--diagram", "2,1",
                           "--fixture", str(fixture_dir / "golden_r5.json"))
        assert code == 0
        assert json.loads(out)["pass"] is True


class TestDims:
    def test_six_strand_table(self, capsys):
        code, out, _ = run(capsys, "dims", "--r", "5", "--n", "6")
        assert code == 0
        doc = json.loads(out)
        by_boundary = {s["boundary"]: s["dimension"] for s in doc["sectors"]}
        assert by_boundary[0] == 5
        assert by_boundary[2] == 8

    def test_three_strand_table(self, capsys):
        _, out, _ = run(capsys, "dims", "--r", "5", "--n", "3")
        doc = json.loads(out)
        dims = sorted(s["dimension"] for s in doc["sectors"])
        assert dims == [1, 2]


class TestDensity:
    def test_certificate_passes_with_expected_ranks(self, capsys):
        code, out, _ = run(capsys, "density", "--r", "5")
        assert code == 0
        doc = json.loads(out)
        assert doc["pass"] is True
        assert doc["sectors"]["3,3"]["closure_dim"] == 24
        assert doc["sectors"]["4,2"]["closure_dim"] == 63
        assert doc["joint"]["closure_dim"] == 87
        assert doc["joint"]["dense"] is True


class TestCompile:
    def test_single_qubit_gate(self, capsys):
        code, out, _ = run(capsys, "compile", "--gate", "h",
                           "--epsilon", "0.05")
        assert code == 0
        doc = json.loads(out)
        assert doc["method"] == "sk"
        assert doc["distance"] <= 0.05
        assert doc["word"]["n_strands"] == 3
        assert len(doc["word"]["letters"]) == doc["length"]

    def test_rotation_gate_takes_angle(self, capsys):
        code, out, _ = run(capsys, "compile", "--gate", "rz",
                           "--angle", "0.7", "--epsilon", "0.05")
        assert code == 0
        assert json.loads(out)["angle"] == 0.7

    def test_two_qubit_gate_uses_search(self, capsys):
        code, out, _ = run(capsys, "compile", "--gate", "cz",
                           "--budget", "500", "--seed", "3")
        assert code == 0
        doc = json.loads(out)
        assert doc["method"] == "search"
        assert doc["word"]["n_strands"] == 6

    def test_kind_mismatch_rejected(self, capsys):
        assert run(capsys, "compile", "--gate", "cz", "--kind", "1q")[0] == 1
        assert run(capsys, "compile", "--gate", "h", "--kind", "2q")[0] == 1


class TestSimulate:
    @pytest.fixture()
    def circuit_path(self, tmp_path):
        doc = {
            "k": 2,
            "gates": [{"kind": "1q", "sites": [1], "name": "h"}],
            "shots": 400,
            "epsilon": 0.05,
            "seed": 11,
        }
        path = tmp_path / "circuit.json"
        path.write_text(json.dumps(doc))
        return path

    def test_run_and_distribution_keys(self, capsys, circuit_path):
        code, out, _ = run(capsys, "simulate", "--circuit", str(circuit_path))
        assert code == 0
        doc = json.loads(out)
        for key in ("distribution", "leakage_rate", "braid_length",
                    "compile_report"):
            assert key in doc
        assert doc["shots"] == 400
        assert doc["seed"] == 11

    def test_repeated_runs_byte_identical(self, capsys, circuit_path):
        _, first, _ = run(capsys, "simulate", "--circuit", str(circuit_path))
        _, second, _ = run(capsys, "simulate", "--circuit", str(circuit_path))
        assert first == second

    def test_flag_overrides_document(self, capsys, circuit_path):
        _, out, _ = run(capsys, "simulate", "--circuit", str(circuit_path),
                        "--shots", "100")
        assert json.loads(out)["shots"] == 100

    def test_malformed_json_reports_position(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"k": 2, "gates": [\n')
        code, _, err = run(capsys, "simulate", "--circuit", str(path))
        assert code == 1
        assert "line" in err and "column" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "simulate", "--circuit", "/nonexistent.json")
        assert code == 1
