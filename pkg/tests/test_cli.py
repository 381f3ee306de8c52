import io
import json
import math
import subprocess
import sys

import pytest

from bellswitch.cli import fmt_complex, main

S = 1 / math.sqrt(2)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def machine(*argv):
    code, out, err = run("--format", "machine", *argv)
    assert code == 0, err
    return json.loads(out)


def cplx(d):
    return complex(d["re"], d["im"])


def pairs(record):
    return [cplx(z) for z in record["final"]["pair_amps"]]


class TestCreate:
    def test_hh_gives_psi_minus(self):
        code, out, _ = run("create", "--input", "HH", "--epsilon", "0.01")
        assert code == 0
        assert "[psi_minus]" in out
        rec = machine("create", "--input", "HH", "--epsilon", "0.01")
        assert rec["bell"] == "psi_minus"
        assert cplx(rec["bell_coefficient"]) == pytest.approx(-0.01, abs=1e-15)
        assert pairs(rec) == pytest.approx([0, 0.01 * S, -0.01 * S, 0], abs=1e-15)

    def test_vv_machine(self):
        rec = machine("create", "--input", "VV", "--epsilon", "0.01")
        assert rec["bell"] == "phi_plus"
        assert pairs(rec) == pytest.approx([-0.01 * S, 0, 0, -0.01 * S], abs=1e-15)

    def test_trace_has_input_three_steps(self):
        rec = machine("create", "--input", "HV")
        assert [s["step"] for s in rec["trace"]][0] == "input"
        assert len(rec["trace"]) == 4
        assert rec["trace"][-1]["state"] == rec["final"]

    def test_format_after_subcommand(self):
        assert machine("create", "--input", "HH") == json.loads(
            run("create", "--input", "HH", "--format", "machine")[1])

    def test_complex_epsilon(self):
        rec = machine("create", "--input", "HH", "--epsilon", "0.01j")
        assert cplx(rec["bell_coefficient"]) == pytest.approx(-0.01j, abs=1e-15)

    def test_bad_label(self):
        code, _, err = run("create", "--input", "XX")
        assert code == 2
        assert "XX" in err

    def test_zero_epsilon(self):
        code, _, err = run("create", "--input", "HH", "--epsilon", "0")
        assert code == 2 and "epsilon" in err


class TestAnalyze:
    def test_phi_plus(self):
        rec = machine("analyze", "--bell", "phi-plus", "--epsilon", "0.01")
        assert rec["verdict"] == "VV"
        assert rec["identified_bell"] == "phi_plus"
        assert rec["success_probability"] == pytest.approx(1e-4 / (1 + 1e-4), abs=1e-15)
        assert rec["success_probability_unnormalized"] == pytest.approx(1e-4)

    def test_psi_minus_default_eps(self):
        rec = machine("analyze", "--bell", "psi-minus")
        assert rec["epsilon"] == {"re": 0.01, "im": 0.0}
        assert rec["verdict"] == "HH"

    def test_zero_epsilon(self):
        code, _, err = run("analyze", "--bell", "psi-minus", "--epsilon", "0")
        assert code == 2 and "error" in err

    def test_text_verdict(self):
        code, out, _ = run("analyze", "--bell", "psi_plus")
        assert code == 0
        assert "verdict: HV (D1*D4)" in out

    def test_bad_bell(self):
        assert run("analyze", "--bell", "chi")[0] == 2


class TestTables:
    def test_default_passes(self):
        code, out, _ = run("tables")
        assert code == 0
        assert out.count("PASS ") == 8
        assert "FAIL" not in out

    def test_explicit_tol(self):
        assert run("tables", "--tol", "1e-12")[0] == 0

    def test_too_tight(self):
        code, out, _ = run("tables", "--tol", "1e-300")
        assert code == 1
        assert "FAILED" in out

    def test_nonpositive_tol(self):
        assert run("tables", "--tol", "0")[0] == 2

    def test_machine_rows_and_note(self):
        code, out, _ = run("--format", "machine", "tables")
        rec = json.loads(out)
        assert code == 0 and rec["passed"]
        assert sum(len(r["rows"]) for r in rec["reports"]) == 8
        analyzer = next(r for r in rec["reports"] if r["device"] == "analyzer")
        assert analyzer["notes"]


class TestValidate:
    def test_default(self):
        code, out, _ = run("--format", "machine", "validate", "--scales", "1e-2,1e-3,1e-4", "--nmax", "2")
        rec = json.loads(out)
        assert code == 0
        assert rec["exponent"] == pytest.approx(2.0, abs=0.05)
        assert len(rec["rows"]) == 3

    def test_nmax_1(self):
        code, _, err = run("validate", "--nmax", "1")
        assert code == 2 and "increase n_max" in err

    def test_single_scale(self):
        code, _, err = run("validate", "--scales", "1e-3")
        assert code == 2 and "need >= 2 points" in err

    def test_ascending_scales(self):
        assert run("validate", "--scales", "1e-4,1e-2")[0] == 2


class TestSample:
    ARGS = ("sample", "--bell", "phi-plus", "--epsilon", "0.1", "--shots", "1000000", "--seed", "7")

    def test_counts_in_three_sigma(self):
        rec = machine(*self.ARGS)
        p = 0.01 / 1.01
        n = 10 ** 6
        assert rec["expected_rate"] == pytest.approx(p, abs=1e-15)
        assert abs(rec["counts"]["D2*D4"] - n * p) <= 3 * math.sqrt(n * p * (1 - p))
        assert set(rec["counts"]) == {"D2*D4", "no_coincidence"}

    def test_zero_shots(self):
        rec = machine("sample", "--bell", "psi-plus", "--shots", "0")
        assert rec["counts"] == {}
        assert rec["empirical_rate"] == 0.0

    def test_negative_shots(self):
        assert run("sample", "--bell", "psi-plus", "--shots", "-5")[0] == 2

    @pytest.mark.parametrize("fmt", ["text", "machine"])
    def test_repeat_byte_identical(self, fmt):
        argv = ("--format", fmt, *self.ARGS)
        assert run(*argv)[1] == run(*argv)[1]

    def test_repeat_byte_identical_across_processes(self):
        cmd = [sys.executable, "-m", "bellswitch", *self.ARGS]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b and a


class TestRun:
    @pytest.mark.parametrize("label", ["HH", "HV", "VH", "VV"])
    def test_exported_creator_matches_create(self, tmp_path, label):
        code, doc, _ = run("export", "creator", "--input", label)
        assert code == 0
        path = tmp_path / "c.json"
        path.write_text(doc, encoding="utf-8")
        via_run = machine("run", str(path))
        direct = machine("create", "--input", label)
        for key in ("trace", "final", "bell", "bell_coefficient", "epsilon"):
            assert via_run[key] == direct[key]

    def test_exported_creator_text_lines_match(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(run("export", "creator", "--input", "VH")[1], encoding="utf-8")
        run_lines = run("run", str(path))[1].splitlines()[1:]
        create_lines = run("create", "--input", "VH")[1].splitlines()[1:]
        assert run_lines == create_lines

    def test_exported_analyzer(self, tmp_path):
        path = tmp_path / "a.json"
        path.write_text(run("export", "analyzer", "--input", "phi-plus")[1], encoding="utf-8")
        rec = machine("run", str(path))
        assert rec["rectilinear"] == "VV"
        code, out, _ = run("run", str(path))
        assert "rectilinear VV" in out

    def test_unknown_kind(self, tmp_path):
        path = tmp_path / "bad.json"
        doc = json.loads(run("export", "creator")[1])
        doc["elements"][1]["kind"] = "prism"
        path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
        code, _, err = run("run", str(path))
        assert code == 2
        assert "unknown element kind 'prism'" in err and "line" in err

    def test_version_2(self, tmp_path):
        path = tmp_path / "v2.json"
        doc = json.loads(run("export", "creator")[1])
        doc["version"] = 2
        path.write_text(json.dumps(doc), encoding="utf-8")
        code, _, err = run("run", str(path))
        assert code == 2 and "unsupported version" in err

    def test_missing_file(self, tmp_path):
        code, _, err = run("run", str(tmp_path / "nope.json"))
        assert code == 2 and "cannot read" in err


class TestFormats:
    """Text and machine output carry the same amplitudes."""

    @pytest.mark.parametrize("argv", [
        ("create", "--input", "HH"),
        ("create", "--input", "VH", "--epsilon", "0.003-0.02j"),
        ("analyze", "--bell", "phi-minus", "--epsilon", "0.05"),
    ])
    def test_same_amplitudes(self, argv):
        text = run(*argv)[1]
        rec = machine(*argv)
        final_line = next(l for l in text.splitlines() if l.startswith("final:"))
        for z in rec["final"]["pair_amps"]:
            assert fmt_complex(cplx(z)) in final_line
        for step in rec["trace"]:
            assert all(fmt_complex(cplx(z)) in text for z in step["state"]["pair_amps"])

    def test_fmt_complex_round_trips(self):
        for z in (0.1 + 0.2j, -1e-19 - 0j, complex(-0.0, -0.0), 1 / 3 - 2j / 7):
            assert complex(fmt_complex(z)) == z

    def test_machine_is_stable_json(self):
        _, out, _ = run("--format", "machine", "create", "--input", "HH")
        assert out == json.dumps(json.loads(out), sort_keys=True, indent=2) + "\n"

    def test_version_flag(self):
        assert run("--version")[0] == 0

    def test_no_command(self):
        assert run()[0] == 2
