"""Exit codes, config handling, artifact determinism for the CLI."""

import hashlib
import json
import math
import os

import pytest

from farfield.cli import dump_config, load_config, main
from farfield.errors import ConfigError


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def _sha256(path):
    return hashlib.sha256(_read(path)).hexdigest()


# ---------------------------------------------------------------------------
# exit codes

def test_zf_prints_plateau_levels(capsys):
    assert main(["zf", "--f", "abs-sin"]) == 0
    out, err = capsys.readouterr()
    got = [float(s) for s in out.split()]
    want = [0.0, math.pi, 2 * math.pi, 3 * math.pi]
    assert len(got) == len(want)
    for g, w in zip(got, want):
        assert abs(g - w) < 1e-12
    assert err.startswith("# ")


def test_unknown_nonlinearity_exits_1(capsys):
    assert main(["zf", "--f", "bogus"]) == 1
    assert "input error:" in capsys.readouterr().err


def test_missing_required_flag_exits_1(capsys):
    assert main(["profile", "--f", "logistic"]) == 1
    assert "input error:" in capsys.readouterr().err


def test_solver_failure_exits_2(tmp_path, capsys):
    rc = main(["solve-quarter", "--f", "logistic", "--L1", "10", "--L2", "6",
               "--h", "0.5", "--trace", "constant:0.3", "--method", "newton",
               "--out", str(tmp_path)])
    assert rc == 2
    assert "numeric error:" in capsys.readouterr().err


def test_unreadable_input_exits_3(tmp_path, capsys):
    rc = main(["plot", "--input", str(tmp_path / "nope.json"),
               "--output", str(tmp_path / "x.svg")])
    assert rc == 3
    assert "os error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# config files

def test_config_defaults_fill_missing_sections(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text("{}")
    cfg = load_config(str(p))
    assert cfg["seed"] == 0
    assert cfg["domain"]["kind"] == "quarter"
    assert cfg["solver"]["tol"] == 1e-9


def test_config_round_trip(tmp_path):
    p1 = tmp_path / "a.json"
    p1.write_text(json.dumps({"seed": 7, "domain": {"h": 0.5}}))
    cfg = load_config(str(p1))
    assert cfg["seed"] == 7
    assert cfg["domain"]["h"] == 0.5
    p2 = tmp_path / "b.json"
    dump_config(cfg, str(p2))
    assert load_config(str(p2)) == cfg


def test_config_syntax_error_reports_the_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n"seed": 0\n"domain": {}\n}')
    with pytest.raises(ConfigError) as e:
        load_config(str(p))
    assert ":3:" in str(e.value)


def test_config_rejects_unknown_names(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"bogus": {}}))
    with pytest.raises(ConfigError, match="unknown section 'bogus'"):
        load_config(str(p))
    p.write_text(json.dumps({"solver": {"bogus": 1}}))
    with pytest.raises(ConfigError, match="unknown key 'bogus' in section 'solver'"):
        load_config(str(p))
    p.write_text(json.dumps({"solver": 5}))
    with pytest.raises(ConfigError, match="must be an object"):
        load_config(str(p))
    p.write_text(json.dumps({"seed": True}))
    with pytest.raises(ConfigError, match="seed must be an integer"):
        load_config(str(p))
    p.write_text(json.dumps([1, 2]))
    with pytest.raises(ConfigError, match="top level must be an object"):
        load_config(str(p))


def test_config_errors_exit_1(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 1
    err = capsys.readouterr().err
    assert "config error:" in err
    assert "no such config file" in err


# ---------------------------------------------------------------------------
# solve artifacts

_SOLVE_ARGS = ["solve-quarter", "--f", "linear-decay", "--L1", "12",
               "--L2", "6", "--h", "0.5", "--trace", "constant:0.5"]


def test_solve_quarter_writes_the_artifact_set(tmp_path, capsys):
    out = tmp_path / "s"
    rc = main(_SOLVE_ARGS + ["--dump-fields", "--out", str(out)])
    assert rc == 0
    assert sorted(os.listdir(out)) == ["decay.svg", "field.csv",
                                       "solve.json", "trajectory.json"]
    text = capsys.readouterr().out
    assert "far-field limit: level 1 (converged" in text
    assert "residual" in text
    summary = json.loads(_read(out / "solve.json"))
    assert set(summary) == {"kind", "f", "grid", "boundary", "method",
                            "iterations", "residual", "out_of_window",
                            "wall_time_ms"}
    assert summary["kind"] == "quarter"
    assert not summary["out_of_window"]


def test_no_plots_suppresses_the_svg(tmp_path):
    out = tmp_path / "s"
    assert main(_SOLVE_ARGS + ["--no-plots", "--out", str(out)]) == 0
    assert sorted(os.listdir(out)) == ["solve.json", "trajectory.json"]


def test_solve_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(_SOLVE_ARGS + ["--dump-fields", "--out", str(a)]) == 0
    assert main(_SOLVE_ARGS + ["--dump-fields", "--out", str(b)]) == 0
    for name in ("field.csv", "trajectory.json", "decay.svg"):
        assert _read(a / name) == _read(b / name)
    ja = json.loads(_read(a / "solve.json"))
    jb = json.loads(_read(b / "solve.json"))
    ja.pop("wall_time_ms")
    jb.pop("wall_time_ms")
    assert ja == jb


# ---------------------------------------------------------------------------
# analysis commands

def test_analyze_f_prints_hypothesis_verdicts(tmp_path, capsys):
    rc = main(["analyze-f", "--f", "logistic", "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "hypothesis h1: satisfied" in out
    assert "hypothesis h2: violated" in out
    assert "hypothesis h3: satisfied" in out
    report = json.loads(_read(tmp_path / "analysis.json"))
    assert report["hypotheses"]["h1"] is True
    assert report["reachable_levels"]["points"] == pytest.approx([0.0, 1.0])


def test_profile_command_writes_table_and_summary(tmp_path, capsys):
    rc = main(["profile", "--f", "logistic", "--z", "1", "--xi-max", "8",
               "--n", "64", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "profile.csv").exists()
    summary = json.loads(_read(tmp_path / "profile.json"))
    assert set(summary) == {"z", "slope0", "crosscheck", "xi_attained",
                            "xi_max", "n"}
    assert summary["slope0"] == pytest.approx(1 / math.sqrt(3), abs=1e-10)
    assert "floor slope" in capsys.readouterr().out


def test_eigen_command_writes_summary(tmp_path, capsys):
    rc = main(["eigen", "--N", "2", "--R", "1", "--n", "512",
               "--out", str(tmp_path)])
    assert rc == 0
    val = json.loads(_read(tmp_path / "eigen.json"))["value"]
    assert abs(val - 5.78319) < 1e-3
    assert "principal eigenvalue" in capsys.readouterr().out


def test_slide_command_reports_domination(tmp_path, capsys):
    rc = main(["slide", "--f", "logistic", "--trace", "constant:0.1",
               "--L1", "16", "--L2", "12", "--h", "0.5",
               "--z", "1", "--eps", "0.1", "--from", "8,6", "--to", "9,6",
               "--steps", "3", "--out", str(tmp_path)])
    assert rc == 0
    assert "field dominates the cap" in capsys.readouterr().out
    rep = json.loads(_read(tmp_path / "slide.json"))
    assert rep["ok"] is True
    assert rep["min_margin"] > 0
    assert len(rep["margins"]) == 3


def test_trajectory_command_on_a_constant_strip(tmp_path, capsys):
    rc = main(["trajectory", "--f", "linear-decay", "--kind", "half",
               "--L1", "12", "--L2", "4", "--h", "0.5",
               "--trace", "constant:1", "--out", str(tmp_path)])
    assert rc == 0
    assert "trajectory: converged, level 1.0" in capsys.readouterr().out
    assert (tmp_path / "trajectory.json").exists()


def test_sweep_command_banner_and_report(tmp_path, capsys):
    rc = main(["liouville-sweep", "--f", "abs-sin", "--domain", "box",
               "--L", "8", "--h", "0.5", "--trials", "3",
               "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "note: results on a compact surrogate domain" in out
    assert "box sweep (3 trials, seed 0): constant: 3" in out
    rep = json.loads(_read(tmp_path / "sweep_box.json"))
    assert rep["n_trials"] == 3
    assert rep["counts"] == {"constant": 3}


def test_sweep_thread_flag_does_not_change_the_report(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    base = ["liouville-sweep", "--f", "abs-sin", "--domain", "box",
            "--L", "8", "--h", "0.5", "--trials", "3"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--threads", "2", "--out", str(b)]) == 0
    assert _read(a / "sweep_box.json") == _read(b / "sweep_box.json")


# ---------------------------------------------------------------------------
# plot command

def test_plot_rerenders_the_solve_figure_byte_identically(tmp_path):
    out = tmp_path / "s"
    assert main(_SOLVE_ARGS + ["--out", str(out)]) == 0
    re = tmp_path / "re.svg"
    rc = main(["plot", "--input", str(out / "trajectory.json"),
               "--output", str(re)])
    assert rc == 0
    assert _read(re) == _read(out / "decay.svg")


def test_plot_rejects_reports_without_a_ladder(tmp_path, capsys):
    p = tmp_path / "empty.json"
    p.write_text(json.dumps({"distances": []}))
    assert main(["plot", "--input", str(p), "--output", str(tmp_path / "x.svg")]) == 1
    assert "no distance ladder" in capsys.readouterr().err
    p.write_text(json.dumps([1, 2]))
    assert main(["plot", "--input", str(p), "--output", str(tmp_path / "x.svg")]) == 1
    assert "expected a report object" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# full pipeline

def test_run_pipeline_writes_manifest_with_matching_digests(tmp_path, capsys):
    cfg = {"nonlinearity": {"spec": "linear-decay"},
           "domain": {"L1": 12.0, "L2": 6.0, "h": 0.5, "trace": "constant:0.5"},
           "analysis": {"n_shifts": 8},
           "output": {"dir": str(tmp_path / "out")}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert main(["run", "--config", str(p)]) == 0
    out = tmp_path / "out"
    assert sorted(os.listdir(out)) == ["analysis.json", "decay.svg",
                                       "manifest.json", "profile_0.csv",
                                       "solve.json", "trajectory.json"]
    manifest = json.loads(_read(out / "manifest.json"))
    assert manifest["seed"] == 0
    for name, digest in manifest["files"].items():
        assert _sha256(out / name) == digest
    levels = json.loads(_read(out / "analysis.json"))["reachable_levels"]
    assert levels["points"] == pytest.approx([1.0])
    assert "far-field limit: level 1 (converged)" in capsys.readouterr().out
