"""Tests for the run configuration and the command-line entry point."""

import json

import pytest
from app.config import RunConfig
from app.main import build_parser, main, parse_args
from app.models import FoliationLabel, IcLine, ModelKind
from app.services import sweep as sweep_module


def _usage_error(argv, capsys):
    with pytest.raises(SystemExit) as exc_info:
        parse_args(argv)
    assert exc_info.value.code == 2
    return capsys.readouterr().err


def test_detect_defaults():
    """Test that unspecified second-wave parameters default to nu = k = 1."""
    cfg = parse_args(["detect", "--model", "twowave", "--mu", "0.015", "--foliation", "s1", "--p0", "0.5"])
    assert cfg.command == "detect"
    assert cfg.model == ModelKind.TWO_WAVE
    assert cfg.mu == 0.015
    assert (cfg.nu, cfg.k) == (1.0, 1)
    assert cfg.foliation == FoliationLabel.S1
    assert cfg.p0 == 0.5
    assert cfg.tmax == 150.0


def test_model_dependent_defaults():
    cfg = parse_args(["detect", "--model", "qflow", "--x0", "2.5", "--y0", "2.5"])
    assert cfg.foliation == FoliationLabel.QPSI
    assert cfg.ic_line == IcLine.UU0
    s = cfg.initial_state()
    assert (s.c0, s.c1, s.c2) == (2.5, 2.5, 0.0)

    assert parse_args(["detect"]).foliation == FoliationLabel.R


def test_qflow_sweep_is_valid(tmp_path):
    cfg = parse_args(
        [
            "sweep", "--model", "qflow", "--q", "5", "--foliation", "qpsi", "--ic-line", "y0",
            "--axis1", "eps:0:0.5:10", "--axis2", "y0:0:3:10", "--out", str(tmp_path / "g.csv"),
        ]
    )
    spec = cfg.grid_spec()
    assert spec.shape == (10, 10)
    assert spec.qflow.q == 5
    assert spec.ic_line == IcLine.Y0


def test_ic_line_must_match_model(capsys):
    err = _usage_error(
        ["sweep", "--model", "twowave", "--ic-line", "uu0", "--axis1", "mu:0:0.03:2", "--axis2", "p0:0:1:2", "--out", "g.csv"],
        capsys,
    )
    assert "--ic-line" in err


def test_out_of_range_value_names_the_flag(capsys):
    assert "--mu" in _usage_error(["detect", "--mu", "-0.1"], capsys)
    assert "--h-min" in _usage_error(["detect", "--h-min", "1", "--h-init", "0.001"], capsys)


def test_foliation_must_match_model(capsys):
    assert "--foliation" in _usage_error(["detect", "--model", "qflow", "--foliation", "s1"], capsys)
    assert "--k 1" in _usage_error(["detect", "--foliation", "s2", "--k", "2"], capsys)


def test_sweep_requirements(capsys):
    assert "--axis1" in _usage_error(["sweep", "--out", "g.csv"], capsys)
    assert "--out" in _usage_error(["sweep", "--axis1", "mu:0:0.03:2", "--axis2", "p0:0:1:2"], capsys)
    assert "--axis" in _usage_error(["sweep", "--axis1", "nu:0:1:2", "--axis2", "u0:0:1:2", "--out", "g.csv"], capsys)
    assert "name:lo:hi:n" in _usage_error(["sweep", "--axis1", "mu:0:1", "--axis2", "p0:0:1:2", "--out", "g"], capsys)


def test_unknown_flag_is_rejected(capsys):
    _usage_error(["detect", "--bogus", "1"], capsys)
    _usage_error(["frobnicate"], capsys)


def test_section_needs_two_wave(capsys):
    assert "--model" in _usage_error(["section", "--model", "qflow"], capsys)


def test_config_file_below_flags(tmp_path):
    """Test that flags override the key=value file."""
    path = tmp_path / "run.cfg"
    path.write_text("mu=0.02\nnu=0.5\nfoliation=s1\n")
    cfg = parse_args(["detect", "--config", str(path), "--nu", "0.7"])
    assert cfg.mu == 0.02
    assert cfg.nu == 0.7
    assert cfg.foliation == FoliationLabel.S1


def test_config_file_errors(tmp_path, capsys):
    assert "--config" in _usage_error(["detect", "--config", str(tmp_path / "missing.cfg")], capsys)

    path = tmp_path / "bad.cfg"
    path.write_text("bogus=1\n")
    _usage_error(["detect", "--config", str(path)], capsys)


def test_environment_is_not_read(monkeypatch):
    monkeypatch.setenv("MU", "0.5")
    monkeypatch.setenv("TMAX", "3")
    cfg = RunConfig()
    assert cfg.mu == 0.0
    assert cfg.tmax == 150.0


def test_log_level_is_normalized():
    assert parse_args(["detect", "--log-level", "info"]).log_level == "INFO"


def test_parser_lists_every_command():
    help_text = build_parser().format_help()
    for command in ("detect", "sweep", "section", "lyapunov", "hist", "orbit", "verify"):
        assert command in help_text


@pytest.mark.parametrize(
    "argv",
    [
        ["detect"],
        ["sweep", "--axis1", "mu:0:0.03:2", "--axis2", "p0:0.1:1:2", "--out", "g.csv"],
        ["section"],
        ["lyapunov"],
        ["hist", "--input", "g.csv"],
        ["orbit"],
        ["verify"],
    ],
)
def test_unset_flags_stay_out_of_the_namespace(argv):
    """Test that only the flags given on the command line reach RunConfig."""
    values = vars(build_parser().parse_args(argv))
    assert None not in values.values()
    given = {arg.lstrip("-").replace("-", "_") for arg in argv[1:] if arg.startswith("--")}
    assert set(values) - {"command", "suite"} == given


def test_subcommand_defaults_resolve():
    cfg = parse_args(["sweep", "--axis1", "mu:0:0.03:2", "--axis2", "p0:0.1:1:2", "--out", "g.csv"])
    assert (cfg.q0, cfg.t0) == (0.0, 0.0)
    assert cfg.image is None

    cfg = parse_args(["section"])
    assert (cfg.n_crossings, cfg.t_section) == (100, 0.0)
    assert cfg.out is None

    assert parse_args(["lyapunov"]).v0 == (0.0, 1.0, 0.0)
    assert parse_args(["orbit"]).dt == 0.05
    assert parse_args(["hist", "--input", "g.csv"]).bin_width == 5.0

    cfg = parse_args(["verify"])
    assert (cfg.suite, cfg.seed, cfg.samples) == ("all", 0, None)


def test_main_detect(capsys):
    assert main(["detect", "--mu", "0", "--p0", "0.5", "--tmax", "5"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["status"] == "none"
    assert result["t_end"] == 5.0


def test_main_detect_trace(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    assert main(["detect", "--mu", "0.015", "--p0", "0.05", "--trace", str(trace)]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "detected"
    lines = trace.read_text().splitlines()
    assert lines[0] == "t,K,guard,c0,c1,c2"
    assert len(lines) > 2


def test_main_sweep_and_hist(tmp_path, capsys):
    """Test a small sweep end to end, followed by the histogram of its CSV."""
    out, image, hist = tmp_path / "g.csv", tmp_path / "g.pgm", tmp_path / "h.csv"
    argv = ["sweep", "--axis1", "mu:0:0.015:2", "--axis2", "p0:0.05:0.95:2", "--tmax", "10"]
    assert main(argv + ["--out", str(out), "--image", str(image)]) == 0
    assert "4 cells" in capsys.readouterr().out
    assert out.read_text().startswith("axis1,axis2,status,t_c\n")
    assert image.read_bytes().startswith(b"P5\n2 2\n255\n")

    assert main(["hist", "--input", str(out), "--bin-width", "5", "--out", str(hist)]) == 0
    assert hist.read_text().startswith("bin_start,count\n")


def test_main_sweep_reports_cell_errors(tmp_path, monkeypatch):
    def explode(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(sweep_module, "detect", explode)
    argv = ["sweep", "--axis1", "mu:0:0.015:2", "--axis2", "p0:0.05:0.95:2", "--out", str(tmp_path / "g.csv")]
    assert main(argv) == 2
    assert "error" in (tmp_path / "g.csv").read_text()


def test_main_missing_input_is_reported(tmp_path, capsys):
    assert main(["hist", "--input", str(tmp_path / "nope.csv")]) == 1
    assert "nope.csv" in capsys.readouterr().err


def test_main_section(tmp_path):
    out = tmp_path / "section.csv"
    assert main(["section", "--mu", "0", "--p0", "0.5", "--n-crossings", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "crossing_index,q,p"
    assert len(lines) == 4


def test_main_lyapunov(tmp_path, capsys):
    assert main(["lyapunov", "--mu", "0", "--tmax", "20"]) == 0
    assert "lambda" in json.loads(capsys.readouterr().out)

    out = tmp_path / "ftle.csv"
    argv = ["lyapunov", "--axis1", "mu:0:0.01:2", "--axis2", "p0:0.1:0.9:2", "--tmax", "5", "--out", str(out)]
    assert main(argv) == 0
    assert len(out.read_text().splitlines()) == 5


def test_main_orbit(tmp_path):
    out = tmp_path / "orbit.csv"
    argv = ["orbit", "--model", "qflow", "--x0", "0.5", "--y0", "0.5", "--tmax", "1", "--dt", "0.5", "--out", str(out)]
    assert main(argv) == 0
    assert out.read_text().splitlines()[0] == "t,c0,c1,c2"
    assert len(out.read_text().splitlines()) == 4


def test_main_verify(capsys):
    assert main(["verify", "forms", "--samples", "20"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "FAIL" not in out
