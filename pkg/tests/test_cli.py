"""CLI / 설정 병합 테스트"""

import os

import pytest
from typer.testing import CliRunner

from vreg_app.adapters.field_io import read_field, write_field
from vreg_app.adapters.report_writer import read_json
from vreg_app.cli.main import app
from vreg_app.cli.settings import (
    build_run_config,
    env_settings,
    file_settings,
    merge_settings,
    parse_grid,
    parse_variant,
)
from vreg_app.schemas.config import CoarseSolver, PrecondKind, RegNorm, Scheme, SmoothVariant, Subcommand
from vreg_app.services.problems.synthetic import smooth_image
from vreg_app.services.spectral.grid import Grid

runner = CliRunner()


@pytest.fixture(autouse=True)
def _isolated_cwd(tmp_path, monkeypatch):
    """VREG_* 환경변수 영향 제거"""
    monkeypatch.chdir(tmp_path)
    for key in [k for k in os.environ if k.startswith("VREG_")]:
        monkeypatch.delenv(key)


# ============== settings ==============


def test_parse_grid():
    assert parse_grid("64") == (64, 64)
    assert parse_grid("32X64") == (32, 64)
    with pytest.raises(ValueError):
        parse_grid("8x8x8")


def test_parse_variant():
    assert parse_variant("smooth-b") == "b"
    assert parse_variant("A") == "a"


def test_cli_overrides_file_overrides_env(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("betav=0.1\ncfl=2\n", encoding="utf-8")
    merged = merge_settings({"betav": 0.5}, config, environ={"VREG_CFL": "3", "VREG_GRID": "32", "OTHER": "x"})
    assert merged == {"betav": 0.5, "cfl": "2", "grid": "32"}

    cfg = build_run_config(Subcommand.SYNTH, merged)
    assert cfg.model.beta_v == 0.5
    assert cfg.newton.gradient_scheme.cfl == 2.0
    assert cfg.grid == (32, 32)


def test_env_keys_accept_dashes_and_case():
    settings = env_settings({"VREG_TOL_REL": "1e-3", "VREG_hessian-mode": "fn"})
    assert settings == {"tol_rel": "1e-3", "hessian_mode": "fn"}


def test_unknown_config_key_is_rejected(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("betav=0.1\ncolour=red\n", encoding="utf-8")
    with pytest.raises(ValueError, match="colour"):
        file_settings(config)


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        file_settings(tmp_path / "missing.cfg")


def test_build_run_config_maps_flags():
    cfg = build_run_config(
        Subcommand.REGISTER,
        {"synthetic": "smooth-b", "norm": "h3", "scheme": "rk2a", "pc": "2l-pcg", "eps": "0.05", "maxit": "7"},
    )
    assert cfg.synthetic == SmoothVariant.B
    assert cfg.model.reg_norm == RegNorm.H3
    assert cfg.newton.gradient_scheme.scheme == Scheme.RK2A
    assert cfg.precond.kind == PrecondKind.TWO_LEVEL
    assert cfg.precond.coarse_solver == CoarseSolver.PCG
    assert cfg.precond.eps_scale == 0.05
    assert cfg.newton.max_outer_iter == 7


def test_kkt_linearization_point_defaults_to_v_star():
    assert build_run_config(Subcommand.DIAG, {"protocol": "kkt-bench"}).kkt_at_v_star is True
    settings = merge_settings({}, environ={"VREG_KKT_AT_V_STAR": "false"})
    assert build_run_config(Subcommand.DIAG, settings).kkt_at_v_star is False


def test_unknown_preconditioner_is_rejected():
    with pytest.raises(ValueError, match="2l-cheb"):
        build_run_config(Subcommand.REGISTER, {"synthetic": "a", "pc": "multigrid"})


# ============== synth ==============


def test_synth_writes_problem_files(tmp_path):
    out = tmp_path / "synth"
    result = runner.invoke(app, ["synth", "smooth-a", "--grid", "16", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert sorted(p.name for p in out.iterdir()) == ["reference.vrf", "template.vrf", "velocity.vrf"]
    assert read_field(out / "velocity.vrf").shape == (2, 16, 16)


# ============== register ==============


def test_register_identical_images_converges_immediately(tmp_path):
    image = smooth_image(SmoothVariant.A, Grid((16, 16)))
    write_field(tmp_path / "ref.vrf", image)
    write_field(tmp_path / "tmpl.vrf", image)
    out = tmp_path / "run"
    result = runner.invoke(
        app,
        [
            "register",
            "--reference", str(tmp_path / "ref.vrf"),
            "--template", str(tmp_path / "tmpl.vrf"),
            "--grid", "16",
            "--sigma", "0",
            "--betav", "0.05",
            "--out", str(out),
        ],
    )  # fmt: skip
    assert result.exit_code == 0, result.output
    summary = read_json(out / "summary.json")
    assert summary["status"] == "converged"
    assert summary["outer_iterations"] == 0
    assert summary["config"]["model"]["beta_v"] == 0.05
    for name in ["m1.vrf", "m1.pgm", "residual.vrf", "velocity.vrf", "jacobian.vrf", "convergence.csv"]:
        assert (out / name).is_file()


def test_register_reports_max_iterations(tmp_path):
    args = ["register", "--synthetic", "a", "--grid", "16", "--maxit", "0", "--out", str(tmp_path)]
    result = runner.invoke(app, args)
    assert result.exit_code == 2, result.output
    assert read_json(tmp_path / "summary.json")["status"] == "maxit"


@pytest.mark.parametrize(
    "args",
    [
        ["--synthetic", "a", "--norm", "h4"],
        ["--synthetic", "a", "--grid", "15"],
        ["--grid", "16"],
        ["--synthetic", "a", "--model", "nearincomp"],
    ],
)
def test_register_invalid_input_exits_1(tmp_path, args):
    result = runner.invoke(app, ["register", *args, "--out", str(tmp_path)])
    assert result.exit_code == 1


def test_register_missing_input_file_exits_1(tmp_path):
    result = runner.invoke(
        app,
        ["register", "--reference", str(tmp_path / "a.vrf"), "--template", str(tmp_path / "b.vrf"), "--grid", "16"],
    )
    assert result.exit_code == 1


# ============== diag ==============


def test_unknown_protocol_lists_available(tmp_path):
    result = runner.invoke(app, ["diag", "not-a-protocol", "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "adjoint-error" in result.output
    assert "kkt-bench" in result.output


def test_diag_op_count_writes_report(tmp_path):
    result = runner.invoke(app, ["diag", "op-count", "--grid", "16", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "op-count.csv").is_file()
    payload = read_json(tmp_path / "op-count.json")
    assert payload["protocol"] == "op-count"
    assert payload["summary"]["config"]["grid"] == [16, 16]
