"""Command-line interface: schemas, exit codes, determinism, overrides."""

import json
import subprocess
import sys

import numpy as np
import pytest

from fredholm.cli import main, run_compare_fd, run_config, run_example
from fredholm.errors import ValidationError
from fredholm.registry import example_names

LINEAR_CONFIG = {
    "kind": "linear_fie",
    "kernel": "1/e",
    "source": "e^x",
    "domain": [0.0, 1.0],
    "grid_n": 200,
    "grid_scheme": "closed",
    "layers": 8,
    "kappa": 1.0,
    "queries": "0:1:21",
    "exact": "e^x + 1",
}


def _write_config(tmp_path, config, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(config), encoding="utf-8")
    return str(path)


def _run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "fredholm", *argv],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


# ---------------------------------------------------------------------------
# run_config library surface

def test_run_config_produces_error_columns():
    bundle = run_config(LINEAR_CONFIG)
    assert bundle.kind == "linear_fie"
    assert len(bundle.rows) == 21
    assert bundle.max_abs_err() < 0.01
    assert bundle.metadata["q_est"] < 1.0
    assert bundle.metadata["km_schedule_valid"] is True
    assert bundle.metadata["runtime_seconds"] is None


def test_run_config_runtime_reported_when_not_deterministic():
    bundle = run_config(LINEAR_CONFIG, deterministic=False)
    assert bundle.metadata["runtime_seconds"] > 0.0


@pytest.mark.parametrize("mutate,fragment", [
    (lambda c: c.pop("kind"), "kind"),
    (lambda c: c.update(kind="magic"), "kind"),
    (lambda c: c.pop("kernel"), "missing"),
    (lambda c: c.update(extra=1), "unknown keys"),
    (lambda c: c.update(kernel="sin(x*")," at offset 6"),
    (lambda c: c.update(kernel="sin(q)*z"), "unexpected variable"),
    (lambda c: c.update(grid_n=-5), "positive integer"),
    (lambda c: c.update(grid_n=2.5), "positive integer"),
    (lambda c: c.update(domain=[1.0, 0.0]), "domain"),
    (lambda c: c.update(domain=[0.0]), "domain"),
    (lambda c: c.update(queries="0:1"), "start:stop:count"),
    (lambda c: c.update(kappa=2.0), "kappa"),
    (lambda c: c.update(kappa="big"), "kappa"),
    (lambda c: c.update(grid_scheme="gauss"), "scheme"),
])
def test_run_config_validation_messages(mutate, fragment):
    config = dict(LINEAR_CONFIG)
    mutate(config)
    with pytest.raises(ValidationError) as exc:
        run_config(config)
    assert fragment in str(exc.value)


def test_run_config_exact_optional():
    config = {k: v for k, v in LINEAR_CONFIG.items() if k != "exact"}
    bundle = run_config(config)
    assert bundle.max_abs_err() is None
    assert all(row[2] is None and row[3] is None for row in bundle.rows)


def test_run_config_query_list():
    config = dict(LINEAR_CONFIG, queries=[0.0, 0.5, 1.0])
    bundle = run_config(config)
    assert [row[0] for row in bundle.rows] == [0.0, 0.5, 1.0]


def test_run_config_sweep_table():
    bundle = run_config(LINEAR_CONFIG, sweep_layers=6)
    assert [m for m, _ in bundle.sweep] == [1, 2, 3, 4, 5, 6]
    errs = [e for _, e in bundle.sweep]
    # geometric decay until the quadrature floor takes over near 6e-3
    assert all(b < a for a, b in zip(errs[:4], errs[1:4]))
    assert min(errs) < errs[0] / 20
    assert errs[-1] < 1e-2


def test_run_example_matches_registry():
    bundle = run_example("ex1", overrides={"grid_n": 200, "layers": 8})
    assert bundle.metadata["example"] == "ex1"
    assert bundle.metadata["config"]["grid_n"] == 200
    assert bundle.max_abs_err() < 0.02


def test_run_example_rejects_unknown_names_and_overrides():
    with pytest.raises(ValidationError) as exc:
        run_example("nope")
    assert "ex1" in str(exc.value)
    with pytest.raises(ValidationError):
        run_example("ex1", overrides={"theta_n": 100})


def test_run_compare_fd_metadata():
    bundle = run_compare_fd(16, 16, tol=1e-8)
    assert bundle.kind == "fd_reference"
    assert bundle.metadata["iterations"] > 0
    assert bundle.metadata["max_err"] is not None
    assert bundle.rows[0][0] == 0.0


# ---------------------------------------------------------------------------
# exit codes through main()

def test_main_solve_happy_path(tmp_path, capsys):
    path = _write_config(tmp_path, LINEAR_CONFIG)
    assert main(["solve", path]) == 0
    out = capsys.readouterr().out
    assert "x,value,exact,abs_err" in out


def test_main_missing_config_file(capsys):
    assert main(["solve", "/no/such/config.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_main_bad_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["solve", str(path)]) == 2
    assert "valid JSON" in capsys.readouterr().err


def test_main_bad_expression_offset(tmp_path, capsys):
    config = dict(LINEAR_CONFIG, kernel="sin(x*")
    path = _write_config(tmp_path, config)
    assert main(["solve", path]) == 2
    assert "at offset 6" in capsys.readouterr().err


def test_main_divergent_run_exits_numerical(tmp_path, capsys):
    config = {
        "kind": "linear_fie",
        "kernel": "100000000",
        "source": "1",
        "domain": [0.0, 1.0],
        "grid_n": 16,
        "layers": 60,
        "kappa": 1.0,
    }
    path = _write_config(tmp_path, config)
    assert main(["solve", path]) == 3
    err = capsys.readouterr().err
    assert "error:" in err and "layer" in err


def test_main_domain_error_exits_numerical(tmp_path, capsys):
    # the left grid samples log at x = 0
    config = dict(LINEAR_CONFIG, source="log(x)", grid_scheme="left")
    del config["exact"]
    path = _write_config(tmp_path, config)
    assert main(["solve", path]) == 3
    assert "log" in capsys.readouterr().err


def test_main_example_list(capsys):
    assert main(["example", "--list"]) == 0
    out = capsys.readouterr().out
    for name in example_names():
        assert name in out


def test_main_example_requires_name(capsys):
    assert main(["example"]) == 2
    assert "--list" in capsys.readouterr().err


def test_main_example_unknown(capsys):
    assert main(["example", "zzz"]) == 2
    assert "available" in capsys.readouterr().err


def test_main_example_overrides_flow(capsys):
    assert main(["example", "ex1", "--grid", "100", "--layers", "6",
                 "--queries", "0:1:5", "--format", "json",
                 "--deterministic"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["metadata"]["config"]["grid_n"] == 100
    assert doc["metadata"]["config"]["layers"] == 6
    assert len(doc["solution"]["rows"]) == 5
    assert doc["metadata"]["runtime_seconds"] is None


def test_main_scheme_override_rejected_for_laplace(capsys):
    assert main(["example", "laplace_disc", "--scheme", "left"]) == 2
    assert "--scheme" in capsys.readouterr().err


def test_main_queries_override_rejected_for_laplace(capsys):
    assert main(["example", "laplace_disc", "--queries", "0:1:5"]) == 2
    assert "--queries" in capsys.readouterr().err


def test_main_selftest(capsys):
    assert main(["selftest"]) == 0
    assert "selftest ok" in capsys.readouterr().out


def test_main_sweep_flag(tmp_path, capsys):
    path = _write_config(tmp_path, LINEAR_CONFIG)
    assert main(["solve", path, "--sweep", "5"]) == 0
    out = capsys.readouterr().out
    assert "layers,max_err" in out


def test_main_compare_fd_small(capsys):
    assert main(["compare-fd", "--nr", "16", "--nt", "16", "--tol", "1e-8",
                 "--deterministic"]) == 0
    out = capsys.readouterr().out
    assert "# max_err =" in out
    assert "r,phi,value,exact,abs_err" in out


# ---------------------------------------------------------------------------
# subprocess level checks

def test_cli_entrypoint_reports_usage_without_args():
    code, _, err = _run_cli()
    assert code == 2
    assert "usage" in err.lower()


def test_cli_deterministic_runs_are_byte_identical(tmp_path):
    config = dict(LINEAR_CONFIG, grid_n=400)
    path = _write_config(tmp_path, config)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    for out in (out1, out2):
        code, _, err = _run_cli("solve", path, "--deterministic",
                                "--out", str(out))
        assert code == 0, err
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_divergence_exit_code_and_clean_stderr(tmp_path):
    config = {
        "kind": "linear_fie",
        "kernel": "100000000",
        "source": "1",
        "domain": [0.0, 1.0],
        "grid_n": 16,
        "layers": 60,
        "kappa": 1.0,
    }
    path = _write_config(tmp_path, config)
    code, _, err = _run_cli("solve", path)
    assert code == 3
    assert err.startswith("error:")
    assert "RuntimeWarning" not in err


def test_cli_json_output_parses(tmp_path):
    path = _write_config(tmp_path, LINEAR_CONFIG)
    code, out, _ = _run_cli("solve", path, "--format", "json",
                            "--deterministic")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"kind", "metadata", "solution", "sweep"}
