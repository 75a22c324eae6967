import json
import math

import pytest

from roundmoments.bounds import BoundReport
from roundmoments.cli import CSV_HEADER, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_tier_b_mean(capsys):
    code, out, _ = run_cli(
        capsys, "bound", "--dist", "semicircle:r=1,mu=0", "--tier", "B", "--delta", "0.1", "--quantity", "mean"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(0.01 / math.pi, rel=1e-12)
    assert payload["tier"] == "B"


def test_bound_zero_delta_is_zero(capsys):
    code, out, _ = run_cli(capsys, "bound", "--dist", "semicircle:r=1,mu=0", "--delta", "0", "--quantity", "mean")
    assert code == 0
    assert json.loads(out)["value"] == 0.0


def test_bound_plan_flag(capsys):
    code, out, _ = run_cli(
        capsys, "bound", "--plan", "--variance", "1", "--c", "1", "--p", "0.01", "--n", "400"
    )
    assert code == 0
    assert json.loads(out)["delta_max"] == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_bound_json_round_trip(capsys):
    code, out, _ = run_cli(
        capsys, "bound", "--dist", "normal:mu=0,sigma2=1", "--quantity", "centered", "--k", "2", "--delta", "0.05"
    )
    assert code == 0
    payload = json.loads(out)
    rep = BoundReport.from_json(payload)
    assert rep.value == payload["value"]
    assert rep.leading.coef * rep.leading.base ** rep.leading.power + (
        rep.higher_order.coef * rep.higher_order.base ** rep.higher_order.power
    ) == pytest.approx(rep.value, rel=1e-15)


def test_bound_config_error_exit_2(capsys):
    code, _, err = run_cli(capsys, "bound", "--dist", "cauchy:gamma=1", "--delta", "0.1")
    assert code == 2
    assert "cauchy" in err or "config" in err


def test_bound_precondition_exit_3(capsys):
    code, _, err = run_cli(
        capsys,
        "bound",
        "--dist", "semicircle:r=1,mu=0",
        "--quantity", "err-moment",
        "--scheme", "toward_zero",
        "--k", "1",
        "--signed",
        "--delta", "0.1",
    )
    assert code == 3
    assert "hypothesis" in err


def test_sweep_csv_header_exact(capsys, tmp_path):
    out_file = tmp_path / "rows.csv"
    code, _, _ = run_cli(
        capsys,
        "--out", str(out_file),
        "sweep", "--dist", "semicircle:r=1,mu=0", "--delta", "0.1", "--offsets", "4",
    )
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 5
    first = lines[1].split(",")
    assert len(first) == 10
    assert float(first[0]) == 0.0


def test_sweep_rejects_float_grid(capsys):
    code, _, err = run_cli(
        capsys, "sweep", "--dist", "semicircle:r=1,mu=0", "--grid", "float:m=8,k_min=-8,k_max=8", "--offsets", "4"
    )
    assert code == 2
    assert "uniform mesh" in err


def test_sweep_svg(capsys, tmp_path):
    out_file = tmp_path / "sweep.svg"
    code, _, _ = run_cli(
        capsys,
        "--format", "svg", "--out", str(out_file),
        "sweep", "--dist", "semicircle:r=1,mu=0", "--delta", "0.1", "--offsets", "8",
    )
    assert code == 0
    body = out_file.read_text()
    assert body.startswith("<svg") and "polyline" in body


def test_verify_pass_and_self_test(capsys):
    code, out, _ = run_cli(capsys, "verify", "--instances", "24")
    assert code == 0
    assert "0 violations" in out
    code, out, _ = run_cli(capsys, "verify", "--instances", "24", "--self-test")
    assert code == 1
    assert "self-test" in out


def test_verify_stochastic_scheme(capsys):
    code, out, _ = run_cli(capsys, "verify", "--instances", "24", "--scheme", "stochastic")
    assert code == 0


def test_plan_subcommand(capsys):
    code, out, _ = run_cli(capsys, "plan", "--variance", "2", "--c", "1.5", "--p", "0.05")
    assert code == 0
    payload = json.loads(out)
    assert payload["n_min"] == math.ceil(1 / (0.05 * 1.5 ** 2)) + 1


def test_sum_demo_dominated(capsys):
    code, out, _ = run_cli(
        capsys, "sum-demo", "--summands", "5", "--m", "8", "--samples", "5000"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["dominated"] is True
    assert payload["estimate"] <= payload["bound"]


def test_config_file_grid_and_distribution(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps(
            {
                "grid": {"kind": "uniform", "half_gap": 0.1, "offset": 0.0},
                "distribution": {"kind": "semicircle", "r": 1.0, "mu": 0.0},
            }
        )
    )
    code, out, _ = run_cli(capsys, "--config", str(cfg), "bound", "--tier", "B", "--quantity", "mean")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(0.01 / math.pi, rel=1e-12)
