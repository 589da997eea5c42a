import math

import numpy as np
import pytest

from heavytail.ar_quadform import ArModel, autocov_matrix
from heavytail.cli import main
from heavytail.student_dist import make_law
from heavytail.tail_formulas import ar1_upper_tail


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_no_arguments_is_usage_error(capsys):
    code, _, _ = run(capsys, )
    assert code == 2


def test_unknown_command_is_usage_error(capsys):
    code, _, _ = run(capsys, "mystery")
    assert code == 2


def test_missing_required_flag_is_usage_error(capsys):
    code, _, _ = run(capsys, "tail", "--a", "0.5", "--n", "10")
    assert code == 2


def test_domain_error_names_precondition(capsys):
    code, _, err = run(capsys, "tail", "--alpha", "-1", "--a", "0.5",
                       "--n", "10")
    assert code == 1
    assert "need finite alpha > 0" in err


def test_tail_command_output(capsys):
    code, out, _ = run(capsys, "tail", "--alpha", "1", "--a", "0.5",
                       "--n", "10", "--k", "1", "--t", "1e4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config cmd=tail ")
    assert "alpha=1" in lines[0] and "seed" not in lines[0]
    want = ar1_upper_tail(0.5, 10, 1, 1.0)
    assert lines[1] == "regime=PowerHalf coef=" + format(want.coef, ".17g")
    fields = dict(part.split("=") for part in lines[2].split())
    assert float(fields["t"]) == 1e4
    assert float(fields["raw"]) == pytest.approx(want.coef / 100.0, rel=1e-15)


def test_tail_command_ar2(capsys):
    code, out, _ = run(capsys, "tail", "--alpha", "1", "--a", "-0.5",
                       "--b", "-0.3", "--n", "10")
    assert code == 0
    assert "regime=PowerLog" in out


def test_tail_evaluate_precondition_is_domain_error(capsys):
    # PowerLog approximations need t > e; the message names the precondition
    code, _, err = run(capsys, "tail", "--alpha", "1", "--a", "-0.5",
                       "--n", "10", "--k", "1", "--t", "2")
    assert code == 1
    assert "need t > e" in err


def test_matrix_command_round_trips(capsys):
    code, out, _ = run(capsys, "matrix", "--a", "0.5", "--n", "5", "--k", "1")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    got = np.array([[float(c) for c in ln.split(",")] for ln in lines])
    want = autocov_matrix(ArModel((0.5,), 5), 1).entries
    assert np.array_equal(got, want)


def test_matrix_command_rejects_a0_with_b(capsys):
    code, _, err = run(capsys, "matrix", "--a", "0.5", "--b", "0.1",
                       "--a0", "0.4", "--n", "5")
    assert code == 1
    assert "order-1" in err


def test_dist_command_values(capsys):
    code, out, _ = run(capsys, "dist", "--alpha", "2", "--x", "1.5",
                       "--u", "0.01")
    assert code == 0
    fields = dict(ln.split("=", 1) for ln in out.splitlines()
                  if ln and not ln.startswith("#"))
    law = make_law(2.0)
    assert float(fields["k_s"]) == law.k_s
    assert float(fields["tail_constant"]) == pytest.approx(0.5, rel=1e-13)
    assert 0.0 < float(fields["density"]) < 1.0
    assert 0.5 < float(fields["cdf"]) < 1.0
    assert float(fields["upper_quantile"]) > 1.0
    assert float(fields["normal_quantile"]) < 0.0


def test_regions_command_to_file(tmp_path, capsys):
    out_path = tmp_path / "grid.csv"
    code, out, _ = run(capsys, "regions", "--a-min", "-1", "--a-max", "1",
                       "--b-min", "-1", "--b-max", "0", "--steps", "3",
                       "--kmax", "30", "--out", str(out_path))
    assert code == 0
    assert out == ""  # everything went to the file
    lines = out_path.read_text().splitlines()
    assert lines[0].startswith("# config cmd=regions ")
    assert lines[1] == "a,b,stable,first_covering_k,in_theorem_region,regime"
    assert len(lines) == 2 + 9


def test_simulate_command_and_determinism(tmp_path, capsys):
    args = ("simulate", "--alpha", "1", "--a", "1", "--n", "8", "--k", "1",
            "--replicas", "2000", "--seed", "42", "--t-min", "100",
            "--t-max", "1e5", "--points", "4")
    first = tmp_path / "one.csv"
    second = tmp_path / "two.csv"
    code, _, _ = run(capsys, *args, "--out", str(first))
    assert code == 0
    code, _, _ = run(capsys, *args, "--out", str(second))
    assert code == 0
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().splitlines()
    assert lines[0].startswith("# config cmd=simulate ")
    assert "seed=42" in lines[0] and "replicas=2000" in lines[0]
    assert lines[2].startswith("t,log10_t,p_emp,")
    assert len(lines) == 3 + 4


def test_simulate_rejects_k_with_a0(capsys):
    code, _, err = run(capsys, "simulate", "--alpha", "1", "--a", "1",
                       "--n", "8", "--k", "1", "--a0", "0.5",
                       "--replicas", "100")
    assert code == 1
    assert "exactly one" in err


def test_calibrate_command_default_grid(tmp_path, capsys):
    out_path = tmp_path / "risk.csv"
    code, _, _ = run(capsys, "calibrate", "--alpha", "1", "--n", "6",
                     "--replicas", "400", "--seed", "2",
                     "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0].startswith("# config cmd=calibrate ")
    assert "grid-size=38" in lines[0]
    # a0 = 0.5 skips the first grid value a = 0.5
    assert any(ln.startswith("# skipped") for ln in lines)
    header_at = next(i for i, ln in enumerate(lines)
                     if not ln.startswith("#"))
    assert lines[header_at] == "a,t_eta,risk_hat,se"
    assert len(lines) == header_at + 1 + 38


def test_calibrate_partial_custom_grid_is_domain_error(capsys):
    code, _, err = run(capsys, "calibrate", "--alpha", "1", "--a-min", "0.6",
                       "--replicas", "100")
    assert code == 1
    assert "custom grid" in err


def test_calibrate_custom_grid(capsys):
    code, out, _ = run(capsys, "calibrate", "--alpha", "1", "--n", "6",
                       "--replicas", "400", "--a-min", "0.6",
                       "--a-max", "1.0", "--steps", "3")
    assert code == 0
    rows = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert rows[0] == "a,t_eta,risk_hat,se"
    grid = [float(ln.split(",")[0]) for ln in rows[1:]]
    assert grid == pytest.approx([0.6, 0.8, 1.0])


def test_help_exits_zero(capsys):
    code, _, _ = run(capsys, "--help")
    assert code == 0
    code, _, _ = run(capsys, "simulate", "--help")
    assert code == 0
