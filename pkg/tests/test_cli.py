import json
import subprocess
import sys

import numpy as np
import pytest

from fracdim.cli import main
from fracdim.sampling import read_csv


def run(args):
    return main([str(a) for a in args])


def read_table(path):
    """Parse a toolkit CSV (comment lines, header, float rows) into a
    dict of named columns."""
    header = None
    rows = []
    for line in open(path, encoding="utf-8"):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(x) for x in line.split(",")])
    data = np.asarray(rows)
    return {name: data[:, i] for i, name in enumerate(header)}


def test_derivative_cf_matches_closed_form(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code = run(["derivative", "--kernel", "cf", "--alpha", "0.5",
                "--fn", "t", "--t-max", "5", "--n", "2001", "--output", out])
    assert code == 0
    g = read_csv(out)
    lam = 1.0
    want = 2.0 * -np.expm1(-lam * g.grid.times)
    assert np.max(np.abs(g.values - want)) < 1e-6
    report = capsys.readouterr().out
    assert "time-exponent" in report and "0" in report


def test_derivative_constant_is_zero(tmp_path):
    out = tmp_path / "d.csv"
    assert run(["derivative", "--kernel", "cf", "--alpha", "0.7",
                "--fn", "const:3", "--n", "101", "--output", out]) == 0
    assert np.all(read_csv(out).values == 0.0)


def test_derivative_missing_sigma_exits_2(tmp_path, capsys):
    code = run(["derivative", "--kernel", "sigma-caputo", "--alpha", "0.5",
                "--fn", "t", "--output", tmp_path / "d.csv"])
    assert code == 2
    assert "--sigma" in capsys.readouterr().err
    # and the converse: sigma makes no sense for the other kernels
    code = run(["derivative", "--kernel", "cf", "--alpha", "0.5", "--sigma", "2",
                "--fn", "t", "--output", tmp_path / "d.csv"])
    assert code == 2


def test_derivative_sigma_caputo_dim_report(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code = run(["derivative", "--kernel", "sigma-caputo", "--alpha", "0.5",
                "--sigma", "2.0", "--fn", "t", "--n", "101", "--output", out])
    assert code == 0
    assert "-1" in capsys.readouterr().out


def test_derivative_csv_input_and_parse_error(tmp_path, capsys):
    good = tmp_path / "in.csv"
    good.write_text("t,value\n0,0\n0.5,0.25\n1.0,1.0\n1.5,2.25\n2.0,4.0\n")
    out = tmp_path / "d.csv"
    assert run(["derivative", "--alpha", "1.0", "--input", good, "--output", out]) == 0

    bad = tmp_path / "bad.csv"
    bad.write_text("t,value\n0,0\n0.5,oops\n1.0,1.0\n")
    code = run(["derivative", "--alpha", "0.5", "--input", bad, "--output", out])
    assert code == 2
    assert "line 3" in capsys.readouterr().err


def test_derivative_builtin_function_zoo(tmp_path):
    out = tmp_path / "d.csv"
    # classical branch: backward differences approximate the true
    # derivative of each builtin to O(dt)
    for fn, deriv in [("exp:0.5", lambda t: 0.5 * np.exp(0.5 * t)),
                      ("sin:2", lambda t: 2.0 * np.cos(2.0 * t)),
                      ("t2", lambda t: 2.0 * t)]:
        assert run(["derivative", "--alpha", "1.0", "--fn", fn,
                    "--t-max", "2", "--n", "2001", "--output", out]) == 0
        g = read_csv(out)
        t = g.grid.times[1:]
        assert np.max(np.abs(g.values[1:] - deriv(t))) < 5e-3
    assert run(["derivative", "--alpha", "0.5", "--fn", "cosh:1",
                "--output", out]) == 2


def test_derivative_domain_error_exits_3(tmp_path, capsys):
    # memory integrals are anchored at t = 0; a grid starting later is a
    # domain error, not a parse error
    shifted = tmp_path / "in.csv"
    shifted.write_text("t,value\n1.0,1.0\n1.5,2.0\n2.0,3.0\n")
    code = run(["derivative", "--alpha", "0.5", "--input", shifted,
                "--output", tmp_path / "d.csv"])
    assert code == 3
    assert "t = 0" in capsys.readouterr().err


def test_derivative_rejects_both_fn_and_input(tmp_path, capsys):
    code = run(["derivative", "--alpha", "0.5", "--fn", "t",
                "--input", "x.csv", "--output", tmp_path / "d.csv"])
    assert code == 2


def test_solve_constant_problem(tmp_path, capsys):
    problem = tmp_path / "p.json"
    problem.write_text(json.dumps({
        "alpha": 0.6, "x0": 0.0, "tau_max": 5.0,
        "coefficients": {"kind": "constant", "p": 1.0, "q": 1.0},
    }))
    out = tmp_path / "sol.csv"
    code = run(["solve", "--problem", problem, "--steps", "400", "--output", out])
    assert code == 0
    assert "max |closed - numeric|" in capsys.readouterr().out
    rows = read_table(out)
    # analytic: 1 - exp(-0.6 tau / 1.4)
    want = 1.0 - np.exp(-0.6 * rows["tau"] / 1.4)
    assert np.max(np.abs(rows["x"] - want)) < 1e-9
    assert np.max(np.abs(rows["x_numeric"] - want)) < 1e-9
    # residual column discloses the origin mismatch p(0) x0 - q(0) = -1
    assert rows["residual"][0] == pytest.approx(-1.0, abs=1e-12)


def test_solve_rc_problem_reproduces_closed_form(tmp_path):
    problem = tmp_path / "p.json"
    problem.write_text(json.dumps({
        "alpha": 0.5, "x0": 0.0, "tau_max": 8.0,
        "coefficients": {"kind": "rc", "q0": 1.0},
    }))
    out = tmp_path / "sol.csv"
    assert run(["solve", "--problem", problem, "--steps", "800", "--output", out]) == 0
    rows = read_table(out)
    taus = rows["tau"]
    want = 1.0 - 1.5**2 * (1.0 + 0.5 * taus) * (1.5 + 0.5 * taus) ** -2.0
    assert np.max(np.abs(rows["x"] - want)) < 1e-9


def test_solve_classical_problem_with_named_scales(tmp_path):
    # constant scale sigma = 1/p turns dx/dt + p x = q into unit-coefficient
    # form; the solution in tau must match the direct constant problem
    classical = tmp_path / "classical.json"
    classical.write_text(json.dumps({
        "alpha": 0.6, "x0": 0.0, "tau_max": 5.0,
        "classical": {"p": 2.0, "q": 2.0},
        "scale": {"name": "constant", "sigma": 0.5},
    }))
    out = tmp_path / "sol.csv"
    assert run(["solve", "--problem", classical, "--steps", "200", "--output", out]) == 0
    rows = read_table(out)
    want = 1.0 - np.exp(-0.6 * rows["tau"] / 1.4)
    assert np.max(np.abs(rows["x"] - want)) < 1e-9

    # the charging scale by name, bounded by a time window: the mapped
    # solution must reproduce the ordinary-time charge formula
    from fracdim.rc import RCParams, charge_t
    from fracdim.rescaling import rc_exponential_scale, tau_of_t

    rc_file = tmp_path / "rc_scale.json"
    rc_file.write_text(json.dumps({
        "alpha": 0.5, "x0": 0.0, "t_max": 5.0,
        "classical": {"p": 1.0, "q": 1.0},
        "scale": {"name": "rc-exponential", "gamma": 1.0},
    }))
    out2 = tmp_path / "sol2.csv"
    assert run(["solve", "--problem", rc_file, "--steps", "400", "--output", out2]) == 0
    rows2 = read_table(out2)
    scale = rc_exponential_scale(1.0)
    params = RCParams.from_rate(1.0, 1.0)
    # invert tau -> t for the output grid and compare
    from fracdim.rescaling import t_of_tau

    t_nodes = t_of_tau(scale, rows2["tau"], 0.5)
    assert np.max(np.abs(rows2["x"] - charge_t(params, t_nodes, 0.5))) < 1e-8
    assert rows2["tau"][-1] == pytest.approx(tau_of_t(scale, 5.0, 0.5), rel=1e-12)


def test_solve_tabulated_scale(tmp_path):
    # a tabulated copy of the charging scale at one order
    from fracdim.rescaling import rc_exponential_scale

    ref = rc_exponential_scale(1.0)
    t_nodes = np.linspace(0.0, 8.0, 800)
    table = tmp_path / "phi.csv"
    table.write_text(
        "t,phi\n" + "\n".join(f"{t},{ref.phi(t, 0.5)}" for t in t_nodes) + "\n"
    )
    problem = tmp_path / "p.json"
    problem.write_text(json.dumps({
        "alpha": 0.5, "x0": 0.0, "t_max": 4.0,
        "classical": {"p": 1.0, "q": 1.0},
        "scale": {"name": "tabulated", "path": str(table)},
    }))
    out = tmp_path / "sol.csv"
    assert run(["solve", "--problem", problem, "--steps", "100", "--output", out]) == 0
    rows = read_table(out)
    from fracdim.rc import RCParams, charge_tau, c0_for_zero_start

    params = RCParams.from_rate(1.0, 1.0)
    want = charge_tau(params, rows["tau"], 0.5, c0_for_zero_start(params, 0.5))
    assert np.max(np.abs(rows["x"] - want)) < 1e-4  # interpolated scale


def test_solve_unknown_scale_name_exits_2(tmp_path, capsys):
    problem = tmp_path / "p.json"
    problem.write_text(json.dumps({
        "alpha": 0.5, "x0": 0.0, "tau_max": 5.0,
        "classical": {"p": 1.0, "q": 1.0},
        "scale": {"name": "warp"},
    }))
    assert run(["solve", "--problem", problem, "--output", tmp_path / "s.csv"]) == 2
    assert "rc-exponential" in capsys.readouterr().err


def test_solve_singular_problem_exits_4(tmp_path, capsys):
    table = tmp_path / "coeffs.csv"
    taus = np.linspace(0.0, 5.0, 11)
    ps = 0.5 - 1.0 * taus  # a = 1 + 0.5 p crosses zero where p = -2
    lines = ["tau,p,q"] + [f"{t},{p},1.0" for t, p in zip(taus, ps)]
    table.write_text("\n".join(lines) + "\n")
    problem = tmp_path / "p.json"
    problem.write_text(json.dumps({
        "alpha": 0.5, "x0": 0.0, "tau_max": 5.0,
        "coefficients": {"kind": "tabulated", "path": str(table)},
    }))
    code = run(["solve", "--problem", problem, "--output", tmp_path / "s.csv"])
    assert code == 4
    assert "tau = 2.5" in capsys.readouterr().err


def test_solve_bad_problem_file_exits_2(tmp_path):
    problem = tmp_path / "p.json"
    problem.write_text("{not json")
    assert run(["solve", "--problem", problem, "--output", tmp_path / "s.csv"]) == 2
    problem.write_text(json.dumps({"alpha": 0.5}))
    assert run(["solve", "--problem", problem, "--output", tmp_path / "s.csv"]) == 2


def test_rc_default_sweep(tmp_path):
    out = tmp_path / "rc.csv"
    assert run(["rc", "--gamma", "1", "--q0", "1", "--n", "201", "--output", out]) == 0
    rows = read_table(out)
    alphas = sorted(set(rows["alpha"].tolist()))
    assert alphas == [0.5, 0.7, 0.9, 1.0]
    for alpha in alphas:
        mask = rows["alpha"] == alpha
        assert rows["V_C"][mask][0] == 0.0
        assert mask.sum() == 201
    classical = rows["V_C"][rows["alpha"] == 1.0]
    assert abs(classical[-1] - -np.expm1(-8.0)) < 1e-12


def test_rc_two_node_grid(tmp_path):
    out = tmp_path / "rc.csv"
    assert run(["rc", "--gamma", "1", "--n", "2", "--alpha", "1.0", "--output", out]) == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(lines) == 3  # header + 2 rows


def test_rc_runs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["rc", "--gamma", "1", "--q0", "1", "--n", "301"]
    assert run(args + ["--output", a]) == 0
    assert run(args + ["--output", b]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_rc_workers_preserve_order_and_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["rc", "--n", "101", "--output", a]) == 0
    assert run(["rc", "--n", "101", "--workers", "4", "--output", b]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_rc_split_files_and_charge_quantity(tmp_path):
    out = tmp_path / "rc.csv"
    code = run(["rc", "--resistance", "2.0", "--capacitance", "0.5", "--v0", "3.0",
                "--alpha", "0.5,1.0", "--n", "51", "--quantity", "charge",
                "--split", "--output", out])
    assert code == 0
    split_a = tmp_path / "rc_alpha0.5.csv"
    split_b = tmp_path / "rc_alpha1.csv"
    assert split_a.exists() and split_b.exists()
    rows = read_table(split_b)
    assert rows["q"][-1] == pytest.approx(1.5 * -np.expm1(-1.0 * rows["t"][-1]), abs=1e-12)


def test_rc_conflicting_parameter_styles(tmp_path, capsys):
    code = run(["rc", "--gamma", "1", "--resistance", "1", "--capacitance", "1",
                "--v0", "1", "--output", tmp_path / "rc.csv"])
    assert code == 2


def test_rc_bad_alpha_list(tmp_path):
    assert run(["rc", "--alpha", "0.5,2.0", "--output", tmp_path / "rc.csv"]) == 2
    assert run(["rc", "--alpha", "zap", "--output", tmp_path / "rc.csv"]) == 2


def test_output_dir_env_override(tmp_path, monkeypatch):
    outdir = tmp_path / "results"
    monkeypatch.setenv("FRACDIM_OUTDIR", str(outdir))
    assert run(["rc", "--n", "11", "--alpha", "1.0", "--output", "rc.csv"]) == 0
    assert (outdir / "rc.csv").exists()


def test_config_file_seeds_flags(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": "1.0", "n": 11, "gamma": 2.0}))
    out = tmp_path / "rc.csv"
    assert run(["rc", "--config", cfg, "--output", out]) == 0
    rows = read_table(out)
    assert set(rows["alpha"].tolist()) == {1.0}
    assert len(rows["alpha"]) == 11


def test_verify_classical_subset_passes(capsys):
    assert run(["verify", "--alpha", "1.0"]) == 0
    out = capsys.readouterr().out
    assert "[SKIP]" in out and "[FAIL]" not in out


def test_verify_fault_injection_fails(capsys):
    code = run(["verify", "--alpha", "0.5", "--fault-scale-normalization", "1.01"])
    assert code == 1
    out = capsys.readouterr().out
    assert "[FAIL] cf-derivative-closed-form" in out
    assert "[FAIL] cf-laplace-identity" in out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fracdim.cli", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "fracdim" in proc.stdout
