"""Command-line front end.

Subcommands:

    derivative   evaluate a fractional derivative of a sampled function
    solve        solve a linear fractional problem, closed form + numeric
    rc           emit charging curves for the RC worked example
    verify       run the built-in property suite

Outputs are CSV with a leading provenance comment (tool version,
subcommand, full parameter set) and no timestamps, so identical configs
produce byte-identical files.  Exit statuses: 0 ok, 1 verification or
tolerance failure, 2 config/parse error, 3 domain error, 4 singularity.

A JSON config file can pre-seed any flag (--config); explicit flags win.
The FRACDIM_OUTDIR environment variable redirects relative output paths.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, dims, rc, rescaling, solver, verify
from .curves import write_curve_csv, write_long_csv
from .errors import (
    ConfigError,
    CsvParseError,
    DomainError,
    FracdimError,
    SingularityError,
)
from .kernels import (
    DEFAULT_NORMALIZATION,
    KernelNormalization,
    caputo_derivative,
    cf_derivative,
    sigma_rescaled_caputo,
)

_KERNEL_TO_OPERATOR = {
    "cf": "caputo_fabrizio",
    "caputo": "caputo",
    "sigma-caputo": "sigma_rescaled_caputo",
}
from .sampling import SampledFunction, UniformGrid, from_callable, read_csv, write_csv

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_SINGULARITY = 4


def _parse_alpha_list(text):
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"could not parse order list {text!r}") from None
    if not values:
        raise ConfigError("order list is empty")
    for a in values:
        if not (0.0 < a <= 1.0):
            raise ConfigError(f"orders must lie in (0, 1], got {a}")
    return values


def _builtin_function(text):
    """Test functions for --fn: const:c, t, t2, exp:k, sin:w."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "const":
            c = float(arg or "1")
            return lambda t: np.full_like(np.asarray(t, dtype=float), c)
        if kind == "t" and not arg:
            return lambda t: np.asarray(t, dtype=float)
        if kind == "t2" and not arg:
            return lambda t: np.asarray(t, dtype=float) ** 2
        if kind == "exp":
            k = float(arg or "1")
            return lambda t: np.exp(k * np.asarray(t, dtype=float))
        if kind == "sin":
            w = float(arg or "1")
            return lambda t: np.sin(w * np.asarray(t, dtype=float))
    except ValueError:
        raise ConfigError(f"bad numeric parameter in --fn {text!r}") from None
    raise ConfigError(
        f"unknown --fn {text!r}; expected const:c, t, t2, exp:k, or sin:w"
    )


def _resolve_output(path):
    outdir = os.environ.get("FRACDIM_OUTDIR")
    if outdir and not os.path.isabs(path):
        os.makedirs(outdir, exist_ok=True)
        return os.path.join(outdir, path)
    return path


def _provenance(subcommand, params):
    fields = " ".join(f"{k}={params[k]}" for k in sorted(params))
    return f"fracdim {__version__} {subcommand} {fields}"


def _add_config_defaults(subparsers, argv):
    """Apply --config JSON values as defaults on the chosen subcommand's
    parser (explicit flags still win)."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return
    chosen = next((a for a in argv if a in subparsers), None)
    if chosen is None:
        return
    try:
        with open(known.config, "r", encoding="utf-8") as src:
            loaded = json.load(src)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(loaded, dict):
        raise ConfigError("config file must hold a JSON object of flag values")
    sub = subparsers[chosen]
    valid = {action.dest for action in sub._actions}
    defaults = {}
    for key, value in loaded.items():
        dest = key.replace("-", "_")
        if dest not in valid:
            raise ConfigError(f"config key {key!r} is not a {chosen} flag")
        defaults[dest] = value
    sub.set_defaults(**defaults)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fracdim",
        description="Fractional-calculus numerics with dimensional bookkeeping.",
    )
    parser.add_argument("--version", action="version", version=f"fracdim {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    d = sub.add_parser("derivative", help="fractional derivative of a sampled function")
    d.add_argument("--config", help="JSON file of default flag values")
    d.add_argument("--kernel", choices=("cf", "caputo", "sigma-caputo"), default="cf")
    d.add_argument("--alpha", type=float, required=True, help="order in (0, 1]")
    d.add_argument("--sigma", type=float, help="seconds; required for sigma-caputo")
    d.add_argument("--input", help="CSV of t,value samples (uniform grid from t=0)")
    d.add_argument("--fn", help="built-in input: const:c, t, t2, exp:k, sin:w")
    d.add_argument("--t-max", type=float, default=5.0, help="grid end when using --fn")
    d.add_argument("--n", type=int, default=1001, help="grid nodes when using --fn")
    d.add_argument("--output", default="derivative.csv")

    s = sub.add_parser("solve", help="solve D^a x + p(tau) x = q(tau)")
    s.add_argument("--config", help="JSON file of default flag values")
    s.add_argument("--problem", required=True, help="JSON problem definition")
    s.add_argument("--steps", type=int, default=4000, help="numeric-integrator steps")
    s.add_argument("--tolerance", type=float, default=1e-6,
                   help="max allowed closed-vs-numeric discrepancy")
    s.add_argument("--output", default="solution.csv")

    r = sub.add_parser("rc", help="RC charging curves for an order sweep")
    r.add_argument("--config", help="JSON file of default flag values")
    r.add_argument("--gamma", type=float, help="1/(R C) in 1/s (with --q0)")
    r.add_argument("--q0", type=float, help="asymptotic charge in C (with --gamma)")
    r.add_argument("--resistance", type=float, help="ohms (with --capacitance, --v0)")
    r.add_argument("--capacitance", type=float, help="farads")
    r.add_argument("--v0", type=float, help="source voltage in volts")
    r.add_argument("--alpha", default="0.5,0.7,0.9,1.0",
                   help="comma-separated order sweep")
    r.add_argument("--t-max", type=float, help="grid end in seconds (default 8/gamma)")
    r.add_argument("--n", type=int, default=401, help="grid nodes")
    r.add_argument("--quantity", choices=("voltage", "charge"), default="voltage")
    r.add_argument("--split", action="store_true",
                   help="one CSV per order instead of one long-format file")
    r.add_argument("--workers", type=int, default=1,
                   help="threads for the order sweep (output order is fixed)")
    r.add_argument("--output", default="rc.csv")

    v = sub.add_parser("verify", help="run the property suite")
    v.add_argument("--config", help="JSON file of default flag values")
    v.add_argument("--alpha", default=None,
                   help="comma-separated orders to exercise (default built-in sweep)")
    v.add_argument("--seed", type=int, default=20231, help="seed for random inputs")
    v.add_argument("--fault-scale-normalization", type=float, default=None,
                   help="internal test hook: multiply M(alpha) by this factor")
    return parser, {"derivative": d, "solve": s, "rc": r, "verify": v}


def run_derivative(args) -> int:
    if (args.input is None) == (args.fn is None):
        raise ConfigError("exactly one of --input or --fn is required")
    if args.kernel == "sigma-caputo" and args.sigma is None:
        raise ConfigError("--sigma is required when --kernel sigma-caputo")
    if args.kernel != "sigma-caputo" and args.sigma is not None:
        raise ConfigError("--sigma only applies to --kernel sigma-caputo")

    if args.input is not None:
        f = read_csv(args.input)
    else:
        if args.n < 2:
            raise ConfigError(f"--n must be at least 2, got {args.n}")
        grid = UniformGrid.from_range(args.t_max, args.n)
        f = from_callable(_builtin_function(args.fn), grid)

    if args.kernel == "cf":
        g = cf_derivative(f, args.alpha)
    elif args.kernel == "caputo":
        g = caputo_derivative(f, args.alpha)
    else:
        g = sigma_rescaled_caputo(f, args.alpha, dims.seconds(args.sigma))

    kind = _KERNEL_TO_OPERATOR[args.kernel]
    params = {
        "kernel": args.kernel,
        "alpha": args.alpha,
        "sigma": args.sigma,
        "input": args.input or args.fn,
        "n": f.grid.n,
        "dt": f.grid.dt,
    }
    out = _resolve_output(args.output)
    write_csv(g, out, comment=_provenance("derivative", params))
    print(f"wrote {out}")
    print("time-exponent report:")
    print(f"  input value:        {f.dim}")
    print(f"  operator ({args.kernel}) adds: {dims.dim_of_operator(kind)}")
    print(f"  output value:       {g.dim}")
    return EXIT_OK


def _scale_by_name(block):
    """Build a time scale from a config parameter block: constant
    (sigma), rc-exponential (gamma), or tabulated (path to t,phi CSV)."""
    try:
        name = block["name"]
    except (KeyError, TypeError):
        raise ConfigError("scale block needs a 'name'") from None
    if name == "constant":
        try:
            return rescaling.constant_scale(float(block["sigma"]))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"constant scale needs 'sigma': {exc}") from exc
    if name == "rc-exponential":
        try:
            return rescaling.rc_exponential_scale(float(block["gamma"]))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"rc-exponential scale needs 'gamma': {exc}") from exc
    if name == "tabulated":
        try:
            path = block["path"]
        except KeyError:
            raise ConfigError("tabulated scale needs a 'path'") from None
        t_nodes, phi_values = _read_two_column_table(path, "t", "phi")
        return rescaling.tabulated_scale(t_nodes, phi_values)
    raise ConfigError(
        f"unknown scale name {name!r}; expected constant, rc-exponential, or tabulated"
    )


def _load_problem(path):
    try:
        with open(path, "r", encoding="utf-8") as src:
            data = json.load(src)
    except OSError as exc:
        raise ConfigError(f"cannot read problem file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"problem file is not valid JSON: {exc}") from exc

    if "classical" in data or "scale" in data:
        return _load_rescaled_problem(data)

    try:
        alpha = float(data["alpha"])
        x0 = float(data.get("x0", 0.0))
        tau_max = float(data["tau_max"])
        coeff = data["coefficients"]
        kind = coeff["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"problem file missing or malformed field: {exc}") from exc

    if kind == "constant":
        try:
            p_const = float(coeff["p"])
            q_const = float(coeff["q"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"constant coefficients need p and q: {exc}") from exc
        return solver.LinearFDEProblem(
            p=lambda tau: p_const,
            q=lambda tau: q_const,
            p_deriv=lambda tau: 0.0,
            q_deriv=lambda tau: 0.0,
            alpha=alpha,
            x0=x0,
            tau_max=tau_max,
        )
    if kind == "rc":
        try:
            q0 = float(coeff.get("q0", 1.0))
        except ValueError as exc:
            raise ConfigError(f"rc coefficients: {exc}") from exc
        shrink = 1.0 - alpha

        def p_fun(tau):
            return 1.0 / (1.0 + shrink * tau)

        def p_deriv(tau):
            return -shrink / (1.0 + shrink * tau) ** 2

        return solver.LinearFDEProblem(
            p=p_fun,
            q=lambda tau: q0 * p_fun(tau),
            p_deriv=p_deriv,
            q_deriv=lambda tau: q0 * p_deriv(tau),
            alpha=alpha,
            x0=x0,
            tau_max=tau_max,
            mu_closed_form=(
                lambda tau: np.exp(
                    (alpha / shrink) * np.log((2.0 - alpha + shrink * tau) / (2.0 - alpha))
                )
            )
            if shrink > 0
            else None,
        )
    if kind == "tabulated":
        try:
            table_path = coeff["path"]
        except KeyError:
            raise ConfigError("tabulated coefficients need a 'path'") from None
        taus, ps, qs = _read_coefficient_table(table_path)
        from scipy.interpolate import PchipInterpolator

        p_interp = PchipInterpolator(taus, ps, extrapolate=True)
        q_interp = PchipInterpolator(taus, qs, extrapolate=True)
        dp = p_interp.derivative()
        dq = q_interp.derivative()
        return solver.LinearFDEProblem(
            p=lambda tau: float(p_interp(tau)),
            q=lambda tau: float(q_interp(tau)),
            p_deriv=lambda tau: float(dp(tau)),
            q_deriv=lambda tau: float(dq(tau)),
            alpha=alpha,
            x0=x0,
            tau_max=tau_max,
        )
    raise ConfigError(f"unknown coefficient kind {kind!r}")


def _load_rescaled_problem(data):
    """Classical constant-coefficient problem plus a named time scale."""
    try:
        alpha = float(data["alpha"])
        x0 = float(data.get("x0", 0.0))
        classical = data["classical"]
        ode = rescaling.ClassicalLinearODE(
            p=float(classical["p"]), q=float(classical["q"]), x0=x0
        )
        scale = _scale_by_name(data["scale"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"problem file missing or malformed field: {exc}") from exc
    if "tau_max" in data:
        tau_max = float(data["tau_max"])
    elif "t_max" in data:
        tau_max = rescaling.tau_of_t(scale, float(data["t_max"]), alpha)
    else:
        raise ConfigError("rescaled problem needs tau_max or t_max")
    return rescaling.rescale_problem(ode, scale, alpha, tau_max=tau_max)


def _read_two_column_table(path, first, second):
    xs, ys = [], []
    try:
        src = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read table: {exc}") from exc
    with src:
        for lineno, raw in enumerate(src, start=1):
            line = raw.strip()
            if not line or line.startswith("#") or line.lower().startswith(first):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise CsvParseError(
                    f"line {lineno}: expected {first},{second}", line_number=lineno
                )
            try:
                xs.append(float(parts[0]))
                ys.append(float(parts[1]))
            except ValueError:
                raise CsvParseError(
                    f"line {lineno}: could not parse {line!r}", line_number=lineno
                ) from None
    if len(xs) < 2:
        raise CsvParseError(f"{path}: need at least 2 data rows")
    return np.asarray(xs), np.asarray(ys)


def _read_coefficient_table(path):
    taus, ps, qs = [], [], []
    try:
        src = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read coefficient table: {exc}") from exc
    with src:
        for lineno, raw in enumerate(src, start=1):
            line = raw.strip()
            if not line or line.startswith("#") or line.lower().startswith("tau"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise CsvParseError(
                    f"line {lineno}: expected tau,p,q", line_number=lineno
                )
            try:
                taus.append(float(parts[0]))
                ps.append(float(parts[1]))
                qs.append(float(parts[2]))
            except ValueError:
                raise CsvParseError(
                    f"line {lineno}: could not parse {line!r}", line_number=lineno
                ) from None
    if len(taus) < 2:
        raise CsvParseError("coefficient table needs at least 2 rows")
    return np.asarray(taus), np.asarray(ps), np.asarray(qs)


def run_solve(args) -> int:
    problem = _load_problem(args.problem)
    closed = solver.solve_closed_form(problem)
    numeric = solver.solve_numeric(problem, args.steps)
    taus = numeric.grid.times
    closed_values = closed.evaluate_many(taus)
    residual = solver.cf_residual(problem, SampledFunction(numeric.grid, closed_values))
    discrepancy = float(np.max(np.abs(closed_values - numeric.values)))

    params = {
        "problem": args.problem,
        "alpha": problem.alpha,
        "x0": problem.x0,
        "tau_max": problem.tau_max,
        "steps": args.steps,
        "tolerance": args.tolerance,
    }
    out = _resolve_output(args.output)
    with open(out, "w", encoding="utf-8") as sink:
        sink.write(f"# {_provenance('solve', params)}\n")
        sink.write(f"# max_discrepancy={discrepancy:.17g}\n")
        sink.write("tau,x,x_numeric,residual\n")
        for tk, xc, xn, rk in zip(taus, closed_values, numeric.values, residual.values):
            sink.write(f"{tk:.17g},{xc:.17g},{xn:.17g},{rk:.17g}\n")
    print(f"wrote {out}")
    print(f"max |closed - numeric| = {discrepancy:.6e} (tolerance {args.tolerance:g})")
    print(f"residual at tau=0: {residual.values[0]:.6e} (integral-equation mismatch)")
    if discrepancy > args.tolerance:
        print("FAIL: closed-form and numeric solutions disagree beyond tolerance")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def run_rc(args) -> int:
    has_rate = args.gamma is not None or args.q0 is not None
    has_parts = any(v is not None for v in (args.resistance, args.capacitance, args.v0))
    if has_rate and has_parts:
        raise ConfigError("give either --gamma/--q0 or --resistance/--capacitance/--v0")
    if has_parts:
        if None in (args.resistance, args.capacitance, args.v0):
            raise ConfigError("--resistance, --capacitance, and --v0 go together")
        params = rc.RCParams(args.resistance, args.capacitance, args.v0)
    else:
        gamma = args.gamma if args.gamma is not None else 1.0
        q0 = args.q0 if args.q0 is not None else 1.0
        params = rc.RCParams.from_rate(gamma, q0)

    alphas = _parse_alpha_list(args.alpha) if isinstance(args.alpha, str) else list(args.alpha)
    t_max = args.t_max if args.t_max is not None else 8.0 / params.gamma
    if args.n < 2:
        raise ConfigError(f"--n must be at least 2, got {args.n}")
    grid = UniformGrid.from_range(t_max, args.n)

    def one_curve(alpha):
        return rc.figure2_curves(params, [alpha], grid)[0]

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            curves = list(pool.map(one_curve, alphas))  # preserves sweep order
    else:
        curves = [one_curve(a) for a in alphas]

    if args.quantity == "charge":
        for curve in curves:
            curve.rows[:, 1] *= params.capacitance
        value_name = "q"
    else:
        value_name = "V_C"

    meta = {
        "gamma": params.gamma,
        "q0": params.q0,
        "alpha": ",".join(f"{a:g}" for a in alphas),
        "t_max": t_max,
        "n": args.n,
        "quantity": args.quantity,
    }
    out = _resolve_output(args.output)
    if args.split:
        base, ext = os.path.splitext(out)
        names = []
        for curve in curves:
            path = f"{base}_alpha{curve.alpha:g}{ext or '.csv'}"
            write_curve_csv(curve, path, value_name=value_name,
                            comment=_provenance("rc", meta))
            names.append(path)
        print("wrote " + ", ".join(names))
    else:
        write_long_csv(curves, out, value_name=value_name,
                       comment=_provenance("rc", meta))
        print(f"wrote {out}")
    return EXIT_OK


def run_verify(args) -> int:
    alphas = _parse_alpha_list(args.alpha) if args.alpha else None
    normalization = DEFAULT_NORMALIZATION
    if args.fault_scale_normalization is not None:
        factor = args.fault_scale_normalization
        normalization = KernelNormalization(lambda a: factor * 2.0 / (2.0 - a))
    results = verify.run_checks(alphas=alphas, normalization=normalization, seed=args.seed)
    failures = 0
    for result in results:
        if result.skipped:
            flag = "SKIP"
        elif result.passed:
            flag = "PASS"
        else:
            flag = "FAIL"
            failures += 1
        print(f"[{flag}] {result.name}: {result.detail}")
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()
    try:
        _add_config_defaults(subparsers, argv)
        args = parser.parse_args(argv)
        handler = {
            "derivative": run_derivative,
            "solve": run_solve,
            "rc": run_rc,
            "verify": run_verify,
        }[args.subcommand]
        return handler(args)
    except (ConfigError, CsvParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULARITY
    except (DomainError, FracdimError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
