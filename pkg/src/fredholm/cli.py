"""Command-line front end: JSON problem configs in, result tables out.

Four subcommands: ``solve`` runs a config file, ``example`` runs a
registry entry with pinned settings, ``compare-fd`` runs the
finite-difference reference on the disc, and ``selftest`` validates the
registry.  Exit codes: 0 success, 2 for validation problems (bad config,
bad expression, bad flags), 3 for numerical failures (divergence, domain
violations, non-convergence, singular systems).
"""

import argparse
import json
import sys
import time
from typing import Callable, Dict, Optional

import numpy as np

from . import exprlang
from .bvp import BvpSpec, bvp_to_fie, ode_residual, recover_solution
from .errors import NumericalError, ValidationError
from .grid import uniform_grid
from .laplace import (BoundaryDensity, DiscBoundaryProblem, build_bie,
                      evaluate_potential)
from .network import (budget_from_operator, build_network, error_bound,
                      forward, km_error_estimate, layer_sweep, query)
from .nonlinear import NonlinearProblem, evaluate_nonlinear, solve_nonlinear
from .operator import (FieProblem, KMSchedule, discretize,
                       estimate_contraction)
from .registry import EXAMPLES, example_names, get_example
from .report import ReportBundle, write_report
from .fd import solve_fd

__all__ = ["main", "run_config", "run_example", "run_compare_fd"]

_KINDS = {
    "linear_fie": {
        "required": {"kernel", "source", "domain", "grid_n", "layers"},
        "optional": {"grid_scheme", "kappa", "queries", "exact"},
    },
    "nonlinear_fie": {
        "required": {"kernel", "source", "nonlinearity", "domain", "grid_n",
                     "layers", "outer_iterations"},
        "optional": {"grid_scheme", "kappa", "queries", "exact"},
    },
    "bvp": {
        "required": {"g", "h", "alpha", "beta", "grid_n", "layers"},
        "optional": {"grid_scheme", "kappa", "queries", "exact"},
    },
    "laplace_disc": {
        "required": {"boundary", "theta_n", "layers"},
        "optional": {"kappa", "queries", "exact"},
    },
}

_DEFAULT_POLAR_QUERIES = {"r": "0:1:11", "phi": f"0:{2.0 * np.pi!r}:17"}


def _fail(key: str, reason: str):
    raise ValidationError(f"config key {key!r}: {reason}")


def _check_schema(config: dict):
    kind = config.get("kind")
    if kind not in _KINDS:
        raise ValidationError(
            f"config key 'kind': must be one of {sorted(_KINDS)}, "
            f"got {kind!r}")
    spec = _KINDS[kind]
    keys = set(config) - {"kind"}
    missing = spec["required"] - keys
    if missing:
        raise ValidationError(
            f"config for kind {kind!r} is missing {sorted(missing)}")
    unknown = keys - spec["required"] - spec["optional"]
    if unknown:
        raise ValidationError(
            f"config for kind {kind!r} has unknown keys {sorted(unknown)}")


def _compile_expr(config: dict, key: str, params) -> Callable:
    text = config[key]
    if not isinstance(text, str):
        _fail(key, f"must be an expression string, got {type(text).__name__}")
    try:
        tree = exprlang.parse(text)
    except ValidationError as exc:
        _fail(key, str(exc))
    extra = exprlang.free_vars(tree) - set(params)
    if extra:
        _fail(key, f"unexpected variable(s) {sorted(extra)}; "
                   f"allowed: {list(params)}")
    return exprlang.compile_fn(tree, params)


def _opt_exact(config: dict, params,
               override: Optional[Callable]) -> Optional[Callable]:
    if override is not None:
        return override
    if "exact" in config:
        return _compile_expr(config, "exact", params)
    return None


def _as_float(config: dict, key: str) -> float:
    v = config[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(key, f"must be a number, got {v!r}")
    if not np.isfinite(v):
        _fail(key, f"must be finite, got {v!r}")
    return float(v)


def _as_pos_int(config: dict, key: str) -> int:
    v = config[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        _fail(key, f"must be a positive integer, got {v!r}")
    return v


def _domain(config: dict):
    dom = config["domain"]
    if (not isinstance(dom, (list, tuple)) or len(dom) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float))
                   for v in dom)):
        _fail("domain", f"must be a [a, b] number pair, got {dom!r}")
    a, b = float(dom[0]), float(dom[1])
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        _fail("domain", f"needs finite a < b, got [{a}, {b}]")
    return a, b


def _parse_linspace(text: str, key: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        _fail(key, f"range {text!r} must look like start:stop:count")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        _fail(key, f"cannot parse range {text!r}")
    if not (np.isfinite(a) and np.isfinite(b)) or a > b or n < 1:
        _fail(key, f"range {text!r} needs finite start <= stop and count >= 1")
    return np.linspace(a, b, n)


def _queries_1d(config: dict, a: float, b: float) -> np.ndarray:
    q = config.get("queries")
    if q is None:
        return np.linspace(a, b, 101)
    if isinstance(q, str):
        return _parse_linspace(q, "queries")
    if isinstance(q, (list, tuple)):
        try:
            return np.asarray([float(v) for v in q])
        except (TypeError, ValueError):
            _fail("queries", f"list entries must be numbers, got {q!r}")
    _fail("queries", f"must be a start:stop:count string or a number list, "
                     f"got {q!r}")


def _queries_polar(config: dict) -> np.ndarray:
    q = config.get("queries", _DEFAULT_POLAR_QUERIES)
    if isinstance(q, dict):
        unknown = set(q) - {"r", "phi"}
        if unknown or set(q) != {"r", "phi"}:
            _fail("queries", "polar lattice needs exactly the keys r and phi")
        if not isinstance(q["r"], str) or not isinstance(q["phi"], str):
            _fail("queries", "lattice ranges must be start:stop:count strings")
        rs = _parse_linspace(q["r"], "queries.r")
        phis = _parse_linspace(q["phi"], "queries.phi")
        return np.asarray([(r, p) for r in rs for p in phis])
    if isinstance(q, (list, tuple)):
        pairs = []
        for item in q:
            if (not isinstance(item, (list, tuple)) or len(item) != 2
                    or any(isinstance(v, bool) or not isinstance(v, (int, float))
                           for v in item)):
                _fail("queries", f"entries must be [r, phi] pairs, got {item!r}")
            pairs.append((float(item[0]), float(item[1])))
        return np.asarray(pairs)
    _fail("queries", f"must be an r/phi lattice or a pair list, got {q!r}")


def _schedule(config: dict, q_est: float, default_kappa: float) -> KMSchedule:
    kappa = config.get("kappa", default_kappa)
    if isinstance(kappa, (list, tuple)):
        if any(isinstance(v, bool) or not isinstance(v, (int, float))
               for v in kappa):
            _fail("kappa", f"sequence entries must be numbers, got {kappa!r}")
        values = [float(v) for v in kappa]
    elif isinstance(kappa, bool) or not isinstance(kappa, (int, float)):
        _fail("kappa", f"must be a number or number list, got {kappa!r}")
    else:
        values = float(kappa)
    try:
        return KMSchedule(values, contractive=q_est < 1.0)
    except ValidationError as exc:
        _fail("kappa", str(exc))


def _rows_1d(pts: np.ndarray, vals: np.ndarray,
             exact: Optional[Callable]):
    if exact is None:
        return [(float(x), float(v), None, None)
                for x, v in zip(pts, vals)]
    ex = np.broadcast_to(np.asarray(exact(pts), dtype=float), pts.shape)
    return [(float(x), float(v), float(e), float(abs(v - e)))
            for x, v, e in zip(pts, vals, ex)]


def _base_metadata(config: dict, deterministic: bool) -> dict:
    return {
        "config": config,
        "deterministic": bool(deterministic),
        "runtime_seconds": None,
    }


def _run_linear(config: dict, exact_override, sweep_layers, deterministic):
    a, b = _domain(config)
    kernel = _compile_expr(config, "kernel", ("x", "z"))
    source = _compile_expr(config, "source", ("x",))
    exact = _opt_exact(config, ("x",), exact_override)
    n = _as_pos_int(config, "grid_n")
    layers = _as_pos_int(config, "layers")
    scheme = config.get("grid_scheme", "left")
    pts = _queries_1d(config, a, b)

    started = time.perf_counter()
    grid = uniform_grid(a, b, n, scheme=scheme)
    problem = FieProblem(kernel=kernel, source=source, a=a, b=b)
    op = discretize(problem, grid)
    q_est = estimate_contraction(op)
    schedule = _schedule(config, q_est, default_kappa=1.0)
    net = build_network(op, layers, schedule)
    field = forward(net)
    vals = query(net, field, pts)
    budget = budget_from_operator(op)
    contractive = q_est < 1.0
    sweep = (layer_sweep(op, schedule, sweep_layers, exact, pts)
             if sweep_layers else None)
    elapsed = time.perf_counter() - started

    meta = _base_metadata(config, deterministic)
    meta.update({
        "grid_n": n, "scheme": scheme, "layers": layers,
        "grid_iterations": layers - 1,
        "kappa": config.get("kappa", 1.0),
        "km_schedule_valid": schedule.valid_km,
        "q_est": q_est,
        "residual": budget.residual,
        "derivative_bound": budget.derivative_bound,
        "error_bound": error_bound(budget, layers) if contractive else None,
        "km_estimate": (km_error_estimate(budget, schedule, layers)
                        if contractive else None),
    })
    if not deterministic:
        meta["runtime_seconds"] = elapsed
    return ReportBundle(kind="linear_fie",
                        columns=("x", "value", "exact", "abs_err"),
                        rows=_rows_1d(pts, vals, exact),
                        sweep=sweep, metadata=meta)


def _run_nonlinear(config: dict, exact_override, sweep_layers, deterministic):
    a, b = _domain(config)
    kernel = _compile_expr(config, "kernel", ("x", "z"))
    source = _compile_expr(config, "source", ("x",))
    nonlinearity = _compile_expr(config, "nonlinearity", ("u",))
    exact = _opt_exact(config, ("x",), exact_override)
    n = _as_pos_int(config, "grid_n")
    layers = _as_pos_int(config, "layers")
    outer = _as_pos_int(config, "outer_iterations")
    scheme = config.get("grid_scheme", "left")
    pts = _queries_1d(config, a, b)

    started = time.perf_counter()
    grid = uniform_grid(a, b, n, scheme=scheme)
    problem = NonlinearProblem(kernel=kernel, source=source,
                               nonlinearity=nonlinearity, a=a, b=b)
    base = discretize(problem.linear_problem(), grid)
    q_est = estimate_contraction(base)
    schedule = _schedule(config, q_est, default_kappa=1.0)
    field, trace = solve_nonlinear(problem, grid, layers, schedule, outer)
    vals = evaluate_nonlinear(problem, base, field, pts)
    sweep = (layer_sweep(base, schedule, sweep_layers)
             if sweep_layers else None)
    elapsed = time.perf_counter() - started

    meta = _base_metadata(config, deterministic)
    meta.update({
        "grid_n": n, "scheme": scheme, "layers": layers,
        "grid_iterations": layers - 1,
        "kappa": config.get("kappa", 1.0),
        "km_schedule_valid": schedule.valid_km,
        "q_est": q_est,
        "outer_iterations": outer,
        "outer_deltas": [float(d) for d in trace.deltas],
        "final_delta": float(trace.deltas[-1]) if trace.deltas else None,
    })
    if not deterministic:
        meta["runtime_seconds"] = elapsed
    return ReportBundle(kind="nonlinear_fie",
                        columns=("x", "value", "exact", "abs_err"),
                        rows=_rows_1d(pts, vals, exact),
                        sweep=sweep, metadata=meta)


def _run_bvp(config: dict, exact_override, sweep_layers, deterministic):
    g = _compile_expr(config, "g", ("x",))
    h = _compile_expr(config, "h", ("x",))
    exact = _opt_exact(config, ("x",), exact_override)
    alpha = _as_float(config, "alpha")
    beta = _as_float(config, "beta")
    n = _as_pos_int(config, "grid_n")
    layers = _as_pos_int(config, "layers")
    scheme = config.get("grid_scheme", "left")
    pts = _queries_1d(config, 0.0, 1.0)

    started = time.perf_counter()
    spec = BvpSpec(g=g, h=h, alpha=alpha, beta=beta)
    fie = bvp_to_fie(spec)
    grid = uniform_grid(0.0, 1.0, n, scheme=scheme)
    op = discretize(fie, grid)
    q_est = estimate_contraction(op)
    schedule = _schedule(config, q_est, default_kappa=1.0)
    net = build_network(op, layers, schedule)
    field = forward(net)
    y = recover_solution(net, field, spec, pts)
    try:
        residual = ode_residual(spec, pts, y)
    except ValidationError:
        residual = None
    sweep = (layer_sweep(op, schedule, sweep_layers)
             if sweep_layers else None)
    elapsed = time.perf_counter() - started

    meta = _base_metadata(config, deterministic)
    meta.update({
        "grid_n": n, "scheme": scheme, "layers": layers,
        "grid_iterations": layers - 1,
        "kappa": config.get("kappa", 1.0),
        "km_schedule_valid": schedule.valid_km,
        "q_est": q_est,
        "contraction_warning": (None if q_est < 1.0 else
                                f"q_est={q_est:.6g} >= 1; no a priori bound"),
        "ode_residual": residual,
        "alpha": alpha, "beta": beta,
    })
    if not deterministic:
        meta["runtime_seconds"] = elapsed
    return ReportBundle(kind="bvp",
                        columns=("x", "value", "exact", "abs_err"),
                        rows=_rows_1d(pts, y, exact),
                        sweep=sweep, metadata=meta)


def _run_laplace(config: dict, exact_override, sweep_layers, deterministic):
    boundary = _compile_expr(config, "boundary", ("phi",))
    exact = _opt_exact(config, ("r", "phi"), exact_override)
    theta_n = _as_pos_int(config, "theta_n")
    layers = _as_pos_int(config, "layers")
    pairs = _queries_polar(config)

    started = time.perf_counter()
    schedule = _schedule(config, 1.0, default_kappa=0.5)
    problem = DiscBoundaryProblem(boundary=boundary, theta_n=theta_n,
                                  layers=layers, schedule=schedule)
    op = build_bie(problem)
    q_est = estimate_contraction(op)
    net = build_network(op, layers, schedule)
    field = forward(net)
    density = BoundaryDensity(grid=op.grid, values=field.values.copy())
    pot = evaluate_potential(density, pairs)
    sweep = (layer_sweep(op, schedule, sweep_layers)
             if sweep_layers else None)
    elapsed = time.perf_counter() - started

    if exact is None:
        rows = [(float(r), float(p), float(v), None, None)
                for r, p, v in zip(pot.r, pot.phi, pot.values)]
    else:
        ex = np.asarray(exact(pot.r, pot.phi), dtype=float)
        rows = [(float(r), float(p), float(v), float(e), float(abs(v - e)))
                for r, p, v, e in zip(pot.r, pot.phi, pot.values, ex)]
    meta = _base_metadata(config, deterministic)
    meta.update({
        "theta_n": theta_n, "layers": layers,
        "grid_iterations": layers - 1,
        "kappa": config.get("kappa", 0.5),
        "km_schedule_valid": schedule.valid_km,
        "q_est": q_est,
        "density_mean": float(np.mean(density.values)),
        "projected_potential": density.mean_weighted,
    })
    if not deterministic:
        meta["runtime_seconds"] = elapsed
    return ReportBundle(kind="laplace_disc",
                        columns=("r", "phi", "value", "exact", "abs_err"),
                        rows=rows, sweep=sweep, metadata=meta)


_RUNNERS = {
    "linear_fie": _run_linear,
    "nonlinear_fie": _run_nonlinear,
    "bvp": _run_bvp,
    "laplace_disc": _run_laplace,
}


def run_config(config: dict, exact_override: Optional[Callable] = None,
               sweep_layers: Optional[int] = None,
               deterministic: bool = True) -> ReportBundle:
    """Validate a config mapping and run the matching pipeline."""
    if not isinstance(config, dict):
        raise ValidationError("config must be a JSON object")
    _check_schema(config)
    if sweep_layers is not None and sweep_layers < 1:
        raise ValidationError(f"sweep depth {sweep_layers} must be >= 1")
    runner = _RUNNERS[config["kind"]]
    return runner(config, exact_override, sweep_layers, deterministic)


def _apply_overrides(config: dict, args) -> dict:
    config = dict(config)
    kind = config.get("kind")
    if getattr(args, "grid", None) is not None:
        config["theta_n" if kind == "laplace_disc" else "grid_n"] = args.grid
    if getattr(args, "layers", None) is not None:
        config["layers"] = args.layers
    if getattr(args, "kappa", None) is not None:
        config["kappa"] = args.kappa
    if getattr(args, "scheme", None) is not None:
        if kind == "laplace_disc":
            raise ValidationError(
                "--scheme does not apply to laplace_disc (fixed periodic "
                "grid)")
        config["grid_scheme"] = args.scheme
    if getattr(args, "queries", None) is not None:
        if kind == "laplace_disc":
            raise ValidationError(
                "--queries override is start:stop:count and does not apply "
                "to laplace_disc; set queries in the config")
        config["queries"] = args.queries
    return config


def run_example(name: str, sweep_layers: Optional[int] = None,
                deterministic: bool = True,
                overrides: Optional[Dict] = None) -> ReportBundle:
    """Run a registry entry, optionally with overriding config keys."""
    spec = get_example(name)
    config = dict(spec.config)
    if overrides:
        unknown = set(overrides) - (_KINDS[config["kind"]]["required"]
                                    | _KINDS[config["kind"]]["optional"])
        if unknown:
            raise ValidationError(f"unknown override keys {sorted(unknown)}")
        config.update(overrides)
    bundle = run_config(config, exact_override=spec.exact_fn,
                        sweep_layers=sweep_layers,
                        deterministic=deterministic)
    bundle.metadata["example"] = name
    return bundle


def run_compare_fd(nr: int, nt: int, tol: float = 1e-10,
                   boundary_text: str = "1 + cos(2*phi)",
                   exact_text: Optional[str] = "1 + r^2*cos(2*phi)",
                   deterministic: bool = True) -> ReportBundle:
    """Finite-difference reference run with error statistics.

    The solution table subsamples the lattice to at most ~21 rings and
    angles; the metadata carries the max/mean error over every node.
    """
    boundary = _compile_expr({"boundary": boundary_text}, "boundary",
                             ("phi",))
    exact = (_compile_expr({"exact": exact_text}, "exact", ("r", "phi"))
             if exact_text else None)
    started = time.perf_counter()
    sol = solve_fd(boundary, nr, nt, tol=tol)
    elapsed = time.perf_counter() - started

    radii = sol.radii
    theta = sol.theta
    max_err = mean_err = center_err = None
    if exact is not None:
        ex = np.asarray(exact(radii[:, None], theta[None, :]), dtype=float)
        diff = np.abs(sol.values - ex)
        center_exact = float(np.asarray(exact(0.0, 0.0), dtype=float))
        center_err = abs(sol.center - center_exact)
        max_err = max(float(diff.max()), center_err)
        mean_err = float((diff.sum() + center_err) / (diff.size + 1))

    stride_r = max(1, (nr - 1) // 20)
    stride_t = max(1, nt // 20)
    rows = []
    if exact is not None:
        rows.append((0.0, 0.0, sol.center, center_exact, center_err))
    else:
        rows.append((0.0, 0.0, sol.center, None, None))
    for i in range(0, nr - 1, stride_r):
        for j in range(0, nt, stride_t):
            v = float(sol.values[i, j])
            if exact is not None:
                e = float(ex[i, j])
                rows.append((float(radii[i]), float(theta[j]), v, e,
                             abs(v - e)))
            else:
                rows.append((float(radii[i]), float(theta[j]), v, None, None))

    meta = {
        "boundary": boundary_text,
        "exact": exact_text,
        "nr": nr, "nt": nt, "tol": tol,
        "iterations": sol.iterations,
        "final_residual": sol.residual,
        "max_err": max_err,
        "mean_err": mean_err,
        "deterministic": bool(deterministic),
        "runtime_seconds": None if deterministic else elapsed,
    }
    return ReportBundle(kind="fd_reference",
                        columns=("r", "phi", "value", "exact", "abs_err"),
                        rows=rows, sweep=None, metadata=meta)


def _selftest(stream) -> int:
    for name in example_names():
        spec = get_example(name)
        _check_schema(spec.config)
        kind = spec.config["kind"]
        params = {"linear_fie": [("kernel", ("x", "z")), ("source", ("x",))],
                  "nonlinear_fie": [("kernel", ("x", "z")),
                                    ("source", ("x",)),
                                    ("nonlinearity", ("u",))],
                  "bvp": [("g", ("x",)), ("h", ("x",))],
                  "laplace_disc": [("boundary", ("phi",))]}[kind]
        for key, names in params:
            _compile_expr(spec.config, key, names)
        if "exact" in spec.config:
            _compile_expr(spec.config,
                          "exact",
                          ("r", "phi") if kind == "laplace_disc" else ("x",))
    smoke = run_config({
        "kind": "linear_fie",
        "kernel": "1/e", "source": "e^x", "domain": [0.0, 1.0],
        "grid_n": 64, "layers": 12, "kappa": 1.0,
        "queries": "0:1:11", "exact": "e^x + 1",
    })
    worst = smoke.max_abs_err()
    if worst is None or worst > 0.05:
        raise NumericalError(
            f"smoke solve error {worst!r} out of expected range")
    stream.write(f"selftest ok: {len(example_names())} examples validated, "
                 f"smoke solve max error {worst:.3e}\n")
    return 0


def _add_common_flags(sp):
    sp.add_argument("--grid", type=int, metavar="N",
                    help="override grid size (theta_n for laplace_disc)")
    sp.add_argument("--layers", type=int, metavar="M",
                    help="override hidden layer count")
    sp.add_argument("--kappa", type=float, metavar="K",
                    help="override the constant relaxation in (0, 1]")
    sp.add_argument("--scheme", choices=("left", "midpoint", "closed"),
                    help="override the grid node placement")
    sp.add_argument("--queries", metavar="A:B:N",
                    help="override query points (1-D kinds)")
    sp.add_argument("--sweep", type=int, metavar="MMAX",
                    help="also tabulate error/update size for 1..MMAX layers")
    _add_output_flags(sp)


def _add_output_flags(sp):
    sp.add_argument("--out", metavar="PATH", help="write the report here "
                    "instead of stdout")
    sp.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="output format (default csv)")
    sp.add_argument("--deterministic", action="store_true",
                    help="suppress timings so repeated runs are "
                    "byte-identical")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fredholm",
        description="Training-free fixed-point network solvers for "
                    "integral equations")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="run a JSON problem config")
    sp.add_argument("config_path", metavar="CONFIG")
    _add_common_flags(sp)

    sp = sub.add_parser("example", help="run a built-in example")
    sp.add_argument("name", nargs="?", metavar="NAME")
    sp.add_argument("--list", action="store_true", dest="list_examples",
                    help="list available examples")
    _add_common_flags(sp)

    sp = sub.add_parser("compare-fd",
                        help="run the finite-difference disc reference")
    sp.add_argument("--nr", type=int, default=100, help="radial cells")
    sp.add_argument("--nt", type=int, default=100, help="angular cells")
    sp.add_argument("--tol", type=float, default=1e-10,
                    help="relative residual target")
    sp.add_argument("--boundary", default="1 + cos(2*phi)",
                    help="Dirichlet data, expression in phi")
    sp.add_argument("--exact", default="1 + r^2*cos(2*phi)",
                    help="exact solution in r, phi ('' disables the "
                    "error columns)")
    _add_output_flags(sp)

    sub.add_parser("selftest", help="validate the registry and run a "
                   "smoke solve")
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path!r}: {exc}") from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ValidationError(f"config {path!r} must be a JSON object")
    return config


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "solve":
            config = _apply_overrides(_load_config(args.config_path), args)
            bundle = run_config(config, sweep_layers=args.sweep,
                                deterministic=args.deterministic)
            write_report(bundle, args.format, args.out, out)
        elif args.command == "example":
            if args.list_examples:
                for name in example_names():
                    out.write(f"{name}: {EXAMPLES[name].description}\n")
                return 0
            if not args.name:
                raise ValidationError(
                    "example name required (or use --list)")
            spec = get_example(args.name)
            config = _apply_overrides(spec.config, args)
            bundle = run_config(config, exact_override=spec.exact_fn,
                                sweep_layers=args.sweep,
                                deterministic=args.deterministic)
            bundle.metadata["example"] = args.name
            write_report(bundle, args.format, args.out, out)
        elif args.command == "compare-fd":
            bundle = run_compare_fd(args.nr, args.nt, tol=args.tol,
                                    boundary_text=args.boundary,
                                    exact_text=args.exact or None,
                                    deterministic=args.deterministic)
            write_report(bundle, args.format, args.out, out)
        elif args.command == "selftest":
            return _selftest(out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0
