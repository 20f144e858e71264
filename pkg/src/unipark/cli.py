"""Command-line front end: scenario runs, sweeps, gain assignment, and the
certificate verification suite.

Exit codes: 0 success / all checks passed, 1 run or check failure, 2 usage
or configuration error.  All outputs are pure functions of the config plus
seed; reruns produce byte-identical CSV/JSON.

Scenario files are JSON; inline flags override file fields.  Controller
names use the lowercase acronyms (genova, bolsa, bopa, bagal, glofo, bofo,
globa, globa-interp, globa-cons, barfli, libac).  The output directory comes
from --out, overridden by the UNIPARK_OUT environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .controllers import ControllerId, Gains
from .errors import ConfigError, InfeasiblePolesError, UniparkError
from .linearization import DesignFamily, PoleSpec, assign_gains, jacobian_eigenvalues
from .lyapunov import CompositeKind, CompositeOrder
from .simulate import Scenario, Termination, Trajectory, integrate, sweep
from .spaces import CartesianState, PolarState
from .svg import SvgPath, render_paths
from .verify import run_all

SCHEMA_VERSION = 1
CSV_COLUMNS = ("t", "x", "y", "theta", "rho", "delta", "gamma", "v", "omega", "V", "metric")


def _die(msg: str, code: int) -> "NoReturn":  # noqa: F821 - doc only
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(code)


def _parse_floats(text: str, n: int, what: str) -> tuple[float, ...]:
    parts = [p for p in text.split(",") if p.strip() != ""]
    if len(parts) != n:
        raise ConfigError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as e:
        raise ConfigError(f"bad {what}: {e}") from None


def _parse_gains(text_or_obj) -> Gains:
    if isinstance(text_or_obj, dict):
        return Gains(**{k: float(v) for k, v in text_or_obj.items()})
    if isinstance(text_or_obj, (list, tuple)):
        vals = [float(v) for v in text_or_obj]
    else:
        vals = [float(p) for p in str(text_or_obj).split(",") if p.strip() != ""]
    if not 1 <= len(vals) <= 5:
        raise ConfigError(f"gains need 1..5 values (k1..k4, k0), got {len(vals)}")
    names = ("k1", "k2", "k3", "k4", "k0")
    kwargs = dict(zip(names, vals))
    return Gains(**kwargs)


def _controller(name: str) -> ControllerId:
    try:
        return ControllerId(name)
    except ValueError:
        raise ConfigError(
            f"unknown controller {name!r}; expected one of "
            + ", ".join(c.value for c in ControllerId)
        ) from None


def _composite(name: str) -> CompositeKind:
    try:
        return CompositeKind(name)
    except ValueError:
        raise ConfigError(
            f"unknown composite {name!r}; expected one of "
            + ", ".join(k.value for k in CompositeKind)
        ) from None


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path!r}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path!r} is not valid JSON: {e}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path!r} must hold a JSON object")
    return cfg


def _scenario_from(cfg: dict, args: argparse.Namespace) -> Scenario:
    get = lambda flag, key, default=None: (
        flag if flag is not None else cfg.get(key, default)
    )
    controller = get(args.controller, "controller")
    if controller is None:
        raise ConfigError("a controller is required (--controller or config field)")
    gains_spec = get(args.gains, "gains", "1,1,1,1")
    init_cart = get(args.init_cart, "init_cart")
    init_polar = get(args.init_polar, "init_polar")
    if init_cart is not None and init_polar is not None:
        raise ConfigError("give exactly one of init_cart / init_polar")
    if init_cart is not None:
        vals = init_cart if isinstance(init_cart, (list, tuple)) else _parse_floats(init_cart, 3, "--init-cart")
        initial = CartesianState(*[float(v) for v in vals])
    elif init_polar is not None:
        vals = init_polar if isinstance(init_polar, (list, tuple)) else _parse_floats(init_polar, 3, "--init-polar")
        initial = PolarState(*[float(v) for v in vals])
    else:
        raise ConfigError("an initial state is required (--init-cart or --init-polar)")
    return Scenario(
        controller=_controller(controller),
        gains=_parse_gains(gains_spec),
        initial=initial,
        frame=get(args.frame, "frame", "polar"),
        dt=float(get(args.dt, "dt", 1e-3)),
        t_max=float(get(args.t_max, "t_max", 100.0)),
        stop_tol=float(get(args.tol, "tol", 1e-4)),
        barrier_margin=float(cfg.get("barrier_margin", 1e-9)),
        composite=_composite(get(args.composite, "composite", "add")),
        composite_order=CompositeOrder(cfg.get("composite_order", "rho-first")),
    )


def _out_dir(args: argparse.Namespace) -> Path:
    out = os.environ.get("UNIPARK_OUT") or args.out
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _formats(args: argparse.Namespace, allowed=("csv", "json", "svg")) -> set[str]:
    fmts = {f.strip() for f in args.format.split(",") if f.strip()}
    bad = fmts - set(allowed)
    if bad:
        raise ConfigError(f"unknown formats {sorted(bad)}; allowed: {allowed}")
    if not fmts:
        raise ConfigError("at least one output format is required")
    return fmts


def _traj_rows(traj: Trajectory):
    for i in range(len(traj.t)):
        yield (
            traj.t[i],
            traj.cartesian[i, 0],
            traj.cartesian[i, 1],
            traj.cartesian[i, 2],
            traj.polar[i, 0],
            traj.polar[i, 1],
            traj.polar[i, 2],
            traj.v[i],
            traj.omega[i],
            traj.V[i],
            traj.metric[i],
        )


def write_trajectory_csv(traj: Trajectory, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in _traj_rows(traj):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def trajectory_json_payload(traj: Trajectory) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "meta": traj.meta,
        "termination": traj.termination.value,
        "columns": list(CSV_COLUMNS),
        "data": [[float(v) for v in row] for row in _traj_rows(traj)],
        "axis_crossings": [
            {"t": c.t, "x": c.x, "in_front": c.in_front} for c in traj.crossings
        ],
    }


def _write_json(payload: dict, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _scenario_from(_load_config(args.config), args)
    fmts = _formats(args)
    traj = integrate(scenario)
    out = _out_dir(args)
    stem = f"traj_{scenario.controller.value}"
    if "csv" in fmts:
        write_trajectory_csv(traj, out / f"{stem}.csv")
    if "json" in fmts:
        _write_json(trajectory_json_payload(traj), out / f"{stem}.json")
    if "svg" in fmts:
        (out / f"{stem}.svg").write_text(
            render_paths([SvgPath(traj.cartesian, label=scenario.controller.value)])
        )
    print(
        f"{scenario.controller.value}: {traj.termination.value} at t={traj.final_time:g}, "
        f"metric={traj.metric[-1]:.3e}, outputs in {out}"
    )
    if traj.termination in (Termination.NUMERIC, Termination.BARRIER_GUARD):
        print(f"run failed: termination {traj.termination.value}", file=sys.stderr)
        return 1
    return 0


def _sweep_grid(cfg: dict) -> list:
    if "grid_cart" in cfg and "grid_polar" in cfg:
        raise ConfigError("give exactly one of grid_cart / grid_polar")
    if "grid_cart" in cfg:
        return [CartesianState(*map(float, row)) for row in cfg["grid_cart"]]
    if "grid_polar" in cfg:
        return [PolarState(*map(float, row)) for row in cfg["grid_polar"]]
    raise ConfigError("sweep config needs grid_cart or grid_polar")


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    if not cfg:
        raise ConfigError("sweep requires --config with a grid")
    grid = _sweep_grid(cfg)
    if len(grid) == 0:
        raise ConfigError("sweep grid is empty")
    controllers = cfg.get("controllers")
    if controllers is None:
        controllers = [cfg.get("controller") or (args.controller or "")]
    controllers = [_controller(c) for c in controllers if c]
    if not controllers:
        raise ConfigError("sweep needs at least one controller")
    fmts = _formats(args, allowed=("json", "svg", "txt"))
    out = _out_dir(args)
    summary = {"schema_version": SCHEMA_VERSION, "controllers": {}}
    paths = []
    failures = 0
    for ci, cid in enumerate(controllers):
        sub_cfg = dict(cfg)
        sub_cfg["controller"] = cid.value
        # The base scenario's own initial state is a placeholder; the grid
        # supplies the real ones.
        sub_cfg.pop("init_cart", None)
        sub_cfg.pop("init_polar", None)
        base = _scenario_from(sub_cfg, argparse.Namespace(
            controller=None, gains=args.gains, init_cart=None, init_polar="1,0,0",
            frame=args.frame, dt=args.dt, t_max=args.t_max, tol=args.tol,
            composite=args.composite,
        ))
        records = sweep(base, grid, workers=args.workers)
        recs = []
        for r in records:
            recs.append({
                "index": r.index,
                "initial": list(r.initial),
                "termination": r.termination,
                "convergence_time": r.convergence_time,
                "path_length": r.path_length,
                "steering_effort": r.steering_effort,
                "min_barrier_margin": r.min_barrier_margin,
                "v_violations": r.v_violations,
                "front_crossings": r.front_crossings,
                "error": r.error,
            })
            failures += int(r.termination == "numeric" or r.error is not None)
        summary["controllers"][cid.value] = recs
        if "svg" in fmts:
            for r in records:
                if r.error is not None:
                    continue
                traj = integrate(_scenario_with_initial(base, grid[r.index]))
                paths.append(SvgPath(traj.cartesian, label=cid.value,
                                     color=_controller_color(ci)))
    if "json" in fmts:
        _write_json(summary, out / "sweep_summary.json")
    if "txt" in fmts:
        (out / "sweep_summary.txt").write_text(_summary_text(summary))
    if "svg" in fmts and paths:
        (out / "sweep_overlay.svg").write_text(render_paths(paths))
    print(_summary_text(summary), end="")
    print(f"outputs in {out}")
    return 1 if failures else 0


def _scenario_with_initial(base: Scenario, initial) -> Scenario:
    return Scenario(
        controller=base.controller, gains=base.gains, initial=initial,
        frame=base.frame, dt=base.dt, t_max=base.t_max, stop_tol=base.stop_tol,
        barrier_margin=base.barrier_margin, composite=base.composite,
        composite_order=base.composite_order,
    )


def _controller_color(i: int) -> str:
    colors = ("#d62728", "#1f77b4", "#17becf", "#2ca02c", "#9467bd", "#ff7f0e")
    return colors[i % len(colors)]


def _summary_text(summary: dict) -> str:
    lines = []
    header = (
        f"{'controller':14s} {'idx':>3s} {'termination':12s} {'t_conv':>8s} "
        f"{'path_len':>9s} {'effort':>9s} {'margin':>9s} {'Vviol':>5s} {'xfront':>6s}"
    )
    lines.append(header)
    for cname, recs in summary["controllers"].items():
        for r in recs:
            tconv = "-" if r["convergence_time"] is None else f"{r['convergence_time']:.2f}"
            margin = r["min_barrier_margin"]
            margin_s = "inf" if margin in (None, math.inf) or margin != margin else f"{margin:.3f}"
            if margin == math.inf:
                margin_s = "inf"
            lines.append(
                f"{cname:14s} {r['index']:3d} {r['termination']:12s} {tconv:>8s} "
                f"{r['path_length']:9.3f} {r['steering_effort']:9.3f} {margin_s:>9s} "
                f"{r['v_violations']:5d} {r['front_crossings']:6d}"
            )
    return "\n".join(lines) + "\n"


def _parse_pole(text: str) -> complex:
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise ConfigError(f"bad pole {text!r}") from None


def cmd_gains(args: argparse.Namespace) -> int:
    try:
        family = DesignFamily(args.family)
    except ValueError:
        raise ConfigError(
            f"unknown family {args.family!r}; expected one of "
            + ", ".join(f.value for f in DesignFamily)
        ) from None
    poles = [_parse_pole(p) for p in args.poles.split(",") if p.strip()]
    if len(poles) != 3:
        raise ConfigError(f"--poles needs three comma-separated values, got {len(poles)}")
    lam1, lam2, lam3 = poles
    if lam1.imag != 0.0:
        raise ConfigError("the first pole must be real")
    try:
        spec = PoleSpec(-lam1.real, -lam2, -lam3)
        solutions = assign_gains(family, spec, strict=args.strict, epsilon=args.epsilon)
    except (InfeasiblePolesError, UniparkError) as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 1
    payload = {"schema_version": SCHEMA_VERSION, "family": family.value, "solutions": []}
    for g in solutions:
        eigs = jacobian_eigenvalues(family, g)
        err = max(
            abs(a - w)
            for a, w in zip(
                sorted(eigs, key=lambda z: (z.real, z.imag)),
                sorted(spec.as_eigenvalues(), key=lambda z: (z.real, z.imag)),
            )
        )
        payload["solutions"].append(
            {
                "gains": {"k1": g.k1, "k2": g.k2, "k3": g.k3, "k4": g.k4},
                "strict_passivity": g.strict_passivity,
                "achieved_eigenvalues": [[z.real, z.imag] for z in eigs],
                "roundtrip_error": err,
            }
        )
    print(json.dumps(payload, indent=2, sort_keys=True))
    _write_json(payload, _out_dir(args) / "gains.json")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_all(seed=args.seed, samples=args.samples)
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{status} {c['name']:24s} {c['subject']:14s} worst={c['worst']:.3e}")
    out = _out_dir(args)
    _write_json(report, out / "verify_report.json")
    print(f"report: {out / 'verify_report.json'}")
    if not report["all_passed"]:
        failing = [c for c in report["checks"] if not c["passed"]]
        print(f"{len(failing)} checks failed", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="unipark",
        description="Polar-coordinate unicycle parking: simulation, sweeps, "
        "gain assignment, and certificate verification.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default="out", help="output directory (env UNIPARK_OUT overrides)")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    sim = sub.add_parser("simulate", help="integrate one scenario")
    sim.add_argument("--config", help="scenario JSON file")
    sim.add_argument("--controller", help="controller acronym (e.g. globa)")
    sim.add_argument("--gains", help="comma list k1,k2,k3[,k4[,k0]]")
    sim.add_argument("--init-cart", dest="init_cart", help="x,y,theta")
    sim.add_argument("--init-polar", dest="init_polar", help="rho,delta,gamma")
    sim.add_argument("--frame", choices=("polar", "cartesian"))
    sim.add_argument("--dt", type=float)
    sim.add_argument("--t-max", dest="t_max", type=float)
    sim.add_argument("--tol", type=float)
    sim.add_argument("--composite", help="certificate combiner for logging")
    sim.add_argument("--format", default="csv,json,svg")
    add_common(sim)
    sim.set_defaults(fn=cmd_simulate)

    sw = sub.add_parser("sweep", help="run a grid of initial states")
    sw.add_argument("--config", required=False, help="sweep JSON file with grid")
    sw.add_argument("--controller")
    sw.add_argument("--gains")
    sw.add_argument("--frame", choices=("polar", "cartesian"))
    sw.add_argument("--dt", type=float)
    sw.add_argument("--t-max", dest="t_max", type=float)
    sw.add_argument("--tol", type=float)
    sw.add_argument("--composite")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--format", default="json,svg,txt")
    add_common(sw)
    sw.set_defaults(fn=cmd_sweep)

    ga = sub.add_parser("gains", help="assign gains for requested poles")
    ga.add_argument("--family", required=True, help="passivity | forwarding | backstepping")
    ga.add_argument("--poles", required=True, help='three poles, e.g. "-1,-0.5+0.866i,-0.5-0.866i"')
    ga.add_argument("--epsilon", type=float, default=None, help="backstepping free parameter")
    ga.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True,
                    help="passivity: require k1*k3 >= k2^2 (default on)")
    add_common(ga)
    ga.set_defaults(fn=cmd_gains)

    ve = sub.add_parser("verify", help="run the certificate verification suite")
    ve.add_argument("--samples", type=int, default=1000)
    add_common(ve)
    ve.set_defaults(fn=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except UniparkError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
