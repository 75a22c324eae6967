"""Command line front end.

Subcommands: ``bound`` (evaluate a bound), ``verify`` (randomized dominance
suite), ``sweep`` (offset sweep with tier envelopes), ``plan`` (measurement
budget), ``sum-demo`` (rounded-sum simulation vs. its bound).  Exit codes:
0 success, 1 dominance violation, 2 configuration error, 3 violated
theorem hypothesis.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds as B
from .distributions import make_uniform, parse_dist_config
from .errors import ConfigError, PreconditionError
from .grids import FloatSystem, UniformMesh, parse_grid_config
from .oracle import BoundViolationError, offset_sweep, simulated_sum
from .plotting import polyline_chart
from .rounding import RoundingScheme, scheme_eps_delta
from .verify import run_suite, worst_margin

CSV_HEADER = "offset,delta_E,delta_V,bound_A_E,bound_B_E,bound_C_E,bound_D_E,bound_A_V,bound_B_V,bound_C_V"


def _g17(x) -> str:
    return "" if x is None else format(float(x), ".17g")


def _parse_inline(spec: str) -> dict:
    """'semicircle:r=1,mu=0' -> {'kind': 'semicircle', 'r': 1.0, 'mu': 0.0}"""
    name, _, rest = spec.partition(":")
    out: dict = {"kind": name.strip()}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not _ or not key:
                raise ConfigError(f"cannot parse parameter {item!r} in {spec!r}")
            key = key.strip()
            val = val.strip()
            if val.lower() in ("true", "false"):
                out[key] = val.lower() == "true"
            else:
                try:
                    out[key] = float(val)
                except ValueError:
                    raise ConfigError(f"cannot parse value {val!r} in {spec!r}")
    return out


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")


def _resolve_dist(args, cfg):
    if getattr(args, "dist", None):
        return parse_dist_config(_parse_inline(args.dist))
    if "distribution" in cfg:
        return parse_dist_config(cfg["distribution"])
    raise ConfigError("no distribution given (use --dist or a config file)")


def _resolve_grid(args, cfg):
    if getattr(args, "grid", None):
        return parse_grid_config(_parse_inline(args.grid))
    if "grid" in cfg:
        return parse_grid_config(cfg["grid"])
    return None


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_plan(args, out_path):
    n = int(args.n) if args.n is not None else None
    n_min, delta_max = B.plan_measurement(args.variance, args.c, args.p, n=n)
    payload = {"n_min": n_min, "delta_max": delta_max}
    if args.t is not None and n is not None:
        payload["probability_bound"] = B.rounded_chebyshev(
            args.variance, n, args.delta if args.delta is not None else 0.0, args.t
        )
    _emit(json.dumps(payload, indent=2), out_path)
    return 0


def cmd_bound(args) -> int:
    cfg = _load_config(args.config)
    if args.plan:
        return _cmd_plan(args, args.out)
    model = _resolve_dist(args, cfg)
    grid = _resolve_grid(args, cfg)
    scheme = RoundingScheme.parse(args.scheme)
    delta = args.delta
    mesh = grid if isinstance(grid, UniformMesh) else None
    if delta is None and mesh is not None:
        delta = scheme_eps_delta(scheme, 0.0, mesh.step)[1]
    if delta is None and args.eps is None:
        raise ConfigError("need --delta, --eps, or a uniform mesh grid")

    if args.quantity in ("mean", "variance"):
        de, dv = B.mean_and_variance_diff_bounds(
            model, args.tier, mesh=mesh, delta=delta, scheme=scheme
        )
        report = de if args.quantity == "mean" else dv
    elif args.quantity == "strong":
        mode = B.MULTIPLICATIVE if args.eps is not None else B.ADDITIVE
        report = B.strong_bound(model, args.k, mode, args.eps if args.eps is not None else delta)
    elif args.quantity == "centered":
        mode = B.MULTIPLICATIVE if args.eps is not None else B.ADDITIVE
        report = B.centered_moment_first_order(model, args.k, mode, args.eps if args.eps is not None else delta)
    elif args.quantity == "err-moment":
        mode = B.MULTIPLICATIVE if args.eps is not None else B.ADDITIVE
        report = B.unimodal_moment_bound(
            model, args.k, scheme, mode, args.eps if args.eps is not None else delta, signed=args.signed
        )
    else:
        raise ConfigError(f"unknown quantity {args.quantity!r}")
    _emit(json.dumps(report.to_json(), indent=2), args.out)
    return 0


def cmd_verify(args) -> int:
    scheme = RoundingScheme.parse(args.scheme) if args.scheme else None
    scale = 0.5 if args.self_test else 1.0
    results = run_suite(args.instances, seed=args.seed, scheme=scheme, bound_scale=scale)
    n_bad = 0
    for r in results:
        status = "ok  " if r.ok else "FAIL"
        n_bad += not r.ok
        print(f"{status} [{r.kind:>14s}] margin {_g17(r.margin):>24s}  {r.description}")
    w = worst_margin(results)
    print(f"worst margin {_g17(w.margin)} on: {w.description}")
    print(f"{len(results)} checks, {n_bad} violations" + (" (self-test mode)" if args.self_test else ""))
    return 1 if n_bad else 0


def _series(rows, pairs):
    out = []
    for label, grab in pairs:
        ys = [grab(r) for r in rows]
        if all(v is not None for v in ys):
            out.append((label, ys))
    return out


def _sweep_svg(rows) -> str:
    xs = [r.offset for r in rows]
    panel_e = polyline_chart(
        xs,
        _series(
            rows,
            [
                ("|Delta_E|", lambda r: abs(r.delta_e)),
                ("tier A", lambda r: r.bound_a_e),
                ("tier B", lambda r: r.bound_b_e),
                ("tier C", lambda r: r.bound_c_e),
                ("tier D", lambda r: r.bound_d_e),
            ],
        ),
        "mean shift vs. offset",
        "mesh offset",
        "|Delta_E|",
        log_y=True,
    )
    panel_v = polyline_chart(
        xs,
        _series(
            rows,
            [
                ("|Delta_V|", lambda r: abs(r.delta_v)),
                ("tier A", lambda r: r.bound_a_v),
                ("tier B", lambda r: r.bound_b_v),
                ("tier C", lambda r: r.bound_c_v),
            ],
        ),
        "variance shift vs. offset",
        "mesh offset",
        "|Delta_V|",
        log_y=True,
    )
    return panel_e + "\n" + panel_v


def _sweep_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                _g17(v)
                for v in (
                    r.offset,
                    r.delta_e,
                    r.delta_v,
                    r.bound_a_e,
                    r.bound_b_e,
                    r.bound_c_e,
                    r.bound_d_e,
                    r.bound_a_v,
                    r.bound_b_v,
                    r.bound_c_v,
                )
            )
        )
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    model = _resolve_dist(args, cfg)
    grid = _resolve_grid(args, cfg)
    if grid is not None and not isinstance(grid, UniformMesh):
        raise ConfigError("sweep requires a uniform mesh grid (offsets of a float system are not well defined)")
    delta = args.delta if args.delta is not None else (grid.half_gap if grid else None)
    if delta is None:
        raise ConfigError("need --delta or a uniform mesh grid")
    scheme = RoundingScheme.parse(args.scheme)
    try:
        rows = offset_sweep(model, delta, args.offsets, scheme=scheme, check=not args.no_check)
    except BoundViolationError as exc:
        print(f"dominance violation: {exc}", file=sys.stderr)
        return 1
    if args.format == "svg":
        _emit(_sweep_svg(rows), args.out)
    elif args.format == "json":
        payload = [
            {
                "offset": r.offset,
                "delta_E": r.delta_e,
                "delta_V": r.delta_v,
                "bound_A_E": r.bound_a_e,
                "bound_B_E": r.bound_b_e,
                "bound_C_E": r.bound_c_e,
                "bound_D_E": r.bound_d_e,
                "bound_A_V": r.bound_a_v,
                "bound_B_V": r.bound_b_v,
                "bound_C_V": r.bound_c_v,
            }
            for r in rows
        ]
        _emit(json.dumps(payload, indent=2), args.out)
    else:
        _emit(_sweep_csv(rows), args.out)
    return 0


def cmd_sum_demo(args) -> int:
    fs = FloatSystem(args.m, args.k_min, args.k_max)
    scheme = RoundingScheme.parse(args.scheme)
    models = [make_uniform(0.0, 1.0) for _ in range(args.summands)]
    est = simulated_sum(models, fs, scheme, args.samples, args.seed)
    eps0 = 2.0 ** (-args.m)
    eps = scheme_eps_delta(scheme, eps0, 0.0)[0]
    bound = B.rounded_sum_bound([m.abs_mixed_moment(0, 1, 0.0) for m in models], eps)
    payload = {
        "estimate": est.value,
        "standard_error": est.abs_error_estimate,
        "bound": bound.value,
        "dominated": est.value <= bound.value,
        "overflow_events": est.details["overflow_events"],
        "samples": est.details["samples"],
        "seed": est.details["seed"],
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return 0 if payload["dominated"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="roundmoments", description=__doc__)
    p.add_argument("--config", help="JSON config file with grid/distribution objects")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("bound", help="evaluate an analytic bound")
    pb.add_argument("--dist", help="inline distribution, e.g. semicircle:r=1,mu=0")
    pb.add_argument("--grid", help="inline grid, e.g. uniform:half_gap=0.1,offset=0")
    pb.add_argument("--scheme", default="nearest")
    pb.add_argument("--tier", default="A", choices=("A", "B", "C", "D"))
    pb.add_argument("--quantity", default="mean", choices=("mean", "variance", "strong", "centered", "err-moment"))
    pb.add_argument("--k", type=int, default=1)
    pb.add_argument("--signed", action="store_true")
    pb.add_argument("--delta", type=float)
    pb.add_argument("--eps", type=float)
    pb.add_argument("--plan", action="store_true", help="run the measurement planner instead")
    pb.add_argument("--variance", type=float, default=1.0)
    pb.add_argument("--c", type=float, default=1.0)
    pb.add_argument("--p", type=float, default=0.05)
    pb.add_argument("--n", type=float)
    pb.add_argument("--t", type=float)
    pb.set_defaults(func=cmd_bound)

    pv = sub.add_parser("verify", help="run the randomized dominance suite")
    pv.add_argument("--instances", type=int, default=200)
    pv.add_argument("--scheme")
    pv.add_argument("--self-test", action="store_true", help="scale bounds by 0.5; must report violations")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("sweep", help="offset sweep: oracle values vs tier bounds")
    ps.add_argument("--dist", help="inline distribution")
    ps.add_argument("--grid", help="inline grid (must be uniform)")
    ps.add_argument("--delta", type=float)
    ps.add_argument("--offsets", type=int, default=64)
    ps.add_argument("--scheme", default="nearest")
    ps.add_argument("--no-check", action="store_true")
    ps.set_defaults(func=cmd_sweep)

    pp = sub.add_parser("plan", help="measurement planner")
    pp.add_argument("--variance", type=float, required=True)
    pp.add_argument("--c", type=float, required=True)
    pp.add_argument("--p", type=float, required=True)
    pp.add_argument("--n", type=float)
    pp.add_argument("--t", type=float)
    pp.add_argument("--delta", type=float)
    pp.set_defaults(func=lambda a: _cmd_plan(a, a.out))

    pd = sub.add_parser("sum-demo", help="rounded-sum simulation against its bound")
    pd.add_argument("--summands", type=int, default=10)
    pd.add_argument("--m", type=int, default=8)
    pd.add_argument("--k-min", type=int, default=-8)
    pd.add_argument("--k-max", type=int, default=8)
    pd.add_argument("--scheme", default="nearest")
    pd.add_argument("--samples", type=int, default=100_000)
    pd.set_defaults(func=cmd_sum_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        args.seed = 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
