"""Command-line surface: bound / verify / kernel / search / compare.

Exit codes: 0 success, 1 a mathematical identity or inequality failed
(bug signal), 2 invalid input.  All randomness is seeded and the seed is
echoed in output headers.  An optional key=value config file supplies
defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bounds import BoundReport, Separation
from .errors import (DomainError, FoldConsistencyError, IdentityViolationError,
                     KernelAdmissibilityError, QuadratureConvergenceError,
                     TruncationError, ValidationError)
from .inverse_op import (check_inversion, fold_coefficients, measure_norm,
                         reciprocal_series, spectral_radius)
from .kernels import extremal_kernel, extremal_uhat_value, fourier_coeff
from .quadrature import QuadratureConfig
from .trigpoly import NodeSet, TrigPoly, random_poly
from .verifier import (NODE_STRATEGIES, SearchConfig, extremal_search,
                       compare_bounds, make_nodes, random_campaign,
                       verify_instance, verify_replay)

_CONFIG_TYPES = {
    "N": int, "p": float, "r": int, "trials": int, "seed": int,
    "iterations": int, "restarts": int, "quad_tol": float, "scale": float,
    "tol": float, "sigma": int,
}


def _read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(f"config line without '=': {line!r}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


# applied only after the config merge, so a config file can set them too
_LATE_DEFAULTS = {
    "format": "plain", "node_strategy": "equispaced", "scale": 1.0,
    "tol": 1e-6, "restarts": 4, "seed": 0,
}


def _apply_config(args: argparse.Namespace):
    if getattr(args, "config", None):
        for key, raw in _read_config(args.config).items():
            if getattr(args, key, None) is None:
                try:
                    setattr(args, key, _CONFIG_TYPES.get(key, str)(raw))
                except ValueError as exc:
                    raise ValidationError(
                        f"bad config value {key}={raw!r}: {exc}") from exc
    for key, val in _LATE_DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, val)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ValidationError(f"missing required parameter: {name}")


def _quad(args) -> QuadratureConfig | None:
    return QuadratureConfig(rel_tol=args.quad_tol) if args.quad_tol else None


def _emit(text: str, args):
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read JSON file {path}: {exc}") from exc


def _parse_grid_ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lo, hi = part.split(":", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValidationError(f"empty integer grid {text!r}")
    return out


def _parse_grid_floats(text: str) -> list[float]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lo, hi = part.split(":", 1)
            out.extend(float(v) for v in range(int(lo), int(hi) + 1))
        else:
            out.append(float(part))
    if not out:
        raise ValidationError(f"empty grid {text!r}")
    return out


def cmd_bound(args) -> int:
    _require(args, "N", "p", "delta")
    report = BoundReport.compute(args.N, Separation.parse(args.delta), args.p)
    if args.format == "json":
        _emit(json.dumps(report.to_json(), indent=2), args)
    elif args.format == "csv":
        _emit("\n".join([report.csv_header(), report.csv_row()]), args)
    else:
        obj = report.to_json()
        lines = [f"{k} = {v}" for k, v in obj.items() if v is not None]
        lines.append(f"sigma used the {report.branch} branch of the overlap count")
        _emit("\n".join(lines), args)
    return 0


def cmd_verify(args) -> int:
    quad = _quad(args)
    if args.trials is not None and not args.replay:
        return _verify_campaign(args, quad)
    if args.replay:
        res = verify_replay(_load_json(args.replay), quad)
        instance = None
    else:
        if args.poly:
            poly = TrigPoly.from_json(_load_json(args.poly))
        elif args.random:
            _require(args, "N")
            poly = random_poly(args.N, (args.seed or 0), args.scale)
        else:
            raise ValidationError("need --poly FILE, --random, or --replay FILE")
        if args.nodes:
            nodes = NodeSet.from_json(_load_json(args.nodes))
        else:
            rng = np.random.default_rng([(args.seed or 0), 1])
            nodes = make_nodes(args.node_strategy, poly.degree, rng, r=args.r)
        _require(args, "p")
        res = verify_instance(poly, nodes, args.p, quad, seed=args.seed)
        instance = {"poly": poly.to_json(), "nodes": nodes.to_json(), "p": args.p}
    if args.dump_instance and instance is not None:
        with open(args.dump_instance, "w") as fh:
            json.dump(instance, fh)
    if args.format == "json":
        _emit(json.dumps(res.to_json(), indent=2), args)
    elif args.format == "csv":
        _emit(f"# seed={args.seed}\nratio,bound,margin,pass,N,p,delta,r\n"
              f"{res.ratio!r},{res.bound!r},{res.margin!r},{res.passed},"
              f"{res.N},{res.p!r},{res.delta!r},{res.r}", args)
    else:
        _emit(f"ratio = {res.ratio!r}\nbound = {res.bound!r}\n"
              f"margin = {res.margin!r}\npass = {res.passed}", args)
    return 0 if res.passed else 1


def _verify_campaign(args, quad) -> int:
    _require(args, "N", "p")
    rows: list = []
    on_trial = (lambda t, res: rows.append((t, res))) if args.format == "csv" else None
    summary = random_campaign(args.trials, args.N, args.p, args.node_strategy,
                              args.seed, quad, on_trial=on_trial)
    if args.dump_instance and summary.argmax is not None:
        with open(args.dump_instance, "w") as fh:
            json.dump({k: summary.argmax[k] for k in ("poly", "nodes", "p")}, fh)
    if args.format == "json":
        _emit(json.dumps(summary.to_json(), indent=2), args)
    elif args.format == "csv":
        out = [f"# seed={summary.seed}", "trial,ratio,bound,margin,pass"]
        out += [f"{t},{r.ratio!r},{r.bound!r},{r.margin!r},{r.passed}"
                for t, r in rows]
        _emit("\n".join(out), args)
    else:
        _emit("\n".join(f"{k} = {v}" for k, v in summary.to_json().items()
                        if k != "argmax"), args)
    return 1 if summary.failures else 0


def cmd_kernel(args) -> int:
    _require(args, "N", "p")
    quad = _quad(args)
    u = extremal_kernel(args.N, args.p)
    if not args.diagnose:
        info = dict(u.to_json(), uhat_N=fourier_coeff(u, float(args.N), quad),
                    extremal_uhat=extremal_uhat_value(args.N, args.p))
        _emit(json.dumps(info, indent=2) if args.format == "json"
              else "\n".join(f"{k} = {v}" for k, v in info.items()), args)
        return 0

    stage = "reciprocal-series"
    try:
        series = reciprocal_series(u, cfg=quad)
        stage = "fold"
        mu = fold_coefficients(series)
        stage = "inversion-check"
        report = check_inversion(mu, u, tol=args.tol, cfg=quad)
        if not report.passed:
            print(f"stage {stage} failed: max deviation {report.max_deviation!r} "
                  f"at n = {report.worst_n}", file=sys.stderr)
            return 1
        stage = "norm-identity"
        tv = measure_norm(mu, u, quad)
    except (IdentityViolationError, FoldConsistencyError,
            KernelAdmissibilityError, TruncationError) as exc:
        print(f"stage {stage} failed: {exc}", file=sys.stderr)
        return 1

    summary = {
        "N": args.N, "p": args.p, "truncation": series.truncation,
        "sum_tau": tv, "inv_uhat_N": 1.0 / fourier_coeff(u, float(args.N), quad),
        "spectral_radius": spectral_radius(mu),
        "max_deviation": report.max_deviation, "worst_n": report.worst_n,
        "tau": [float(t) for t in mu.atoms],
    }
    if args.format == "json":
        _emit(json.dumps(dict(summary, rows=[r for r in report.csv_rows()][1:]),
                         indent=2), args)
    elif args.format == "csv":
        _emit("\n".join(report.csv_rows()), args)
        for key in ("sum_tau", "inv_uhat_N", "spectral_radius", "max_deviation"):
            print(f"# {key}={summary[key]!r}", file=sys.stderr)
    else:
        _emit("\n".join(f"{k} = {v}" for k, v in summary.items() if k != "tau"), args)
    return 0


def cmd_search(args) -> int:
    _require(args, "N", "p")
    # --trials is the short spelling for per-restart iterations
    iterations = args.iterations if args.iterations is not None else args.trials
    cfg = SearchConfig(N=args.N, p=args.p,
                       iterations=120 if iterations is None else iterations,
                       restarts=args.restarts, node_strategy=args.node_strategy,
                       r=args.r, seed=args.seed)
    best, info = extremal_search(cfg, _quad(args))
    if args.replay_out:
        with open(args.replay_out, "w") as fh:
            json.dump(info["best_instance"], fh)
    if args.format == "json":
        _emit(json.dumps({"seed": cfg.seed, "best": best.to_json(),
                          "tightness": info["tightness"],
                          "trace": info["trace"]}, indent=2), args)
    elif args.format == "csv":
        rows = [f"# seed={cfg.seed}", "restart,iteration,ratio,step"]
        rows += [f"{t['restart']},{t['iteration']},{t['ratio']!r},{t['step']!r}"
                 for t in info["trace"]]
        _emit("\n".join(rows), args)
    else:
        _emit(f"seed = {cfg.seed}\nbest ratio = {best.ratio!r}\n"
              f"bound = {best.bound!r}\ntightness = {info['tightness']!r}", args)
    return 0


def cmd_compare(args) -> int:
    _require(args, "pgrid")
    if args.Ngrid is None and args.N is None:
        raise ValidationError("missing required parameter: Ngrid (or N)")
    if args.deltas is None and args.delta is None:
        raise ValidationError("missing required parameter: delta (or deltas)")
    Ns = _parse_grid_ints(args.Ngrid) if args.Ngrid is not None else [args.N]
    delta_text = args.deltas if args.deltas is not None else args.delta
    deltas = [Separation.parse(t) for t in delta_text.split(",") if t.strip()]
    if not deltas:
        raise ValidationError("empty delta list")
    rows = compare_bounds(Ns, deltas, _parse_grid_floats(args.pgrid))
    if args.format == "json":
        _emit(json.dumps([dict(rep.to_json(), best=best) for rep, best in rows],
                         indent=2), args)
    else:
        out = [BoundReport.csv_header() + ",best"]
        out += [rep.csv_row() + f",{best}" for rep, best in rows]
        _emit("\n".join(out), args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "plain"), default=None)
    common.add_argument("--output", help="write to this path instead of stdout")
    common.add_argument("--config", help="key=value defaults file")
    common.add_argument("--quad-tol", dest="quad_tol", type=float,
                        help="override quadrature relative tolerance")
    common.add_argument("--seed", type=int, default=None)

    ap = argparse.ArgumentParser(
        prog="trigsieve",
        description="Sampling-sum bounds for trigonometric polynomials: "
                    "constants, convolution-inverse diagnostics, and "
                    "empirical verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", parents=[common],
                       help="closed-form constants for one (N, p, delta)")
    b.add_argument("-N", type=int, dest="N")
    b.add_argument("-p", type=float, dest="p")
    b.add_argument("--delta", help="float or 'pi/20' / '3pi/40' literal")
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", parents=[common],
                       help="check one instance against the bound")
    v.add_argument("-N", type=int, dest="N")
    v.add_argument("-p", type=float, dest="p")
    v.add_argument("-r", type=int, dest="r")
    v.add_argument("--poly", help="polynomial JSON file")
    v.add_argument("--random", action="store_true", help="draw a random polynomial")
    v.add_argument("--scale", type=float, default=None)
    v.add_argument("--nodes", help="node-set JSON file")
    v.add_argument("--node-strategy", choices=NODE_STRATEGIES, default=None)
    v.add_argument("--replay", help="instance JSON from a campaign/search")
    v.add_argument("--trials", type=int, default=None,
                   help="run a random campaign of this many instances")
    v.add_argument("--dump-instance", help="write the checked (or, for a "
                   "campaign, the tightest) instance as JSON")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("kernel", parents=[common],
                       help="extremal kernel and inverse-measure diagnostics")
    k.add_argument("-N", type=int, dest="N")
    k.add_argument("-p", type=float, dest="p")
    k.add_argument("--diagnose", action="store_true",
                   help="run the full inverse construction and identity checks")
    k.add_argument("--tol", type=float, default=None,
                   help="inversion-identity tolerance")
    k.set_defaults(func=cmd_kernel)

    s = sub.add_parser("search", parents=[common],
                       help="derivative-free search for tight instances")
    s.add_argument("-N", type=int, dest="N")
    s.add_argument("-p", type=float, dest="p")
    s.add_argument("-r", type=int, dest="r")
    s.add_argument("--iterations", type=int, default=None)
    s.add_argument("--trials", type=int, default=None,
                   help="alias for --iterations")
    s.add_argument("--restarts", type=int, default=None)
    s.add_argument("--node-strategy", choices=NODE_STRATEGIES, default=None)
    s.add_argument("--replay-out", help="write the best instance as JSON")
    s.set_defaults(func=cmd_search)

    c = sub.add_parser("compare", parents=[common],
                       help="bound comparison table over a grid")
    c.add_argument("-N", type=int, dest="N", help="single degree")
    c.add_argument("--Ngrid", help="e.g. '1,5,10' or '1:6'")
    c.add_argument("--pgrid", help="e.g. '1:6' or '1,1.5,2'")
    c.add_argument("--delta", help="single delta literal")
    c.add_argument("--deltas", help="comma-separated delta literals")
    c.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except (ValidationError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IdentityViolationError, FoldConsistencyError, KernelAdmissibilityError,
            TruncationError, QuadratureConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
