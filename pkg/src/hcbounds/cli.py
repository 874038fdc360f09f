"""Command-line front end: transforms, bounds, oracle checks, and sweeps.

Subcommands::

    hcbounds transform    --loss hinge --class linear --B 0.8 [--out t.json]
    hcbounds bound        --target zero-one --loss hinge --class linear --B 0.5
                          --dist '{"components": [...]}' --w -5 --b 0 --mode mc --n 100000
    hcbounds oracle-check [--grid-n 4001 --instances 25 --seed 0]
    hcbounds sweep        --experiment sect7-nonadv --n 1000000 --seed 7 --out run1

Flags mirror the mathematical symbols one-to-one (--W, --B, --Lambda, --k,
--rho, --gamma, --massart-beta).  A JSON config file can supply any flag
(--config file.json); explicit flags win.  Exit codes: 0 success, 1 check
failure, 2 validation error.  HCB_THREADS caps worker parallelism (the
numeric kernels are vectorized single-threaded, so any cap >= 1 is honored).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import experiments
from .bounds import Exact, MonteCarlo, Target, assemble_bound
from .distributions import dist_from_json_dict, preset_distribution
from .hypotheses import HypothesisClass, HypothesisSpec, LinearHypothesis
from .losses import LossFamily, MarginLoss
from .oracle_check import run_oracle_checks
from .transforms import (
    NegativeResultError,
    adversarial_transform,
    massart_adversarial_transform,
    massart_transform,
    transform,
    transform_inverse,
)

_CLASSES = {"all": HypothesisClass.ALL, "linear": HypothesisClass.LINEAR, "relu": HypothesisClass.ONE_HIDDEN_RELU}
_LOSS_NAMES = ("hinge", "logistic", "exponential", "quadratic", "sigmoid", "rho-margin")


def _thread_cap() -> int:
    raw = os.environ.get("HCB_THREADS", "")
    if not raw:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"HCB_THREADS must be an integer >= 1, got {raw!r}")
    if cap < 1:
        raise ValueError(f"HCB_THREADS must be >= 1, got {cap}")
    return cap


def _parse_loss(name: str, k: float, rho: float) -> tuple:
    """Returns (MarginLoss, wants_sup)."""
    wants_sup = name.startswith("sup-")
    base = name[4:] if wants_sup else name
    if base not in _LOSS_NAMES:
        raise ValueError(f"unknown loss {name!r}; expected one of {_LOSS_NAMES} or sup- prefix")
    fam = LossFamily(base)
    return MarginLoss(fam, k=k, rho=rho), wants_sup


def _parse_b(raw: str) -> float:
    if raw in ("inf", "Inf", "INF", "infinity"):
        return math.inf
    return float(raw)


def _build_spec(args) -> HypothesisSpec:
    cls = _CLASSES[args.cls]
    return HypothesisSpec(
        cls,
        W=args.W,
        B=_parse_b(args.B),
        Lambda=args.Lambda,
        p=args.p,
        gamma=args.gamma,
    )


def _load_dist(args):
    spec = args.dist
    if spec in ("sect7-nonadv", "sect7-adv"):
        return preset_distribution(spec, sigma=args.sigma, gamma=args.gamma or 0.1)
    if spec.strip().startswith("{"):
        return dist_from_json_dict(json.loads(spec))
    with open(spec) as fh:
        return dist_from_json_dict(json.load(fh))


def _emit(payload: dict, out: str) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _apply_config(args, parser_defaults: dict) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        cfg = json.load(fh)
    unknown = set(cfg) - set(parser_defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key, value in cfg.items():
        if getattr(args, key) == parser_defaults[key]:  # flag not explicitly set
            setattr(args, key, value)


# ---------------------------------------------------------------------------


def cmd_transform(args, defaults) -> int:
    _apply_config(args, defaults)
    loss, wants_sup = _parse_loss(args.loss, args.k, args.rho)
    spec = _build_spec(args)
    if wants_sup and not spec.adversarial:
        raise ValueError(f"{args.loss} requires --gamma > 0")
    if spec.adversarial and not wants_sup:
        raise ValueError("--gamma > 0 requires a sup- loss")
    inverse = None
    if wants_sup:
        if args.massart_beta is not None:
            fwd = massart_adversarial_transform(loss, spec, args.massart_beta)
        else:
            fwd = adversarial_transform(loss, spec, eps=args.eps)
    elif args.massart_beta is not None:
        fwd = massart_transform(loss, spec, args.massart_beta)
    else:
        fwd = transform(loss, spec, eps=args.eps)
        inverse = transform_inverse(loss, spec)
    ts = np.linspace(0.0, 1.0, args.grid_n)
    samples = [{"t": float(t), "T": float(fwd(float(t)))} for t in ts]
    if args.format == "csv":
        if not args.out:
            raise ValueError("--format csv requires --out")
        experiments.write_rows_csv(samples, args.out)
        return 0
    payload = {
        "transform": fwd.to_json_dict(),
        "inverse": inverse.to_json_dict() if inverse is not None else None,
        "samples": samples,
    }
    _emit(payload, args.out)
    return 0


def cmd_bound(args, defaults) -> int:
    _apply_config(args, defaults)
    loss, wants_sup = _parse_loss(args.loss, args.k, args.rho)
    spec = _build_spec(args)
    target = Target.ADVERSARIAL_ZERO_ONE if wants_sup else Target.ZERO_ONE
    if wants_sup and not spec.adversarial:
        raise ValueError(f"{args.loss} requires --gamma > 0")
    dist = _load_dist(args)
    h = LinearHypothesis((args.w,), args.b)
    mode = MonteCarlo(args.n, args.seed) if args.mode == "mc" else Exact()
    report = assemble_bound(target, loss, spec, dist, h, massart=args.massart_beta, mode=mode)
    _emit(report.to_json_dict(), args.out)
    return 0 if report.holds else 1


def cmd_oracle_check(args, defaults) -> int:
    _apply_config(args, defaults)
    rows = run_oracle_checks(
        grid_n=args.grid_n, instances=args.instances, seed=args.seed, tamper=args.tamper
    )
    ok = True
    for row in rows:
        status = "PASS" if row.passed else "FAIL"
        ok = ok and row.passed
        trans = "" if math.isnan(row.max_dev_transform) else f" transform_dev={row.max_dev_transform:.3e}"
        print(
            f"[{status}] {row.label}: min_risk_dev={row.max_dev_min_risk:.3e}{trans} "
            f"(threshold {row.threshold:.3e}, {row.instances} instances)"
        )
    if args.out:
        payload = {
            "rows": [
                {
                    "label": r.label,
                    "instances": r.instances,
                    "max_dev_min_risk": r.max_dev_min_risk,
                    "max_dev_transform": r.max_dev_transform,
                    "threshold": r.threshold,
                    "passed": r.passed,
                }
                for r in rows
            ]
        }
        _emit(payload, args.out)
    return 0 if ok else 1


def cmd_sweep(args, defaults) -> int:
    _apply_config(args, defaults)
    sigmas = tuple(float(s) for s in args.sigmas.split(",")) if args.sigmas else experiments._DEFAULT_SIGMAS
    if args.experiment == "figure1":
        spec = HypothesisSpec(HypothesisClass.LINEAR, W=args.W, B=_parse_b(args.B))
        rows = experiments.emit_transform_curves(spec=spec, grid_n=max(args.grid_n, 100))
        meta = {"experiment": "figure1", "B": _parse_b(args.B), "W": args.W, "grid_n": args.grid_n}
    else:
        cfg = experiments.SweepConfig(
            sigmas=sigmas, n_samples=args.n, seed=args.seed, w=args.w, b=args.b, gamma=args.gamma
        )
        if args.experiment == "sect7-nonadv":
            rows = experiments.run_nonadversarial_sweep(cfg)
        elif args.experiment == "sect7-adv":
            rows = experiments.run_adversarial_sweep(cfg)
        else:
            raise ValueError(f"unknown experiment {args.experiment!r}")
        meta = {
            "experiment": args.experiment,
            "sigmas": list(sigmas),
            "n": args.n,
            "seed": args.seed,
            "w": args.w,
            "b": args.b,
            "gamma": args.gamma,
            "note": "sigma grid is a package choice; the reference experiment does not state one",
        }
    out = args.out or args.experiment
    wrote = []
    if args.format in ("csv", "both"):
        experiments.write_rows_csv(rows, out + ".csv")
        wrote.append(out + ".csv")
    if args.format in ("json", "both"):
        experiments.write_rows_json(rows, out + ".json", meta=meta)
        wrote.append(out + ".json")
    print("wrote " + ", ".join(wrote))
    if args.experiment != "figure1" and not all(r["holds"] for r in rows):
        return 1
    return 0


# ---------------------------------------------------------------------------


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--class", dest="cls", choices=sorted(_CLASSES), default="linear")
    p.add_argument("--W", type=float, default=1.0)
    p.add_argument("--B", type=str, default="1.0", help="bias budget; 'inf' allowed")
    p.add_argument("--Lambda", type=float, default=1.0)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--massart-beta", dest="massart_beta", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hcbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_tr = sub.add_parser("transform", help="materialize an estimation-error transform")
    p_tr.add_argument("--loss", required=True)
    _add_spec_flags(p_tr)
    p_tr.add_argument("--grid-n", dest="grid_n", type=int, default=101)
    p_tr.add_argument("--format", choices=["json", "csv"], default="json")
    p_tr.add_argument("--out", default="")
    p_tr.add_argument("--config", default="")
    p_tr.set_defaults(func=cmd_transform, _subparser=p_tr)

    p_b = sub.add_parser("bound", help="assemble and check one bound")
    p_b.add_argument("--target", choices=["zero-one", "adversarial-zero-one"], default="zero-one")
    p_b.add_argument("--loss", required=True)
    _add_spec_flags(p_b)
    p_b.add_argument("--dist", required=True, help="preset name, JSON literal, or path")
    p_b.add_argument("--sigma", type=float, default=0.05)
    p_b.add_argument("--w", type=float, default=-5.0)
    p_b.add_argument("--b", type=float, default=0.0)
    p_b.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p_b.add_argument("--n", type=int, default=10**6)
    p_b.add_argument("--seed", type=int, default=0)
    p_b.add_argument("--out", default="")
    p_b.add_argument("--config", default="")
    p_b.set_defaults(func=cmd_bound, _subparser=p_b)

    p_oc = sub.add_parser("oracle-check", help="closed forms vs the grid oracle")
    p_oc.add_argument("--grid-n", dest="grid_n", type=int, default=4001)
    p_oc.add_argument("--instances", type=int, default=25)
    p_oc.add_argument("--seed", type=int, default=0)
    p_oc.add_argument("--tamper", action="store_true", help="negative control: perturb closed forms")
    p_oc.add_argument("--out", default="")
    p_oc.add_argument("--config", default="")
    p_oc.set_defaults(func=cmd_oracle_check, _subparser=p_oc)

    p_sw = sub.add_parser("sweep", help="run a simulation sweep or curve emission")
    p_sw.add_argument("--experiment", choices=["sect7-nonadv", "sect7-adv", "figure1"], required=True)
    p_sw.add_argument("--n", type=int, default=10**6)
    p_sw.add_argument("--seed", type=int, default=0)
    p_sw.add_argument("--sigmas", default="")
    p_sw.add_argument("--w", type=float, default=-5.0)
    p_sw.add_argument("--b", type=float, default=0.0)
    p_sw.add_argument("--gamma", type=float, default=0.1)
    p_sw.add_argument("--W", type=float, default=1.0)
    p_sw.add_argument("--B", type=str, default="0.8")
    p_sw.add_argument("--grid-n", dest="grid_n", type=int, default=201)
    p_sw.add_argument("--out", default="")
    p_sw.add_argument("--format", choices=["csv", "json", "both"], default="both")
    p_sw.add_argument("--config", default="")
    p_sw.set_defaults(func=cmd_sweep, _subparser=p_sw)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = args._subparser
    defaults = {
        key: sub.get_default(key)
        for key in vars(args)
        if key not in ("func", "command", "_subparser")
    }
    try:
        _thread_cap()
        return args.func(args, defaults)
    except (ValueError, NegativeResultError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
