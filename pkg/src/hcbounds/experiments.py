"""Scripted simulation sweeps and plot-ready curve tables.

Two sweeps reproduce the tightness simulations at desk scale: a
non-adversarial sweep comparing the zero-one excess of h(x) = -5x against
quadratic/logistic/exponential surrogate excesses on the mirror-symmetric
atom + truncated-normal mixture, and an adversarial sweep comparing the
robust zero-one risk against worst-case rho-margin/hinge/sigmoid risks on the
shifted mixture.  Both distributions put all conditional probabilities at 0
or 1, so the noise parameter is beta = 1/2 and every bound reduces to a
multiplier-one comparison whose slack must shrink as sigma -> 0.

All rows are produced from seeded counter-based sampling in a fixed order, so
a rerun with an identical config is bit-identical.  Writers emit CSV (12
significant digits) and JSON (full-precision round-trip floats).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .bounds import _pointwise_losses
from .distributions import expectation, sect7_adversarial, sect7_nonadversarial, sample
from .hypotheses import HypothesisClass, HypothesisSpec, LinearHypothesis
from .losses import (
    ZERO_ONE,
    LossFamily,
    exponential,
    hinge,
    logistic,
    quadratic,
    rho_margin,
    sigmoid,
)
from .conditional import ConditionalPoint, min_conditional_risk
from .transforms import transform, transform_inverse

__all__ = [
    "SweepConfig",
    "run_nonadversarial_sweep",
    "run_adversarial_sweep",
    "nonadversarial_minimal_risks",
    "emit_transform_curves",
    "write_rows_csv",
    "write_rows_json",
]

_DEFAULT_SIGMAS = (0.2, 0.1, 0.05, 0.02, 0.01)


@dataclass(frozen=True)
class SweepConfig:
    sigmas: tuple = _DEFAULT_SIGMAS
    n_samples: int = 10**6
    seed: int = 0
    w: float = -5.0
    b: float = 0.0
    gamma: float = 0.1
    beta: float = 0.5
    losses: tuple = ()

    def __post_init__(self):
        sig = tuple(float(s) for s in self.sigmas)
        object.__setattr__(self, "sigmas", sig)
        object.__setattr__(self, "losses", tuple(self.losses))
        if any(s2 >= s1 for s1, s2 in zip(sig, sig[1:])):
            raise ValueError("sigmas must be strictly decreasing toward 0")
        if any(not 0.0 < s < 1.0 for s in sig):
            raise ValueError("each sigma must lie in (0, 1)")
        if self.n_samples < 10**4:
            raise ValueError("sweeps need at least 10^4 samples per cell")
        if self.beta != 0.5:
            raise ValueError("the simulation protocol fixes beta = 1/2")


def _cell_seed(seed: int, index: int) -> int:
    return (seed ^ ((index + 1) * 0x9E3779B97F4A7C15)) % 2**64


def _mean_se(vals: np.ndarray) -> tuple:
    n = len(vals)
    return float(vals.mean()), float(vals.std(ddof=1)) / math.sqrt(n)


def run_nonadversarial_sweep(cfg: SweepConfig):
    """Rows {sigma, loss, lhs, rhs, stderrs, slack, holds} for the standard sweep.

    lhs is the empirical zero-one risk of h (its minimal risk vanishes on
    these distributions), rhs the surrogate risk scaled by 2*beta/T(2*beta),
    which is exactly 1 at beta = 1/2.
    """
    losses = cfg.losses or (quadratic(), logistic(), exponential())
    allowed = {LossFamily.QUADRATIC, LossFamily.LOGISTIC, LossFamily.EXPONENTIAL}
    if any(l.family not in allowed for l in losses):
        raise ValueError("non-adversarial sweep covers quadratic/logistic/exponential")
    spec_all = HypothesisSpec(HypothesisClass.ALL)
    h = LinearHypothesis((cfg.w,), cfg.b)
    rows = []
    for i, sigma in enumerate(cfg.sigmas):
        dist = sect7_nonadversarial(sigma)
        seed = _cell_seed(cfg.seed, i)
        xs, ys = sample(dist, cfg.n_samples, seed)
        t_vals = _pointwise_losses(ZERO_ONE, h, xs, ys, False, 0.0)
        lhs, se_lhs = _mean_se(t_vals)
        for loss in losses:
            mult = 2.0 * cfg.beta / float(transform(loss, spec_all)(2.0 * cfg.beta))
            s_vals = _pointwise_losses(loss, h, xs, ys, False, 0.0)
            mean_s, se_s = _mean_se(s_vals)
            rhs, se_rhs = mult * mean_s, mult * se_s
            slack = rhs - lhs
            rows.append(
                {
                    "experiment": "sect7-nonadv",
                    "sigma": sigma,
                    "loss": loss.label(),
                    "n": cfg.n_samples,
                    "seed": seed,
                    "multiplier": mult,
                    "lhs": lhs,
                    "rhs": rhs,
                    "stderr_lhs": se_lhs,
                    "stderr_rhs": se_rhs,
                    "slack": slack,
                    "holds": bool(slack >= -3.0 * (se_lhs + se_rhs)),
                }
            )
    return rows


def run_adversarial_sweep(cfg: SweepConfig):
    """Rows for the adversarial sweep: absolute robust zero-one risk of h
    against the absolute worst-case surrogate risk (the reduced beta = 1/2
    form of the bounds)."""
    losses = cfg.losses or (rho_margin(1.0), hinge(), sigmoid(1.0))
    allowed = {LossFamily.RHO_MARGIN, LossFamily.HINGE, LossFamily.SIGMOID}
    if any(l.family not in allowed for l in losses):
        raise ValueError("adversarial sweep covers sup-rho-margin/sup-hinge/sup-sigmoid")
    if not 0.0 < cfg.gamma < 1.0:
        raise ValueError("adversarial sweep needs gamma in (0, 1)")
    h = LinearHypothesis((cfg.w,), cfg.b)
    rows = []
    for i, sigma in enumerate(cfg.sigmas):
        dist = sect7_adversarial(sigma, cfg.gamma)
        seed = _cell_seed(cfg.seed, i)
        xs, ys = sample(dist, cfg.n_samples, seed)
        t_vals = _pointwise_losses(ZERO_ONE, h, xs, ys, True, cfg.gamma)
        lhs, se_lhs = _mean_se(t_vals)
        sup_vals = {
            loss.label(): _pointwise_losses(loss, h, xs, ys, True, cfg.gamma) for loss in losses
        }
        rho_key = next((l.label() for l in losses if l.family is LossFamily.RHO_MARGIN), None)
        hinge_key = next((l.label() for l in losses if l.family is LossFamily.HINGE), None)
        if rho_key and hinge_key:
            frac = float(np.mean(sup_vals[rho_key] <= sup_vals[hinge_key] + 1e-12))
        else:
            frac = math.nan
        for loss in losses:
            rhs, se_rhs = _mean_se(sup_vals[loss.label()])
            slack = rhs - lhs
            rows.append(
                {
                    "experiment": "sect7-adv",
                    "sigma": sigma,
                    "loss": "sup-" + loss.label(),
                    "n": cfg.n_samples,
                    "seed": seed,
                    "gamma": cfg.gamma,
                    "lhs": lhs,
                    "rhs": rhs,
                    "stderr_lhs": se_lhs,
                    "stderr_rhs": se_rhs,
                    "slack": slack,
                    "holds": bool(slack >= -3.0 * (se_lhs + se_rhs)),
                    "frac_rho_rhs_le_hinge": frac,
                }
            )
    return rows


def nonadversarial_minimal_risks(sigma: float, losses=()):
    """Minimal risks over all measurable functions on the standard sweep
    distribution, by quadrature of the pointwise minimal conditional risk;
    used to verify that taking them as 0 in the sweep is sound."""
    losses = losses or (quadratic(), logistic(), exponential())
    dist = sect7_nonadversarial(sigma)
    out = {"zero-one": expectation(dist, lambda x, e: min(e, 1.0 - e))}
    spec_all = HypothesisSpec(HypothesisClass.ALL)
    for loss in losses:
        out[loss.label()] = expectation(
            dist, lambda x, e, _l=loss: min_conditional_risk(_l, spec_all, ConditionalPoint(abs(x), e))
        )
    return out


def emit_transform_curves(losses=(), spec: HypothesisSpec = None, grid_n: int = 201):
    """Plot-ready samples: each loss on [-2, 2], its transform on [0, 1], and
    the materialized inverse on [0, T(1)]."""
    if grid_n < 100:
        raise ValueError("need grid_n >= 100 for smooth curves")
    if spec is None:
        spec = HypothesisSpec(HypothesisClass.LINEAR, W=1.0, B=0.8)
    losses = losses or (hinge(), logistic(), exponential(), quadratic(), sigmoid(1.0), rho_margin(1.0))
    from .losses import eval_margin_loss

    rows = []
    alphas = np.linspace(-2.0, 2.0, grid_n)
    ts = np.linspace(0.0, 1.0, grid_n)
    for loss in losses:
        fwd = transform(loss, spec)
        inv = transform_inverse(loss, spec)
        top = float(fwd(1.0))
        args = np.linspace(0.0, top, grid_n)
        for a in alphas:
            rows.append({"loss": loss.label(), "curve": "surrogate", "x": float(a), "y": float(eval_margin_loss(loss, float(a)))})
        for t in ts:
            rows.append({"loss": loss.label(), "curve": "transform", "x": float(t), "y": float(fwd(float(t)))})
        for s in args:
            rows.append({"loss": loss.label(), "curve": "inverse", "x": float(s), "y": float(inv(float(s)))})
    return rows


def _fmt_csv(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_rows_csv(rows, path) -> None:
    if not rows:
        raise ValueError("no rows to write")
    cols = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt_csv(row[c]) for c in cols])


def write_rows_json(rows, path, meta=None) -> None:
    payload = {"meta": dict(meta or {}), "rows": rows}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
