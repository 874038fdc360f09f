"""Randomized cross-checks of every closed form against the grid oracle.

One row per (loss, class) pair in scope.  Each row draws random parameter
instances, compares the closed-form minimal conditional risk against
``brute_force_inf``, and (non-adversarial rows) compares the forward
transform against the constrained-minus-unconstrained oracle infima
minimized over an input-norm grid.  The worst-case rho-margin row for ReLU
networks is checked by exact evaluation of sampled one-hidden-layer networks
at d=1 against the closed-form bracket.

The deviation threshold scales with grid resolution: tol(grid_n) =
2e-3 * max(1, 4001/grid_n), matching the oracle's O(1/grid_n) accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conditional import (
    ConditionalPoint,
    Constraint,
    brute_force_inf,
    min_conditional_risk,
    min_conditional_risk_adversarial,
)
from .hypotheses import HypothesisClass, HypothesisSpec
from .losses import (
    MarginLoss,
    eval_margin_loss,
    exponential,
    hinge,
    logistic,
    quadratic,
    rho_margin,
    sigmoid,
)
from .transforms import transform

__all__ = ["OracleCheckRow", "run_oracle_checks", "BASE_TOLERANCE"]

BASE_TOLERANCE = 2e-3
_X_GRID_POINTS = 21


@dataclass(frozen=True)
class OracleCheckRow:
    label: str
    instances: int
    max_dev_min_risk: float
    max_dev_transform: float
    threshold: float
    passed: bool


def _tolerance(grid_n: int) -> float:
    return BASE_TOLERANCE * max(1.0, 4001.0 / grid_n)


def _losses(rng) -> list:
    return [
        hinge(),
        logistic(),
        exponential(),
        quadratic(),
        sigmoid(k=float(rng.uniform(0.5, 2.0))),
        rho_margin(rho=float(rng.uniform(0.5, 1.5))),
    ]


def _sample_spec(rng, cls: HypothesisClass, gamma: float = 0.0) -> HypothesisSpec:
    if cls is HypothesisClass.LINEAR:
        return HypothesisSpec(cls, W=float(rng.uniform(0.2, 2.0)), B=float(rng.uniform(0.05, 2.0)), gamma=gamma)
    return HypothesisSpec(
        cls,
        W=float(rng.uniform(0.1, 1.5)),
        B=float(rng.uniform(0.1, 1.5)),
        Lambda=float(rng.uniform(0.3, 1.6)),
        gamma=gamma,
    )


def _nonadv_row(loss_name, cls, instances, grid_n, seed, tamper):
    rng = np.random.default_rng(seed)
    nudge = 5.0 * _tolerance(grid_n)
    dev_min = 0.0
    dev_trans = 0.0
    x_grid = np.linspace(0.0, 1.0, _X_GRID_POINTS)
    for _ in range(instances):
        loss = _pick_loss(loss_name, rng)
        spec = _sample_spec(rng, cls)
        point = ConditionalPoint(float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 1.0)))
        closed = min_conditional_risk(loss, spec, point)
        if tamper:
            closed += nudge
        oracle = brute_force_inf(loss, spec, point, Constraint.NONE, grid_n)
        dev_min = max(dev_min, abs(closed - oracle))
        # transform vs constrained-minus-unconstrained infima, minimized over x
        t_arg = float(rng.uniform(0.5, 1.0))
        fwd = float(transform(loss, spec)(2.0 * t_arg - 1.0))
        if tamper:
            fwd += nudge
        best = math.inf
        for x in x_grid:
            pt = ConditionalPoint(float(x), t_arg)
            constrained = brute_force_inf(loss, spec, pt, Constraint.SCORE_NEGATIVE, grid_n)
            unconstrained = brute_force_inf(loss, spec, pt, Constraint.NONE, grid_n)
            best = min(best, constrained - unconstrained)
        dev_trans = max(dev_trans, abs(fwd - best))
    return dev_min, dev_trans


def _adv_linear_row(instances, grid_n, seed, tamper):
    rng = np.random.default_rng(seed)
    nudge = 5.0 * _tolerance(grid_n)
    dev = 0.0
    for _ in range(instances):
        loss = rho_margin(rho=float(rng.uniform(0.5, 1.5)))
        spec = HypothesisSpec(
            HypothesisClass.LINEAR,
            W=float(rng.uniform(0.2, 1.5)),
            B=float(rng.uniform(0.05, 1.5)),
            gamma=float(rng.uniform(0.05, 0.3)),
        )
        point = ConditionalPoint(float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 1.0)))
        lo, hi = min_conditional_risk_adversarial(loss, spec, point)
        assert abs(hi - lo) < 1e-12  # exact for the linear class
        closed = lo + (nudge if tamper else 0.0)
        oracle = brute_force_inf(loss, spec, point, Constraint.NONE, grid_n)
        dev = max(dev, abs(closed - oracle))
    return dev


def _relu_ball_extrema(units_u, units_w, bias, x, gamma):
    """Exact extrema of sum_j u_j*relu(w_j*x' + b) over [x-gamma, x+gamma] at d=1:
    the network is piecewise linear, so extremes occur at endpoints or kinks."""
    cands = [x - gamma, x + gamma]
    for w in units_w:
        if w != 0.0:
            z = -bias / w
            if x - gamma < z < x + gamma:
                cands.append(z)
    vals = [
        float(np.sum(units_u * np.maximum(units_w * c + bias, 0.0))) for c in cands
    ]
    return min(vals), max(vals)


def _adv_relu_row(instances, seed, tamper):
    """Sampled-network bracketing check for the worst-case rho-margin closed
    forms over one-hidden-layer ReLU networks."""
    rng = np.random.default_rng(seed)
    dev = 0.0
    for _ in range(instances):
        loss = rho_margin(rho=float(rng.uniform(0.5, 1.5)))
        spec = _sample_spec(rng, cls=HypothesisClass.ONE_HIDDEN_RELU, gamma=float(rng.uniform(0.05, 0.3)))
        x = float(rng.uniform(0.0, 1.0))
        t = float(rng.uniform(0.0, 1.0))
        point = ConditionalPoint(x, t)
        lo, hi = min_conditional_risk_adversarial(loss, spec, point)
        if tamper:
            lo, hi = lo + 1.0, hi + 1.0  # shove the bracket clear of every sampled value
        best = math.inf
        for trial in range(96):
            n_units = int(rng.integers(1, 4))
            if trial < 2:
                # bias-only witnesses h = +-Lambda*relu(B): the sign must come
                # through u because a ReLU discards a negative bias
                u = np.array([spec.Lambda if trial == 0 else -spec.Lambda])
                w = np.array([0.0])
                b = spec.B
            else:
                raw = rng.uniform(-1.0, 1.0, n_units)
                total = np.sum(np.abs(raw))
                u = raw * (spec.Lambda * rng.uniform(0.2, 1.0) / total) if total else raw
                w = rng.uniform(-spec.W, spec.W, n_units)
                b = float(rng.uniform(-spec.B, spec.B))
            h_lo, h_hi = _relu_ball_extrema(u, w, b, x, spec.gamma)
            val = t * float(eval_margin_loss(loss, h_lo)) + (1.0 - t) * float(
                eval_margin_loss(loss, -h_hi)
            )
            best = min(best, val)
        violation = max(lo - best, best - hi)  # sampled min must land inside [lo, hi]
        dev = max(dev, max(violation, 0.0))
    return dev


def run_oracle_checks(grid_n: int = 4001, instances: int = 25, seed: int = 0, tamper: bool = False):
    """Run every row; returns a list of OracleCheckRow (all must pass)."""
    tol = _tolerance(grid_n)
    rows = []
    fams = ["hinge", "logistic", "exponential", "quadratic", "sigmoid", "rho-margin"]
    for cls in (HypothesisClass.LINEAR, HypothesisClass.ONE_HIDDEN_RELU):
        for k, fam in enumerate(fams):
            row_seed = seed * 1009 + k + (0 if cls is HypothesisClass.LINEAR else 6)
            dm, dt = _nonadv_row(fam, cls, instances, grid_n, row_seed, tamper)
            label = f"{fam} / {cls.value}"
            rows.append(
                OracleCheckRow(label, instances, dm, dt, tol, dm <= tol and dt <= tol)
            )
    dev = _adv_linear_row(instances, grid_n, seed * 1009 + 12, tamper)
    rows.append(
        OracleCheckRow("sup-rho-margin / linear", instances, dev, math.nan, tol, dev <= tol)
    )
    dev = _adv_relu_row(instances, seed * 1009 + 13, tamper)
    relu_tol = 1e-9  # bracket check is exact; any violation is a logic error
    rows.append(
        OracleCheckRow(
            "sup-rho-margin / relu (bracket)", instances, dev, math.nan, relu_tol, dev <= relu_tol
        )
    )
    return rows


def _pick_loss(name: str, rng) -> MarginLoss:
    for loss in _losses(rng):
        if loss.family.value == name:
            return loss
    raise ValueError(f"unknown loss name {name!r}")
