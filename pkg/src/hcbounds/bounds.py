"""Assembled estimation-error bounds and their verification primitives.

Pieces: generalization risks of a concrete linear hypothesis (exact by
quadrature / closed-form tail probabilities, or Monte Carlo with standard
errors), best-in-class risks at d=1 by coarse-to-fine (w, b) grid refinement,
minimizability gaps (best-in-class risk minus the expected pointwise minimal
conditional risk), and complete bound reports of the form

    target_excess  <=  Gamma(surrogate_excess + M_surrogate) - M_target

where Gamma is the inverse of the appropriate estimation-error transform
(standard, worst-case, or Massart-modified).  The module also carries the
discrete verifier for the general convex-Psi bound on finite-support
distributions and the constructive no-guarantee demonstration for worst-case
convex/sigmoid surrogates.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .conditional import (
    ConditionalPoint,
    brute_force_inf,
    conditional_risk,
    conditional_risk_zero_one,
    min_conditional_risk,
    min_conditional_risk_adversarial,
    min_risk_symmetric,
)
from .distributions import (
    Atom,
    FiniteDistribution,
    LabeledDistribution,
    QuadratureError,
    sample,
)
from .hypotheses import HypothesisClass, HypothesisSpec, LinearHypothesis
from .losses import (
    ZERO_ONE,
    LossFamily,
    MarginLoss,
    ZeroOneLoss,
    eval_margin_loss,
    truncate,
)
from .transforms import (
    Direction,
    NegativeResultError,
    PiecewiseTransform,
    adversarial_transform,
    invert_numerically,
    massart_adversarial_transform,
    massart_transform,
    transform_inverse,
)

__all__ = [
    "Exact",
    "MonteCarlo",
    "Target",
    "BestInClass",
    "BoundReport",
    "PsiBoundCheck",
    "NegativeResultDemo",
    "risk",
    "best_in_class_risk",
    "minimizability_gap",
    "assemble_bound",
    "verify_psi_bound_discrete",
    "negative_result_demo",
]

_BIC_TOL = 1e-4
_GL_NODES = 201
_REFINE_ROUNDS = 4  # initial grid + 3 tenfold refinements
_GRID_SIDE = 41


@dataclass(frozen=True)
class Exact:
    pass


@dataclass(frozen=True)
class MonteCarlo:
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Monte Carlo sample size must be >= 1, got {self.n}")


class Target(enum.Enum):
    ZERO_ONE = "zero-one"
    ADVERSARIAL_ZERO_ONE = "adversarial-zero-one"


# ---------------------------------------------------------------------------
# pointwise losses of a linear hypothesis at d=1
# ---------------------------------------------------------------------------


def _hyp_w(h: LinearHypothesis) -> float:
    if len(h.w) != 1:
        raise ValueError("risk evaluation over these distributions requires d=1")
    return h.w[0]


def _pointwise_losses(loss, h, xs, ys, adversarial, gamma):
    w = _hyp_w(h)
    s = w * np.asarray(xs, dtype=float) + h.b
    ys = np.asarray(ys)
    if adversarial:
        spread = gamma * abs(w)
        lo, hi = s - spread, s + spread
        if isinstance(loss, ZeroOneLoss):
            return np.where(ys > 0, lo <= 0.0, hi >= 0.0).astype(float)
        return np.where(ys > 0, eval_margin_loss(loss, lo), eval_margin_loss(loss, -hi))
    if isinstance(loss, ZeroOneLoss):
        pred = np.where(s >= 0.0, 1, -1)
        return (pred != ys).astype(float)
    return eval_margin_loss(loss, ys * s)


def _kink_margins(loss) -> tuple:
    if isinstance(loss, ZeroOneLoss):
        return (0.0,)
    fam = loss.family
    if fam in (LossFamily.HINGE, LossFamily.QUADRATIC):
        return (1.0,)
    if fam is LossFamily.RHO_MARGIN:
        return (0.0, loss.rho)
    return ()


def _discontinuity_points(loss, h, adversarial, gamma):
    """x locations where the pointwise loss of h has a kink or jump."""
    w = _hyp_w(h)
    if w == 0.0:
        return ()
    shifts = (gamma * abs(w), -gamma * abs(w)) if adversarial else (0.0,)
    pts = []
    for v in _kink_margins(loss):
        for vv in (v, -v):
            for sh in shifts:
                pts.append((vv + sh - h.b) / w)
    return tuple(sorted(set(pts)))


def _error_prob_truncnormal(law, y, w, b, adversarial, gamma):
    """Exact zero-one error mass of a linear score on one truncated normal.

    Standard case: y=+1 errs where w*x + b < 0 (strict: a zero score predicts
    +1), y=-1 errs where w*x + b >= 0.  Robust case: y=+1 errs where the ball
    minimum w*x + b - gamma|w| <= 0, y=-1 where the ball maximum >= 0.  The
    strictness only matters when the score is constant (w = 0); thresholds
    are null sets for the continuous laws otherwise.
    """
    shift = gamma * abs(w) if adversarial else 0.0
    if y > 0:
        if w == 0.0:
            err = (b - shift <= 0.0) if adversarial else (b < 0.0)
            return 1.0 if err else 0.0
        thr = (shift - b) / w
        return law.cdf(thr) if w > 0 else 1.0 - law.cdf(thr)
    if w == 0.0:
        err = (b + shift >= 0.0) if adversarial else (b >= 0.0)
        return 1.0 if err else 0.0
    thr = (-shift - b) / w
    return 1.0 - law.cdf(thr) if w > 0 else law.cdf(thr)


def risk(
    loss,
    h: LinearHypothesis,
    dist: LabeledDistribution,
    mode=Exact(),
    adversarial: bool = False,
    gamma: float = 0.0,
):
    """Generalization risk of h; returns (value, stderr). stderr is 0 in Exact mode."""
    if adversarial and not gamma > 0:
        raise ValueError("adversarial risk needs gamma > 0")
    if isinstance(mode, MonteCarlo):
        xs, ys = sample(dist, mode.n, mode.seed)
        vals = _pointwise_losses(loss, h, xs, ys, adversarial, gamma)
        se = float(vals.std(ddof=1)) / math.sqrt(mode.n) if mode.n > 1 else 0.0
        return float(vals.mean()), se
    w = _hyp_w(h)
    total = 0.0
    for c in dist.atoms():
        total += c.weight * float(
            _pointwise_losses(loss, h, np.array([c.law.x]), np.array([c.label]), adversarial, gamma)[0]
        )
    if isinstance(loss, ZeroOneLoss):
        for c in dist.continuous():
            total += c.weight * _error_prob_truncnormal(c.law, c.label, w, h.b, adversarial, gamma)
        return total, 0.0
    pts = _discontinuity_points(loss, h, adversarial, gamma)
    for c in dist.continuous():
        law = c.law

        def f(x, _law=law, _y=c.label):
            val = _pointwise_losses(loss, h, np.array([x]), np.array([_y]), adversarial, gamma)
            return float(val[0]) * _law.pdf(x)

        inner = sorted(p for p in pts if law.lo < p < law.hi)
        val, err = quad(f, law.lo, law.hi, points=inner or None, limit=200, epsabs=1e-10, epsrel=1e-10)
        if err > 1e-8:
            raise QuadratureError(f"risk quadrature error {err:.2e} on [{law.lo}, {law.hi}]")
        total += c.weight * val
    return total, 0.0


# ---------------------------------------------------------------------------
# best-in-class risk by grid refinement (d=1, linear class)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BestInClass:
    value: float
    exact: bool
    tol: float
    w: float = math.nan
    b: float = math.nan


def _risk_grid(loss, dist, w_vals, b_vals, adversarial, gamma):
    """Risk of every (w, b) pair: exact tail masses for zero-one, fixed
    Gauss-Legendre panels for margin losses (search accuracy only)."""
    nw, nb = len(w_vals), len(b_vals)
    out = np.zeros((nw, nb))
    w_col = np.asarray(w_vals)[:, None]
    b_row = np.asarray(b_vals)[None, :]
    spread = gamma * np.abs(w_col) if adversarial else 0.0
    for c in dist.atoms():
        s = w_col * c.law.x + b_row
        if isinstance(loss, ZeroOneLoss):
            if adversarial:
                vals = (s - spread <= 0.0) if c.label > 0 else (s + spread >= 0.0)
            else:
                vals = (s < 0.0) if c.label > 0 else (s >= 0.0)
            out += c.weight * vals.astype(float)
        else:
            if adversarial:
                arg = (s - spread) if c.label > 0 else (-s - spread)
            else:
                arg = c.label * s
            out += c.weight * eval_margin_loss(loss, arg)
    if isinstance(loss, ZeroOneLoss):
        shift = spread if adversarial else np.zeros_like(w_col)
        w_nonzero = np.where(w_col == 0.0, np.nan, w_col)
        for c in dist.continuous():
            law = c.law
            if c.label > 0:
                thr = (shift - b_row) / w_nonzero
                cdf = law.cdf(np.nan_to_num(thr, nan=0.0))
                sided = np.where(w_col > 0, cdf, 1.0 - cdf)
                flat = ((b_row - shift) <= 0.0 if adversarial else b_row < 0.0).astype(float)
            else:
                thr = (-shift - b_row) / w_nonzero
                cdf = law.cdf(np.nan_to_num(thr, nan=0.0))
                sided = np.where(w_col > 0, 1.0 - cdf, cdf)
                flat = ((b_row + shift) >= 0.0 if adversarial else b_row >= 0.0).astype(float)
            out += c.weight * np.where(w_col == 0.0, flat * np.ones_like(sided), sided)
        return out
    nodes, weights = np.polynomial.legendre.leggauss(_GL_NODES)
    for c in dist.continuous():
        law = c.law
        half = 0.5 * (law.hi - law.lo)
        xg = law.lo + half * (nodes + 1.0)
        wg = weights * half * law.pdf(xg) * c.weight
        s = w_col[:, :, None] * xg[None, None, :] + b_row[:, :, None]
        if adversarial:
            sp = (gamma * np.abs(w_col))[:, :, None]
            arg = (s - sp) if c.label > 0 else (-s - sp)
        else:
            arg = c.label * s
        out += eval_margin_loss(loss, arg) @ wg
    return out


def best_in_class_risk(
    loss, spec: HypothesisSpec, dist: LabeledDistribution, adversarial: bool = False
) -> BestInClass:
    """Infimum of the risk over the class at d=1.

    Unrestricted class: exact, as the expectation of the pointwise minimal
    conditional risk (the class attains the pointwise optimum everywhere).
    Linear class: coarse-to-fine (w, b) grid refinement; the returned value
    re-evaluates the best grid point with adaptive quadrature.
    """
    if adversarial and not spec.adversarial:
        raise ValueError("adversarial best-in-class risk needs spec.gamma > 0")
    if spec.cls is HypothesisClass.ALL:
        if adversarial:
            raise ValueError("no exact machinery for the unrestricted class under perturbations")
        if isinstance(loss, ZeroOneLoss):
            val = _expect_eta(dist, lambda e: min(e, 1.0 - e))
        else:
            val = _expect_eta(dist, lambda e: min_risk_symmetric(loss, math.inf, e))
        return BestInClass(val, exact=True, tol=0.0)
    if spec.cls is not HypothesisClass.LINEAR:
        raise ValueError("best-in-class search supports the linear and unrestricted classes")
    if not (math.isfinite(spec.W) and math.isfinite(spec.B)):
        raise ValueError("grid search needs finite W and B")
    gamma = spec.gamma if adversarial else 0.0
    w_lo, w_hi = -spec.W, spec.W
    b_lo, b_hi = -spec.B, spec.B
    wi = bi = 0.0
    for _ in range(_REFINE_ROUNDS):
        w_vals = np.linspace(w_lo, w_hi, _GRID_SIDE)
        b_vals = np.linspace(b_lo, b_hi, _GRID_SIDE)
        grid = _risk_grid(loss, dist, w_vals, b_vals, adversarial, gamma)
        i, j = np.unravel_index(int(np.argmin(grid)), grid.shape)
        wi, bi = float(w_vals[i]), float(b_vals[j])
        dw = (w_hi - w_lo) / (_GRID_SIDE - 1)
        db = (b_hi - b_lo) / (_GRID_SIDE - 1)
        w_lo, w_hi = max(-spec.W, wi - 2 * dw), min(spec.W, wi + 2 * dw)
        b_lo, b_hi = max(-spec.B, bi - 2 * db), min(spec.B, bi + 2 * db)
    best_h = LinearHypothesis((wi,), bi)
    val, _ = risk(loss, best_h, dist, Exact(), adversarial=adversarial, gamma=gamma)
    return BestInClass(val, exact=False, tol=_BIC_TOL, w=wi, b=bi)


def _expect_eta(dist: LabeledDistribution, fn) -> float:
    from .distributions import expectation

    return expectation(dist, lambda x, e: fn(e))


def _expect_min_conditional(loss, spec, dist, adversarial) -> float:
    """E_X of the pointwise minimal conditional risk (lower endpoint when only
    a bracket is available, which upper-bounds the resulting gap)."""
    from .distributions import expectation

    if isinstance(loss, ZeroOneLoss):
        return _expect_eta(dist, lambda e: min(e, 1.0 - e))
    if adversarial:
        return expectation(
            dist,
            lambda x, e: min_conditional_risk_adversarial(
                loss, spec, ConditionalPoint(abs(x), e)
            )[0],
        )
    return expectation(
        dist, lambda x, e: min_conditional_risk(loss, spec, ConditionalPoint(abs(x), e))
    )


def _is_singleton(dist: LabeledDistribution) -> bool:
    locs = {c.law.x for c in dist.components if isinstance(c.law, Atom)}
    return len(locs) == 1 and not dist.continuous()


def minimizability_gap(
    loss, spec: HypothesisSpec, dist: LabeledDistribution, adversarial: bool = False
) -> float:
    """Best-in-class risk minus the expected pointwise minimal conditional risk.

    Identically 0 for the unrestricted class with the losses in scope and for
    single-support distributions.  When only a bracket on the pointwise
    minimum exists (worst-case hinge/sigmoid, ReLU class) the reported gap is
    the conservative upper end, which keeps assembled bounds valid.
    """
    if spec.cls is HypothesisClass.ALL and not adversarial:
        return 0.0
    if _is_singleton(dist):
        return 0.0
    star = best_in_class_risk(loss, spec, dist, adversarial=adversarial)
    return star.value - _expect_min_conditional(loss, spec, dist, adversarial)


# ---------------------------------------------------------------------------
# bound assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    surrogate_excess: float
    m_surrogate: float
    m_target: float
    transform_label: str
    mc_stderr_lhs: float
    mc_stderr_rhs: float
    holds: bool
    slack: float
    saturated: bool = False
    relaxed_inverse: bool = False
    provenance: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "components": {
                "surrogate_excess": self.surrogate_excess,
                "M_surrogate": self.m_surrogate,
                "M_target": self.m_target,
                "transform": self.transform_label,
            },
            "mc_stderr_lhs": self.mc_stderr_lhs,
            "mc_stderr_rhs": self.mc_stderr_rhs,
            "holds": self.holds,
            "slack": self.slack,
            "saturated": self.saturated,
            "relaxed_inverse": self.relaxed_inverse,
            "provenance": dict(self.provenance),
        }


def _check_massart_on_dist(dist: LabeledDistribution, beta: float) -> None:
    """Grid check of |eta - 1/2| >= beta off zero-density sets; warn on violation."""
    xs = np.linspace(-1.0, 1.0, 10001)
    bad = 0
    for x in xs:
        dens = sum(c.weight * c.law.pdf(x) for c in dist.continuous())
        if dens > 1e-12 and abs(dist.eta(float(x)) - 0.5) < beta - 1e-12:
            bad += 1
    for c in dist.atoms():
        if abs(dist.eta(c.law.x) - 0.5) < beta - 1e-12:
            bad += 1
    if bad:
        warnings.warn(
            f"distribution violates the beta={beta:g} noise condition at {bad} grid points",
            stacklevel=3,
        )


def _select_transform(target, surrogate, spec, massart):
    """Returns (gamma_fn, label, relaxed, forward_pt_or_None) for the bound RHS."""
    adversarial = target is Target.ADVERSARIAL_ZERO_ONE
    if adversarial:
        if surrogate.family is LossFamily.RHO_MARGIN:
            fwd = adversarial_transform(surrogate, spec)
        elif surrogate.family in (LossFamily.HINGE, LossFamily.SIGMOID):
            if massart is None:
                raise NegativeResultError(
                    f"no distribution-independent guarantee exists for the worst-case "
                    f"{surrogate.family.value} loss; supply a Massart beta"
                )
            fwd = massart_adversarial_transform(surrogate, spec, massart)
        else:
            raise NegativeResultError(
                f"no nontrivial guarantee exists for the worst-case {surrogate.family.value} loss"
            )
        return fwd, fwd.loss_label, False
    if massart is not None:
        fwd = massart_transform(surrogate, spec, massart)
        return fwd, fwd.loss_label, False
    inv = transform_inverse(surrogate, spec)
    return inv, inv.loss_label, inv.relaxed


def assemble_bound(
    target: Target,
    surrogate: MarginLoss,
    spec: HypothesisSpec,
    dist: LabeledDistribution,
    h: LinearHypothesis,
    massart: float = None,
    mode=Exact(),
) -> BoundReport:
    """Instantiate one complete estimation-error bound and check it.

    lhs is the target estimation error of h; rhs applies the selected
    transform inverse to (surrogate excess + surrogate gap) and subtracts the
    target gap.  In Monte Carlo mode both risks are estimated from one shared
    sample and carry delta-method standard errors.
    """
    adversarial = target is Target.ADVERSARIAL_ZERO_ONE
    if adversarial and not spec.adversarial:
        raise ValueError("adversarial target requires spec.gamma > 0")
    if not adversarial and spec.adversarial:
        raise ValueError("non-adversarial target requires spec.gamma = 0")
    if massart is not None and not adversarial:
        if spec.cls is not HypothesisClass.ALL or surrogate.family not in (
            LossFamily.QUADRATIC,
            LossFamily.LOGISTIC,
            LossFamily.EXPONENTIAL,
        ):
            raise ValueError(
                "Massart-modified bounds cover quadratic/logistic/exponential "
                "surrogates with the unrestricted class"
            )
    pt, label, relaxed = _select_transform(target, surrogate, spec, massart)
    if massart is not None:
        _check_massart_on_dist(dist, massart)
    gamma = spec.gamma

    if isinstance(mode, MonteCarlo):
        xs, ys = sample(dist, mode.n, mode.seed)
        tvals = _pointwise_losses(ZERO_ONE, h, xs, ys, adversarial, gamma)
        svals = _pointwise_losses(surrogate, h, xs, ys, adversarial, gamma)
        r_target, se_target = float(tvals.mean()), float(tvals.std(ddof=1)) / math.sqrt(mode.n)
        r_surr, se_surr = float(svals.mean()), float(svals.std(ddof=1)) / math.sqrt(mode.n)
    else:
        r_target, se_target = risk(ZERO_ONE, h, dist, Exact(), adversarial, gamma)
        r_surr, se_surr = risk(surrogate, h, dist, Exact(), adversarial, gamma)

    star_target = best_in_class_risk(ZERO_ONE, spec, dist, adversarial=adversarial)
    e_cstar_target = _expect_min_conditional(ZERO_ONE, spec, dist, adversarial)
    m_target = 0.0 if spec.cls is HypothesisClass.ALL else star_target.value - e_cstar_target
    e_cstar_surr = _expect_min_conditional(surrogate, spec, dist, adversarial)
    if spec.cls is HypothesisClass.ALL:
        m_surr = 0.0
        star_surr_value = e_cstar_surr
    else:
        star_surr = best_in_class_risk(surrogate, spec, dist, adversarial=adversarial)
        star_surr_value = star_surr.value
        m_surr = star_surr_value - e_cstar_surr

    lhs = r_target - star_target.value
    arg = r_surr - e_cstar_surr  # = surrogate excess + surrogate gap, grid-noise free
    surrogate_excess = r_surr - star_surr_value

    saturated = False
    if pt.direction is Direction.INVERSE:
        gamma_val = float(pt(max(arg, 0.0)))
        deriv = pt.derivative_upper(max(arg, 0.0))
    else:
        top = float(pt(pt.breakpoints[-1]))
        if arg > top:
            saturated = True
            inv_val = pt.breakpoints[-1]
            deriv = 0.0
        else:
            inv_val = invert_numerically(pt, max(arg, 0.0))
            d_fwd = pt.derivative_lower(inv_val)  # smallest T' -> largest Gamma'
            deriv = (1.0 / d_fwd) if d_fwd > 0 else math.inf
        gamma_val = inv_val
    rhs = gamma_val - m_target
    se_rhs = deriv * se_surr if se_surr else 0.0
    slack = rhs - lhs
    holds = lhs <= rhs + 3.0 * (se_target + se_rhs) + 1e-9
    prov = (
        ("mode", "mc" if isinstance(mode, MonteCarlo) else "exact"),
        ("n", getattr(mode, "n", 0)),
        ("seed", getattr(mode, "seed", 0)),
        ("best_in_class_tol", _BIC_TOL if spec.cls is not HypothesisClass.ALL else 0.0),
        ("massart_beta", massart if massart is not None else ""),
        ("target", target.value),
    )
    return BoundReport(
        lhs=lhs,
        rhs=rhs,
        surrogate_excess=surrogate_excess,
        m_surrogate=m_surr,
        m_target=m_target,
        transform_label=label,
        mc_stderr_lhs=se_target,
        mc_stderr_rhs=se_rhs,
        holds=bool(holds),
        slack=slack,
        saturated=saturated,
        relaxed_inverse=relaxed,
        provenance=prov,
    )


# ---------------------------------------------------------------------------
# discrete verification of the convex-Psi bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PsiBoundCheck:
    holds: bool
    precondition_ok: bool
    violations: tuple  # (atom_index, hypothesis_index, gap)
    max_bound_slack: float


def verify_psi_bound_discrete(
    dist: FiniteDistribution,
    surrogate: MarginLoss,
    spec: HypothesisSpec,
    psi: PiecewiseTransform,
    hypotheses,
    eps: float = 0.0,
    atol: float = 1e-10,
) -> PsiBoundCheck:
    """Exact check of the convex-Psi estimation-error bound on finite support.

    First verifies the pointwise condition Psi(<target regret>_eps) <=
    surrogate regret at every (atom, hypothesis) pair, then the assembled
    inequality Psi(E[target regret]) <= E[surrogate regret] + max{Psi(0),
    Psi(eps)} for each hypothesis.  All quantities are conditional-risk
    differences with closed-form minima, so arithmetic is exact.
    """
    violations = []
    max_slack = -math.inf
    d2 = np.empty(len(dist.atoms))
    d1 = np.empty(len(dist.atoms))
    weights = np.array([w for _, w, _ in dist.atoms])
    holds = True
    psi0 = float(psi(0.0))
    psi_eps = float(psi(eps)) if eps > 0 else psi0
    offset = max(psi0, psi_eps)
    for hj, h in enumerate(hypotheses):
        for ai, (x, _w, e) in enumerate(dist.atoms):
            point = ConditionalPoint(abs(x), e)
            u = float(h.score(x))
            d2[ai] = conditional_risk_zero_one(u, e) - min(e, 1.0 - e)
            d1[ai] = conditional_risk(surrogate, spec, u, point) - min_conditional_risk(
                surrogate, spec, point
            )
            lhs_pt = float(psi(truncate(d2[ai], eps)))
            if lhs_pt > d1[ai] + atol:
                violations.append((ai, hj, lhs_pt - d1[ai]))
        lhs = float(psi(float(weights @ d2)))
        rhs = float(weights @ d1) + offset
        max_slack = max(max_slack, lhs - rhs)
        if lhs > rhs + atol:
            holds = False
    return PsiBoundCheck(
        holds=holds,
        precondition_ok=not violations,
        violations=tuple(violations),
        max_bound_slack=max_slack,
    )


# ---------------------------------------------------------------------------
# constructive no-guarantee demonstration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NegativeResultDemo:
    surrogate_estimation_error: float
    target_estimation_error: float
    r_surrogate_h0: float
    r_surrogate_star: float
    r_target_h0: float
    r_target_star: float
    oracle_surrogate_star: float


def negative_result_demo(surrogate: MarginLoss, spec: HypothesisSpec) -> NegativeResultDemo:
    """Singleton construction showing worst-case convex/sigmoid surrogates give
    nothing: at eta = 1/2 the zero hypothesis has surrogate estimation error 0
    but target (robust) estimation error exactly 1/2."""
    if not spec.adversarial:
        raise ValueError("the construction is adversarial; spec needs gamma > 0")
    if spec.cls not in (HypothesisClass.LINEAR, HypothesisClass.ONE_HIDDEN_RELU):
        raise ValueError("demonstration requires a linear or ReLU class")
    if not spec.margin_scale() > 0:
        raise ValueError("class must contain strictly positive worst-case scores (B > 0)")
    if surrogate.family is LossFamily.RHO_MARGIN:
        raise ValueError("the rho-margin family admits a nontrivial guarantee; no demo")
    phi0 = float(eval_margin_loss(surrogate, 0.0))
    # h0 = 0 at the distinguishing point: both worst-case scores are 0.
    r_surr_h0 = 0.5 * phi0 + 0.5 * phi0
    r_surr_star = phi0  # attained by h0; no h does better at eta = 1/2
    r_target_h0 = 1.0  # both label-wise robust indicators fire
    r_target_star = 0.5  # sign-definite hypotheses exist (b = B > 0)
    point = ConditionalPoint(0.0, 0.5)
    if spec.cls is HypothesisClass.LINEAR:
        oracle = brute_force_inf(surrogate, spec, point, grid_n=2001)
    else:
        oracle = math.nan
    return NegativeResultDemo(
        surrogate_estimation_error=r_surr_h0 - r_surr_star,
        target_estimation_error=r_target_h0 - r_target_star,
        r_surrogate_h0=r_surr_h0,
        r_surrogate_star=r_surr_star,
        r_target_h0=r_target_h0,
        r_target_star=r_target_star,
        oracle_surrogate_star=oracle,
    )
