"""Estimation-error transformations as explicit piecewise functions.

A transform maps a target-loss regret t in [0, 1] to the least surrogate
regret any hypothesis violating the target can incur; its inverse converts a
surrogate regret into a target-regret guarantee.  Transforms are materialized
as breakpoints plus closed-form segments so tests can assert their structure
(segment kinds, slopes, knots) and the CLI can serialize them.

Segment kinds:

    affine      slope*t + intercept
    power       scale * t**exponent
    entropy     (t+1)/2*log2(t+1) + (1-t)/2*log2(1-t)
    exp_branch  1 - sqrt(1 - t^2)

The forward transforms for the six margin losses over bounded linear or ReLU
classes only differ through one scalar, the class's bias reach c (B, or
Lambda*B for networks); c = +inf recovers the classical unrestricted-class
forms.  Inverses are exact except for the logistic and exponential losses,
whose materialized inverses are the standard upper-bounding relaxations
(flagged ``relaxed``); their exact inverses are available by bisection.

Worst-case (adversarial) transforms exist only for the rho-margin family;
for worst-case hinge and sigmoid losses, transforms exist only under a
Massart noise assumption, and for worst-case convex losses no nontrivial
transform exists at all (``NegativeResultError``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .hypotheses import HypothesisClass, HypothesisSpec
from .losses import LossFamily, MarginLoss, check_truncation_eps

__all__ = [
    "Direction",
    "Segment",
    "PiecewiseTransform",
    "NegativeResultError",
    "transform",
    "transform_inverse",
    "adversarial_transform",
    "massart_transform",
    "massart_adversarial_transform",
    "invert_numerically",
]

_LN2 = math.log(2.0)
_CONTINUITY_TOL = 1e-12


class Direction(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class NegativeResultError(ValueError):
    """No nontrivial estimation-error transform exists for this combination."""


@dataclass(frozen=True)
class Segment:
    kind: str  # "affine" | "power" | "entropy" | "exp_branch"
    coefficients: tuple = ()

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "affine":
            slope, intercept = self.coefficients
            return slope * t + intercept
        if self.kind == "power":
            scale, exponent = self.coefficients
            return scale * np.power(t, exponent)
        if self.kind == "entropy":
            # (t+1)/2*log2(t+1) + (1-t)/2*log2(1-t), with 0*log(0) = 0 at t=1
            up = (t + 1.0) / 2.0 * np.log2(t + 1.0)
            down = np.where(t < 1.0, (1.0 - t) / 2.0 * np.log2(np.maximum(1.0 - t, 1e-300)), 0.0)
            return up + down
        if self.kind == "exp_branch":
            return 1.0 - np.sqrt(np.maximum(1.0 - t * t, 0.0))
        raise ValueError(f"unknown segment kind {self.kind!r}")

    def derivative(self, t: float) -> float:
        if self.kind == "affine":
            return self.coefficients[0]
        if self.kind == "power":
            scale, exponent = self.coefficients
            if t <= 0.0:
                return math.inf if exponent < 1.0 else (scale if exponent == 1.0 else 0.0)
            return scale * exponent * t ** (exponent - 1.0)
        if self.kind == "entropy":
            if t >= 1.0:
                return math.inf
            return 0.5 * math.log2((1.0 + t) / (1.0 - t))
        if self.kind == "exp_branch":
            if t >= 1.0:
                return math.inf
            return t / math.sqrt(1.0 - t * t)
        raise ValueError(f"unknown segment kind {self.kind!r}")


@dataclass(frozen=True)
class PiecewiseTransform:
    """Breakpoints plus per-interval segments; immutable after construction.

    ``breakpoints`` has one more entry than ``segments``; segment i applies on
    [breakpoints[i], breakpoints[i+1]].  Inverse-direction transforms extend
    their final segment beyond the last finite breakpoint (they are defined on
    all of R+), forward transforms are restricted to [0, breakpoints[-1]].
    """

    breakpoints: tuple
    segments: tuple
    direction: Direction
    eps: float = 0.0
    relaxed: bool = False
    loss_label: str = ""
    class_label: str = ""
    note: str = ""

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "segments", tuple(self.segments))
        if len(bps) != len(self.segments) + 1:
            raise ValueError("need exactly one more breakpoint than segments")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError(f"breakpoints must be strictly increasing, got {bps}")
        if bps[0] != 0.0:
            raise ValueError("transforms start at 0")
        for knot, left, right in zip(bps[1:-1], self.segments, self.segments[1:]):
            gap = abs(float(left(knot)) - float(right(knot)))
            if gap > _CONTINUITY_TOL:
                raise ValueError(f"discontinuity {gap:.3e} at breakpoint {knot}")

    @property
    def domain_end(self) -> float:
        return self.breakpoints[-1]

    def _segment_index(self, t):
        knots = np.asarray(self.breakpoints[1:-1], dtype=float)
        return np.searchsorted(knots, t, side="left")

    def __call__(self, t):
        scalar = np.isscalar(t)
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t_arr < -1e-12) or np.any(t_arr > self.domain_end + 1e-12):
            raise ValueError(f"argument outside domain [0, {self.domain_end}]")
        t_arr = np.clip(t_arr, 0.0, None)
        idx = self._segment_index(t_arr)
        out = np.empty_like(t_arr)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if mask.any():
                out[mask] = seg(t_arr[mask])
        return float(out[0]) if scalar else out

    def _one_sided_derivatives(self, t: float):
        i = int(self._segment_index(t))
        cands = [self.segments[i].derivative(t)]
        for j, knot in enumerate(self.breakpoints[1:-1]):
            if abs(knot - t) <= 1e-15:
                cands.append(self.segments[j].derivative(t))
                cands.append(self.segments[j + 1].derivative(t))
        return cands

    def derivative_upper(self, t: float) -> float:
        """Largest one-sided derivative at t (conservative at breakpoints)."""
        return max(self._one_sided_derivatives(t))

    def derivative_lower(self, t: float) -> float:
        """Smallest one-sided derivative at t."""
        return min(self._one_sided_derivatives(t))

    def scaled(self, factor: float) -> "PiecewiseTransform":
        """Pointwise multiple of this transform (used to build negative controls)."""
        segs = []
        for seg in self.segments:
            if seg.kind == "affine":
                a, b = seg.coefficients
                segs.append(Segment("affine", (factor * a, factor * b)))
            elif seg.kind == "power":
                s, e = seg.coefficients
                segs.append(Segment("power", (factor * s, e)))
            else:
                raise ValueError(f"cannot scale segment kind {seg.kind!r} in closed form")
        return replace(self, segments=tuple(segs), note=f"scaled x{factor:g}")

    def to_json_dict(self) -> dict:
        return {
            "loss": self.loss_label,
            "class_params": self.class_label,
            "direction": self.direction.value,
            "eps": self.eps,
            "relaxed": self.relaxed,
            "note": self.note,
            "breakpoints": [b if math.isfinite(b) else "inf" for b in self.breakpoints],
            "segments": [
                {"kind": s.kind, "coefficients": list(s.coefficients)} for s in self.segments
            ],
        }


def _affine(slope, intercept=0.0):
    return Segment("affine", (float(slope), float(intercept)))


def _power(scale, exponent):
    return Segment("power", (float(scale), float(exponent)))


def _check_scale(c: float) -> float:
    if not c > 0:
        raise ValueError(f"class bias reach must be positive, got {c}")
    return c


def _log2_1p_exp(c: float) -> float:
    """log2(1 + e^c), stable for large |c|."""
    return float(np.logaddexp(0.0, c)) / _LN2


def _forward_pieces(loss: MarginLoss, c: float):
    """Interior knots and segments of the forward transform on [0, 1]."""
    fam = loss.family
    if fam is LossFamily.HINGE:
        return [], [_affine(min(c, 1.0))]
    if fam is LossFamily.SIGMOID:
        slope = 1.0 if math.isinf(c) else math.tanh(loss.k * c)
        return [], [_affine(slope)]
    if fam is LossFamily.RHO_MARGIN:
        return [], [_affine(min(c, loss.rho) / loss.rho)]
    if fam is LossFamily.QUADRATIC:
        if c >= 1.0:
            return [], [_power(1.0, 2.0)]
        return [c], [_power(1.0, 2.0), _affine(2.0 * c, -c * c)]
    if fam is LossFamily.LOGISTIC:
        if math.isinf(c):
            return [], [Segment("entropy")]
        knot = math.tanh(c / 2.0)  # = (e^c - 1)/(e^c + 1)
        if knot >= 1.0:
            return [], [Segment("entropy")]
        slope = 0.5 * (_log2_1p_exp(c) - _log2_1p_exp(-c))
        intercept = 1.0 - 0.5 * (_log2_1p_exp(-c) + _log2_1p_exp(c))
        return [knot], [Segment("entropy"), _affine(slope, intercept)]
    if fam is LossFamily.EXPONENTIAL:
        if math.isinf(c):
            return [], [Segment("exp_branch")]
        knot = math.tanh(c)  # = (e^2c - 1)/(e^2c + 1)
        if knot >= 1.0:
            return [], [Segment("exp_branch")]
        return [knot], [Segment("exp_branch"), _affine(math.sinh(c), 1.0 - math.cosh(c))]
    raise ValueError(f"unknown loss family {fam!r}")


def transform(loss: MarginLoss, spec: HypothesisSpec, eps: float = 0.0) -> PiecewiseTransform:
    """Forward estimation-error transform of a margin loss for the given class."""
    check_truncation_eps(eps)
    if spec.adversarial:
        raise ValueError("spec has gamma > 0; use adversarial_transform")
    c = _check_scale(spec.margin_scale())
    knots, segs = _forward_pieces(loss, c)
    pt = PiecewiseTransform(
        (0.0, *knots, 1.0),
        segs,
        Direction.FORWARD,
        loss_label=loss.label(),
        class_label=spec.label(),
    )
    if eps > 0.0:
        pt = _apply_eps_floor(pt, eps)
    return pt


def _apply_eps_floor(pt: PiecewiseTransform, eps: float) -> PiecewiseTransform:
    """Replace the transform below eps with the chord through (eps, T(eps))."""
    t_eps = pt(eps)
    if t_eps <= 0.0:
        raise ValueError(
            f"eps-truncated transform undefined: T({eps}) = 0 (degenerate chord slope)"
        )
    new_bps = [0.0, eps]
    new_segs = [_affine(t_eps / eps)]
    old = list(pt.breakpoints)
    for i, seg in enumerate(pt.segments):
        left, right = old[i], old[i + 1]
        if right <= eps:
            continue
        new_bps.append(right)
        new_segs.append(seg)
    return replace(pt, breakpoints=tuple(new_bps), segments=tuple(new_segs), eps=eps)


def transform_inverse(loss: MarginLoss, spec: HypothesisSpec) -> PiecewiseTransform:
    """Inverse transform on R+ (exact, or the standard upper-bounding relaxation
    for the logistic and exponential losses, flagged ``relaxed``)."""
    if spec.adversarial:
        raise ValueError("spec has gamma > 0; use adversarial_transform")
    c = _check_scale(spec.margin_scale())
    fam = loss.family
    relaxed = False
    if fam is LossFamily.HINGE:
        knots, segs = [], [_affine(1.0 / min(c, 1.0))]
    elif fam is LossFamily.SIGMOID:
        slope = 1.0 if math.isinf(c) else math.tanh(loss.k * c)
        knots, segs = [], [_affine(1.0 / slope)]
    elif fam is LossFamily.RHO_MARGIN:
        slope = min(c, loss.rho) / loss.rho
        knots, segs = [], [_affine(1.0 / slope)]
    elif fam is LossFamily.QUADRATIC:
        if math.isinf(c):
            knots, segs = [], [_power(1.0, 0.5)]
        else:
            knots, segs = [c * c], [_power(1.0, 0.5), _affine(1.0 / (2.0 * c), c / 2.0)]
    elif fam in (LossFamily.LOGISTIC, LossFamily.EXPONENTIAL):
        relaxed = True
        half_c = c / 2.0 if fam is LossFamily.LOGISTIC else c
        tanh_c = 1.0 if math.isinf(half_c) else math.tanh(half_c)
        knot = 0.5 * tanh_c * tanh_c
        knots, segs = [knot], [_power(math.sqrt(2.0), 0.5), _affine(2.0 / tanh_c)]
    else:
        raise ValueError(f"unknown loss family {fam!r}")
    return PiecewiseTransform(
        (0.0, *knots, math.inf),
        segs,
        Direction.INVERSE,
        relaxed=relaxed,
        loss_label=loss.label(),
        class_label=spec.label(),
    )


def adversarial_transform(
    loss: MarginLoss, spec: HypothesisSpec, eps: float = 0.0
) -> PiecewiseTransform:
    """Worst-case estimation-error transform; only the rho-margin family has one.

    For the ReLU class the slope uses the Lambda*B relaxation of the class's
    best worst-case score (the exact quantity has no explicit expression).
    """
    check_truncation_eps(eps)
    if not spec.adversarial:
        raise ValueError("adversarial transform requires gamma > 0")
    if spec.cls not in (HypothesisClass.LINEAR, HypothesisClass.ONE_HIDDEN_RELU):
        raise ValueError("adversarial transforms cover linear and ReLU classes only")
    fam = loss.family
    if fam is not LossFamily.RHO_MARGIN:
        hint = (
            " (under Massart noise, use massart_adversarial_transform)"
            if fam in (LossFamily.HINGE, LossFamily.SIGMOID)
            else ""
        )
        raise NegativeResultError(
            f"no nontrivial worst-case transform exists for the {fam.value} loss: any "
            f"distribution-independent guarantee is lower bounded by 1/2{hint}"
        )
    c = _check_scale(spec.margin_scale())
    note = "Lambda*B relaxation" if spec.cls is HypothesisClass.ONE_HIDDEN_RELU else ""
    return PiecewiseTransform(
        (0.0, 1.0),
        [_affine(min(c, loss.rho) / loss.rho)],
        Direction.FORWARD,
        eps=eps,
        loss_label="sup-" + loss.label(),
        class_label=spec.label(),
        note=note,
    )


def massart_transform(loss: MarginLoss, spec: HypothesisSpec, beta: float) -> PiecewiseTransform:
    """Noise-adapted transform for the unrestricted class: the base transform
    above 2*beta, its chord through the origin below."""
    _check_beta(beta)
    if spec.cls is not HypothesisClass.ALL:
        raise ValueError("the Massart-modified transform is defined for the unrestricted class")
    if loss.family not in (LossFamily.QUADRATIC, LossFamily.LOGISTIC, LossFamily.EXPONENTIAL):
        raise ValueError(f"Massart-modified transform not derived for {loss.family.value}")
    _, (base,) = _forward_pieces(loss, math.inf)
    knot = 2.0 * beta
    label = f"massart(beta={beta:g})-" + loss.label()
    if knot >= 1.0:
        seg = _affine(float(base(1.0)))
        return PiecewiseTransform(
            (0.0, 1.0), [seg], Direction.FORWARD, loss_label=label, class_label=spec.label()
        )
    chord = _affine(float(base(knot)) / knot)
    return PiecewiseTransform(
        (0.0, knot, 1.0),
        [chord, base],
        Direction.FORWARD,
        loss_label=label,
        class_label=spec.label(),
    )


def massart_adversarial_transform(
    loss: MarginLoss, spec: HypothesisSpec, beta: float
) -> PiecewiseTransform:
    """Noise-adapted worst-case transform for hinge or sigmoid surrogates:
    slope c*4*beta/(1+2*beta) below 1/2+beta, then c*(2t-1), where c is
    min{B,1} (hinge) or tanh(k*B) (sigmoid), with Lambda*B replacing B for
    ReLU networks."""
    _check_beta(beta)
    if not spec.adversarial:
        raise ValueError("adversarial transform requires gamma > 0")
    if spec.cls not in (HypothesisClass.LINEAR, HypothesisClass.ONE_HIDDEN_RELU):
        raise ValueError("adversarial transforms cover linear and ReLU classes only")
    scale = _check_scale(spec.margin_scale())
    if loss.family is LossFamily.HINGE:
        c = min(scale, 1.0)
    elif loss.family is LossFamily.SIGMOID:
        c = 1.0 if math.isinf(scale) else math.tanh(loss.k * scale)
    else:
        raise ValueError(
            f"Massart-modified worst-case transform not derived for {loss.family.value}"
        )
    knot = 0.5 + beta
    label = f"massart(beta={beta:g})-sup-" + loss.label()
    if knot >= 1.0:
        return PiecewiseTransform(
            (0.0, 1.0),
            [_affine(c * 4.0 * beta / (1.0 + 2.0 * beta))],
            Direction.FORWARD,
            loss_label=label,
            class_label=spec.label(),
        )
    return PiecewiseTransform(
        (0.0, knot, 1.0),
        [_affine(c * 4.0 * beta / (1.0 + 2.0 * beta)), _affine(2.0 * c, -c)],
        Direction.FORWARD,
        loss_label=label,
        class_label=spec.label(),
    )


def invert_numerically(pt: PiecewiseTransform, y: float, tol: float = 1e-12) -> float:
    """Exact inverse of a monotone forward transform by bisection on [0, end]."""
    if pt.direction is not Direction.FORWARD:
        raise ValueError("numeric inversion applies to forward transforms")
    end = pt.breakpoints[-1]
    top = pt(end)
    if y < -tol or y > top + 1e-9:
        raise ValueError(f"value {y} outside transform range [0, {top}]")
    y = min(max(y, 0.0), top)
    lo, hi = 0.0, end
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pt(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _check_beta(beta: float) -> None:
    if not 0.0 < beta <= 0.5:
        raise ValueError(f"Massart beta must lie in (0, 1/2], got {beta}")
