"""Hypothesis-class descriptors and attainable score ranges.

Three classes are modeled over inputs with ||x||_p <= 1:

* ``ALL`` -- all measurable functions (unbounded scores).
* ``LINEAR`` -- x -> w.x + b with ||w||_q <= W and |b| <= B, where q is the
  conjugate of p.
* ``ONE_HIDDEN_RELU`` -- one-hidden-layer ReLU networks with outer l1 budget
  Lambda and the same per-unit (W, B) constraints; scores attain exactly
  +-Lambda*(W*||x||_p + B).

For a linear hypothesis the extreme scores over a gamma-ball are in closed
form: w.x -+ gamma*||w||_q + b.  For the ReLU class only a class-level
sandwich on sup_h inf-ball scores is available (and is all the bounds need):
the supremum over the class of the ball-infimum score lies between
Lambda*B and Lambda*(W*max{||x||_p, gamma} - gamma*W + B).

``B = math.inf`` is an accepted sentinel and is propagated symbolically by
the transform constructors; it never enters grid arithmetic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HypothesisClass",
    "HypothesisSpec",
    "LinearHypothesis",
    "conjugate_exponent",
    "score_range",
    "adversarial_extrema_linear",
    "attainable_adversarial_range",
]


class HypothesisClass(enum.Enum):
    ALL = "all"
    LINEAR = "linear"
    ONE_HIDDEN_RELU = "relu"


def conjugate_exponent(p: float) -> float:
    """q with 1/p + 1/q = 1; p=1 -> inf, p=inf -> 1."""
    if p < 1:
        raise ValueError(f"norm index p must satisfy p >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class HypothesisSpec:
    """Class descriptor: which hypothesis set, its norm budgets, and the
    adversarial radius (gamma = 0 means the standard, non-adversarial setting)."""

    cls: HypothesisClass
    W: float = 1.0
    B: float = 1.0
    Lambda: float = 1.0
    p: float = 2.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.cls is not HypothesisClass.ALL:
            if not (self.W >= 0 and math.isfinite(self.W)):
                raise ValueError(f"W must be finite and >= 0, got {self.W}")
            if not (self.B >= 0):
                raise ValueError(f"B must be >= 0 (math.inf allowed), got {self.B}")
        if self.cls is HypothesisClass.ONE_HIDDEN_RELU and not (
            self.Lambda >= 0 and math.isfinite(self.Lambda)
        ):
            raise ValueError(f"Lambda must be finite and >= 0, got {self.Lambda}")
        conjugate_exponent(self.p)  # validates p
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")

    @property
    def q(self) -> float:
        return conjugate_exponent(self.p)

    @property
    def adversarial(self) -> bool:
        return self.gamma > 0.0

    def score_bound(self, x_norm_p: float) -> float:
        """Largest attainable |h(x)| at a point with the given input norm."""
        _check_x_norm(x_norm_p)
        if self.cls is HypothesisClass.ALL:
            return math.inf
        if self.cls is HypothesisClass.LINEAR:
            return self.W * x_norm_p + self.B
        return self.Lambda * (self.W * x_norm_p + self.B)

    def margin_scale(self) -> float:
        """The bias budget that drives the estimation-error transforms:
        B for linear, Lambda*B for ReLU networks, +inf for all measurable."""
        if self.cls is HypothesisClass.ALL:
            return math.inf
        if self.cls is HypothesisClass.LINEAR:
            return self.B
        return self.Lambda * self.B

    def label(self) -> str:
        if self.cls is HypothesisClass.ALL:
            return "all"
        if self.cls is HypothesisClass.LINEAR:
            return f"linear(W={self.W:g},B={self.B:g})"
        return f"relu(Lambda={self.Lambda:g},W={self.W:g},B={self.B:g})"


@dataclass(frozen=True)
class LinearHypothesis:
    """A concrete linear predictor x -> w.x + b (w is a d-vector; d=1 common)."""

    w: tuple
    b: float

    def __post_init__(self):
        w = tuple(float(v) for v in np.atleast_1d(self.w))
        object.__setattr__(self, "w", w)

    def score(self, x):
        x_arr = np.asarray(x, dtype=float)
        w_arr = np.asarray(self.w, dtype=float)
        if x_arr.ndim <= 1 and w_arr.size == 1:
            return w_arr[0] * x_arr + self.b
        return x_arr @ w_arr + self.b

    def w_norm(self, q: float) -> float:
        w_arr = np.asarray(self.w, dtype=float)
        if math.isinf(q):
            return float(np.max(np.abs(w_arr)))
        return float(np.sum(np.abs(w_arr) ** q) ** (1.0 / q))

    def validate(self, spec: HypothesisSpec) -> "LinearHypothesis":
        if spec.cls is not HypothesisClass.LINEAR:
            raise ValueError("LinearHypothesis only validates against a LINEAR spec")
        if self.w_norm(spec.q) > spec.W * (1 + 1e-12):
            raise ValueError(f"||w||_q = {self.w_norm(spec.q)} exceeds W = {spec.W}")
        if abs(self.b) > spec.B * (1 + 1e-12):
            raise ValueError(f"|b| = {abs(self.b)} exceeds B = {spec.B}")
        return self


def score_range(spec: HypothesisSpec, x_norm_p: float) -> tuple:
    """Exact attainable interval of h(x) for a bounded class; symmetric about 0."""
    if spec.cls is HypothesisClass.ALL:
        raise ValueError("score_range is undefined for the unbounded class")
    hi = spec.score_bound(x_norm_p)
    return (-hi, hi)


def adversarial_extrema_linear(h: LinearHypothesis, x, gamma: float, q: float):
    """Extreme scores of a linear hypothesis over the gamma-ball around x:
    w.x -+ gamma*||w||_q + b."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    center = h.score(x)
    spread = gamma * h.w_norm(q)
    return (center - spread, center + spread)


def attainable_adversarial_range(spec: HypothesisSpec, x_norm_p: float) -> tuple:
    """Class-level bracket for sup_h (ball-infimum score) at a point.

    Linear: the supremum equals W*max{||x||_p, gamma} - gamma*W + B exactly,
    so both endpoints coincide.  ReLU: returns the (Lambda*B, upper-bound)
    sandwich; the exact value has no closed form.
    """
    _check_x_norm(x_norm_p)
    if spec.cls is HypothesisClass.ALL:
        raise ValueError("attainable_adversarial_range is undefined for the unbounded class")
    shifted = spec.W * max(x_norm_p, spec.gamma) - spec.gamma * spec.W + spec.B
    if spec.cls is HypothesisClass.LINEAR:
        return (shifted, shifted)
    return (spec.Lambda * spec.B, spec.Lambda * shifted)


def _check_x_norm(x_norm_p: float) -> None:
    if not 0.0 <= x_norm_p <= 1.0:
        raise ValueError(f"||x||_p must lie in [0, 1], got {x_norm_p}")
