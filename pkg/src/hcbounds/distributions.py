"""Labeled synthetic distributions on [-1, 1].

A ``LabeledDistribution`` is a finite mixture of labeled components, each an
atom (point mass) or a truncated normal.  Truncated-normal parameters are the
pre-truncation normal's mean and standard deviation, the standard convention.
The label posterior eta(x) = P(y = +1 | x) is computed measure-theoretically:
at an atom location the point masses dominate (continuous components
contribute zero probability to a single point), elsewhere the continuous
densities decide.

Sampling is exact inverse-CDF sampling driven by a counter-based generator
(Philox) with per-chunk substreams keyed by (seed, chunk index), so output is
reproducible bit-for-bit and chunks could be generated in parallel.
Expectations sum atoms exactly and integrate continuous components by
adaptive quadrature to absolute tolerance 1e-8.

The two preset families used by the simulation sweeps live here as
``sect7_nonadversarial`` and ``sect7_adversarial`` (names kept short in the
CLI: ``sect7-nonadv`` / ``sect7-adv``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr, ndtri

__all__ = [
    "Atom",
    "TruncNormal",
    "Component",
    "LabeledDistribution",
    "FiniteDistribution",
    "QuadratureError",
    "sect7_nonadversarial",
    "sect7_adversarial",
    "sample",
    "expectation",
    "dist_to_json_dict",
    "dist_from_json_dict",
    "preset_distribution",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_WEIGHT_TOL = 1e-12
_QUAD_ABS_TOL = 1e-8
_SAMPLE_CHUNK = 1 << 20


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested absolute tolerance."""


@dataclass(frozen=True)
class Atom:
    x: float


@dataclass(frozen=True)
class TruncNormal:
    """Normal(mean, std) conditioned on [lo, hi]; mean/std are pre-truncation."""

    lo: float
    hi: float
    mean: float
    std: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not self.std > 0:
            raise ValueError(f"std must be positive, got {self.std}")

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.mean) / self.std

    @property
    def _mass(self) -> float:
        return float(ndtr(self._z(self.hi)) - ndtr(self._z(self.lo)))

    def pdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        z = self._z(x_arr)
        inside = (x_arr >= self.lo) & (x_arr <= self.hi)
        vals = np.exp(-0.5 * z * z) / (self.std * _SQRT_2PI * self._mass)
        out = np.where(inside, vals, 0.0)
        return out if isinstance(x, np.ndarray) else float(out)

    def cdf(self, x):
        x_arr = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        lo_mass = ndtr(self._z(self.lo))
        out = (ndtr(self._z(x_arr)) - lo_mass) / self._mass
        return out if isinstance(x, np.ndarray) else float(out)

    def ppf(self, u):
        lo_mass = ndtr(self._z(self.lo))
        x = self.mean + self.std * ndtri(lo_mass + np.asarray(u, dtype=float) * self._mass)
        return np.clip(x, self.lo, self.hi)

    def truncated_mean(self) -> float:
        a, b = float(self._z(self.lo)), float(self._z(self.hi))
        phi_a = math.exp(-0.5 * a * a) / _SQRT_2PI
        phi_b = math.exp(-0.5 * b * b) / _SQRT_2PI
        return self.mean + self.std * (phi_a - phi_b) / self._mass


@dataclass(frozen=True)
class Component:
    weight: float
    label: int
    law: object  # Atom | TruncNormal

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"component weight must lie in [0, 1], got {self.weight}")
        if self.label not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {self.label}")


@dataclass(frozen=True)
class LabeledDistribution:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("distribution needs at least one component")
        total = math.fsum(c.weight for c in comps)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"component weights must sum to 1, got {total!r}")
        for c in comps:
            if isinstance(c.law, Atom):
                if not -1.0 <= c.law.x <= 1.0:
                    raise ValueError(f"atom at {c.law.x} outside [-1, 1]")
            elif isinstance(c.law, TruncNormal):
                if c.law.lo < -1.0 or c.law.hi > 1.0:
                    raise ValueError(f"truncated normal support [{c.law.lo}, {c.law.hi}] outside [-1, 1]")
            else:
                raise ValueError(f"unknown law {c.law!r}")

    def atoms(self):
        return [c for c in self.components if isinstance(c.law, Atom)]

    def continuous(self):
        return [c for c in self.components if isinstance(c.law, TruncNormal)]

    def eta(self, x: float) -> float:
        """P(y = +1 | x). Point masses dominate at their exact locations;
        where neither atoms nor densities put mass, returns 1/2."""
        m_pos = m_neg = 0.0
        for c in self.atoms():
            if c.law.x == x:
                if c.label > 0:
                    m_pos += c.weight
                else:
                    m_neg += c.weight
        if m_pos + m_neg > 0.0:
            return m_pos / (m_pos + m_neg)
        d_pos = d_neg = 0.0
        for c in self.continuous():
            d = c.weight * c.law.pdf(x)
            if c.label > 0:
                d_pos += d
            else:
                d_neg += d
        if d_pos + d_neg == 0.0:
            return 0.5
        return d_pos / (d_pos + d_neg)


@dataclass(frozen=True)
class FiniteDistribution:
    """Finite-support distribution given as (x, weight, eta) triples; the
    exact-arithmetic carrier for the discrete bound checks."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(x), float(w), float(e)) for x, w, e in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValueError("need at least one atom")
        total = math.fsum(w for _, w, _ in atoms)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"atom weights must sum to 1, got {total!r}")
        for x, w, e in atoms:
            if not -1.0 <= x <= 1.0:
                raise ValueError(f"atom at {x} outside [-1, 1]")
            if w < 0:
                raise ValueError("atom weights must be nonnegative")
            if not 0.0 <= e <= 1.0:
                raise ValueError(f"eta must lie in [0, 1], got {e}")

    def to_labeled(self) -> LabeledDistribution:
        comps = []
        for x, w, e in self.atoms:
            if w * e > 0.0:
                comps.append(Component(w * e, 1, Atom(x)))
            if w * (1.0 - e) > 0.0:
                comps.append(Component(w * (1.0 - e), -1, Atom(x)))
        return LabeledDistribution(tuple(comps))


def sect7_nonadversarial(sigma: float) -> LabeledDistribution:
    """Mirror-symmetric atom + truncated-normal mixture used by the
    non-adversarial simulation: a flipped-label atom at each endpoint, and
    +-labeled truncated normals on [sigma, 1] / [-1, -sigma] whose
    pre-truncation mean and standard deviation both equal sigma."""
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma}")
    return LabeledDistribution(
        (
            Component(1.0 / 16.0, -1, Atom(1.0)),
            Component(1.0 / 16.0, 1, Atom(-1.0)),
            Component(7.0 / 16.0, 1, TruncNormal(sigma, 1.0, sigma, sigma)),
            Component(7.0 / 16.0, -1, TruncNormal(-1.0, -sigma, -sigma, sigma)),
        )
    )


def sect7_adversarial(sigma: float, gamma: float = 0.1) -> LabeledDistribution:
    """Adversarial-simulation mixture: endpoint atoms plus a -1-labeled
    truncated normal on [-1, gamma - sigma] with mean gamma - sigma."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not gamma - sigma > -1.0:
        raise ValueError(f"need gamma - sigma > -1, got gamma={gamma}, sigma={sigma}")
    return LabeledDistribution(
        (
            Component(1.0 / 16.0, -1, Atom(1.0)),
            Component(1.0 / 16.0, 1, Atom(-1.0)),
            Component(7.0 / 8.0, -1, TruncNormal(-1.0, gamma - sigma, gamma - sigma, sigma)),
        )
    )


def sample(dist: LabeledDistribution, n: int, seed: int):
    """n i.i.d. draws; returns (x, y) arrays. Deterministic given the seed."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    cum = np.cumsum([c.weight for c in dist.components])
    xs = np.empty(n, dtype=float)
    ys = np.empty(n, dtype=np.int64)
    for chunk, start in enumerate(range(0, n, _SAMPLE_CHUNK)):
        m = min(_SAMPLE_CHUNK, n - start)
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, chunk], dtype=np.uint64)))
        u_comp = rng.random(m)
        u_pos = rng.random(m)
        idx = np.searchsorted(cum, u_comp, side="right")
        idx = np.minimum(idx, len(cum) - 1)
        x_chunk = np.empty(m, dtype=float)
        y_chunk = np.empty(m, dtype=np.int64)
        for ci, comp in enumerate(dist.components):
            mask = idx == ci
            if not mask.any():
                continue
            if isinstance(comp.law, Atom):
                x_chunk[mask] = comp.law.x
            else:
                x_chunk[mask] = comp.law.ppf(u_pos[mask])
            y_chunk[mask] = comp.label
        xs[start : start + m] = x_chunk
        ys[start : start + m] = y_chunk
    return xs, ys


def expectation(dist: LabeledDistribution, integrand, points=(), tol: float = _QUAD_ABS_TOL) -> float:
    """E_X[integrand(x, eta(x))]: atoms summed exactly, continuous components
    integrated adaptively.  ``points`` marks known integrand discontinuities."""
    total = 0.0
    for c in dist.atoms():
        total += c.weight * integrand(c.law.x, dist.eta(c.law.x))
    for c in dist.continuous():
        law = c.law

        def f(x, _law=law):
            return integrand(x, dist.eta(x)) * _law.pdf(x)

        inner = sorted(p for p in points if law.lo < p < law.hi)
        val, err = quad(
            f,
            law.lo,
            law.hi,
            points=inner or None,
            limit=200,
            epsabs=tol * 1e-2,
            epsrel=1e-10,
        )
        if err > tol:
            raise QuadratureError(
                f"quadrature error {err:.2e} above tolerance {tol:.0e} on [{law.lo}, {law.hi}]"
            )
        total += c.weight * val
    return total


def _law_to_json(law) -> dict:
    if isinstance(law, Atom):
        return {"kind": "atom", "x": law.x}
    return {"kind": "truncnormal", "lo": law.lo, "hi": law.hi, "mean": law.mean, "std": law.std}


def _law_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "atom":
        _require_keys(obj, {"kind", "x"})
        return Atom(float(obj["x"]))
    if kind == "truncnormal":
        _require_keys(obj, {"kind", "lo", "hi", "mean", "std"})
        return TruncNormal(float(obj["lo"]), float(obj["hi"]), float(obj["mean"]), float(obj["std"]))
    raise ValueError(f"unknown law kind {kind!r}")


def dist_to_json_dict(dist: LabeledDistribution) -> dict:
    return {
        "components": [
            {"weight": c.weight, "label": c.label, "law": _law_to_json(c.law)}
            for c in dist.components
        ]
    }


def dist_from_json_dict(obj: dict) -> LabeledDistribution:
    _require_keys(obj, {"components"})
    comps = []
    for entry in obj["components"]:
        _require_keys(entry, {"weight", "label", "law"})
        comps.append(Component(float(entry["weight"]), int(entry["label"]), _law_from_json(entry["law"])))
    return LabeledDistribution(tuple(comps))


def preset_distribution(name: str, sigma: float = 0.05, gamma: float = 0.1) -> LabeledDistribution:
    if name == "sect7-nonadv":
        return sect7_nonadversarial(sigma)
    if name == "sect7-adv":
        return sect7_adversarial(sigma, gamma)
    raise ValueError(f"unknown preset {name!r} (expected sect7-nonadv or sect7-adv)")


def _require_keys(obj: dict, allowed: set) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ValueError(f"unknown keys in distribution config: {sorted(unknown)}")
    missing = allowed - set(obj)
    if missing:
        raise ValueError(f"missing keys in distribution config: {sorted(missing)}")
