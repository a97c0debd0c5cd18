"""Trigonometric polynomials on the circle and separated sampling nodes.

A polynomial of degree N is the dense coefficient vector c_{-N..N} of
s(x) = sum c_k e^{ikx}.  Node sets are strictly increasing points in
(-pi, pi] with their circular separation; nodes given as exact rational
multiples of pi keep the exact form alongside the floats so integrality
decisions downstream never hinge on floating-point luck.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ValidationError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate

__all__ = ["TrigPoly", "NodeSet", "evaluate", "lp_norm", "sieve_sum",
           "separation", "random_poly"]

MAX_DEGREE = 4096
# cap on points per evaluation matrix; larger requests are chunked
_EVAL_BLOCK = 2_000_000


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TrigPoly:
    """Degree-N trigonometric polynomial; coeffs[k + N] is c_k."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        if not (1 <= self.degree <= MAX_DEGREE):
            raise DomainError(f"degree must be in [1, {MAX_DEGREE}], got {self.degree}")
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size != 2 * self.degree + 1:
            raise ValidationError(
                f"need {2 * self.degree + 1} coefficients for degree "
                f"{self.degree}, got shape {np.shape(self.coeffs)}")
        object.__setattr__(self, "coeffs", _readonly(c))

    def coeff(self, k: int) -> complex:
        if abs(k) > self.degree:
            raise DomainError(f"frequency {k} outside [-{self.degree}, {self.degree}]")
        return complex(self.coeffs[k + self.degree])

    def __call__(self, x):
        return evaluate(self, x)

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "TrigPoly":
        try:
            n = int(obj["degree"])
            coeffs = np.array([complex(re, im) for re, im in obj["coeffs"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed polynomial object: {exc}") from exc
        return cls(n, coeffs)


def evaluate(poly: TrigPoly, x):
    """s(x) = sum c_k e^{ikx}.  Scalar x -> complex, array x -> complex array."""
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    flat = np.atleast_1d(xs).ravel()
    k = np.arange(-poly.degree, poly.degree + 1)
    step = max(1, _EVAL_BLOCK // k.size)
    out = np.empty(flat.size, dtype=complex)
    for i in range(0, flat.size, step):
        block = flat[i:i + step]
        out[i:i + step] = np.exp(1j * np.outer(block, k)) @ poly.coeffs
    if scalar:
        return complex(out[0])
    return out.reshape(xs.shape)


def lp_norm(poly: TrigPoly, p: float, cfg: QuadratureConfig | None = None) -> float:
    """(integral over (-pi, pi] of |s|^p)^(1/p) by adaptive quadrature.

    |s|^p has a kink wherever s vanishes and p is not an even integer; the
    adaptive engine concentrates panels there.  Starts with enough panels
    to resolve the at most 2N sign changes of each coefficient mode.
    """
    if p < 1:
        raise DomainError(f"lp_norm requires p >= 1, got {p}")
    cfg = cfg or DEFAULT_CONFIG

    def integrand(xs):
        return np.abs(evaluate(poly, xs)) ** p

    total = integrate(integrand, -math.pi, math.pi, cfg,
                      initial_panels=max(16, 2 * poly.degree))
    return float(total) ** (1.0 / p)


def sieve_sum(poly: TrigPoly, nodes: "NodeSet", p: float) -> float:
    """sum over nodes of |s(x_j)|^p."""
    if p < 1:
        raise DomainError(f"sieve_sum requires p >= 1, got {p}")
    return float(np.sum(np.abs(evaluate(poly, nodes.points)) ** p))


def _validate_points(pts: np.ndarray):
    if pts.ndim != 1 or pts.size < 2:
        raise ValidationError(f"need at least 2 nodes, got {pts.size}")
    if not np.all(np.diff(pts) > 0):
        raise ValidationError("nodes must be strictly increasing (no duplicates)")
    if not (pts[0] > -math.pi and pts[-1] <= math.pi):
        raise ValidationError("nodes must lie in (-pi, pi]")


def separation(points) -> float:
    """Minimum circular gap: min of consecutive gaps and 2pi - (last - first)."""
    pts = np.asarray(points, dtype=float)
    _validate_points(pts)
    gaps = np.diff(pts)
    wrap = 2.0 * math.pi - (pts[-1] - pts[0])
    return float(min(gaps.min(), wrap))


@dataclass(frozen=True)
class NodeSet:
    """Sorted nodes in (-pi, pi]; pi_fractions[j] = x_j / pi when exact."""

    points: np.ndarray
    pi_fractions: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        _validate_points(pts)
        object.__setattr__(self, "points", _readonly(pts))
        if self.pi_fractions is not None:
            fr = tuple(Fraction(f) for f in self.pi_fractions)
            if len(fr) != pts.size:
                raise ValidationError("pi_fractions length must match points")
            if any(not (-1 < f <= 1) for f in fr):
                raise ValidationError("pi_fractions must lie in (-1, 1]")
            if any(abs(float(p) - math.pi * float(f)) > 1e-12 for p, f in zip(pts, fr)):
                raise ValidationError("pi_fractions inconsistent with points")
            object.__setattr__(self, "pi_fractions", fr)

    @property
    def r(self) -> int:
        return int(self.points.size)

    @property
    def separation(self) -> float:
        return separation(self.points)

    @property
    def separation_pi_fraction(self) -> Fraction | None:
        """Exact separation / pi, available when all nodes are pi-rational."""
        if self.pi_fractions is None:
            return None
        fr = self.pi_fractions
        gaps = [b - a for a, b in zip(fr, fr[1:])]
        gaps.append(2 - (fr[-1] - fr[0]))
        return min(gaps)

    @classmethod
    def from_pi_fractions(cls, fractions) -> "NodeSet":
        fr = tuple(Fraction(f) for f in fractions)
        pts = np.array([math.pi * f.numerator / f.denominator for f in fr])
        return cls(pts, fr)

    @classmethod
    def equispaced(cls, r: int) -> "NodeSet":
        """r nodes at exact spacing 2pi/r, last node at pi."""
        if r < 2:
            raise DomainError(f"equispaced nodes need r >= 2, got {r}")
        return cls.from_pi_fractions(Fraction(2 * j - r, r) for j in range(1, r + 1))

    def rotated(self, t: float) -> "NodeSet":
        """All nodes shifted by t, re-reduced to (-pi, pi] and re-sorted."""
        shifted = np.mod(self.points + t + math.pi, 2.0 * math.pi) - math.pi
        shifted[shifted <= -math.pi] += 2.0 * math.pi
        shifted.sort()
        return NodeSet(shifted)

    def to_json(self) -> dict:
        obj = {"points": [float(x) for x in self.points]}
        if self.pi_fractions is not None:
            obj["pi_rational"] = [[f.numerator, f.denominator] for f in self.pi_fractions]
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "NodeSet":
        try:
            if "pi_rational" in obj and obj["pi_rational"] is not None:
                fr = [Fraction(int(n), int(d)) for n, d in obj["pi_rational"]]
                nodes = cls.from_pi_fractions(fr)
                pts = np.asarray(obj["points"], dtype=float)
                if pts.size and np.max(np.abs(pts - nodes.points)) > 1e-12:
                    raise ValidationError("points inconsistent with pi_rational")
                return nodes
            return cls(np.asarray(obj["points"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed node-set object: {exc}") from exc


def random_poly(N: int, seed, scale: float = 1.0) -> TrigPoly:
    """Centered complex Gaussian coefficients, E|c_k|^2 = scale^2; deterministic."""
    if N < 1:
        raise DomainError(f"random_poly requires N >= 1, got {N}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = 2 * N + 1
    coeffs = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
    return TrigPoly(N, coeffs)
