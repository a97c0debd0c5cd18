"""Admissible convolution kernels and their Fourier transforms.

A kernel of degree N is even, nonnegative, supported in [-pi/2N, pi/2N],
and normalized to unit L^q norm (q conjugate to the working exponent p).
Two forms: the closed family theta*cos^(p-1)(Nx), which attains the largest
possible value of the transform at frequency N, and tabulated kernels —
piecewise-linear interpolants of even nonnegative samples (linear
interpolation keeps nonnegativity exactly, which splines do not).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, KernelAdmissibilityError, ValidationError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate
from .special import cos_power_integral

__all__ = ["Kernel", "check_admissible", "extremal_kernel", "fourier_coeff",
           "extremal_uhat_value", "lq_norm", "random_kernel",
           "cos_power_integral"]

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class Kernel:
    """Closed form (theta set, samples None) or tabulated (samples set)."""

    N: int
    p: float
    theta: float | None = None
    samples: np.ndarray | None = None

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"kernel degree must be >= 1, got {self.N}")
        if self.p < 1:
            raise DomainError(f"kernel exponent must satisfy p >= 1, got {self.p}")
        if (self.theta is None) == (self.samples is None):
            raise ValidationError("exactly one of theta/samples must be given")
        if self.theta is not None and not self.theta > 0:
            raise KernelAdmissibilityError(f"theta must be positive, got {self.theta}")
        if self.samples is not None:
            s = np.asarray(self.samples, dtype=float)
            if s.ndim != 1 or s.size < 3 or s.size % 2 == 0:
                raise ValidationError(
                    f"tabulated kernel needs an odd number >= 3 of samples, got {s.size}")
            if s.min() < 0:
                raise KernelAdmissibilityError("kernel samples must be nonnegative")
            if np.max(np.abs(s - s[::-1])) > 1e-12 * max(s.max(), 1.0):
                raise KernelAdmissibilityError("kernel samples must be even-symmetric")
            s = np.array(s, copy=True)
            s.setflags(write=False)
            object.__setattr__(self, "samples", s)

    @property
    def form(self) -> str:
        return "closed" if self.theta is not None else "tabulated"

    @property
    def q(self) -> float:
        return math.inf if self.p == 1 else self.p / (self.p - 1.0)

    @property
    def support_halfwidth(self) -> float:
        return math.pi / (2.0 * self.N)

    @property
    def sample_grid(self) -> np.ndarray | None:
        if self.samples is None:
            return None
        h = self.support_halfwidth
        return np.linspace(-h, h, self.samples.size)

    def profile(self, x) -> np.ndarray:
        """u(x), zero outside [-pi/2N, pi/2N]; accepts scalars or arrays."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        h = self.support_halfwidth
        inside = np.abs(xs) <= h
        if self.theta is not None:
            c = np.cos(self.N * xs, where=inside, out=np.zeros_like(xs))
            vals = np.where(inside, self.theta * np.clip(c, 0.0, None) ** (self.p - 1.0), 0.0)
        else:
            vals = np.where(inside, np.interp(xs, self.sample_grid, self.samples), 0.0)
        return vals if np.ndim(x) else float(vals[0])

    __call__ = profile

    def to_json(self) -> dict:
        obj = {"N": self.N, "p": self.p, "form": self.form}
        if self.form == "closed":
            obj["theta"] = self.theta
        else:
            obj["samples"] = [float(v) for v in self.samples]
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "Kernel":
        try:
            if obj["form"] == "closed":
                return cls(int(obj["N"]), float(obj["p"]), theta=float(obj["theta"]))
            if obj["form"] == "tabulated":
                return cls(int(obj["N"]), float(obj["p"]),
                           samples=np.asarray(obj["samples"], dtype=float))
            raise ValidationError(f"unknown kernel form {obj['form']!r}")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed kernel object: {exc}") from exc


def lq_norm(u: Kernel, cfg: QuadratureConfig | None = None) -> float:
    """L^q norm of the kernel; q = inf uses the peak value."""
    cfg = cfg or DEFAULT_CONFIG
    if math.isinf(u.q):
        return float(u.samples.max()) if u.samples is not None else float(u.theta)
    h = u.support_halfwidth
    grid = u.sample_grid
    bp = grid[grid >= 0] if grid is not None else None
    val = integrate(lambda t: u.profile(t) ** u.q, 0.0, h, cfg, breakpoints=bp)
    return (2.0 * float(val)) ** (1.0 / u.q)


def check_admissible(u: Kernel, cfg: QuadratureConfig | None = None,
                     tol: float = _NORM_TOL) -> float:
    """Raises unless the L^q norm is 1 within tol; returns the norm."""
    norm = lq_norm(u, cfg)
    if abs(norm - 1.0) > tol:
        raise KernelAdmissibilityError(
            f"kernel L^q norm is {norm!r}, not 1 within {tol}")
    return norm


def extremal_kernel(N: int, p: float) -> Kernel:
    """theta * cos^(p-1)(Nx) with unit L^q norm; the box of height 1 when p=1.

    (p-1)q = p makes the normalization integral equal cos_power_integral(p)/N,
    so theta = (N / cos_power_integral(p))^(1/q).
    """
    if p < 1:
        raise DomainError(f"extremal_kernel requires p >= 1, got {p}")
    theta = (N / cos_power_integral(p)) ** ((p - 1.0) / p)
    return Kernel(N, float(p), theta=theta)


_TRIG = (
    lambda t, x: np.cos(np.multiply.outer(t, x)),
    lambda t, x: -np.sin(np.multiply.outer(t, x)),
    lambda t, x: -np.cos(np.multiply.outer(t, x)),
    lambda t, x: np.sin(np.multiply.outer(t, x)),
)


def fourier_coeff(u: Kernel, x, cfg: QuadratureConfig | None = None,
                  deriv: int = 0):
    """d^j/dx^j of uhat(x) = 2 * integral_0^(pi/2N) u(t) cos(xt) dt.

    Supports j = 0..3 (the reciprocal-series tail model needs uhat''').
    Scalar x returns a float; arrays are evaluated as one vector-valued
    adaptive quadrature per chunk, sharing panel refinement.
    """
    if deriv not in (0, 1, 2, 3):
        raise DomainError(f"deriv must be 0..3, got {deriv}")
    cfg = cfg or DEFAULT_CONFIG
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    h = u.support_halfwidth
    grid = u.sample_grid
    bp = grid[grid >= 0] if grid is not None else None
    # cos(xt) completes |x|h/(2pi) periods on the support; keep panels ahead of it
    xmax = float(np.max(np.abs(xs))) if xs.size else 0.0
    panels = max(8, int(math.ceil(2.0 * xmax * h / math.pi)))

    out = np.empty(xs.size)
    for i in range(0, xs.size, 256):
        block = xs[i:i + 256]

        def integrand(t, _b=block):
            return u.profile(t)[:, None] * t[:, None] ** deriv * _TRIG[deriv](t, _b)

        out[i:i + 256] = 2.0 * integrate(integrand, 0.0, h, cfg,
                                         breakpoints=bp, initial_panels=panels)
    return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])


def extremal_uhat_value(N: int, p: float) -> float:
    """Largest possible uhat(N) over admissible kernels: (cos_power_integral(p)/N)^(1/p)."""
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    return (cos_power_integral(p) / N) ** (1.0 / p)


def random_kernel(N: int, p: float, seed, n_samples: int = 33,
                  cfg: QuadratureConfig | None = None) -> Kernel:
    """Random admissible tabulated kernel: smoothed positive even profile,
    rescaled to unit L^q norm."""
    if n_samples < 3 or n_samples % 2 == 0:
        raise DomainError(f"n_samples must be odd >= 3, got {n_samples}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    half = rng.uniform(0.05, 1.0, size=(n_samples + 1) // 2)
    taps = np.array([1.0, 2.0, 3.0, 2.0, 1.0])
    padded = np.concatenate([half[2:0:-1], half, half[-2:-4:-1]])
    half = np.convolve(padded, taps / taps.sum(), mode="valid")
    samples = np.concatenate([half[:0:-1], half])
    kern = Kernel(N, float(p), samples=samples)
    samples = samples / lq_norm(kern, cfg)
    return Kernel(N, float(p), samples=samples)
