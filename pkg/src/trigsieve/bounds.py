"""Closed-form sieve constants, their exact integer-p forms, comparator
bounds, and the interval-covering combinatorics behind the overlap count.

The overlap count sigma(delta; N) branches on whether pi/(N*delta) is an
integer; that test is exact when the separation carries a rational
multiple-of-pi tag and falls back to a 1e-9 relative tolerance otherwise.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, IdentityViolationError, ValidationError
from .special import (ExactConstant, cos_power_integral, double_factorial,
                      gamma_fn, half_integer_gamma)
from .trigpoly import NodeSet

__all__ = ["Separation", "BoundReport", "overlap_count", "sieve_constant",
           "sieve_constant_exact", "relaxed_bound", "classical_bounds",
           "covering_multiplicity", "gamma_fn", "half_integer_gamma",
           "double_factorial", "cos_power_integral"]

_TWO_PI = 2.0 * math.pi
_DELTA_RE = re.compile(r"^(\d+)?pi(?:/(\d+))?$")


@dataclass(frozen=True)
class Separation:
    """delta in (0, 2pi]; pi_rational = (num, den) when delta = pi*num/den."""

    value: float
    pi_rational: tuple[int, int] | None = None

    def __post_init__(self):
        if not (0.0 < self.value <= _TWO_PI):
            raise DomainError(f"separation must be in (0, 2pi], got {self.value}")
        if self.pi_rational is not None:
            num, den = self.pi_rational
            if den == 0 or num <= 0 or den < 0:
                raise ValidationError(f"bad pi_rational pair {self.pi_rational}")
            f = Fraction(num, den)
            object.__setattr__(self, "pi_rational", (f.numerator, f.denominator))
            if abs(self.value - math.pi * f.numerator / f.denominator) > 1e-15:
                raise ValidationError(
                    f"value {self.value!r} does not match pi*{num}/{den}")

    @classmethod
    def from_pi_fraction(cls, num: int, den: int = 1) -> "Separation":
        if den == 0:
            raise ValidationError("pi_rational denominator must be nonzero")
        return cls(math.pi * num / den, (num, den))

    @classmethod
    def from_nodes(cls, nodes: NodeSet) -> "Separation":
        frac = nodes.separation_pi_fraction
        if frac is not None:
            return cls.from_pi_fraction(frac.numerator, frac.denominator)
        return cls(nodes.separation)

    @classmethod
    def parse(cls, text: str) -> "Separation":
        """Accepts 'pi/20', '3pi/40', '2pi', 'pi', or a plain float literal."""
        text = text.strip()
        m = _DELTA_RE.match(text)
        if m:
            num = int(m.group(1) or 1)
            den = int(m.group(2) or 1)
            if den == 0:
                raise ValidationError(f"zero denominator in delta literal {text!r}")
            return cls.from_pi_fraction(num, den)
        try:
            return cls(float(text))
        except (ValueError, DomainError) as exc:
            raise ValidationError(f"cannot parse delta literal {text!r}: {exc}") from exc


def _band_ratio(delta: Separation, N: int):
    """(pi/(N*delta) as float, is_integer, integer part) with exact branching."""
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    if delta.pi_rational is not None:
        num, den = delta.pi_rational
        ratio = Fraction(den, N * num)
        return float(ratio), ratio.denominator == 1, int(ratio)
    r = math.pi / (N * delta.value)
    nearest = round(r)
    if nearest >= 1 and abs(r - nearest) <= 1e-9 * r:
        return r, True, int(nearest)
    return r, False, math.floor(r)


def overlap_count(delta: Separation, N: int) -> int:
    """sigma(delta; N): pi/(N delta) when integral, else 1 + its floor."""
    _, integral, ipart = _band_ratio(delta, N)
    return ipart if integral else 1 + ipart


def sieve_constant(N: int, delta: Separation, p: float) -> float:
    """The main constant N*sigma / cos_power_integral(p).

    Also evaluated as p*N*sigma/(2 sqrt(pi)) * Gamma(p/2)/Gamma(p/2 + 1/2);
    the two must agree to 1e-12 or something is wrong with the gamma path.
    """
    if p < 1:
        raise DomainError(f"sieve_constant requires p >= 1, got {p}")
    sigma = overlap_count(delta, N)
    via_integral = N * sigma / cos_power_integral(p)
    via_gamma = (p * N * sigma / (2.0 * math.sqrt(math.pi))
                 * gamma_fn(p / 2.0) / gamma_fn(p / 2.0 + 0.5))
    if abs(via_integral - via_gamma) > 1e-12 * abs(via_integral):
        raise IdentityViolationError(
            f"constant forms disagree: {via_integral!r} vs {via_gamma!r}")
    return via_integral


def sieve_constant_exact(N: int, delta: Separation, p: int) -> ExactConstant:
    """Exact factorial form of the constant for integer p >= 2.

    p = 2l   -> p N sigma 2^(l-1) (l-1)! / (pi (2l-1)!!)
    p = 2l+1 -> p N sigma (2l-1)!! / (2^(l+1) l!)
    """
    if not (isinstance(p, int) or float(p).is_integer()) or p < 2:
        raise DomainError(f"exact constant needs integer p >= 2, got {p}")
    p = int(p)
    sigma = overlap_count(delta, N)
    l, odd = divmod(p, 2)
    if odd:
        exact = ExactConstant(
            Fraction(p * N * sigma * double_factorial(2 * l - 1),
                     2 ** (l + 1) * math.factorial(l)), 0)
    else:
        exact = ExactConstant(
            Fraction(p * N * sigma * 2 ** (l - 1) * math.factorial(l - 1),
                     double_factorial(2 * l - 1)), -2)
    approx = sieve_constant(N, delta, p)
    if abs(exact.value - approx) > 1e-12 * abs(approx):
        raise IdentityViolationError(
            f"exact constant {exact} = {exact.value!r} disagrees with {approx!r}")
    return exact


def relaxed_bound(N: int, delta: Separation, p: float) -> float:
    """(p+1)/delta on the integral branch, else (p+1)(N/pi + 1/delta).

    Strictly larger than sieve_constant; checked, since equality would mean
    a broken sigma or constant.
    """
    if p < 1:
        raise DomainError(f"relaxed_bound requires p >= 1, got {p}")
    _, integral, _ = _band_ratio(delta, N)
    if integral:
        bound = (p + 1.0) / delta.value
    else:
        bound = (p + 1.0) * (N / math.pi + 1.0 / delta.value)
    if not sieve_constant(N, delta, p) < bound:
        raise IdentityViolationError(
            f"relaxed bound {bound!r} is not strictly above the main constant")
    return bound


def classical_bounds(N: int, delta: Separation, p: float) -> dict:
    """Comparator constants: eq2 (p=2 only), eq5, eq6."""
    if p < 1:
        raise DomainError(f"classical_bounds requires p >= 1, got {p}")
    d = delta.value
    factor = (p + 1.0) * math.e / 2.0
    return {
        "eq2": N / _TWO_PI + 1.0 / d if p == 2 else None,
        "eq5": (N / math.pi + 1.0 / d) * factor,
        "eq6": ((N + 1.0) / _TWO_PI + 1.0 / d) * factor,
    }


def _multiplicity_exact(fractions, N: int) -> int:
    """Endpoint sweep in exact pi-units; intervals are (f - h, f + h]."""
    h = Fraction(1, 2 * N)

    def reduce(f: Fraction) -> Fraction:
        f = (f + 1) % 2 - 1
        return f + 2 if f == -1 else f

    best = 0
    candidates = {reduce(f + h) for f in fractions} | {reduce(f - h) for f in fractions}
    for c in candidates:
        count = 0
        for f in fractions:
            d = reduce(c - f)
            if -h < d <= h:
                count += 1
        best = max(best, count)
    return best


def _multiplicity_float(points: np.ndarray, N: int) -> int:
    h = math.pi / (2.0 * N)
    tol = 1e-12
    ends = np.concatenate([points - h, points + h])
    ends = np.mod(ends + math.pi, _TWO_PI) - math.pi
    d = np.mod(ends[:, None] - points[None, :] + math.pi, _TWO_PI) - math.pi
    inside = (d > -h + tol) & (d <= h + tol)
    return int(inside.sum(axis=1).max())


def covering_multiplicity(nodes: NodeSet, N: int) -> int:
    """Max number of intervals (x_j - pi/2N, x_j + pi/2N] covering one point.

    Coverage is piecewise constant between interval endpoints and attained
    at them, so sweeping the endpoints is exact.  Must not exceed
    sigma(delta; N) — a violation is raised, not returned.
    """
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    if nodes.pi_fractions is not None:
        mult = _multiplicity_exact(nodes.pi_fractions, N)
    else:
        mult = _multiplicity_float(nodes.points, N)
    sigma = overlap_count(Separation.from_nodes(nodes), N)
    if mult > sigma:
        raise IdentityViolationError(
            f"covering multiplicity {mult} exceeds sigma = {sigma}")
    return mult


_CSV_FIELDS = ("N", "p", "delta", "sigma", "thm1", "cor2", "cor3",
               "eq2", "eq5", "eq6", "branch")


@dataclass(frozen=True)
class BoundReport:
    """One (N, p, delta) cell of constants; CSV column names are fixed."""

    N: int
    p: float
    delta: Separation
    sigma: int
    thm1: float
    cor2: ExactConstant | None
    cor3: float
    eq2: float | None
    eq5: float
    eq6: float
    branch: str

    @classmethod
    def compute(cls, N: int, delta: Separation, p: float) -> "BoundReport":
        _, integral, _ = _band_ratio(delta, N)
        is_int_p = float(p).is_integer() and p >= 2
        return cls(
            N=N, p=p, delta=delta,
            sigma=overlap_count(delta, N),
            thm1=sieve_constant(N, delta, p),
            cor2=sieve_constant_exact(N, delta, int(p)) if is_int_p else None,
            cor3=relaxed_bound(N, delta, p),
            branch="integer" if integral else "fractional",
            **classical_bounds(N, delta, p),
        )

    @staticmethod
    def csv_header() -> str:
        return ",".join(_CSV_FIELDS)

    def csv_row(self) -> str:
        cells = [str(self.N), repr(float(self.p)), repr(self.delta.value),
                 str(self.sigma), repr(self.thm1),
                 repr(self.cor2.value) if self.cor2 is not None else "",
                 repr(self.cor3),
                 repr(self.eq2) if self.eq2 is not None else "",
                 repr(self.eq5), repr(self.eq6), self.branch]
        return ",".join(cells)

    def to_json(self) -> dict:
        return {
            "N": self.N, "p": self.p, "delta": self.delta.value,
            "sigma": self.sigma, "thm1": self.thm1,
            "cor2": self.cor2.value if self.cor2 is not None else None,
            "cor2_exact": str(self.cor2) if self.cor2 is not None else None,
            "cor3": self.cor3, "eq2": self.eq2, "eq5": self.eq5,
            "eq6": self.eq6, "branch": self.branch,
        }
