"""Gamma-family special values, with exact arithmetic where possible.

Float evaluation goes through ``math.gamma``; integer and half-integer
arguments additionally get exact representations (Fraction times a power
of sqrt(pi)) so that downstream constants can be formed without rounding
and compared against their floating-point counterparts at 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "ExactConstant",
    "double_factorial",
    "gamma_fn",
    "half_integer_gamma",
    "cos_power_integral",
    "cos_power_integral_exact",
]

_SQRT_PI = math.sqrt(math.pi)


def double_factorial(n: int) -> int:
    """n!! = n(n-2)(n-4)..., with (-1)!! = 0!! = 1.  Exact for any size."""
    if n < -1:
        raise DomainError(f"double factorial undefined for n={n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@dataclass(frozen=True)
class ExactConstant:
    """Exact value rational * pi^(half_pi_power / 2).

    half_pi_power counts factors of sqrt(pi): 2 means pi, -2 means 1/pi,
    1 means sqrt(pi).  Keeps constants like 40/pi or 3*pi/8 exact until
    the final float conversion.
    """

    rational: Fraction
    half_pi_power: int = 0

    @property
    def value(self) -> float:
        k, r = divmod(self.half_pi_power, 2)
        v = float(self.rational) * math.pi ** k
        return v * _SQRT_PI if r else v

    def __float__(self) -> float:
        return self.value

    def __mul__(self, other):
        if isinstance(other, ExactConstant):
            return ExactConstant(self.rational * other.rational,
                                 self.half_pi_power + other.half_pi_power)
        if isinstance(other, (int, Fraction)):
            return ExactConstant(self.rational * other, self.half_pi_power)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        n, d = self.rational.numerator, self.rational.denominator
        p = self.half_pi_power

        def pi_part(h: int) -> str:
            if h == 1:
                return "√π"
            if h == 2:
                return "π"
            return f"π^{h // 2}" if h % 2 == 0 else f"√π^{h}"

        num = str(n)
        if p > 0:
            num = pi_part(p) if n == 1 else f"{n}{pi_part(p)}"
        den = str(d)
        if p < 0:
            den = pi_part(-p) if d == 1 else f"{d}{pi_part(-p)}"
        return num if (d == 1 and p >= 0) else f"{num}/{den}"


def half_integer_gamma(n: int, half: bool) -> ExactConstant:
    """Exact Gamma(n) for half=False (n >= 1), Gamma(n + 1/2) for half=True
    (n >= 0), via Gamma(n+1) = n! and Gamma(n+1/2) = sqrt(pi)(2n-1)!!/2^n."""
    if half:
        if n < 0:
            raise DomainError(f"Gamma({n}+1/2) not supported (argument <= 0)")
        return ExactConstant(Fraction(double_factorial(2 * n - 1), 2**n), 1)
    if n < 1:
        raise DomainError(f"Gamma({n}) undefined or unsupported")
    return ExactConstant(Fraction(math.factorial(n - 1)), 0)


def gamma_fn(x: float) -> float:
    """Gamma(x) for x > 0; exact recurrence path at integer/half-integer x."""
    if x <= 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    two_x = 2.0 * x
    if two_x == int(two_x):
        t = int(two_x)
        return (half_integer_gamma(t // 2, False) if t % 2 == 0
                else half_integer_gamma(t // 2, True)).value
    return math.gamma(x)


def cos_power_integral_exact(p: int) -> ExactConstant:
    """Exact integral of cos^p over [-pi/2, pi/2] for integer p >= 1.

    p = 2l   -> pi (2l-1)!! / (2^l l!)
    p = 2l+1 -> 2^(l+1) l! / (2l+1)!!
    """
    if p < 1:
        raise DomainError(f"cos_power_integral requires p >= 1, got {p}")
    l, odd = divmod(p, 2)
    if odd:
        return ExactConstant(
            Fraction(2 ** (l + 1) * math.factorial(l), double_factorial(2 * l + 1)), 0)
    return ExactConstant(
        Fraction(double_factorial(2 * l - 1), 2**l * math.factorial(l)), 2)


def cos_power_integral(p: float) -> float:
    """Integral of cos^p over [-pi/2, pi/2] = sqrt(pi) Gamma((p+1)/2) / Gamma(p/2+1).

    Integer p routes through the exact factorial form; p=1 -> 2, p=2 -> pi/2,
    p=3 -> 4/3, p=4 -> 3*pi/8.
    """
    if p < 1:
        raise DomainError(f"cos_power_integral requires p >= 1, got {p}")
    if float(p) == int(p):
        return cos_power_integral_exact(int(p)).value
    return _SQRT_PI * gamma_fn((p + 1.0) / 2.0) / gamma_fn(p / 2.0 + 1.0)
