"""Adaptive composite Gauss-Legendre quadrature.

One engine serves every integral in the package: L^p norms of trigonometric
polynomials, kernel Fourier transforms, and the oscillatory coefficient
integrals of the reciprocal series.  The integrand may be scalar valued or
vector valued (shape ``(npoints, ncomponents)``); vector integrands share
panel subdivision, which lets callers batch families of related integrals
(for example one coefficient per frequency) through a single adaptive pass.

The error estimate per panel is the difference between the rule applied to
the whole panel and to its two halves.  Panels whose estimate exceeds their
share of the global budget are bisected; everything is recomputed in flat
numpy arrays, so refinement rounds cost one vectorized integrand call each.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, QuadratureConvergenceError

__all__ = ["QuadratureConfig", "integrate", "integrate_with_error"]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and limits for the adaptive engine.

    rel_tol is relative to the largest component of the running estimate;
    max_panels caps the total number of live panels; rule_order is the
    number of Gauss-Legendre nodes per panel.
    """

    rel_tol: float = 1e-10
    max_panels: int = 16384
    rule_order: int = 16

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_panels < 1:
            raise DomainError(f"max_panels must be >= 1, got {self.max_panels}")
        if self.rule_order < 2:
            raise DomainError(f"rule_order must be >= 2, got {self.rule_order}")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def _gauss_rule(order: int):
    nodes, weights = leggauss(order)
    return nodes, weights


def _panel_sums(f, lo, hi, order):
    """Rule applied to each [lo_i, hi_i]; returns array (npanels[, ncomp])."""
    nodes, weights = _gauss_rule(order)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    xs = mid[:, None] + half[:, None] * nodes[None, :]
    vals = np.asarray(f(xs.ravel()))
    if vals.ndim == 1:
        vals = vals.reshape(xs.shape)
        return (vals * weights[None, :]).sum(axis=1) * half
    ncomp = vals.shape[-1]
    vals = vals.reshape(xs.shape + (ncomp,))
    return (vals * weights[None, :, None]).sum(axis=1) * half[:, None]


def integrate_with_error(
    f,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    *,
    breakpoints=None,
    initial_panels: int = 8,
    abs_tol: float = 0.0,
):
    """Integrate ``f`` over [a, b]; returns (value, error_estimate, npanels).

    ``f`` must accept a 1-D array of points and return either matching
    values or an array with one trailing component axis.  ``breakpoints``
    seeds the panel edges (useful to align panels with kink locations or
    oscillation half-periods); otherwise the interval starts uniform.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not b > a:
        raise DomainError(f"empty or reversed interval [{a}, {b}]")

    if breakpoints is not None:
        edges = np.unique(np.clip(np.asarray(breakpoints, dtype=float), a, b))
        edges = np.union1d(edges, [a, b])
    else:
        edges = np.linspace(a, b, max(2, initial_panels + 1))
    lo, hi = edges[:-1], edges[1:]

    order = cfg.rule_order
    coarse = _panel_sums(f, lo, hi, order)
    mids = 0.5 * (lo + hi)
    fine = _panel_sums(f, lo, mids, order) + _panel_sums(f, mids, hi, order)

    for _ in range(200):
        err = np.abs(fine - coarse)
        if err.ndim > 1:
            err = err.max(axis=1)
        total = fine.sum(axis=0)
        scale = np.max(np.abs(total))
        budget = max(cfg.rel_tol * scale, abs_tol)
        global_err = float(err.sum())
        npanels = lo.size
        if global_err <= budget:
            return total, global_err, npanels

        thresh = budget / (2.0 * npanels)
        split = err > thresh
        if not split.any():
            split[np.argmax(err)] = True
        if npanels + split.sum() > cfg.max_panels:
            raise QuadratureConvergenceError(
                f"needed more than {cfg.max_panels} panels "
                f"(error estimate {global_err:.3e}, budget {budget:.3e})",
                best_estimate=total,
                error_estimate=global_err,
            )

        keep_lo, keep_hi, keep_fine, keep_coarse = (
            lo[~split], hi[~split], fine[~split], coarse[~split])
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        new_coarse = _panel_sums(f, new_lo, new_hi, order)
        new_mid = 0.5 * (new_lo + new_hi)
        new_fine = (_panel_sums(f, new_lo, new_mid, order)
                    + _panel_sums(f, new_mid, new_hi, order))

        lo = np.concatenate([keep_lo, new_lo])
        hi = np.concatenate([keep_hi, new_hi])
        coarse = np.concatenate([keep_coarse, new_coarse])
        fine = np.concatenate([keep_fine, new_fine])

    raise QuadratureConvergenceError(
        "refinement loop did not terminate",
        best_estimate=fine.sum(axis=0),
        error_estimate=float(err.sum()),
    )


def integrate(f, a, b, cfg=None, **kwargs):
    """Adaptive integral of ``f`` over [a, b]; value only."""
    value, _, _ = integrate_with_error(f, a, b, cfg, **kwargs)
    return value
