"""Empirical verification: random campaigns against the sieve bound,
derivative-free extremal search for tight instances, and comparison tables.

Every trial is driven by a per-trial substream rng(seed, trial), so
campaigns are reproducible and any single trial can be replayed bit-for-bit
from its serialized instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundReport, Separation, sieve_constant
from .errors import DomainError, ValidationError
from .quadrature import QuadratureConfig
from .trigpoly import NodeSet, TrigPoly, lp_norm, sieve_sum

__all__ = ["VerifyResult", "SearchConfig", "CampaignSummary", "make_nodes",
           "random_separated_nodes", "clustered_nodes", "verify_instance",
           "verify_replay", "random_campaign", "extremal_search", "compare_bounds"]

# passing means ratio <= bound * (1 + REL_SLACK)
REL_SLACK = 1e-9

# quadrature for campaign-scale work; random instances sit far from the
# bound, so 1e-7 relative norms cannot flip a verdict
CAMPAIGN_QUAD = QuadratureConfig(rel_tol=1e-7)

NODE_STRATEGIES = ("equispaced", "clustered", "random-separated")


@dataclass(frozen=True)
class VerifyResult:
    ratio: float
    bound: float
    N: int
    p: float
    delta: float
    r: int
    seed: object = None

    @property
    def margin(self) -> float:
        return self.bound - self.ratio

    @property
    def passed(self) -> bool:
        return self.ratio <= self.bound * (1.0 + REL_SLACK)

    def to_json(self) -> dict:
        return {"ratio": self.ratio, "bound": self.bound, "margin": self.margin,
                "pass": self.passed, "N": self.N, "p": self.p,
                "delta": self.delta, "r": self.r, "seed": self.seed}


@dataclass(frozen=True)
class SearchConfig:
    N: int
    p: float
    iterations: int = 120
    restarts: int = 4
    step_init: float = 0.5
    step_decay: float = 0.97
    node_strategy: str = "equispaced"
    r: int | None = None
    delta_min_factor: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise DomainError(f"iterations must be >= 1, got {self.iterations}")
        if self.restarts < 1:
            raise DomainError(f"restarts must be >= 1, got {self.restarts}")
        if self.node_strategy not in NODE_STRATEGIES:
            raise ValidationError(
                f"node_strategy must be one of {NODE_STRATEGIES}, "
                f"got {self.node_strategy!r}")


def random_separated_nodes(r: int, delta_min: float, rng) -> NodeSet:
    """r nodes with all circular gaps >= delta_min, by stick breaking:
    gaps = delta_min + Dirichlet * slack, randomly rotated."""
    if r < 2:
        raise DomainError(f"need r >= 2, got {r}")
    slack = 2.0 * math.pi - r * delta_min
    if slack <= 0:
        raise DomainError(f"delta_min {delta_min} too large for r = {r} nodes")
    gaps = delta_min + rng.dirichlet(np.ones(r)) * slack
    raw = np.concatenate([[0.0], np.cumsum(gaps[:-1])])
    x = np.mod(raw + rng.uniform(0.0, 2.0 * math.pi) + math.pi, 2.0 * math.pi) - math.pi
    x[x <= -math.pi] += 2.0 * math.pi
    x.sort()
    return NodeSet(x)


def clustered_nodes(N: int, sigma: int) -> NodeSet:
    """Configuration achieving covering multiplicity exactly sigma:
    sigma nodes at spacing pi/(sigma N) for sigma >= 2, else the 2N-point
    equispaced tiling."""
    if sigma < 1:
        raise DomainError(f"need sigma >= 1, got {sigma}")
    if sigma == 1:
        return NodeSet.equispaced(2 * N)
    from fractions import Fraction
    return NodeSet.from_pi_fractions(
        Fraction(j, sigma * N) for j in range(sigma))


def make_nodes(strategy: str, N: int, rng, r: int | None = None,
               delta_min_factor: float | None = None) -> NodeSet:
    """Node-set factory used by campaigns and search restarts."""
    if strategy == "equispaced":
        return NodeSet.equispaced(r if r is not None else 2 * N)
    if strategy == "clustered":
        return clustered_nodes(N, int(rng.integers(1, 4)))
    if strategy == "random-separated":
        r = r if r is not None else int(rng.integers(2, 4 * N + 1))
        alpha = delta_min_factor if delta_min_factor is not None \
            else float(rng.uniform(0.3, 0.9))
        return random_separated_nodes(r, alpha * 2.0 * math.pi / r, rng)
    raise ValidationError(f"unknown node strategy {strategy!r}")


def verify_instance(s: TrigPoly, nodes: NodeSet, p: float,
                    cfg: QuadratureConfig | None = None,
                    seed=None) -> VerifyResult:
    """Ratio sieve_sum / lp_norm^p against the closed-form constant.

    A failing instance is data, not an exception.  The zero polynomial
    gets ratio 0 by convention (the inequality is 0 <= 0).
    """
    sep = Separation.from_nodes(nodes)
    bound = sieve_constant(s.degree, sep, p)
    norm = lp_norm(s, p, cfg)
    ratio = 0.0 if norm == 0.0 else sieve_sum(s, nodes, p) / norm**p
    return VerifyResult(ratio=ratio, bound=bound, N=s.degree, p=p,
                        delta=sep.value, r=nodes.r, seed=seed)


def verify_replay(instance: dict, cfg: QuadratureConfig | None = None) -> VerifyResult:
    """Re-run a serialized {poly, nodes, p} instance; deterministic."""
    poly = TrigPoly.from_json(instance["poly"])
    nodes = NodeSet.from_json(instance["nodes"])
    return verify_instance(poly, nodes, float(instance["p"]), cfg)


@dataclass
class CampaignSummary:
    trials: int
    N: int
    p: float
    strategy: str
    seed: int
    failures: int = 0
    max_ratio: float = -math.inf
    min_margin: float = math.inf
    argmax: dict | None = None

    def to_json(self) -> dict:
        return {"trials": self.trials, "N": self.N, "p": self.p,
                "strategy": self.strategy, "seed": self.seed,
                "failures": self.failures, "max_ratio": self.max_ratio,
                "min_margin": self.min_margin, "argmax": self.argmax}


def random_campaign(trials: int, N: int, p: float, node_strategy: str,
                    seed: int, cfg: QuadratureConfig | None = None,
                    on_trial=None) -> CampaignSummary:
    """Random polynomials against random node sets; expected zero failures.

    on_trial, when given, receives (index, VerifyResult) after each trial —
    the CLI uses it to stream CSV rows without the summary holding them.
    """
    if trials < 1:
        raise DomainError(f"need trials >= 1, got {trials}")
    cfg = cfg or CAMPAIGN_QUAD
    summary = CampaignSummary(trials, N, p, node_strategy, seed)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        nodes = make_nodes(node_strategy, N, rng)
        n = 2 * N + 1
        coeffs = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
        poly = TrigPoly(N, coeffs)
        res = verify_instance(poly, nodes, p, cfg, seed=[seed, t])
        if not res.passed:
            summary.failures += 1
        if res.ratio > summary.max_ratio:
            summary.max_ratio = res.ratio
            summary.argmax = {"poly": poly.to_json(), "nodes": nodes.to_json(),
                              "p": p, "ratio": res.ratio, "bound": res.bound,
                              "trial": t}
        summary.min_margin = min(summary.min_margin, res.margin)
        if on_trial is not None:
            on_trial(t, res)
    return summary


def extremal_search(cfg: SearchConfig, quad: QuadratureConfig | None = None):
    """Maximize the sieve ratio by coordinate perturbation with decaying
    steps and random restarts.  The ratio is scale invariant, so no
    renormalization is needed between steps.

    Returns (best VerifyResult, trace) where trace has one row per
    accepted improvement plus each restart's starting point.
    """
    quad = quad or CAMPAIGN_QUAD
    best: VerifyResult | None = None
    best_instance = None
    trace = []
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        nodes = make_nodes(cfg.node_strategy, cfg.N, rng, r=cfg.r,
                           delta_min_factor=cfg.delta_min_factor)
        n = 2 * cfg.N + 1
        coeffs = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
        current = verify_instance(TrigPoly(cfg.N, coeffs), nodes, cfg.p, quad)
        trace.append({"restart": restart, "iteration": -1,
                      "ratio": current.ratio, "step": cfg.step_init})
        step = cfg.step_init
        for it in range(cfg.iterations):
            idx = int(rng.integers(0, n))
            prop = np.array(coeffs)
            prop[idx] += step * (rng.standard_normal() + 1j * rng.standard_normal())
            cand = verify_instance(TrigPoly(cfg.N, prop), nodes, cfg.p, quad)
            if cand.ratio > current.ratio:
                coeffs, current = prop, cand
                trace.append({"restart": restart, "iteration": it,
                              "ratio": current.ratio, "step": step})
            step *= cfg.step_decay
        if best is None or current.ratio > best.ratio:
            best = current
            best_instance = {"poly": TrigPoly(cfg.N, coeffs).to_json(),
                             "nodes": nodes.to_json(), "p": cfg.p,
                             "ratio": current.ratio, "bound": current.bound,
                             "restart": restart}
    return best, {"trace": trace, "best_instance": best_instance,
                  "tightness": best.ratio / best.bound}


def compare_bounds(Ns, deltas, ps):
    """BoundReport per grid cell plus the name of the smallest bound there."""
    cells = [(N, d, p) for N in Ns for d in deltas for p in ps]
    if not cells:
        raise ValidationError("empty comparison grid")
    rows = []
    for N, delta, p in cells:
        rep = BoundReport.compute(N, delta, p)
        candidates = {"thm1": rep.thm1, "cor3": rep.cor3,
                      "eq5": rep.eq5, "eq6": rep.eq6}
        if rep.eq2 is not None:
            candidates["eq2"] = rep.eq2
        rows.append((rep, min(candidates, key=candidates.get)))
    return rows
