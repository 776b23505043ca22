"""Randomized threshold rounding of the scaled LP metric.

Each trial draws x_e uniform in (0, alpha] per edge (counter-based, keyed by
(trial seed, edge id)) and cuts e iff x_e <= d(e), so P(e in C) =
min(1, d(e)/alpha) and E[cost] <= LP_opt / alpha. alpha = 1/(c * ln sigma_hat)
with c >= 4, clamped so alpha stays in (0, 1/4]. Identical inputs give
identical outputs no matter how trials are scheduled; trials never share
random state.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError
from .graph import is_feasible_cut, make_cut_solution, require_valid
from .metriclp import scale_metric, solve_relaxed_lp
from .steiner import exact_sigma_by_enumeration, sigma_upper_bound

MIN_C = 4.0
TRIALS_MIN = 8
TRIALS_MAX = 256
# stream tags so trial seeds, repair order and embedding seeds never collide
ROUND_STREAM = 0x21
EMBED_STREAM = 0x45


@dataclass(frozen=True)
class RoundingConfig:
    c: float = 4.0
    trials: int | None = None  # None: ceil(10 * log sigma_hat), clamped
    master_seed: int = 0
    sigma_source: str = "upper_bound"  # or "exact"

    def __post_init__(self):
        if self.c < MIN_C:
            raise ConfigError(f"c must be >= {MIN_C}, got {self.c}")
        if self.trials is not None and self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.sigma_source not in ("upper_bound", "exact"):
            raise ConfigError(
                f"sigma_source must be upper_bound or exact, got {self.sigma_source!r}")


def compute_alpha(log_sigma, c=4.0):
    if c < MIN_C:
        raise ConfigError(f"c must be >= {MIN_C}, got {c}")
    return 1.0 / (c * max(1.0, log_sigma))


def default_trials(log_sigma):
    return min(TRIALS_MAX, max(TRIALS_MIN, math.ceil(10.0 * max(log_sigma, 0.0))))


@dataclass(frozen=True)
class TrialReport:
    trial: int
    seed: int
    thresholds: tuple  # (min, mean, max) of the drawn x_e
    cut: frozenset
    cost: float
    feasible: bool


def round_once(instance, metric, alpha, seed, trial=0):
    """One threshold trial against the given (already scaled) metric."""
    if not (0.0 < alpha <= 0.25):
        raise ConfigError(f"alpha must be in (0, 0.25], got {alpha}")
    g = instance.graph
    d = np.array([metric.values[u, v] for _, u, v, _ in g.edges])
    draws = kernels.threshold_draws(seed, g.m, alpha)
    mask = draws <= d
    cut = frozenset(int(e) for e in np.nonzero(mask)[0])
    exact = g.cut_cost(cut)
    feasible = is_feasible_cut(instance, cut)
    summary = (float(draws.min()), float(draws.mean()), float(draws.max())) \
        if g.m else (0.0, 0.0, 0.0)
    return TrialReport(trial=trial, seed=seed, thresholds=summary,
                       cut=cut, cost=float(exact), feasible=feasible)


def repair_cut(instance, cut, edge_order_values):
    """Grow a cut to feasibility: add edges by decreasing metric value, ties
    by (cost, edge id). Terminates because cutting everything is feasible."""
    g = instance.graph
    cut = set(int(e) for e in cut)
    if is_feasible_cut(instance, cut):
        return frozenset(cut)
    remaining = [e for e in range(g.m) if e not in cut]
    remaining.sort(key=lambda e: (-edge_order_values[e], g.cost(e), e))
    for eid in remaining:
        cut.add(eid)
        if is_feasible_cut(instance, cut):
            return frozenset(cut)
    return frozenset(cut)  # unreachable on a valid instance


def _sigma_log(instance, config):
    if config.sigma_source == "exact":
        sigma = exact_sigma_by_enumeration(instance)
        return math.log(sigma) if sigma > 0 else 0.0
    log_sigma, _ = sigma_upper_bound(instance)
    return log_sigma


def solve_requirement_cut(instance, config=None):
    """Full pipeline: LP, scale, round best-of-trials, repair if every trial
    missed. Returns (CutSolution, trial reports, LpResult)."""
    require_valid(instance)
    config = config or RoundingConfig()
    lp = solve_relaxed_lp(instance)
    scaled = scale_metric(lp.metric)
    log_sigma = _sigma_log(instance, config)
    alpha = compute_alpha(log_sigma, config.c)
    trials = config.trials if config.trials is not None else default_trials(log_sigma)

    reports = []
    best = None
    for t in range(trials):
        seed = kernels.derive_seed(config.master_seed, ROUND_STREAM, t)
        rep = round_once(instance, scaled, alpha, seed, trial=t)
        reports.append(rep)
        if rep.feasible and (best is None or (rep.cost, rep.trial) < (best.cost, best.trial)):
            best = rep

    if best is not None:
        solution = make_cut_solution(instance, best.cut)
    else:
        cheapest = min(reports, key=lambda r: (r.cost, r.trial))
        g = instance.graph
        d = {eid: scaled.values[u, v] for eid, u, v, _ in g.edges}
        repaired = repair_cut(instance, cheapest.cut, d)
        solution = make_cut_solution(instance, repaired)
    return solution, reports, lp


@dataclass(frozen=True)
class RoundingStats:
    """What the CLI prints next to a solve: the knobs that were in play."""

    log_sigma: float
    alpha: float
    trials: int


def solve_stats(instance, config=None):
    config = config or RoundingConfig()
    log_sigma = _sigma_log(instance, config)
    alpha = compute_alpha(log_sigma, config.c)
    trials = config.trials if config.trials is not None else default_trials(log_sigma)
    return RoundingStats(log_sigma=log_sigma, alpha=alpha, trials=trials)
