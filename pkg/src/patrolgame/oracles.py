"""Independent ground-truth generators for the closed-form results.

Exhaustive enumeration checks the allocation rules, derivative-free local
search over feasible strategy matrices checks the synthesized strategies,
and the bound suite sweeps every claimed inequality over finite ranges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import synthesis
from .allocation import (
    allocate_bipartite_side,
    allocate_complete,
    bipartite_side_value,
    co_optimize_bipartite,
    complete_allocation_value,
)
from .errors import InvalidSpec, ParityError, SearchSpaceExceeded
from .graphs import (
    BIPARTITE,
    COMPLETE,
    STAR,
    GraphTopology,
    build_bipartite,
    build_complete,
    build_star,
    check_durations,
)
from .markov import (
    capture_probability,
    counter_stream,
    min_capture_evaluator,
    simulate_capture,
    stationary_distribution,
)

ENUMERATION_GUARD = 10_000_000
LOCAL_SEARCH_MAX_NODES = 8
_IMPROVEMENT_EPS = 1e-7
_STEP_INITIAL = 0.2
_STEP_FINAL = 1e-3


@dataclass(frozen=True, eq=False)
class OracleReport:
    """Best value found by an oracle and its agreement with the closed form."""

    best_value: float
    best_candidate: object
    candidates_examined: int
    closed_form_value: float | None = None
    agreement: bool | None = None
    gap: float | None = None

    def to_json_dict(self) -> dict:
        candidate = self.best_candidate
        if isinstance(candidate, np.ndarray):
            candidate = candidate.tolist()
        return {
            "best_value": self.best_value,
            "best_candidate": candidate,
            "candidates_examined": self.candidates_examined,
            "closed_form_value": self.closed_form_value,
            "agreement": self.agreement,
            "gap": self.gap,
        }


def partitions(total: int, parts: int, minimum: int = 1,
               maximum: int | None = None) -> Iterator[tuple[int, ...]]:
    """All non-increasing integer tuples of length `parts` summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= minimum and (maximum is None or total <= maximum):
            yield (total,)
        return
    hi = total - minimum * (parts - 1)
    if maximum is not None:
        hi = min(hi, maximum)
    for first in range(hi, minimum - 1, -1):
        for rest in partitions(total - first, parts - 1, minimum, first):
            yield (first,) + rest


def _composition_count(total: int, parts: int) -> int:
    # ordered tuples of positive integers summing to `total` (stars and bars)
    if total < parts:
        return 0
    return math.comb(total - 1, parts - 1)


def _best_complete_multiset(n: int, B: int) -> tuple[float, tuple[int, ...]]:
    best = None
    for tau in partitions(B, n, minimum=1):
        w = complete_allocation_value(tau)
        if best is None or w < best[0]:
            best = (w, tau)
    return best


def _best_side_multiset(n_side: int, B_side: int) -> tuple[float, tuple[int, ...]]:
    best = None
    for half in partitions(B_side // 2, n_side, minimum=1):
        tau = tuple(2 * t for t in half)
        w = bipartite_side_value(tau)
        if best is None or w < best[0]:
            best = (w, tau)
    return best


def exhaustive_allocation(family: str, sizes: int | Sequence[int], B: int,
                          tolerance: float = 1e-10,
                          guard: int = ENUMERATION_GUARD) -> OracleReport:
    """Search every feasible allocation and compare to the closed-form rule.

    Complete graphs enumerate all compositions of B with entries >= 1;
    bipartite graphs additionally enumerate every even split of B across the
    two sides.  Permutation invariance lets the search walk multisets while
    `candidates_examined` reports the composition count covered.
    """
    if family == COMPLETE:
        n = int(sizes[0]) if isinstance(sizes, Sequence) else int(sizes)
        count = _composition_count(B, n)
        if count > guard:
            raise SearchSpaceExceeded(f"{count} compositions exceed the guard {guard}")
        best_w, best_tau = _best_complete_multiset(n, B)
        closed = allocate_complete(n, B)
        gap = abs(closed.mu - (1.0 - best_w))
        return OracleReport(
            best_value=1.0 - best_w, best_candidate=best_tau,
            candidates_examined=count, closed_form_value=closed.mu,
            agreement=gap <= tolerance, gap=gap,
        )
    if family == BIPARTITE:
        n_p, n_q = (int(s) for s in sizes)
        if B % 2:
            raise ParityError(f"bipartite budget must be even, got {B}")
        splits = range(2 * n_p, B - 2 * n_q + 1, 2)
        count = sum(
            _composition_count(b_p // 2, n_p) * _composition_count((B - b_p) // 2, n_q)
            for b_p in splits)
        if count > guard:
            raise SearchSpaceExceeded(f"{count} compositions exceed the guard {guard}")
        best = None
        for b_p in splits:
            w_p, tau_p = _best_side_multiset(n_p, b_p)
            w_q, tau_q = _best_side_multiset(n_q, B - b_p)
            mu = 1.0 - max(w_p, w_q)
            if best is None or mu > best[0]:
                best = (mu, (b_p, tau_p, tau_q))
        closed = co_optimize_bipartite(n_p, n_q, B)
        gap = abs(closed.mu - best[0])
        return OracleReport(
            best_value=best[0], best_candidate=best[1],
            candidates_examined=count, closed_form_value=closed.mu,
            agreement=gap <= tolerance, gap=gap,
        )
    raise InvalidSpec(f"no exhaustive allocation for family {family!r}")


def exhaustive_side_allocation(n_side: int, B_side: int,
                               tolerance: float = 1e-10,
                               guard: int = ENUMERATION_GUARD) -> OracleReport:
    """Enumerate all even allocations of one bipartite side against the rule."""
    if B_side % 2:
        raise ParityError(f"side budget must be even, got {B_side}")
    count = _composition_count(B_side // 2, n_side)
    if count > guard:
        raise SearchSpaceExceeded(f"{count} compositions exceed the guard {guard}")
    best_w, best_tau = _best_side_multiset(n_side, B_side)
    closed = allocate_bipartite_side(n_side, B_side)
    gap = abs(closed.w - best_w)
    return OracleReport(
        best_value=best_w, best_candidate=best_tau,
        candidates_examined=count, closed_form_value=closed.w,
        agreement=gap <= tolerance, gap=gap,
    )


def _random_feasible_strategy(rng: np.random.Generator,
                              support: list[np.ndarray], n: int) -> np.ndarray:
    P = np.zeros((n, n))
    for i, cols in enumerate(support):
        if cols.size == 1:
            P[i, cols[0]] = 1.0
        else:
            P[i, cols] = rng.dirichlet(np.ones(cols.size))
    return P


def _closed_form_reference(g: GraphTopology, tau: tuple[int, ...]) -> float | None:
    if g.family == COMPLETE:
        return synthesis.synthesize_complete(tau).mu
    if g.family == STAR:
        return synthesis.synthesize_star(tau).mu
    if g.family == BIPARTITE:
        return synthesis.synthesize_bipartite(g, tau[:g.n_p], tau[g.n_p:]).mu
    return None


def local_search_strategy(g: GraphTopology, tau: Sequence[int], restarts: int,
                          seed: int, tolerance: float = 0.02) -> OracleReport:
    """Random-restart hill climbing over strategies supported on the graph.

    Each restart samples every row uniformly from its simplex, then repeatedly
    nudges one coordinate up or down by an annealed step (0.2 halved down to
    1e-3), clips at zero, renormalizes the row, and keeps the move when the
    capture probability improves.  Fully deterministic for a given seed, and
    restarts reduce in a fixed order (larger value wins, ties go to the
    lexicographically smaller matrix).
    """
    if g.n > LOCAL_SEARCH_MAX_NODES:
        raise SearchSpaceExceeded(f"local search limited to {LOCAL_SEARCH_MAX_NODES} nodes")
    if restarts < 1:
        raise InvalidSpec(f"restarts must be >= 1, got {restarts}")
    durations = check_durations(tau, g.n)
    evaluate = min_capture_evaluator(durations)
    adjacency = g.adjacency()
    support = [np.flatnonzero(adjacency[i]) for i in range(g.n)]
    if any(cols.size == 0 for cols in support):
        raise InvalidSpec("every node needs at least one outgoing edge")
    free_rows = [(i, cols) for i, cols in enumerate(support) if cols.size > 1]

    evaluations = 0
    best_mu = -1.0
    best_P = None
    for restart in range(restarts):
        rng = counter_stream(seed, restart)
        P = _random_feasible_strategy(rng, support, g.n)
        mu = evaluate(P)
        evaluations += 1
        step = _STEP_INITIAL
        while step >= _STEP_FINAL:
            improved = True
            while improved:
                improved = False
                for i, cols in free_rows:
                    for c in cols:
                        for sign in (step, -step):
                            if sign < 0 and P[i, c] <= 0.0:
                                continue
                            original = P[i].copy()
                            trial = original.copy()
                            trial[c] += sign
                            np.clip(trial, 0.0, None, out=trial)
                            total = trial.sum()
                            if total <= 0.0:
                                continue
                            trial /= total
                            P[i] = trial
                            value = evaluate(P)
                            evaluations += 1
                            if value > mu + _IMPROVEMENT_EPS:
                                mu = value
                                improved = True
                            else:
                                P[i] = original
            step *= 0.5
        if mu > best_mu or (mu == best_mu and best_P is not None
                            and tuple(P.ravel()) < tuple(best_P.ravel())):
            best_mu = mu
            best_P = P
    reference = _closed_form_reference(g, durations)
    gap = None if reference is None else abs(reference - best_mu)
    return OracleReport(
        best_value=best_mu, best_candidate=best_P,
        candidates_examined=evaluations, closed_form_value=reference,
        agreement=None if gap is None else gap <= tolerance, gap=gap,
    )


@dataclass(frozen=True)
class CheckResult:
    """One swept instance of a claimed inequality."""

    instance: str
    expected: str
    actual: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {"instance": self.instance, "expected": self.expected,
                "actual": self.actual, "pass": self.passed}


@dataclass(frozen=True)
class SuiteReport:
    """All checks from one verification sweep."""

    name: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def summary(self) -> str:
        good = sum(c.passed for c in self.checks)
        total = len(self.checks)
        return f"PASS {good}/{total}" if good == total else f"FAIL {good}/{total}"

    def to_json_list(self) -> list[dict]:
        return [c.to_json_dict() for c in self.checks]


@dataclass(frozen=True)
class BoundSuiteConfig:
    """Parameter ranges for the inequality sweeps (defaults are desk scale)."""

    random_p_instances: int = 500
    seed: int = 0
    random_n_max: int = 6
    random_tau_max: int = 8
    complete_n_values: tuple[int, ...] = (2, 3, 4, 5)
    ratio_tau_draws: int = 5
    appendix_side_max: int = 8
    slack: float = 1e-9


def _random_instance(rng: np.random.Generator, n_max: int, tau_max: int):
    kind = int(rng.integers(0, 3))
    if kind == 0:
        g = build_complete(int(rng.integers(2, n_max + 1)))
    elif kind == 1:
        g = build_bipartite(int(rng.integers(1, n_max // 2 + 1)),
                            int(rng.integers(1, n_max // 2 + 1)))
    else:
        g = build_star(int(rng.integers(2, n_max + 1)))
    adjacency = g.adjacency()
    support = [np.flatnonzero(adjacency[i]) for i in range(g.n)]
    P = _random_feasible_strategy(rng, support, g.n)
    tau = tuple(int(t) for t in rng.integers(1, tau_max + 1, size=g.n))
    return g, P, tau


def bound_suite(config: BoundSuiteConfig | None = None) -> SuiteReport:
    """Sweep every claimed bound over finite ranges and report each instance.

    Covers the stationary upper bound on random irreducible strategies, the
    suboptimality ratio of synthesized complete-graph strategies, the
    e**-2 floor on solved allocation values, and the constant-factor
    guarantees of the uniform two-sided baseline.
    """
    cfg = config or BoundSuiteConfig()
    checks: list[CheckResult] = []

    for idx in range(cfg.random_p_instances):
        rng = counter_stream(cfg.seed, idx)
        g, P, tau = _random_instance(rng, cfg.random_n_max, cfg.random_tau_max)
        pi = stationary_distribution(P)
        mu = capture_probability(P, tau).mu
        bound = float(np.min(pi * np.asarray(tau)))
        checks.append(CheckResult(
            instance=f"stationary-bound[{idx}] {g.family} n={g.n} tau={list(tau)}",
            expected=f"mu <= {bound:.12g}", actual=mu,
            passed=mu <= bound + cfg.slack))

    for n in cfg.complete_n_values:
        rng = counter_stream(cfg.seed, 10_000 + n)
        for _ in range(cfg.ratio_tau_draws):
            tau = tuple(int(t) for t in rng.integers(1, cfg.random_tau_max + 1, size=n))
            result = synthesis.synthesize_complete(tau)
            bound = synthesis.generic_capture_bound(tau)
            ratio = result.mu / bound
            checks.append(CheckResult(
                instance=f"complete-ratio n={n} tau={list(tau)}",
                expected=f"{result.subopt_lb:.12g} <= ratio <= 1",
                actual=ratio,
                passed=result.subopt_lb - 1e-12 <= ratio <= 1.0 + cfg.slack))

    floor = math.exp(-2.0)
    for n in cfg.complete_n_values:
        for B in range(n + 1, n * n):
            w = allocate_complete(n, B).w
            checks.append(CheckResult(
                instance=f"allocation-floor n={n} B={B}",
                expected=f"w > {floor:.12g}", actual=w,
                passed=w > floor))

    for n_p in range(2, cfg.appendix_side_max + 1):
        for n_q in range(2, cfg.appendix_side_max + 1):
            n = n_p + n_q
            for tau in range(2, 2 * n - 3):
                baseline = synthesis.uniform_bipartite_baseline(n_p, n_q, tau)
                checks.append(CheckResult(
                    instance=f"baseline-ratio n_p={n_p} n_q={n_q} tau={tau}",
                    expected=f"ratio >= {baseline.guarantee:.12g}",
                    actual=baseline.ratio,
                    passed=baseline.ratio >= baseline.guarantee - 1e-12))

    return SuiteReport(name="bounds", checks=tuple(checks))


def allocation_agreement_suite(nmax: int = 4, tolerance: float = 1e-10) -> SuiteReport:
    """Closed-form allocations against exhaustive enumeration, one check each.

    Complete graphs run up to `nmax` nodes over every in-range budget; side
    allocations and the sub-budget bisection run both sides up to
    min(nmax, 4) over every valid even budget.
    """
    checks = []
    for n in range(2, nmax + 1):
        for B in range(n + 1, n * n):
            report = exhaustive_allocation("complete", n, B, tolerance=tolerance)
            checks.append(CheckResult(
                instance=f"complete n={n} B={B}",
                expected=f"gap <= {tolerance:.12g}", actual=report.gap,
                passed=bool(report.agreement)))
    side_max = min(nmax, 4)
    for n_side in range(2, side_max + 1):
        for B_side in range(2 * n_side, 2 * n_side * n_side, 2):
            report = exhaustive_side_allocation(n_side, B_side, tolerance=tolerance)
            checks.append(CheckResult(
                instance=f"side n={n_side} B={B_side}",
                expected=f"gap <= {tolerance:.12g}", actual=report.gap,
                passed=bool(report.agreement)))
    for n_p in range(2, side_max + 1):
        for n_q in range(2, side_max + 1):
            lo = 2 * (n_p + n_q)
            hi = 2 * (n_p * n_p + n_q * n_q)
            for B in range(lo + 2, hi, 2):
                report = exhaustive_allocation("bipartite", (n_p, n_q), B,
                                               tolerance=tolerance)
                checks.append(CheckResult(
                    instance=f"bipartite n_p={n_p} n_q={n_q} B={B}",
                    expected=f"gap <= {tolerance:.12g}", actual=report.gap,
                    passed=bool(report.agreement)))
    return SuiteReport(name="alloc-oracle", checks=tuple(checks))


def monte_carlo_suite(trials: int = 100_000, seed: int = 7,
                      instances: int = 20) -> SuiteReport:
    """Seeded random instances: every pair's empirical capture frequency must
    sit within three binomial sigmas of the exact recursion value."""
    checks = []
    for idx in range(instances):
        rng = counter_stream(seed, 90_000 + idx)
        n = int(rng.integers(3, 5))
        graph = build_complete(n)
        adjacency = graph.adjacency()
        support = [np.flatnonzero(adjacency[i]) for i in range(n)]
        P = _random_feasible_strategy(rng, support, n)
        tau = tuple(int(t) for t in rng.integers(2, 5, size=n))
        exact = capture_probability(P, tau).cdf
        sim = simulate_capture(P, tau, trials=trials, seed=seed + idx)
        worst = 0.0
        ok = True
        for i in range(n):
            for j in range(n):
                p = exact[i, j]
                sigma = math.sqrt(max(p * (1.0 - p), 0.0) / trials)
                diff = abs(sim.estimates[i, j] - p)
                if sigma == 0.0:
                    if diff > 0.0:
                        ok = False
                        worst = math.inf
                    continue
                z = diff / (3.0 * sigma)
                worst = max(worst, z)
                if z > 1.0:
                    ok = False
        checks.append(CheckResult(
            instance=f"montecarlo[{idx}] n={n} tau={list(tau)}",
            expected="max |estimate - exact| <= 3 sigma",
            actual=worst, passed=ok))
    return SuiteReport(name="montecarlo", checks=tuple(checks))
