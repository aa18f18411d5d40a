"""Patrol-strategy synthesis for complete, complete bipartite, and star graphs.

All three families reduce to the same one-dimensional root-finding problem:
pick the per-node entry probabilities so that every node's individual capture
term is equal, then spend the remaining simplex mass.  Writing w for the
common miss probability, the entry probabilities are 1 - w**(1/m_i) with
m_i = tau_i on complete graphs and m_i = floor(tau_i / 2) on two-sided
graphs, and w solves sum_i w**(1/m_i) = n - 1 on [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import BracketError, DimensionMismatch, InfeasibleTau, InvalidSpec, TrivialGame
from .graphs import BIPARTITE, STAR, GraphTopology, check_durations

BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200

OPTIMAL = "optimal"
HEURISTIC = "heuristic"

ODD_TAU_GUARANTEE = 1.0 / 3.0
EVEN_TAU_GUARANTEE = 0.5 * (1.0 - 1.0 / np.e)


def solve_monotone_increasing(g: Callable[[float], float], target: float,
                              lo: float, hi: float, tol: float,
                              max_iter: int = BISECTION_MAX_ITER) -> float:
    """Solve g(x) = target for a strictly increasing g by bisection.

    Stops when the residual |g(x) - target| drops below tol * max(1, |target|)
    or the bracket narrows to tol.  Raises `BracketError` when the target is
    not enclosed by [g(lo), g(hi)].
    """
    if hi < lo:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    scale = max(1.0, abs(target))
    g_lo, g_hi = g(lo), g(hi)
    if g_lo > target:
        if g_lo - target <= tol * scale:
            return lo
        raise BracketError(f"g(lo)={g_lo} exceeds target {target}")
    if g_hi < target:
        if target - g_hi <= tol * scale:
            return hi
        raise BracketError(f"g(hi)={g_hi} below target {target}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        value = g(mid)
        if abs(value - target) <= tol * scale or hi - lo <= tol:
            return mid
        if value < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def solve_equalized_value(exponents: tuple[int, ...]) -> float:
    """Common miss probability w with sum_i w**(1/m_i) = len(m) - 1.

    The left side is strictly increasing from 0 (at w=0) to len(m) (at w=1),
    so the root exists and is unique for any positive integer exponents.
    Cached on the sorted multiset since the equation is permutation invariant.
    """
    if not exponents:
        raise InvalidSpec("need at least one exponent")
    if any(m < 1 for m in exponents):
        raise InvalidSpec(f"exponents must be positive integers: {exponents}")
    m = tuple(sorted(exponents))
    if m != exponents:
        return solve_equalized_value(m)
    if len(m) == 1:
        return 0.0
    inv = np.array([1.0 / e for e in m])
    target = float(len(m) - 1)

    def g(w: float) -> float:
        return float(np.sum(w ** inv))

    return solve_monotone_increasing(g, target, 0.0, 1.0, BISECTION_TOL)


@dataclass(frozen=True, eq=False)
class StrategyResult:
    """A synthesized patrol strategy with its game value.

    `w` is the solved miss probability, so `mu = 1 - w` on complete and star
    graphs and `1 - max(w_p, w_q)` on bipartite ones.  `subopt_lb` is a lower
    bound on mu divided by the best achievable capture probability.
    """

    P: np.ndarray
    pi: np.ndarray
    mu: float
    w: float
    subopt_lb: float
    optimality: str
    w_p: float | None = None
    w_q: float | None = None

    def to_json_dict(self) -> dict:
        out = {
            "P": self.P.tolist(),
            "pi": self.pi.tolist(),
            "mu": self.mu,
            "w": self.w,
            "subopt_lb": self.subopt_lb,
            "optimality": self.optimality,
        }
        if self.w_p is not None:
            out["w_p"] = self.w_p
        if self.w_q is not None:
            out["w_q"] = self.w_q
        return out


def generic_capture_bound(tau: Sequence[int]) -> float:
    """Universal upper bound min(1, tau_max / n) on the optimal capture probability."""
    durations = [int(t) for t in tau]
    return min(1.0, max(durations) / len(durations))


def _entry_probabilities(w: float, exponents: Sequence[int]) -> np.ndarray:
    probs = np.array([1.0 - w ** (1.0 / m) for m in exponents])
    return probs / probs.sum()


def synthesize_complete(tau: Sequence[int]) -> StrategyResult:
    """Strategy for a complete graph: every row equals the tuned distribution pi.

    Equalizes the per-node capture terms 1 - (1 - pi_i)**tau_i, which makes
    the worst case independent of the attacked node.
    """
    durations = check_durations(tau, len(tau))
    n = len(durations)
    if n < 2:
        raise InvalidSpec("complete-graph synthesis needs n >= 2")
    w = solve_equalized_value(durations)
    pi = _entry_probabilities(w, durations)
    P = np.tile(pi, (n, 1))
    mu = 1.0 - w
    subopt = min(1.0, max(0.0, mu / generic_capture_bound(durations)))
    return StrategyResult(P=P, pi=pi, mu=mu, w=w, subopt_lb=subopt, optimality=HEURISTIC)


def _assemble_two_sided(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Block strategy: P-side rows play q across, Q-side rows play p across."""
    n_p, n_q = len(p), len(q)
    P = np.zeros((n_p + n_q, n_p + n_q))
    P[:n_p, n_p:] = q
    P[n_p:, :n_p] = p
    return P


def _two_sided_core(tau_p: Sequence[int], tau_q: Sequence[int]) -> tuple:
    for side in (tau_p, tau_q):
        if any(int(t) < 2 for t in side):
            raise InfeasibleTau(
                f"two-sided synthesis needs every tau >= 2, got {tuple(side)}: "
                "a 2-hop target could never be reached in time")
    m_p = tuple(int(t) // 2 for t in tau_p)
    m_q = tuple(int(t) // 2 for t in tau_q)
    w_p = solve_equalized_value(m_p)
    w_q = solve_equalized_value(m_q)
    p = _entry_probabilities(w_p, m_p)
    q = _entry_probabilities(w_q, m_q)
    P = _assemble_two_sided(p, q)
    pi = np.concatenate([p / 2.0, q / 2.0])
    return P, pi, w_p, w_q


def synthesize_bipartite(g: GraphTopology, tau_p: Sequence[int],
                         tau_q: Sequence[int]) -> StrategyResult:
    """Strategy for a complete bipartite graph, alternating sides every step.

    Each side is tuned independently: entering probabilities equalize the
    side's capture terms 1 - (1 - x_i)**floor(tau_i / 2), and the game value
    is set by the weaker side.  Heuristic with a certified suboptimality
    bound; see `synthesize_star` for the case where it is exactly optimal.
    """
    if g.family not in (BIPARTITE, STAR):
        raise InvalidSpec(f"expected a bipartite or star graph, got {g.family!r}")
    durations_p = check_durations(tau_p, g.n_p)
    durations_q = check_durations(tau_q, g.n_q)
    P, pi, w_p, w_q = _two_sided_core(durations_p, durations_q)
    w = max(w_p, w_q)
    mu = 1.0 - w
    subopt = min(1.0, max(0.0, mu / generic_capture_bound(durations_p + durations_q)))
    return StrategyResult(P=P, pi=pi, mu=mu, w=w, subopt_lb=subopt,
                          optimality=HEURISTIC, w_p=w_p, w_q=w_q)


def synthesize_star(tau: Sequence[int]) -> StrategyResult:
    """Optimal strategy for a star graph (center is node 1).

    Leaves always return to the center; the center's row is tuned over the
    leaves exactly like one side of the bipartite construction.  The center
    duration does not enter the equations (it only needs to be >= 2 so the
    return time to the center is always met).
    """
    durations = check_durations(tau, len(tau))
    n = len(durations)
    if n < 2:
        raise InvalidSpec("star synthesis needs n >= 2")
    P, pi, _, w_q = _two_sided_core(durations[:1], durations[1:])
    return StrategyResult(P=P, pi=pi, mu=1.0 - w_q, w=w_q, subopt_lb=1.0,
                          optimality=OPTIMAL)


@dataclass(frozen=True, eq=False)
class BaselineResult:
    """Uniform cross-block bipartite strategy with its constant-factor guarantee."""

    P: np.ndarray
    pi: np.ndarray
    mu: float
    w: float
    tau: int
    ratio: float
    guarantee: float

    def to_json_dict(self) -> dict:
        return {
            "P": self.P.tolist(),
            "pi": self.pi.tolist(),
            "mu": self.mu,
            "w": self.w,
            "tau": self.tau,
            "ratio": self.ratio,
            "guarantee": self.guarantee,
        }


def uniform_bipartite_baseline(n_p: int, n_q: int, tau: int) -> BaselineResult:
    """Uniform bipartite strategy under a single shared attack duration.

    Every step crosses sides uniformly at random.  The capture probability is
    decided by the larger side, and its ratio to the generic bound tau/n is
    at least 1/3 for odd tau and (1/2)(1 - 1/e) for even tau.
    """
    if n_p < 2 or n_q < 2:
        raise InvalidSpec(f"baseline needs both sides >= 2, got ({n_p}, {n_q})")
    tau = int(tau)
    n = n_p + n_q
    if not 2 <= tau <= 2 * n - 4:
        raise TrivialGame(f"tau={tau} outside the nontrivial range [2, {2 * n - 4}]")
    P = _assemble_two_sided(np.full(n_p, 1.0 / n_p), np.full(n_q, 1.0 / n_q))
    pi = np.concatenate([np.full(n_p, 0.5 / n_p), np.full(n_q, 0.5 / n_q)])
    mu = 1.0 - (1.0 - 1.0 / max(n_p, n_q)) ** (tau // 2)
    ratio = mu / (tau / n)
    guarantee = ODD_TAU_GUARANTEE if tau % 2 else EVEN_TAU_GUARANTEE
    return BaselineResult(P=P, pi=pi, mu=mu, w=1.0 - mu, tau=tau,
                          ratio=ratio, guarantee=guarantee)


@dataclass(frozen=True)
class BoundReport:
    """Upper bounds on the optimal capture probability of an instance."""

    stationary_bound: float
    generic_bound: float
    ratio: float | None = None

    def to_json_dict(self) -> dict:
        out = {"stationary_bound": self.stationary_bound, "generic_bound": self.generic_bound}
        if self.ratio is not None:
            out["ratio"] = self.ratio
        return out


def capture_upper_bound(pi: Sequence[float], tau: Sequence[int],
                        mu: float | None = None) -> BoundReport:
    """Bounds from a stationary distribution: min_i pi_i * tau_i and min(1, tau_max/n).

    The stationary bound certifies any strategy whose chain has distribution
    pi; the generic bound needs no knowledge of the optimum at all.  When a
    capture probability is supplied, its ratio to the generic bound is
    reported as an achieved suboptimality factor.
    """
    pi = np.asarray(pi, dtype=float)
    durations = np.asarray([int(t) for t in tau])
    if pi.shape[0] != durations.shape[0]:
        raise DimensionMismatch(f"pi has {pi.shape[0]} entries, tau has {durations.shape[0]}")
    stationary = float(np.min(pi * durations))
    generic = generic_capture_bound(durations)
    ratio = None if mu is None else mu / generic
    return BoundReport(stationary_bound=stationary, generic_bound=generic, ratio=ratio)
