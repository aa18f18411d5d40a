"""Markov-chain machinery: stationary distributions, first-hitting-time
probabilities, exact capture probabilities, and a seeded Monte Carlo check.

The first hitting time from node i to node j counts the steps after the agent
leaves i, so the first transition is drawn from row i and a same-node pair
(i = j) measures the return time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidSpec, NotIrreducible
from .graphs import GraphTopology, check_durations, is_strongly_connected

ROW_SUM_TOL = 1e-9

_POWER_ITERATION_CUTOFF = 200
_POWER_ITERATION_TOL = 1e-12
_POWER_ITERATION_CAP = 100_000


def check_transition_matrix(P: np.ndarray, graph: GraphTopology | None = None,
                            tol: float = ROW_SUM_TOL) -> np.ndarray:
    """Validate a row-stochastic matrix, optionally against a graph's support.

    Returns the matrix as a float64 ndarray.  Raises `DimensionMismatch` for
    a non-square input and `InvalidSpec` when rows do not sum to one, entries
    leave [0, 1], or mass sits on a non-edge of `graph`.
    """
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise DimensionMismatch(f"transition matrix must be square, got shape {P.shape}")
    if graph is not None and P.shape[0] != graph.n:
        raise DimensionMismatch(f"matrix is {P.shape[0]}x{P.shape[0]} but graph has {graph.n} nodes")
    if np.any(P < -tol) or np.any(P > 1 + tol):
        raise InvalidSpec("transition probabilities must lie in [0, 1]")
    if np.any(np.abs(P.sum(axis=1) - 1.0) > tol):
        raise InvalidSpec("every row must sum to 1")
    if graph is not None:
        off_support = ~graph.adjacency() & (P > tol)
        if off_support.any():
            i, j = np.argwhere(off_support)[0]
            raise InvalidSpec(f"probability mass on non-edge ({i + 1}, {j + 1})")
    return P


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Stationary distribution pi of an irreducible row-stochastic matrix.

    Solves pi^T P = pi^T with the normalization sum(pi) = 1 by a direct
    least-squares solve of the stacked linear system; chains larger than a
    few hundred states fall back to averaged fixed-point iteration.

    Raises
    ------
    NotIrreducible
        If the support digraph of P is not strongly connected.
    """
    P = check_transition_matrix(P)
    n = P.shape[0]
    if not is_strongly_connected(P > 0.0):
        raise NotIrreducible("transition matrix support is not strongly connected")
    if n <= _POWER_ITERATION_CUTOFF:
        A = np.vstack([P.T - np.eye(n), np.ones((1, n))])
        b = np.zeros(n + 1)
        b[-1] = 1.0
        pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    else:
        # Cesaro-averaged iteration stays convergent for periodic chains.
        pi = np.full(n, 1.0 / n)
        for _ in range(_POWER_ITERATION_CAP):
            nxt = 0.5 * (pi + pi @ P)
            if np.abs(nxt - pi).max() < _POWER_ITERATION_TOL:
                pi = nxt
                break
            pi = nxt
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def hitting_time_probabilities(P: np.ndarray, k_max: int) -> np.ndarray:
    """First-hitting-time probability matrices for 1 <= k <= k_max.

    Returns an array F of shape (k_max, n, n) with F[k-1][i, j] equal to the
    probability that the first arrival at j after leaving i takes exactly k
    steps.  F[0] is P itself and each successive matrix is the product of P
    with the previous one after zeroing its diagonal (walks that already
    arrived stop contributing).
    """
    if k_max < 1:
        raise InvalidSpec(f"k_max must be >= 1, got {k_max}")
    P = check_transition_matrix(P)
    n = P.shape[0]
    F = np.empty((k_max, n, n))
    F[0] = P
    for k in range(1, k_max):
        step = F[k - 1].copy()
        np.fill_diagonal(step, 0.0)
        np.matmul(P, step, out=F[k])
    return F


@dataclass(frozen=True, eq=False)
class CaptureReport:
    """Worst-case capture probability of a patrol strategy.

    `cdf[i, j]` is the probability of reaching node j+1 from node i+1 within
    tau_{j+1} steps; `mu` is its minimum and `worst_pair` the 1-indexed pair
    attaining it (row-major first in case of ties).
    """

    mu: float
    worst_pair: tuple[int, int]
    cdf: np.ndarray

    def to_json_dict(self) -> dict:
        return {"mu": self.mu, "worst_pair": list(self.worst_pair), "cdf": self.cdf.tolist()}


def capture_cdf(P: np.ndarray, tau: Sequence[int]) -> np.ndarray:
    """Matrix of P(T_ij <= tau_j) for all ordered pairs, same-node pairs included."""
    P = check_transition_matrix(P)
    durations = check_durations(tau, P.shape[0])
    F = hitting_time_probabilities(P, max(durations))
    cdf = np.empty_like(P)
    for j, t in enumerate(durations):
        cdf[:, j] = F[:t, :, j].sum(axis=0)
    return cdf


def capture_probability(P: np.ndarray, tau: Sequence[int]) -> CaptureReport:
    """Exact capture probability against an omniscient attacker.

    The attacker knows the strategy and the agent's position and picks the
    ordered pair (agent node i, target j) minimizing the probability that the
    agent reaches j within tau_j steps.
    """
    cdf = capture_cdf(P, tau)
    flat = int(np.argmin(cdf))
    i, j = divmod(flat, cdf.shape[1])
    return CaptureReport(mu=float(cdf[i, j]), worst_pair=(i + 1, j + 1), cdf=cdf)


def min_capture_evaluator(tau: Sequence[int]):
    """Reusable evaluator P -> min capture probability for fixed durations.

    Avoids building the full hitting-time tensor and reuses scratch buffers,
    which matters when an optimizer evaluates millions of candidate matrices.
    """
    durations = np.asarray([int(t) for t in tau])
    n = durations.size
    k_max = int(durations.max())
    # column sets shrink as k grows; None marks "all columns still counting"
    col_sets = []
    for k in range(1, k_max + 1):
        cols = np.flatnonzero(durations >= k)
        col_sets.append(None if cols.size == n else cols)
    front = np.empty((n, n))
    back = np.empty((n, n))
    cdf = np.empty((n, n))

    def evaluate(P: np.ndarray) -> float:
        nonlocal front, back, cdf
        np.copyto(front, P)
        cdf.fill(0.0)
        for k in range(1, k_max + 1):
            cols = col_sets[k - 1]
            if cols is None:
                cdf += front
            else:
                cdf[:, cols] += front[:, cols]
            if k < k_max:
                np.fill_diagonal(front, 0.0)
                np.matmul(P, front, out=back)
                front, back = back, front
        return float(cdf.min())

    return evaluate


@dataclass(frozen=True, eq=False)
class SimulationReport:
    """Per-pair empirical capture frequencies from seeded random walks."""

    estimates: np.ndarray
    overall: float
    trials: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "estimates": self.estimates.tolist(),
            "overall": self.overall,
            "trials": self.trials,
            "seed": self.seed,
        }


def counter_stream(seed: int, index: int) -> np.random.Generator:
    """Independent counter-based random stream keyed by (seed, index).

    Streams for different indices never overlap, so work items (pairs,
    trials, restarts) can run in any order or in parallel without changing
    any result.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def simulate_capture(P: np.ndarray, tau: Sequence[int], trials: int, seed: int) -> SimulationReport:
    """Monte Carlo estimate of every P(T_ij <= tau_j).

    For each ordered pair (i, j), `trials` walks leave node i (the first step
    is drawn from row i) and the estimate is the fraction that reach j within
    tau_j steps.  Each pair consumes its own counter-based random stream, and
    each trial a fixed block of it, so results are bitwise reproducible and
    independent of evaluation order.
    """
    if trials < 1:
        raise InvalidSpec(f"trials must be >= 1, got {trials}")
    P = check_transition_matrix(P)
    n = P.shape[0]
    durations = check_durations(tau, n)
    cum = np.cumsum(P, axis=1)
    cum[:, -1] = 1.0

    estimates = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            rng = counter_stream(seed, i * n + j)
            uniforms = rng.random((durations[j], trials))
            states = np.full(trials, i)
            captured = np.zeros(trials, dtype=bool)
            for k in range(durations[j]):
                active = np.flatnonzero(~captured)
                if active.size == 0:
                    break
                u = uniforms[k, active]
                nxt = (u[:, None] >= cum[states[active]]).sum(axis=1)
                np.minimum(nxt, n - 1, out=nxt)
                states[active] = nxt
                captured[active] = nxt == j
            estimates[i, j] = captured.mean()
    return SimulationReport(
        estimates=estimates,
        overall=float(estimates.min()),
        trials=trials,
        seed=seed,
    )
