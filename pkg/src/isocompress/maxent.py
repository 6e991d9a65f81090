"""Maximum-entropy weights over levels n >= 1 under a fixed second moment.

Maximizing ``-sum p_n log p_n`` subject to ``sum p_n = 1`` and
``sum p_n n^2 = target`` gives the Gibbs form ``p_n = exp(-beta n^2) / Z``.
The multiplier ``beta`` is found by bracketing and safeguarded Newton/bisection
on the Gibbs mean, which is strictly decreasing in ``beta``.

Two truncation regimes exist:

* adaptive (default): the infinite problem. The cutoff is grown until the
  discarded tail probability and tail second moment are both provably below
  ``tail_tol`` (integral bounds on the Gaussian tail). Here ``beta > 0``.
* fixed: the problem restricted to levels ``1..K``. Targets above the uniform
  mean need ``beta < 0``, which is allowed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import entr, erfcx

from .errors import InfeasibleError, SolverError

DEGENERACY_TOL = 1e-9
CONSTRAINT_TOL = 1e-10
TAIL_TOL = 1e-12
MAX_BISECTIONS = 200
MAX_BRACKET_STEPS = 200
NORM_TOL = 1e-9


class Feasibility(enum.Enum):
    INFEASIBLE = "Infeasible"
    DEGENERATE = "Degenerate"
    FEASIBLE = "Feasible"


@dataclass(frozen=True)
class CutoffPolicy:
    """How many levels the solver keeps.

    Attributes:
        fixed: solve the truncated problem on exactly this many levels; ``None``
            for the adaptive infinite-level solve.
        tail_tol: bound on the discarded probability and on the discarded
            contribution to ``sum p_n n^2`` (adaptive mode only).
        max_cutoff: hard ceiling on the adaptive cutoff.
    """

    fixed: int | None = None
    tail_tol: float = TAIL_TOL
    max_cutoff: int = 50_000_000

    def __post_init__(self):
        if self.fixed is not None and self.fixed < 2:
            raise ValueError("a fixed cutoff needs at least two levels")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")


@dataclass(frozen=True, eq=False)
class ProbabilityWeights:
    """Non-negative weights on levels ``1..cutoff`` summing to one."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        if w.size == 0:
            raise ValueError("empty weight vector")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and non-negative")
        total = float(w.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def cutoff(self) -> int:
        return self.weights.size

    def __getitem__(self, level: int) -> float:
        """Weight of 1-based ``level``; zero beyond the cutoff."""
        if level < 1:
            raise IndexError("levels are 1-based")
        return float(self.weights[level - 1]) if level <= self.cutoff else 0.0

    def __len__(self):
        return self.cutoff


@dataclass(frozen=True, eq=False)
class GibbsSolution:
    """Result of :func:`solve_gibbs`.

    For a degenerate target ``beta`` is ``inf``, ``partition_sum`` is 1 and
    all weight sits on level 1.
    """

    target: float
    beta: float
    partition_sum: float
    weights: ProbabilityWeights
    achieved_mean_nsq: float
    degenerate: bool
    tail_probability: float = 0.0
    tail_moment: float = 0.0
    tail_entropy: float = 0.0
    iterations: int = 0
    fixed_cutoff: bool = field(default=False)

    @property
    def cutoff(self) -> int:
        return self.weights.cutoff

    @property
    def log_partition(self) -> float:
        return math.log(self.partition_sum)


def _as_array(weights) -> np.ndarray:
    if isinstance(weights, ProbabilityWeights):
        return weights.weights
    return np.asarray(weights, dtype=float)


def shannon_entropy(weights) -> float:
    """Natural-log Shannon entropy, with ``0 log 0 = 0``."""
    return float(np.sum(entr(_as_array(weights))))


def mean_nsq(weights) -> float:
    """Second moment ``sum p_n n^2`` of the level index."""
    p = _as_array(weights)
    n = np.arange(1, p.size + 1, dtype=float)
    return float(np.dot(p, n * n))


def classify_feasibility(target_mean_nsq: float,
                         degeneracy_tol: float = DEGENERACY_TOL) -> Feasibility:
    """Classify a second-moment target against the ground-level minimum 1."""
    t = float(target_mean_nsq)
    if not math.isfinite(t):
        raise ValueError(f"target moment must be finite, got {target_mean_nsq!r}")
    if t < 1.0 - degeneracy_tol:
        return Feasibility.INFEASIBLE
    if abs(t - 1.0) <= degeneracy_tol:
        return Feasibility.DEGENERATE
    return Feasibility.FEASIBLE


@dataclass
class _Evaluation:
    beta: float
    cutoff: int
    probs: np.ndarray
    mean: float
    var: float
    log_z: float
    tail_prob: float = 0.0
    tail_moment: float = 0.0


def _truncated(beta: float, cutoff: int) -> _Evaluation:
    n = np.arange(1, cutoff + 1, dtype=float)
    nsq = n * n
    expo = -beta * nsq
    shift = float(expo.max())
    w = np.exp(expo - shift)
    s = float(w.sum())
    p = w / s
    mean = float(np.dot(p, nsq))
    var = float(np.dot(p, (nsq - mean) ** 2))
    return _Evaluation(beta, cutoff, p, mean, var, math.log(s) + shift)


def _tail_bounds(beta: float, cutoff: int, log_z_trunc: float) -> tuple[float, float]:
    """Upper bounds on the probability and second-moment mass beyond ``cutoff``.

    Both summands are decreasing past ``1/sqrt(beta)``, so the sums are bounded
    by the integrals from ``cutoff`` to infinity. Valid for
    ``cutoff >= 1/sqrt(beta)``.
    """
    K = float(cutoff)
    y = K * math.sqrt(beta)
    # exp(-beta K^2) / Z_K, computed in log space
    head = math.exp(-beta * K * K - log_z_trunc)
    gauss = erfcx(y) * head
    tail_prob = 0.5 * math.sqrt(math.pi / beta) * gauss
    tail_moment = K * head / (2.0 * beta) + math.sqrt(math.pi) / (4.0 * beta ** 1.5) * gauss
    return tail_prob, tail_moment


def _adaptive(beta: float, policy: CutoffPolicy) -> _Evaluation:
    K = max(4, math.ceil(math.sqrt(1.0 + 40.0 / beta)) + 1)
    while True:
        if K > policy.max_cutoff:
            raise SolverError(
                f"cutoff would exceed {policy.max_cutoff} levels at beta={beta!r}")
        ev = _truncated(beta, K)
        tp, tm = _tail_bounds(beta, K, ev.log_z)
        if tp <= policy.tail_tol and tm <= policy.tail_tol:
            ev.tail_prob, ev.tail_moment = tp, tm
            return ev
        K = math.ceil(K * 1.25) + 1


def gibbs_weights(beta: float, cutoff_policy: CutoffPolicy | None = None) -> np.ndarray:
    """Gibbs weights ``exp(-beta n^2)/Z`` under the given truncation policy."""
    return _evaluate(beta, cutoff_policy or CutoffPolicy()).probs


def gibbs_mean_nsq(beta: float, cutoff_policy: CutoffPolicy | None = None) -> float:
    """Gibbs expectation of ``n^2`` at multiplier ``beta``."""
    return _evaluate(beta, cutoff_policy or CutoffPolicy()).mean


def _evaluate(beta: float, policy: CutoffPolicy) -> _Evaluation:
    if policy.fixed is not None:
        return _truncated(beta, policy.fixed)
    if not beta > 0:
        raise ValueError("the untruncated Gibbs form needs beta > 0")
    return _adaptive(beta, policy)


def _bracket(target: float, policy: CutoffPolicy, evaluate):
    """Find ``lo < hi`` with ``mean(lo) > target > mean(hi)``."""
    beta0 = 1.0 / (2.0 * target)
    ev0 = evaluate(beta0)
    if ev0.mean == target:
        return ev0, ev0
    if ev0.mean > target:
        lo, step = ev0, beta0
        for _ in range(MAX_BRACKET_STEPS):
            hi = evaluate(lo.beta + step)
            if hi.mean <= target:
                return lo, hi
            lo, step = hi, 2.0 * step
    else:
        hi = ev0
        step = beta0
        for _ in range(MAX_BRACKET_STEPS):
            if policy.fixed is None:
                lo = evaluate(hi.beta / 2.0)
            else:
                lo = evaluate(hi.beta - step)
                step *= 2.0
            if lo.mean >= target:
                return lo, hi
            hi = lo
    raise SolverError(f"could not bracket beta for target {target!r} "
                      f"within {MAX_BRACKET_STEPS} steps")


def solve_gibbs(target_mean_nsq: float, constraint_tol: float = CONSTRAINT_TOL,
                cutoff_policy: CutoffPolicy | None = None) -> GibbsSolution:
    """Entropy-maximizing weights with ``sum p_n n^2 == target_mean_nsq``.

    Args:
        target_mean_nsq: required second moment of the level index.
        constraint_tol: relative tolerance on the achieved moment.
        cutoff_policy: truncation regime, adaptive by default.

    Raises:
        InfeasibleError: the target lies below 1 (or, for a fixed cutoff K,
            at or above K^2).
        SolverError: bracketing or refinement exhausted its budget.
    """
    policy = cutoff_policy or CutoffPolicy()
    target = float(target_mean_nsq)
    kind = classify_feasibility(target)
    if kind is Feasibility.INFEASIBLE:
        raise InfeasibleError(
            f"second-moment target {target!r} is below the ground-level value 1")
    if kind is Feasibility.DEGENERATE:
        return GibbsSolution(target=target, beta=math.inf, partition_sum=1.0,
                             weights=ProbabilityWeights(np.array([1.0])),
                             achieved_mean_nsq=1.0, degenerate=True,
                             fixed_cutoff=policy.fixed is not None)
    if policy.fixed is not None and target >= policy.fixed ** 2 - DEGENERACY_TOL:
        raise InfeasibleError(
            f"target {target!r} not reachable on {policy.fixed} levels "
            f"(needs < {policy.fixed ** 2})")

    def evaluate(beta):
        return _evaluate(beta, policy)

    lo, hi = _bracket(target, policy, evaluate)
    tol = constraint_tol * target
    best = lo if abs(lo.mean - target) < abs(hi.mean - target) else hi
    it = 0
    while abs(best.mean - target) > tol:
        if it >= MAX_BISECTIONS:
            raise SolverError(
                f"no convergence for target {target!r} after {MAX_BISECTIONS} iterations "
                f"(residual {best.mean - target!r})")
        it += 1
        # Newton from the current best point, d(mean)/d(beta) = -var
        cand = None
        if best.var > 0:
            cand = best.beta + (best.mean - target) / best.var
        if cand is None or not (lo.beta < cand < hi.beta):
            cand = 0.5 * (lo.beta + hi.beta)
        if cand in (lo.beta, hi.beta):
            raise SolverError(f"bracket collapsed at beta={cand!r} for target {target!r}")
        ev = evaluate(cand)
        if ev.mean > target:
            lo = ev
        else:
            hi = ev
        best = ev
        # Newton can creep along one side; force a halving when it stalls
        if it % 4 == 0:
            mid = evaluate(0.5 * (lo.beta + hi.beta))
            if mid.mean > target:
                lo = mid
            else:
                hi = mid
            if abs(mid.mean - target) < abs(best.mean - target):
                best = mid

    p = best.probs
    log_z = best.log_z
    tail_entropy = best.beta * best.tail_moment + max(log_z, 0.0) * best.tail_prob
    return GibbsSolution(
        target=target,
        beta=best.beta,
        partition_sum=math.exp(log_z),
        weights=ProbabilityWeights(p),
        achieved_mean_nsq=mean_nsq(p),
        degenerate=False,
        tail_probability=best.tail_prob,
        tail_moment=best.tail_moment,
        tail_entropy=tail_entropy,
        iterations=it,
        fixed_cutoff=policy.fixed is not None,
    )
