"""Isoenergetic compression of a well state.

The wall moves from ``L`` to ``L'`` with the energy expectation held fixed, so
the post-compression weights must satisfy ``sum p_n n^2 = E * L'^2`` where
``E`` is the initial energy. Among those, the maximum-entropy weights are
chosen; relative phases are left undetermined and represented by the
all-real-nonnegative amplitudes ``sqrt(p_n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .maxent import (CONSTRAINT_TOL, CutoffPolicy, GibbsSolution, ProbabilityWeights,
                     solve_gibbs)
from .well_basis import StateVector, WellGeometry, state_energy

WIDTH_SLACK = 1e-9
PHASE_CONVENTION = "all-real-nonnegative"


@dataclass(frozen=True, eq=False)
class CompressedState:
    well: WellGeometry
    weights: ProbabilityWeights
    beta: float
    degenerate: bool
    initial_energy: float
    original_width: float
    solution: GibbsSolution
    phase_convention: str = PHASE_CONVENTION

    @property
    def expansion(self) -> bool:
        """True when the wall moved outwards rather than inwards."""
        return self.well.width > self.original_width

    @property
    def energy(self) -> float:
        n = np.arange(1, self.weights.cutoff + 1, dtype=float)
        return float(np.dot(self.weights.weights, n * n)) / self.well.width ** 2

    @property
    def cutoff(self) -> int:
        return self.weights.cutoff

    def amplitudes(self) -> np.ndarray:
        """Canonical representative of the optimal amplitude class."""
        return np.sqrt(self.weights.weights)

    def as_state(self) -> StateVector:
        return StateVector(self.well, self.amplitudes())


def min_feasible_width(state: StateVector) -> float:
    """Smallest width the state can be compressed to at fixed energy.

    Below ``L / sqrt(<n^2>)`` the conserved energy would lie under the new
    ground-level energy.
    """
    return state.well.width / math.sqrt(state.mean_nsq())


def compress(state: StateVector, new_width: float, constraint_tol: float = CONSTRAINT_TOL,
             cutoff_policy: CutoffPolicy | None = None) -> CompressedState:
    """Move the wall of ``state``'s well to ``new_width`` at constant energy.

    Widths within ``WIDTH_SLACK`` of :func:`min_feasible_width` resolve to the
    degenerate outcome (all weight on the new ground level). Expansion
    (``new_width`` above the current width) is allowed.

    Raises:
        InfeasibleError: ``new_width`` is below the minimum feasible width;
            ``min_width`` on the exception carries that minimum.
    """
    new_well = WellGeometry(new_width)
    w_min = min_feasible_width(state)
    if new_well.width < w_min - WIDTH_SLACK:
        raise InfeasibleError(
            f"width {new_well.width!r} is below the minimum feasible width {w_min!r}",
            min_width=w_min)
    energy = state_energy(state)
    if new_well.width <= w_min + WIDTH_SLACK:
        target = 1.0
    else:
        target = energy * new_well.width ** 2
    sol = solve_gibbs(target, constraint_tol=constraint_tol, cutoff_policy=cutoff_policy)
    return CompressedState(well=new_well, weights=sol.weights, beta=sol.beta,
                           degenerate=sol.degenerate, initial_energy=energy,
                           original_width=state.well.width, solution=sol)


def probe_weight(cstate: CompressedState, level: int = 1) -> float:
    """Weight of the compressed state on ``level`` of the new well (0 past the cutoff)."""
    if level < 1:
        raise ValueError("levels are 1-based")
    return cstate.weights[level]


def compressed_overlap(a: CompressedState, b: CompressedState) -> float:
    """Squared overlap of two compressed states under the nonnegative-real phase convention.

    Equals ``(sum_n sqrt(p_n q_n))**2``. The true overlap depends on the
    undetermined relative phases; this is only meaningful as a convention.
    """
    if a.well.width != b.well.width:
        raise ValueError("compressed states live in wells of different width")
    k = min(a.cutoff, b.cutoff)
    bc = float(np.sum(np.sqrt(a.weights.weights[:k] * b.weights.weights[:k])))
    return min(1.0, bc * bc)
