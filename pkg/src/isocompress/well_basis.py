"""Eigenbasis algebra for the one-dimensional infinite square well.

Reduced units are used throughout: hbar^2 pi^2 / (2M) = 1, so level ``n`` of a
well of width ``L`` has energy ``n**2 / L**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

NORM_TOL = 1e-9
DEGENERATE_K_RTOL = 1e-12


@dataclass(frozen=True)
class WellGeometry:
    """Infinite square well on ``[0, width]``."""

    width: float

    def __post_init__(self):
        w = float(self.width)
        if not np.isfinite(w) or w <= 0:
            raise ValueError(f"well width must be positive and finite, got {self.width!r}")
        object.__setattr__(self, "width", w)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over levels ``1..cutoff`` of ``well``.

    ``amplitudes[k]`` is the coefficient of level ``k + 1``.
    """

    well: WellGeometry
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.size == 0:
            raise ValueError("a state needs at least one amplitude")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |a_n|^2 = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_levels(cls, levels: Mapping[int, complex], well: WellGeometry | float = 1.0,
                    cutoff: int | None = None) -> "StateVector":
        """Build a dense state from a sparse ``{level: amplitude}`` mapping."""
        if not isinstance(well, WellGeometry):
            well = WellGeometry(well)
        if not levels:
            raise ValueError("no levels given")
        top = max(levels)
        if min(levels) < 1:
            raise ValueError("levels are 1-based")
        cutoff = top if cutoff is None else cutoff
        if cutoff < top:
            raise ValueError(f"cutoff {cutoff} below highest occupied level {top}")
        amps = np.zeros(cutoff, dtype=complex)
        for n, a in levels.items():
            amps[n - 1] += a
        return cls(well, amps)

    @classmethod
    def eigenstate(cls, n: int, well: WellGeometry | float = 1.0) -> "StateVector":
        return cls.from_levels({n: 1.0}, well)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_nsq(self) -> float:
        """Second moment sum |a_n|^2 n^2 of the level index."""
        n = np.arange(1, self.cutoff + 1, dtype=float)
        return float(np.sum(self.weights * n * n))


def _check_level(n) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"level index must be an integer >= 1, got {n!r}")
    return int(n)


def eigen_energy(n: int, well: WellGeometry) -> float:
    """Reduced energy ``n**2 / width**2`` of level ``n``."""
    n = _check_level(n)
    return n * n / well.width ** 2


def state_energy(state: StateVector) -> float:
    """Energy expectation of ``state`` in its own well."""
    return state.mean_nsq() / state.well.width ** 2


def same_well_overlap(a: StateVector, b: StateVector) -> tuple[complex, float]:
    """Inner product <a|b> and its squared magnitude.

    Both states must live in the same well; states of different widths need
    :func:`cross_overlap` instead.
    """
    if a.well.width != b.well.width:
        raise ValueError(
            f"states live in wells of different width ({a.well.width} vs {b.well.width})")
    k = min(a.cutoff, b.cutoff)
    amp = complex(np.vdot(a.amplitudes[:k], b.amplitudes[:k]))
    return amp, min(1.0, abs(amp) ** 2)


def cross_overlap(m: int, n_new: int, well: WellGeometry, new_well: WellGeometry) -> float:
    """Overlap of level ``m`` of ``well`` with level ``n_new`` of ``new_well``.

    Evaluates ``int_0^{L'} sqrt(2/L') sin(n' pi x/L') sqrt(2/L) sin(m pi x/L) dx``
    in closed form, with ``L' <= L`` so the narrow mode vanishes outside
    ``[0, L']``.
    """
    m = _check_level(m)
    n_new = _check_level(n_new)
    L, Lp = well.width, new_well.width
    if Lp > L:
        raise ValueError(f"target width {Lp} exceeds source width {L}")
    k1 = m * np.pi / L
    k2 = n_new * np.pi / Lp
    ksum = k1 + k2
    kdiff = k1 - k2
    if abs(kdiff) < DEGENERATE_K_RTOL * ksum:
        diff_term = Lp
    else:
        diff_term = np.sin(kdiff * Lp) / kdiff
    return float((diff_term - np.sin(ksum * Lp) / ksum) / np.sqrt(L * Lp))


def cross_overlap_matrix(cutoff: int, new_cutoff: int, well: WellGeometry,
                         new_well: WellGeometry) -> np.ndarray:
    """Matrix ``M[j, i] = cross_overlap(i + 1, j + 1, ...)`` (new level by old level)."""
    return np.array([[cross_overlap(m, n, well, new_well) for m in range(1, cutoff + 1)]
                     for n in range(1, new_cutoff + 1)])


def project_state(state: StateVector, new_well: WellGeometry, new_cutoff: int) -> np.ndarray:
    """Amplitudes of ``state`` projected onto the first ``new_cutoff`` levels of ``new_well``.

    The result is not normalized: mass of the wave function outside
    ``[0, new_well.width]`` is lost.
    """
    M = cross_overlap_matrix(state.cutoff, new_cutoff, state.well, new_well)
    return M @ state.amplitudes
