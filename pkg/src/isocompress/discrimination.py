"""Bayes costs for deciding between two pure states with a 0-1 loss."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .compression import CompressedState, compress, compressed_overlap, probe_weight
from .errors import InfeasibleError
from .maxent import CONSTRAINT_TOL, CutoffPolicy
from .well_basis import StateVector, WellGeometry, same_well_overlap

OVERLAP_PROBE = "probe"
OVERLAP_CONVENTION = "convention-dependent"
COST_LABEL = "model cost under the compression postulate"


def _check_prior(xi: float) -> float:
    xi = float(xi)
    if not 0.0 < xi < 1.0:
        raise ValueError(f"prior must lie strictly between 0 and 1, got {xi!r}")
    return xi


def _check_unit(x: float, name: str) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def helstrom_cost(xi: float, overlap_sq: float) -> float:
    """Minimum error probability 1/2 - 1/2 sqrt(1 - 4 xi (1 - xi) |<phi|psi>|^2)."""
    xi = _check_prior(xi)
    overlap_sq = _check_unit(overlap_sq, "overlap_sq")
    disc = 1.0 - 4.0 * xi * (1.0 - xi) * overlap_sq
    return 0.5 - 0.5 * math.sqrt(max(disc, 0.0))


def cost_delta(xi: float, overlap_before: float, epsilon: float) -> float:
    """Cost before compression minus cost after; positive means the compression helped."""
    return helstrom_cost(xi, overlap_before) - helstrom_cost(xi, epsilon)


def projective_probe_cost(xi: float, epsilon: float) -> float:
    """Error of measuring the projector onto the new ground level.

    Guess ``phi`` on a click, ``psi`` otherwise. ``phi`` compressed to the
    ground level always clicks, so the only error is a click from ``psi``,
    which happens with probability ``epsilon``.
    """
    xi = _check_prior(xi)
    epsilon = _check_unit(epsilon, "epsilon")
    return (1.0 - xi) * epsilon


def make_general_pair(alpha: float, N: int, well: WellGeometry | float = 1.0
                      ) -> tuple[StateVector, StateVector]:
    """``phi = (|1>+|2>)/sqrt2`` and ``psi = alpha phi + sqrt(1-alpha^2) |N>``.

    The overlap amplitude <phi|psi> is exactly ``alpha``.
    """
    alpha = _check_unit(alpha, "alpha")
    if int(N) != N or N < 3:
        raise ValueError(f"N must be an integer >= 3, got {N!r}")
    N = int(N)
    h = 1.0 / math.sqrt(2.0)
    phi = StateVector.from_levels({1: h, 2: h}, well, cutoff=N)
    psi = StateVector.from_levels({1: alpha * h, 2: alpha * h,
                                   N: math.sqrt(1.0 - alpha * alpha)}, well)
    return phi, psi


@dataclass(frozen=True)
class CostReport:
    """Every intermediate of a before/after discrimination comparison.

    ``overlap_kind`` is ``"probe"`` when one hypothesis compresses onto the
    new ground level (the after-overlap is then the other's ground weight),
    else ``"convention-dependent"``.
    """

    xi: float
    overlap_before_amplitude: complex
    overlap_before: float
    overlap_after: float
    overlap_kind: str
    cost_before: float
    cost_after: float
    cost_delta: float
    probe_cost: float
    new_width: float
    energy_phi: float
    energy_psi: float
    beta_phi: float
    beta_psi: float
    degenerate_phi: bool
    degenerate_psi: bool
    cutoff_phi: int
    cutoff_psi: int
    label: str = COST_LABEL

    def as_dict(self) -> dict:
        return asdict(self)


class PairInfeasibleError(InfeasibleError):
    """One or both hypotheses cannot be compressed to the requested width."""

    def __init__(self, failures: dict[str, InfeasibleError]):
        msg = "; ".join(f"{k}: {v}" for k, v in failures.items())
        mins = [e.min_width for e in failures.values() if e.min_width is not None]
        super().__init__(msg, min_width=max(mins) if mins else None)
        self.failures = failures


def post_compression_overlap(phi_after: CompressedState, psi_after: CompressedState
                             ) -> tuple[float, str]:
    if phi_after.degenerate:
        return probe_weight(psi_after, 1), OVERLAP_PROBE
    if psi_after.degenerate:
        return probe_weight(phi_after, 1), OVERLAP_PROBE
    return compressed_overlap(phi_after, psi_after), OVERLAP_CONVENTION


def discriminate_report(xi: float, phi: StateVector, psi: StateVector, new_width: float,
                        constraint_tol: float = CONSTRAINT_TOL,
                        cutoff_policy: CutoffPolicy | None = None) -> CostReport:
    """Compress both hypotheses to ``new_width`` and compare Bayes costs.

    The probe cost assumes ``phi`` is the state that compresses onto the new
    ground level.
    """
    xi = _check_prior(xi)
    amp, before = same_well_overlap(phi, psi)
    compressed, failures = {}, {}
    for name, st in (("phi", phi), ("psi", psi)):
        try:
            compressed[name] = compress(st, new_width, constraint_tol=constraint_tol,
                                      cutoff_policy=cutoff_policy)
        except InfeasibleError as exc:
            failures[name] = exc
    if failures:
        raise PairInfeasibleError(failures)
    pa, sa = compressed["phi"], compressed["psi"]
    eps, kind = post_compression_overlap(pa, sa)
    c_before = helstrom_cost(xi, before)
    c_after = helstrom_cost(xi, eps)
    return CostReport(
        xi=xi,
        overlap_before_amplitude=amp,
        overlap_before=before,
        overlap_after=eps,
        overlap_kind=kind,
        cost_before=c_before,
        cost_after=c_after,
        cost_delta=c_before - c_after,
        probe_cost=projective_probe_cost(xi, probe_weight(sa, 1)),
        new_width=pa.well.width,
        energy_phi=pa.initial_energy,
        energy_psi=sa.initial_energy,
        beta_phi=pa.beta,
        beta_psi=sa.beta,
        degenerate_phi=pa.degenerate,
        degenerate_psi=sa.degenerate,
        cutoff_phi=pa.cutoff,
        cutoff_psi=sa.cutoff,
    )


def cost_grid(xis, epsilons, overlap_before: float = 0.5) -> np.ndarray:
    """``cost_delta`` over the outer product of priors and after-overlaps (rows: xi)."""
    return np.array([[cost_delta(x, overlap_before, e) for e in epsilons] for x in xis])
