import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isocompress.discrimination import (COST_LABEL, OVERLAP_CONVENTION, OVERLAP_PROBE,
                                        PairInfeasibleError, cost_delta, cost_grid,
                                        discriminate_report, helstrom_cost,
                                        make_general_pair, projective_probe_cost)
from isocompress.errors import InfeasibleError
from isocompress.well_basis import StateVector, same_well_overlap

H = 1 / math.sqrt(2)
NARROW = math.sqrt(2 / 5)
EPS_100 = 0.018078287939307776

XI_GRID = np.round(np.arange(1, 100) * 0.01, 12)
EPS_GRID = np.round(np.arange(0, 51) * 0.01, 12)


@pytest.mark.parametrize("xi, overlap, expected", [
    (0.5, 0.0, 0.0),
    (0.5, 1.0, 0.5),
    (0.5, 0.5, 0.5 - math.sqrt(2) / 4),
])
def test_helstrom_values(xi, overlap, expected):
    assert helstrom_cost(xi, overlap) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("xi, overlap", [(0.0, 0.5), (1.0, 0.5), (0.5, -0.1), (0.5, 1.1)])
def test_helstrom_rejects_out_of_range(xi, overlap):
    with pytest.raises(ValueError):
        helstrom_cost(xi, overlap)


def test_helstrom_never_exceeds_lesser_prior():
    for xi in XI_GRID:
        assert helstrom_cost(xi, 1.0) <= min(xi, 1 - xi) + 1e-15


def test_helstrom_monotone_and_symmetric():
    overlaps = np.linspace(0, 1, 41)
    for xi in XI_GRID:
        c = [helstrom_cost(xi, a) for a in overlaps]
        assert all(x < y for x, y in zip(c, c[1:]))
        assert helstrom_cost(xi, 0.37) == pytest.approx(helstrom_cost(1 - xi, 0.37), abs=1e-15)


def test_cost_delta_zero_when_unchanged():
    assert cost_delta(0.5, 0.5, 0.5) == 0.0


def test_cost_delta_independent_evaluation():
    xi, before, eps = 0.3, 0.5, 0.01
    old = 0.5 - 0.5 * math.sqrt(1 - 4 * xi * (1 - xi) * before)
    new = 0.5 - 0.5 * math.sqrt(1 - 4 * xi * (1 - xi) * eps)
    assert cost_delta(xi, before, eps) == pytest.approx(old - new, abs=1e-15)


def test_cost_delta_nonnegative_grid():
    assert cost_grid(XI_GRID, EPS_GRID).min() >= -1e-12


def test_cost_delta_negative_past_half():
    assert cost_delta(0.5, 0.5, 0.6) < 0


@pytest.mark.parametrize("xi, eps, expected", [(0.5, 0.0, 0.0), (0.5, 0.2, 0.1)])
def test_projective_probe_cost(xi, eps, expected):
    assert projective_probe_cost(xi, eps) == pytest.approx(expected, abs=1e-15)


@given(xi=st.floats(0.001, 0.999), eps=st.floats(0.0, 1.0))
def test_probe_is_suboptimal(xi, eps):
    assert projective_probe_cost(xi, eps) >= helstrom_cost(xi, eps) - 1e-15


@pytest.mark.parametrize("alpha, expected_sq", [(0.0, 0.0), (1.0, 1.0), (0.6, 0.36)])
def test_general_pair_overlap(alpha, expected_sq):
    phi, psi = make_general_pair(alpha, 50)
    amp, sq = same_well_overlap(phi, psi)
    assert amp.real == pytest.approx(alpha, abs=1e-12)
    assert abs(amp.imag) < 1e-15
    assert sq == pytest.approx(expected_sq, abs=1e-12)


@given(alpha=st.floats(0.0, 1.0), N=st.integers(3, 300))
def test_general_pair_recovers_alpha(alpha, N):
    phi, psi = make_general_pair(alpha, N)
    assert abs(same_well_overlap(phi, psi)[0] - alpha) < 1e-12


@pytest.mark.parametrize("N", [1, 2])
def test_general_pair_rejects_low_N(N):
    with pytest.raises(ValueError):
        make_general_pair(0.5, N)


def test_report_example_pair():
    phi = StateVector.from_levels({1: H, 2: H})
    psi = StateVector.from_levels({1: H, 100: H})
    rep = discriminate_report(0.5, phi, psi, NARROW)
    assert rep.overlap_kind == OVERLAP_PROBE
    assert rep.overlap_before == pytest.approx(0.25, abs=1e-14)
    assert rep.overlap_after == pytest.approx(EPS_100, rel=1e-10)
    assert rep.cost_after == pytest.approx(helstrom_cost(0.5, EPS_100), rel=1e-9)
    assert rep.cost_delta > 0
    assert rep.cost_delta == pytest.approx(rep.cost_before - rep.cost_after, abs=0)
    assert rep.probe_cost == pytest.approx(0.5 * EPS_100, rel=1e-10)
    assert rep.degenerate_phi and not rep.degenerate_psi
    assert rep.label == COST_LABEL


def test_report_identical_pair():
    phi, psi = make_general_pair(1.0, 10)
    rep = discriminate_report(0.5, phi, psi, NARROW)
    assert rep.overlap_before == pytest.approx(1.0)
    assert rep.cost_before == pytest.approx(0.5)


def test_report_boundary_prior():
    phi, psi = make_general_pair(0.8, 30)
    rep = discriminate_report(0.01, phi, psi, NARROW)
    assert rep.cost_before <= 0.01


def test_report_convention_dependent_overlap():
    phi, psi = make_general_pair(0.3, 20)
    rep = discriminate_report(0.5, phi, psi, 0.9)
    assert rep.overlap_kind == OVERLAP_CONVENTION
    assert 0.0 <= rep.overlap_after <= 1.0


def test_report_names_infeasible_state():
    phi = StateVector.from_levels({1: H, 2: H})
    psi = StateVector.from_levels({1: H, 100: H})
    with pytest.raises(PairInfeasibleError) as info:
        discriminate_report(0.5, phi, psi, 0.3)
    assert set(info.value.failures) == {"phi"}
    assert isinstance(info.value, InfeasibleError)


def test_cost_after_decreases_along_N():
    phi = StateVector.from_levels({1: H, 2: H})
    costs = [discriminate_report(0.5, phi, StateVector.from_levels({1: H, N: H}),
                                 NARROW).cost_after for N in (50, 100, 200, 400, 800)]
    assert all(a > b for a, b in zip(costs, costs[1:]))
    assert costs[-1] < 1e-3
