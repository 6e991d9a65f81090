import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isocompress.well_basis import (StateVector, WellGeometry, cross_overlap,
                                    cross_overlap_matrix, eigen_energy, project_state,
                                    same_well_overlap, state_energy)

from oracles import quad_overlap

H = 1 / math.sqrt(2)
UNIT = WellGeometry(1.0)
NARROW = WellGeometry(math.sqrt(2 / 5))


@pytest.mark.parametrize("n, width, expected", [
    (1, 1.0, 1.0),
    (2, 1.0, 4.0),
    (1, math.sqrt(2 / 5), 2.5),
])
def test_eigen_energy(n, width, expected):
    assert eigen_energy(n, WellGeometry(width)) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n", [0, -1, 1.5])
def test_eigen_energy_rejects_bad_level(n):
    with pytest.raises(ValueError):
        eigen_energy(n, UNIT)


@pytest.mark.parametrize("width", [0.0, -1.0, math.inf, math.nan])
def test_well_geometry_rejects_bad_width(width):
    with pytest.raises(ValueError):
        WellGeometry(width)


def test_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        StateVector(UNIT, [1.0, 1.0])
    # just inside norm_tol is accepted as given, not renormalized
    s = StateVector(UNIT, [math.sqrt(1 + 5e-10)])
    assert s.amplitudes[0] == math.sqrt(1 + 5e-10)


def test_state_amplitudes_are_read_only():
    s = StateVector.eigenstate(1)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0.5


def test_from_levels_is_dense():
    s = StateVector.from_levels({1: H, 5: H})
    assert s.cutoff == 5
    np.testing.assert_allclose(s.weights, [0.5, 0, 0, 0, 0.5])


@pytest.mark.parametrize("levels, expected", [
    ({1: H, 2: H}, 2.5),
    ({1: 1.0}, 1.0),
    ({1: H, 10: H}, 50.5),
])
def test_state_energy(levels, expected):
    assert state_energy(StateVector.from_levels(levels)) == pytest.approx(expected, rel=1e-14)


def test_state_energy_scales_with_width():
    s = StateVector.from_levels({1: H, 2: H}, 0.5)
    assert state_energy(s) == pytest.approx(10.0)


@given(phase=st.floats(0, 2 * math.pi))
def test_state_energy_phase_invariant(phase):
    s = StateVector.from_levels({1: 0.6, 3: 0.8j})
    t = StateVector(s.well, s.amplitudes * np.exp(1j * phase))
    assert state_energy(t) == pytest.approx(state_energy(s), rel=1e-14)


def test_state_energy_stable_under_norm_noise():
    amps = np.array([0.6, 0.8]) * math.sqrt(1 + 4e-10)
    s = StateVector(UNIT, amps)
    assert abs(state_energy(s) - (0.36 + 0.64 * 4)) < 1e-8


@pytest.mark.parametrize("N", [3, 10, 200])
def test_same_well_overlap_low_high_pair(N):
    # (|1>+|2>)/sqrt2 against (|2>+|N>)/sqrt2: amplitude 1/2, squared 1/4
    phi = StateVector.from_levels({1: H, 2: H})
    psi = StateVector.from_levels({2: H, N: H})
    amp, sq = same_well_overlap(phi, psi)
    assert amp == pytest.approx(0.5, abs=1e-15)
    assert sq == pytest.approx(0.25, abs=1e-15)


def test_same_well_overlap_trivial():
    a = StateVector.eigenstate(1)
    b = StateVector.eigenstate(2)
    assert same_well_overlap(a, a)[1] == pytest.approx(1.0)
    assert same_well_overlap(a, b)[1] == 0.0


def test_same_well_overlap_conjugates_first_argument():
    a = StateVector.from_levels({1: 1j})
    b = StateVector.from_levels({1: 1.0})
    amp, _ = same_well_overlap(a, b)
    assert amp == pytest.approx(-1j)


def test_same_well_overlap_rejects_width_mismatch():
    with pytest.raises(ValueError):
        same_well_overlap(StateVector.eigenstate(1, 1.0), StateVector.eigenstate(1, 0.5))


def test_cross_overlap_identity_at_equal_width():
    M = cross_overlap_matrix(30, 30, UNIT, UNIT)
    np.testing.assert_allclose(M, np.eye(30), atol=1e-12)


@pytest.mark.parametrize("m, n, expected", [
    # mpmath quadrature at 30 digits
    (1, 1, 0.771800906942819770284),
    (2, 1, 0.623948274106614613804),
    (3, 2, 0.802144138497721356709),
])
def test_cross_overlap_frozen_values(m, n, expected):
    assert cross_overlap(m, n, UNIT, NARROW) == pytest.approx(expected, abs=1e-14)


def test_cross_overlap_matches_quadrature_example():
    closed = cross_overlap(1, 1, UNIT, NARROW)
    assert abs(closed - quad_overlap(1, 1, 1.0, math.sqrt(2 / 5))) < 1e-10


def test_cross_overlap_degenerate_wavenumber():
    # m/L == n'/L' exactly: level 2 of width 1 against level 1 of width 1/2
    val = cross_overlap(2, 1, UNIT, WellGeometry(0.5))
    assert val == pytest.approx(quad_overlap(2, 1, 1.0, 0.5), abs=1e-12)
    assert val == pytest.approx(math.sqrt(0.5), abs=1e-14)


def test_cross_overlap_rejects_expansion():
    with pytest.raises(ValueError):
        cross_overlap(1, 1, NARROW, UNIT)


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 12), n=st.integers(1, 12), ratio=st.floats(0.05, 1.0))
def test_cross_overlap_vs_quadrature_property(m, n, ratio):
    closed = cross_overlap(m, n, UNIT, WellGeometry(ratio))
    assert abs(closed - quad_overlap(m, n, 1.0, ratio)) < 1e-8


@settings(max_examples=30, deadline=None)
@given(
    amps=st.lists(st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
                  min_size=1, max_size=6).filter(lambda a: sum(abs(x) ** 2 for x in a) > 1e-3),
    ratio=st.floats(0.1, 1.0),
)
def test_projection_loses_probability(amps, ratio):
    a = np.array(amps, dtype=complex)
    s = StateVector(UNIT, a / np.linalg.norm(a))
    c = project_state(s, WellGeometry(ratio), 60)
    assert np.sum(np.abs(c) ** 2) <= 1.0 + 1e-12
