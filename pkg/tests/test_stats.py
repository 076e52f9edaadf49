"""Delay and angular statistics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chansim.antenna import HornPattern
from chansim.cirgen import generate_channel
from chansim.errors import DataError
from chansim.params import builtin
from chansim.randvar import RngStream
from chansim.stats import (
    AS_CAP_DEG,
    AngularPowerSpectrum,
    Plane,
    PowerDelayProfile,
    aps_from_points,
    aps_from_realization,
    circular_spread_deg,
    global_rms_as_deg,
    lobe_rms_as_deg,
    partition_spatial_lobes,
    partition_time_clusters,
    pdp_from_realization,
    pdp_from_taps,
    rms_delay_spread_ns,
)


def _pdp(delays, powers):
    return pdp_from_taps(delays, powers)


def test_single_tap_ds_is_zero():
    assert rms_delay_spread_ns(_pdp([4.0], [1.0])) == 0.0


def test_two_equal_taps():
    assert rms_delay_spread_ns(_pdp([0.0, 10.0], [1.0, 1.0])) == pytest.approx(5.0, abs=1e-12)


def test_two_unequal_taps():
    assert rms_delay_spread_ns(_pdp([0.0, 10.0], [2.0, 1.0])) == pytest.approx(math.sqrt(100 / 3 - (10 / 3) ** 2), abs=1e-12)
    assert rms_delay_spread_ns(_pdp([0.0, 10.0], [2.0, 1.0])) == pytest.approx(4.714, abs=1e-3)


def test_empty_pdp_raises():
    with pytest.raises(DataError):
        rms_delay_spread_ns(PowerDelayProfile(np.array([]), np.array([])))


@given(
    taps=st.lists(st.tuples(st.floats(0, 500), st.floats(1e-6, 1e3)), min_size=1, max_size=30),
    shift=st.floats(0, 1000),
    scale=st.floats(1e-6, 1e6),
)
@settings(max_examples=100, deadline=None)
def test_ds_translation_and_scale_invariance(taps, shift, scale):
    d, p = map(np.array, zip(*taps))
    base = rms_delay_spread_ns(_pdp(d, p))
    moved = rms_delay_spread_ns(_pdp(d + shift, p * scale))
    assert moved == pytest.approx(base, rel=1e-6, abs=1e-6)
    # oracle: weighted std from numpy
    w = p / p.sum()
    assert base == pytest.approx(math.sqrt(np.cov(d, aweights=w, bias=True)) if len(d) > 1 else 0.0, rel=1e-6, abs=1e-6)


def test_pdp_merges_coincident_delays():
    pdp = _pdp([5.0, 0.0, 5.0], [1.0, 2.0, 3.0])
    assert list(pdp.delays_ns) == [0.0, 5.0]
    assert list(pdp.powers_mw) == [2.0, 4.0]


def test_pdp_from_realization_conserves_power():
    r = generate_channel(builtin(28, "NLOS"), 10.0, RngStream(1))
    pdp = pdp_from_realization(r)
    assert len(pdp) <= r.num_subpaths
    assert pdp.total_power_mw == pytest.approx(r.total_power_mw, rel=1e-12)


def test_time_cluster_partition_example():
    groups = partition_time_clusters(_pdp([0.0, 3.0, 20.0], [1.0, 1.0, 1.0]), 6.0)
    assert [list(g.delays_ns) for g in groups] == [[0.0, 3.0], [20.0]]
    assert len(partition_time_clusters(_pdp([1.0], [1.0]), 6.0)) == 1


@given(delays=st.lists(st.floats(0, 300), min_size=1, max_size=40, unique=True), mti=st.floats(0.5, 20))
@settings(max_examples=100, deadline=None)
def test_time_cluster_partition_properties(delays, mti):
    pdp = _pdp(delays, np.ones(len(delays)))
    groups = partition_time_clusters(pdp, mti)
    assert sum(len(g) for g in groups) == len(pdp)
    for g in groups:
        assert np.all(np.diff(g.delays_ns) <= mti)
    for a, b in zip(groups, groups[1:]):
        assert b.delays_ns[0] - a.delays_ns[-1] > mti


def test_repartition_round_trip():
    # with unshadowed clusters, re-partitioning recovers N exactly when no
    # intra-cluster gap exceeds the MTI, and over-splits otherwise
    p = builtin(28, "NLOS").replace(sigma_Z_db=0.0)
    recovered = oversplit = 0
    for k in range(500):
        r = generate_channel(p, 10.0, RngStream(31, k))
        found = len(partition_time_clusters(pdp_from_realization(r), p.mti_ns))
        max_gap = max((np.diff([s.intra_delay_ns for s in c.subpaths]).max(initial=0.0) for c in r.clusters))
        if max_gap <= p.mti_ns:
            assert found == r.num_clusters
            recovered += 1
        else:
            assert found > r.num_clusters
            oversplit += 1
    assert recovered and oversplit


def test_point_aps_single_cell_and_conservation():
    aps = aps_from_points([12.3], [4.4], [2.0])
    assert np.count_nonzero(aps.grid) == 1
    assert aps.grid[94, 12] == 2.0


def test_smoothed_aps_conserves_power():
    r = generate_channel(builtin(140, "NLOS"), 10.0, RngStream(2))
    for horn in (HornPattern(8.0, 8.0), HornPattern(30.0, 30.0), HornPattern.isotropic()):
        aps = aps_from_realization(r, "AOA", horn)
        assert aps.total_power_mw == pytest.approx(r.total_power_mw, rel=1e-9)


def test_opposite_subpaths_stay_separate_lobes():
    aps = aps_from_points([10.0, 190.0], [0.0, 0.0], [1.0, 1.0], HornPattern(8.0, 8.0))
    assert len(partition_spatial_lobes(aps)) == 2


def test_single_subpath_is_one_lobe():
    aps = aps_from_points([300.0], [5.0], [1.0], HornPattern(30.0, 30.0))
    assert len(partition_spatial_lobes(aps)) == 1


def test_lobe_threshold_is_inclusive():
    grid = np.zeros((181, 360))
    grid[90, 10] = 1.0
    grid[90, 11] = 10 ** (-15 / 10)
    grid[90, 12] = 10 ** (-15 / 10) * 0.999
    (lobe,) = partition_spatial_lobes(AngularPowerSpectrum(grid), -15.0)
    assert len(lobe) == 2


def test_lobes_wrap_at_azimuth_seam():
    grid = np.zeros((181, 360))
    grid[90, 359] = 1.0
    grid[90, 0] = 1.0
    (lobe,) = partition_spatial_lobes(AngularPowerSpectrum(grid))
    assert len(lobe) == 2
    assert lobe.mean_az_deg == pytest.approx(359.5, abs=1e-9)


def test_single_direction_spread_is_zero():
    assert circular_spread_deg([42.0], [1.0]) == 0.0
    aps = aps_from_points([42.0], [0.0], [1.0])
    assert global_rms_as_deg(aps) == 0.0


def test_plus_minus_five_degrees():
    expected = math.degrees(math.sqrt(-2 * math.log(math.cos(math.radians(5)))))
    assert circular_spread_deg([-5.0, 5.0], [1.0, 1.0]) == pytest.approx(expected, abs=1e-12)
    assert circular_spread_deg([355.0, 5.0], [1.0, 1.0]) == pytest.approx(5.0, abs=0.05)


def test_two_cell_lobe_one_degree():
    grid = np.zeros((181, 360))
    grid[90, 20] = grid[90, 22] = 1.0
    assert circular_spread_deg([20.0, 22.0], [1.0, 1.0]) == pytest.approx(1.0, abs=0.01)
    grid = np.zeros((181, 360))
    grid[90, 20] = grid[90, 21] = 1.0
    (lobe,) = partition_spatial_lobes(AngularPowerSpectrum(grid))
    assert lobe_rms_as_deg(lobe) == pytest.approx(0.5, abs=0.01)


def test_uniform_power_is_capped():
    assert circular_spread_deg(np.arange(360.0), np.ones(360)) == AS_CAP_DEG


def test_single_lobe_spread_equals_global():
    aps = aps_from_points([100.0], [0.0], [1.0], HornPattern(30.0, 30.0))
    (lobe,) = partition_spatial_lobes(aps, -30.0 + 1e-9)
    assert lobe_rms_as_deg(lobe) <= global_rms_as_deg(aps) + 1e-9


@given(
    pts=st.lists(st.tuples(st.integers(0, 359), st.floats(1e-3, 10)), min_size=1, max_size=20),
    rot=st.integers(0, 359),
)
@settings(max_examples=100, deadline=None)
def test_rotation_invariance(pts, rot):
    az, p = map(np.array, zip(*pts))
    a = circular_spread_deg(az, p)
    b = circular_spread_deg((az + rot) % 360, p)
    assert a == pytest.approx(b, abs=1e-9)


def test_zero_spread_single_lobe_realization():
    p = builtin(140, "NLOS").replace(
        L_aoa_max=1, L_aod_max=1, sigma_phi_aoa_deg=0.0, sigma_theta_aoa_deg=0.0,
    )
    r = generate_channel(p, 10.0, RngStream(3))
    aps = aps_from_realization(r, "AOA")
    assert global_rms_as_deg(aps, Plane.AZIMUTH) == 0.0
    assert global_rms_as_deg(aps, Plane.ELEVATION) == 0.0


def test_empty_aps_raises():
    with pytest.raises(DataError):
        global_rms_as_deg(AngularPowerSpectrum(np.zeros((181, 360))))
