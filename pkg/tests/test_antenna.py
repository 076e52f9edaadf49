"""Horn gain model and directional channel synthesis."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chansim.antenna import (
    HornPattern,
    Pointing,
    directional_cir,
    directional_rms_ds,
    directional_sweep,
    measurement_horn,
    relative_gain_db,
)
from chansim.cirgen import ChannelRealization, Lobe, Subpath, TimeCluster, generate_batch, generate_channel
from chansim.errors import ParameterError
from chansim.params import builtin
from chansim.randvar import RngStream
from chansim.stats import pdp_from_realization, rms_delay_spread_ns

HORN8 = HornPattern(8.0, 8.0, 27.0)
HORN30 = HornPattern(30.0, 30.0, 15.0)


def _realization(angles, powers, delays=None):
    delays = delays or [float(i) for i in range(len(powers))]
    subs = tuple(
        Subpath(d, d, p, 0.0, az_d, el_d, az_a, el_a, 0, 0)
        for d, p, (az_d, el_d, az_a, el_a) in zip(delays, powers, angles)
    )
    return ChannelRealization(
        params_used=builtin(28, "LOS"), distance_m=1.0, total_power_mw=sum(powers),
        clusters=(TimeCluster(0.0, sum(powers), subs),), lobes_aod=(Lobe(0, 0),), lobes_aoa=(Lobe(0, 0),),
    )


def test_boresight_gain_zero():
    assert relative_gain_db(HORN8, 0.0, 0.0) == 0.0


@pytest.mark.parametrize("hpbw", [8.0, 30.0, 67.5])
def test_half_power_anchor(hpbw):
    h = HornPattern(hpbw, hpbw)
    assert relative_gain_db(h, hpbw / 2, 0.0) == pytest.approx(-3.0, abs=0.01)
    assert relative_gain_db(h, 0.0, -hpbw / 2) == pytest.approx(-3.0, abs=0.01)


def test_full_beamwidth_is_minus_12():
    assert relative_gain_db(HornPattern(30.0, 30.0), 30.0, 0.0) == pytest.approx(-12.0, abs=1e-12)


def test_floor():
    assert relative_gain_db(HORN8, 90.0, 0.0) == -30.0


@given(d=st.floats(-720, 720), e=st.floats(-90, 90))
@settings(max_examples=100, deadline=None)
def test_periodicity_and_symmetry(d, e):
    g = relative_gain_db(HORN30, d, e)
    assert g == pytest.approx(relative_gain_db(HORN30, d + 360.0, e), abs=1e-9)
    assert g == pytest.approx(relative_gain_db(HORN30, -d, -e), abs=1e-9)
    assert -30.0 <= g <= 0.0


@given(a=st.floats(0, 180), b=st.floats(0, 180))
@settings(max_examples=100, deadline=None)
def test_monotone_in_offset(a, b):
    lo, hi = sorted((a, b))
    assert relative_gain_db(HORN30, hi, 0.0) <= relative_gain_db(HORN30, lo, 0.0) + 1e-12


def test_invalid_patterns():
    with pytest.raises(ParameterError):
        HornPattern(0.0, 10.0)
    with pytest.raises(ParameterError):
        Pointing(360.0, 0.0)


def test_measurement_horns():
    assert measurement_horn(28) == HORN30
    assert measurement_horn(140) == HORN8


@given(seed=st.integers(0, 2**32), az=st.floats(0, 359.9), el=st.floats(-90, 90))
@settings(max_examples=40, deadline=None)
def test_isotropic_identity(seed, az, el):
    r = generate_channel(builtin(28, "NLOS"), 10.0, RngStream(seed))
    iso = HornPattern.isotropic()
    d = directional_cir(r, iso, Pointing(az, el), iso, Pointing(0.0, 0.0))
    assert np.allclose(d.powers_mw, r.powers_mw, rtol=1e-12, atol=0)
    assert not d.floored.any()


def test_aligned_single_subpath_gets_both_boresight_gains():
    r = _realization([(40.0, -3.0, 120.0, 5.0)], [2.0])
    d = directional_cir(r, HORN30, Pointing(40.0, -3.0), HORN8, Pointing(120.0, 5.0))
    assert d.powers_mw[0] == pytest.approx(2.0 * 10 ** ((15 + 27) / 10), rel=1e-12)


def test_subpath_90_degrees_off_is_floored():
    r = _realization([(0.0, 0.0, 10.0, 0.0), (0.0, 0.0, 100.0, 0.0)], [1.0, 1.0])
    iso = HornPattern.isotropic()
    d = directional_cir(r, iso, Pointing(0, 0), HornPattern(8.0, 8.0), Pointing(10.0, 0.0))
    assert d.powers_mw[1] / d.powers_mw[0] == pytest.approx(10 ** (-30 / 10), rel=1e-12)


def test_sweep_count_and_single_subpath():
    r = generate_channel(builtin(28, "NLOS"), 10.0, RngStream(2))
    pdps = directional_sweep(r, HORN30, HORN30)
    assert len(pdps) == r.num_subpaths
    one = _realization([(0.0, 0.0, 0.0, 0.0)], [1.0])
    (pdp,) = directional_sweep(one, HORN30, HORN30)
    assert rms_delay_spread_ns(pdp) == 0.0


def test_vectorised_ds_matches_sweep():
    r = generate_channel(builtin(28, "NLOS"), 10.0, RngStream(5))
    fast = directional_rms_ds(r, HORN30, HORN30)
    slow = [rms_delay_spread_ns(p) for p in directional_sweep(r, HORN30, HORN30)]
    assert np.allclose(fast, slow, rtol=1e-9, atol=1e-9)


def test_directional_median_below_omni_median():
    p = builtin(28, "NLOS", "All28")
    rs = generate_batch(p, 10.0, 10_000, seed=17)
    omni = np.median([rms_delay_spread_ns(pdp_from_realization(r)) for r in rs])
    directional = np.median(np.concatenate([directional_rms_ds(r, HORN30, HORN30) for r in rs]))
    assert directional < omni
