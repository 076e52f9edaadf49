"""Close-in free-space reference distance path loss model."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chansim.errors import DataError, DomainError, ValidationError
from chansim.pathloss import (
    SPEED_OF_LIGHT,
    DirectionClass,
    PathLossSample,
    ci_path_loss_db,
    fit_ple_by_class,
    fit_ple_mmse,
    fspl_db,
    read_pathloss_csv,
)
from chansim.randvar import RngStream


def _friis(f, d):
    lam = SPEED_OF_LIGHT / f
    return -10 * math.log10((lam / (4 * math.pi * d)) ** 2)


@pytest.mark.parametrize("f, expected", [(28e9, 61.38), (142e9, 75.49)])
def test_fspl_anchors(f, expected):
    assert fspl_db(f, 1.0) == pytest.approx(expected, abs=0.05)
    assert fspl_db(f, 1.0) == pytest.approx(_friis(f, 1.0), abs=1e-9)


@pytest.mark.parametrize("f, d, ple, expected", [(28e9, 10, 2.7, 88.38), (142e9, 10, 3.0, 105.49)])
def test_ci_examples(f, d, ple, expected):
    assert ci_path_loss_db(f, d, ple) == pytest.approx(expected, abs=0.02)


def test_ci_reduces_to_fspl_at_reference():
    assert ci_path_loss_db(28e9, 1.0, 5.0) == fspl_db(28e9, 1.0)


def test_ci_free_space_equals_friis():
    assert ci_path_loss_db(142e9, 37.0, 2.0) == pytest.approx(_friis(142e9, 37.0), abs=1e-9)


def test_below_reference_distance_is_rejected():
    with pytest.raises(DomainError):
        ci_path_loss_db(28e9, 0.5, 2.0)
    with pytest.raises(DomainError):
        PathLossSample(0.9, 70.0, "LOS")


@given(d1=st.floats(1.0, 500.0), d2=st.floats(1.0, 500.0), ple=st.floats(0.5, 6.0))
@settings(max_examples=80, deadline=None)
def test_ci_monotone_in_distance(d1, d2, ple):
    lo, hi = sorted((d1, d2))
    assert ci_path_loss_db(28e9, lo, ple) <= ci_path_loss_db(28e9, hi, ple) + 1e-12


def test_shadow_fading_statistics():
    r = RngStream(4)
    x = np.array([ci_path_loss_db(28e9, 10, 2.0, 4.0, r) for _ in range(20_000)])
    mean = ci_path_loss_db(28e9, 10, 2.0)
    assert abs(x.mean() - mean) < 0.1
    assert x.std() == pytest.approx(4.0, rel=0.03)


def test_fit_recovers_exact_ple():
    f = 28e9
    samples = [PathLossSample(d, ci_path_loss_db(f, d, 2.7), "NLOS") for d in (2.0, 5.0, 11.0, 30.0)]
    ple, sigma = fit_ple_mmse(samples, f)
    assert ple == pytest.approx(2.7, abs=1e-9)
    assert sigma == pytest.approx(0.0, abs=1e-9)


def test_fit_two_point_example():
    f = 28e9
    s = [PathLossSample(1.0, fspl_db(f, 1.0), "LOS"), PathLossSample(10.0, fspl_db(f, 1.0) + 20.0, "LOS")]
    assert fit_ple_mmse(s, f)[0] == pytest.approx(2.0, abs=1e-12)


def test_fit_matches_least_squares_oracle():
    rng = np.random.default_rng(0)
    d = rng.uniform(1, 50, 40)
    pl = fspl_db(28e9, 1) + 26 * np.log10(d) + rng.normal(0, 3, d.size)
    b = (10 * np.log10(d))[:, None]
    oracle = np.linalg.lstsq(b, pl - fspl_db(28e9, 1), rcond=None)[0][0]
    ple, _ = fit_ple_mmse([PathLossSample(x, y, "LOS") for x, y in zip(d, pl)], 28e9)
    assert ple == pytest.approx(oracle, rel=1e-12)


def test_fit_error_shrinks_with_sample_size():
    rng = np.random.default_rng(1)

    def spread(n):
        errs = []
        for _ in range(200):
            d = rng.uniform(2, 40, n)
            pl = fspl_db(28e9, 1) + 27 * np.log10(d) + rng.normal(0, 4, n)
            errs.append(fit_ple_mmse([PathLossSample(x, y, "NLOS") for x, y in zip(d, pl)], 28e9)[0] - 2.7)
        return np.std(errs)

    ratio = spread(16) / spread(64)
    assert ratio == pytest.approx(2.0, rel=0.25)


def test_fit_degenerate_inputs():
    with pytest.raises(DataError):
        fit_ple_mmse([PathLossSample(1.0, 70.0, "LOS")] * 3, 28e9)
    with pytest.raises(DataError):
        fit_ple_mmse([PathLossSample(3.0, 70.0, "LOS")], 28e9)


def test_fit_by_class_and_csv():
    text = "condition,direction_class,distance_m,path_loss_db\n"
    for d in (2, 4, 8):
        text += f"LOS,Omni,{d},{ci_path_loss_db(28e9, d, 1.8)!r}\n"
        text += f"NLOS,NlosBest,{d},{ci_path_loss_db(28e9, d, 2.9)!r}\n"
    fits = fit_ple_by_class(read_pathloss_csv(text), 28e9)
    assert fits[("LOS", DirectionClass.OMNI)][0] == pytest.approx(1.8, abs=1e-9)
    assert fits[("NLOS", DirectionClass.NLOS_BEST)][0] == pytest.approx(2.9, abs=1e-9)


def test_csv_bad_row_reports_row():
    text = "condition,direction_class,distance_m,path_loss_db\nLOS,Omni,2,70\nLOS,Omni,x,70\n"
    with pytest.raises(ValidationError) as info:
        read_pathloss_csv(text)
    assert info.value.row == 2
