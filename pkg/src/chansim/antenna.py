"""Horn antenna gain model and directional channel synthesis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cirgen import ChannelRealization
from .errors import ParameterError

__all__ = [
    "HornPattern",
    "Pointing",
    "DirectionalCIR",
    "relative_gain_db",
    "wrap_offset_deg",
    "directional_cir",
    "directional_sweep",
    "directional_rms_ds",
    "measurement_horn",
    "DEFAULT_FLOOR_DB",
]

DEFAULT_FLOOR_DB = -30.0


@dataclass(frozen=True)
class HornPattern:
    """Gaussian main lobe (quadratic in dB) with a flat side-lobe floor.

    The relative gain is -3 dB at half the HPBW in each principal plane.
    ``floor_db=None`` disables the floor. The isotropic pattern returned by
    :meth:`isotropic` has 0 dB relative gain in every direction.
    """

    hpbw_az_deg: float
    hpbw_el_deg: float
    boresight_gain_dbi: float = 0.0
    floor_db: float | None = DEFAULT_FLOOR_DB
    isotropic_: bool = False

    def __post_init__(self):
        for name in ("hpbw_az_deg", "hpbw_el_deg"):
            v = getattr(self, name)
            if not 0.0 < v <= 360.0:
                raise ParameterError(f"{name} must lie in (0, 360], got {v}")
        if self.floor_db is not None and not self.floor_db < 0:
            raise ParameterError(f"floor_db must be negative, got {self.floor_db}")

    @classmethod
    def isotropic(cls) -> "HornPattern":
        return cls(360.0, 360.0, 0.0, floor_db=None, isotropic_=True)


@dataclass(frozen=True)
class Pointing:
    az_deg: float
    el_deg: float

    def __post_init__(self):
        if not 0.0 <= self.az_deg < 360.0:
            raise ParameterError(f"pointing azimuth must lie in [0, 360), got {self.az_deg}")
        if not -90.0 <= self.el_deg <= 90.0:
            raise ParameterError(f"pointing elevation must lie in [-90, 90], got {self.el_deg}")


def measurement_horn(frequency_ghz: float) -> HornPattern:
    """Horn used for the sounder at the nearer anchor: 30 deg/15 dBi or 8 deg/27 dBi."""
    if frequency_ghz <= 84.0:
        return HornPattern(30.0, 30.0, 15.0)
    return HornPattern(8.0, 8.0, 27.0)


def wrap_offset_deg(d):
    """Shortest signed arc, mapped to [-180, 180)."""
    return (np.asarray(d, dtype=float) + 180.0) % 360.0 - 180.0


def relative_gain_db(pattern: HornPattern, d_az_deg, d_el_deg):
    """Gain relative to boresight in dB (<= 0); vectorised over the offsets."""
    d_az = wrap_offset_deg(d_az_deg)
    d_el = np.asarray(d_el_deg, dtype=float)
    if pattern.isotropic_:
        g = np.zeros(np.broadcast(d_az, d_el).shape)
    else:
        g = -3.0 * ((2.0 * d_az / pattern.hpbw_az_deg) ** 2 + (2.0 * d_el / pattern.hpbw_el_deg) ** 2)
        if pattern.floor_db is not None:
            g = np.maximum(g, pattern.floor_db)
    return float(g) if g.ndim == 0 else g


@dataclass(frozen=True)
class DirectionalCIR:
    """Subpaths of a realization seen through a TX/RX antenna pair.

    ``floored`` marks subpaths that sit on the side-lobe floor at both ends.
    """

    delays_ns: np.ndarray
    powers_mw: np.ndarray
    phases_rad: np.ndarray
    floored: np.ndarray

    @property
    def total_power_mw(self) -> float:
        return float(self.powers_mw.sum())


def _end_gains(pattern: HornPattern, az, el, point_az, point_el):
    rel = relative_gain_db(pattern, az - point_az, el - point_el)
    floored = (
        np.zeros(np.shape(rel), dtype=bool)
        if pattern.floor_db is None or pattern.isotropic_
        else np.asarray(rel) <= pattern.floor_db
    )
    return np.asarray(rel) + pattern.boresight_gain_dbi, floored


def directional_cir(
    realization: ChannelRealization,
    tx_pattern: HornPattern,
    tx_pointing: Pointing,
    rx_pattern: HornPattern,
    rx_pointing: Pointing,
) -> DirectionalCIR:
    aod_az, aod_el = realization.angles_deg("AOD")
    aoa_az, aoa_el = realization.angles_deg("AOA")
    g_tx, f_tx = _end_gains(tx_pattern, aod_az, aod_el, tx_pointing.az_deg, tx_pointing.el_deg)
    g_rx, f_rx = _end_gains(rx_pattern, aoa_az, aoa_el, rx_pointing.az_deg, rx_pointing.el_deg)
    gain_db = g_tx + g_rx
    powers = realization.powers_mw * np.where(gain_db == 0.0, 1.0, 10.0 ** (gain_db / 10.0))
    return DirectionalCIR(
        delays_ns=realization.delays_ns.copy(),
        powers_mw=powers,
        phases_rad=realization.phases_rad.copy(),
        floored=f_tx & f_rx,
    )


def _sweep_power_matrix(realization, tx_pattern, rx_pattern) -> np.ndarray:
    """Row ``k``: subpath powers with both antennas pointed along subpath ``k``."""
    aod_az, aod_el = realization.angles_deg("AOD")
    aoa_az, aoa_el = realization.angles_deg("AOA")
    g_tx, _ = _end_gains(tx_pattern, aod_az[None, :], aod_el[None, :], aod_az[:, None], aod_el[:, None])
    g_rx, _ = _end_gains(rx_pattern, aoa_az[None, :], aoa_el[None, :], aoa_az[:, None], aoa_el[:, None])
    return realization.powers_mw[None, :] * 10.0 ** ((g_tx + g_rx) / 10.0)


def directional_rms_ds(realization: ChannelRealization, tx_pattern: HornPattern, rx_pattern: HornPattern) -> np.ndarray:
    """RMS delay spread of every directional PDP of :func:`directional_sweep`, in ns."""
    p = _sweep_power_matrix(realization, tx_pattern, rx_pattern)
    tau = realization.delays_ns - realization.delays_ns.min()
    w = p / p.sum(axis=1, keepdims=True)
    mean = w @ tau
    var = w @ (tau**2) - mean**2
    return np.sqrt(np.maximum(var, 0.0))


def directional_sweep(realization: ChannelRealization, tx_pattern: HornPattern, rx_pattern: HornPattern):
    """One directional PDP per subpath, with TX at its AOD and RX at its AOA."""
    from .stats import pdp_from_taps

    p = _sweep_power_matrix(realization, tx_pattern, rx_pattern)
    return [pdp_from_taps(realization.delays_ns, row) for row in p]

