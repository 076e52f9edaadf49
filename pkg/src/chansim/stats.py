"""Secondary statistics of channel realizations.

Power delay profiles, RMS delay spread, time-cluster partitioning, 1-degree
angular power spectra, spatial-lobe partitioning and circular RMS angular
spread.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .antenna import HornPattern, relative_gain_db
from .cirgen import ChannelRealization
from .errors import DataError, ParameterError

__all__ = [
    "Plane",
    "PowerDelayProfile",
    "AngularPowerSpectrum",
    "SpatialLobe",
    "pdp_from_taps",
    "pdp_from_realization",
    "rms_delay_spread_ns",
    "partition_time_clusters",
    "aps_from_realization",
    "aps_from_points",
    "partition_spatial_lobes",
    "circular_spread_deg",
    "global_rms_as_deg",
    "lobe_rms_as_deg",
    "AS_CAP_DEG",
]

# uniform-on-the-circle limit of an RMS angular spread, 360 / sqrt(12)
AS_CAP_DEG = 104.0

AZ_GRID = np.arange(360, dtype=float)
EL_GRID = np.arange(-90, 91, dtype=float)


class Plane(str, enum.Enum):
    AZIMUTH = "Azimuth"
    ELEVATION = "Elevation"


@dataclass(frozen=True)
class PowerDelayProfile:
    delays_ns: np.ndarray
    powers_mw: np.ndarray

    def __len__(self) -> int:
        return int(self.delays_ns.size)

    @property
    def total_power_mw(self) -> float:
        return float(self.powers_mw.sum())


def pdp_from_taps(delays_ns, powers_mw) -> PowerDelayProfile:
    """Sort taps by delay, merge equal delays and drop zero-power taps."""
    d = np.asarray(delays_ns, dtype=float)
    p = np.asarray(powers_mw, dtype=float)
    if d.shape != p.shape:
        raise ValueError("delays and powers must have the same shape")
    if np.any(p < 0):
        raise DataError("tap powers must be non-negative")
    keep = p > 0
    uniq, inverse = np.unique(d[keep], return_inverse=True)
    merged = np.bincount(inverse, weights=p[keep], minlength=uniq.size)
    return PowerDelayProfile(uniq, merged)


def pdp_from_realization(realization: ChannelRealization) -> PowerDelayProfile:
    return pdp_from_taps(realization.delays_ns, realization.powers_mw)


def rms_delay_spread_ns(pdp: PowerDelayProfile) -> float:
    if len(pdp) == 0:
        raise DataError("RMS delay spread of an empty PDP")
    p = pdp.powers_mw
    total = p.sum()
    if not total > 0:
        raise DataError("RMS delay spread needs positive total power")
    tau = pdp.delays_ns - pdp.delays_ns[0]
    mean = np.dot(p, tau) / total
    var = np.dot(p, tau**2) / total - mean**2
    return math.sqrt(max(var, 0.0))


def partition_time_clusters(pdp: PowerDelayProfile, mti_ns: float) -> list[PowerDelayProfile]:
    """Split a PDP wherever consecutive taps are more than ``mti_ns`` apart."""
    if not mti_ns > 0:
        raise ParameterError(f"MTI must be positive, got {mti_ns}")
    if len(pdp) == 0:
        return []
    cuts = np.flatnonzero(np.diff(pdp.delays_ns) > mti_ns) + 1
    return [
        PowerDelayProfile(d, p)
        for d, p in zip(np.split(pdp.delays_ns, cuts), np.split(pdp.powers_mw, cuts))
    ]


# -- angular domain ----------------------------------------------------------------


@dataclass(frozen=True)
class AngularPowerSpectrum:
    """Power on a 1 x 1 degree grid, ``grid[el + 90, az]`` in mW."""

    grid: np.ndarray

    @property
    def total_power_mw(self) -> float:
        return float(self.grid.sum())

    def marginal(self, plane: Plane) -> tuple[np.ndarray, np.ndarray]:
        """``(angles_deg, powers)`` of the marginal along ``plane``."""
        if Plane(plane) is Plane.AZIMUTH:
            return AZ_GRID, self.grid.sum(axis=0)
        return EL_GRID, self.grid.sum(axis=1)


def _unfloored(pattern: HornPattern) -> HornPattern:
    return HornPattern(pattern.hpbw_az_deg, pattern.hpbw_el_deg, floor_db=None)


def _spread_weights(pattern: HornPattern, az: float, el: float):
    """Rows, columns and normalised weights of one subpath smeared by ``pattern``."""
    cutoff_db = pattern.floor_db if pattern.floor_db is not None else -math.inf
    if pattern.isotropic_ or not math.isfinite(cutoff_db):
        rows = np.arange(EL_GRID.size)
        cols = np.arange(AZ_GRID.size)
    else:
        reach = math.sqrt(-cutoff_db / 3.0) / 2.0
        half_az = min(180.0, pattern.hpbw_az_deg * reach)
        half_el = pattern.hpbw_el_deg * reach
        c0 = int(math.floor(az - half_az))
        ncol = min(360, int(math.ceil(az + half_az)) - c0 + 1)
        cols = np.arange(c0, c0 + ncol) % 360
        r_lo = max(-90, int(math.floor(el - half_el)))
        r_hi = min(90, int(math.ceil(el + half_el)))
        rows = np.arange(r_lo, r_hi + 1) + 90
    if pattern.isotropic_:
        g = np.zeros((rows.size, cols.size))
    else:
        # quadratic-in-dB gain is additive across the two planes
        g_az = relative_gain_db(_unfloored(pattern), AZ_GRID[cols] - az, 0.0)
        g_el = relative_gain_db(_unfloored(pattern), 0.0, EL_GRID[rows] - el)
        g = np.add.outer(np.atleast_1d(g_el), np.atleast_1d(g_az))
    w = np.where(g >= cutoff_db, 10.0 ** (g / 10.0), 0.0)
    s = w.sum()
    if not s > 0:
        return None
    return rows, cols, w / s


def _point_cell(az: float, el: float) -> tuple[int, int]:
    col = int(math.floor(az + 0.5)) % 360
    row = int(math.floor(min(90.0, max(-90.0, el)) + 0.5)) + 90
    return row, col


def aps_from_points(az_deg, el_deg, powers_mw, smoothing_pattern: HornPattern | None = None) -> AngularPowerSpectrum:
    """Accumulate point sources on the grid, optionally smeared by a pattern.

    Each source's power is conserved: its smeared weights sum to one, and
    cells below the pattern floor receive nothing.
    """
    grid = np.zeros((EL_GRID.size, AZ_GRID.size))
    for az, el, p in zip(np.ravel(az_deg), np.ravel(el_deg), np.ravel(powers_mw)):
        spread = None if smoothing_pattern is None else _spread_weights(smoothing_pattern, az, el)
        if spread is None:
            r, c = _point_cell(az, el)
            grid[r, c] += p
        else:
            rows, cols, w = spread
            grid[np.ix_(rows, cols)] += p * w
    return AngularPowerSpectrum(grid)


def aps_from_realization(
    realization: ChannelRealization, side: str = "AOA", smoothing_pattern: HornPattern | None = None
) -> AngularPowerSpectrum:
    az, el = realization.angles_deg(side)
    return aps_from_points(az, el, realization.powers_mw, smoothing_pattern)


@dataclass(frozen=True)
class SpatialLobe:
    """Connected set of grid cells above the spatial lobe threshold."""

    az_deg: np.ndarray
    el_deg: np.ndarray
    powers_mw: np.ndarray
    mean_az_deg: float
    mean_el_deg: float

    @property
    def power_mw(self) -> float:
        return float(self.powers_mw.sum())

    def __len__(self) -> int:
        return int(self.powers_mw.size)


def _circular_mean_deg(angles_deg, weights) -> float:
    z = np.dot(weights, np.exp(1j * np.deg2rad(angles_deg)))
    return float(np.rad2deg(np.angle(z)) % 360.0)


def partition_spatial_lobes(aps: AngularPowerSpectrum, slt_db: float = -15.0) -> list[SpatialLobe]:
    """Connected components of cells at or above ``peak + slt_db``.

    Adjacency is 4-neighbour with azimuth wrapping at 0/360. Lobes are
    returned in decreasing order of power.
    """
    if not slt_db < 0:
        raise ParameterError(f"spatial lobe threshold must be negative, got {slt_db}")
    grid = aps.grid
    peak = grid.max()
    if not peak > 0:
        return []
    mask = grid >= peak * 10.0 ** (slt_db / 10.0)
    labels, n = ndimage.label(mask)
    # merge components touching across the azimuth seam
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(labels[:, 0], labels[:, -1]):
        if a and b:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    roots = np.array([find(k) for k in range(n + 1)])
    labels = roots[labels]

    lobes = []
    for root in np.unique(labels[labels > 0]):
        rows, cols = np.nonzero(labels == root)
        p = grid[rows, cols]
        az, el = AZ_GRID[cols], EL_GRID[rows]
        lobes.append(
            SpatialLobe(
                az_deg=az, el_deg=el, powers_mw=p,
                mean_az_deg=_circular_mean_deg(az, p),
                mean_el_deg=float(np.dot(p, el) / p.sum()),
            )
        )
    lobes.sort(key=lambda lobe: -lobe.power_mw)
    return lobes


def circular_spread_deg(angles_deg, powers) -> float:
    """``sqrt(-2 ln R)`` in degrees, ``R`` the power-weighted resultant length.

    ``1 - R**2`` is evaluated from pairwise angle differences, which keeps the
    result exactly invariant under rotation and free of cancellation when
    the power is concentrated. Capped at :data:`AS_CAP_DEG` as ``R``
    approaches zero.
    """
    p = np.asarray(powers, dtype=float)
    total = p.sum()
    if not total > 0:
        raise DataError("angular spread needs positive total power")
    theta = np.deg2rad(np.asarray(angles_deg, dtype=float))
    w = p / total
    half_diff = np.sin(np.subtract.outer(theta, theta) / 2.0)
    one_minus_r2 = float(w @ (2.0 * half_diff**2) @ w)
    if one_minus_r2 <= 0.0:
        return 0.0
    if one_minus_r2 >= 1.0:
        return AS_CAP_DEG
    # ln R = log1p(-(1 - R^2)) / 2
    return min(AS_CAP_DEG, math.degrees(math.sqrt(-math.log1p(-one_minus_r2))))


def global_rms_as_deg(aps: AngularPowerSpectrum, plane: Plane = Plane.AZIMUTH) -> float:
    angles, p = aps.marginal(plane)
    if not p.sum() > 0:
        raise DataError("angular spread of an empty APS")
    nz = p > 0
    return circular_spread_deg(angles[nz], p[nz])


def lobe_rms_as_deg(lobe: SpatialLobe, plane: Plane = Plane.AZIMUTH) -> float:
    if len(lobe) == 0:
        raise DataError("angular spread of an empty lobe")
    angles = lobe.az_deg if Plane(plane) is Plane.AZIMUTH else lobe.el_deg
    return circular_spread_deg(angles, lobe.powers_mw)

