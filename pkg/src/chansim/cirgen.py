"""Omnidirectional channel realizations built from time clusters and spatial lobes.

A realization is drawn in ten steps: cluster count, subpaths per cluster,
cluster delays, intra-cluster delays, cluster powers, subpath powers, phases,
spatial lobe count, lobe mean directions and per-subpath angular offsets.
Intra-cluster delays are drawn before cluster delays because each cluster
start depends on the last subpath delay of the previous cluster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError
from .params import ScenarioParams
from .pathloss import REFERENCE_DISTANCE_M, ci_path_loss_db
from .randvar import (
    CompositeSubpathLaw,
    RngStream,
    sample_composite_count,
    sample_discrete_uniform,
    sample_exponential,
    sample_lognormal,
    sample_normal,
    sample_poisson,
    sample_uniform,
)

__all__ = [
    "Subpath",
    "TimeCluster",
    "Lobe",
    "ChannelRealization",
    "gen_num_clusters",
    "gen_num_subpaths",
    "gen_intra_cluster_delays",
    "gen_cluster_delays",
    "gen_cluster_powers",
    "gen_subpath_powers",
    "gen_phases",
    "gen_lobes",
    "gen_subpath_angles",
    "generate_channel",
    "generate_batch",
    "dbm_to_mw",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Subpath:
    abs_delay_ns: float
    intra_delay_ns: float
    power_mw: float
    phase_rad: float
    aod_az_deg: float
    aod_el_deg: float
    aoa_az_deg: float
    aoa_el_deg: float
    aod_lobe_id: int
    aoa_lobe_id: int

    @property
    def magnitude(self) -> float:
        return math.sqrt(self.power_mw)


@dataclass(frozen=True)
class TimeCluster:
    excess_delay_ns: float
    power_mw: float
    subpaths: tuple[Subpath, ...]


@dataclass(frozen=True)
class Lobe:
    """Mean direction of a spatial lobe, elevation measured from horizontal."""

    mean_az_deg: float
    mean_el_deg: float


@dataclass(frozen=True)
class ChannelRealization:
    params_used: ScenarioParams
    distance_m: float
    total_power_mw: float
    clusters: tuple[TimeCluster, ...]
    lobes_aod: tuple[Lobe, ...]
    lobes_aoa: tuple[Lobe, ...]
    seed: int = 0
    stream_id: int = 0
    tx_power_dbm: float = 0.0
    path_loss_db: float = 0.0
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def num_clusters(self) -> int:
        return len(self.clusters)

    @property
    def num_subpaths(self) -> int:
        return sum(len(c.subpaths) for c in self.clusters)

    def subpaths(self) -> Iterator[Subpath]:
        for c in self.clusters:
            yield from c.subpaths

    def _column(self, name: str) -> np.ndarray:
        if name not in self._cache:
            self._cache[name] = np.array([getattr(s, name) for s in self.subpaths()], dtype=float)
        return self._cache[name]

    @property
    def delays_ns(self) -> np.ndarray:
        return self._column("abs_delay_ns")

    @property
    def powers_mw(self) -> np.ndarray:
        return self._column("power_mw")

    @property
    def phases_rad(self) -> np.ndarray:
        return self._column("phase_rad")

    def angles_deg(self, side: str) -> tuple[np.ndarray, np.ndarray]:
        """``(azimuth, elevation)`` arrays for ``side`` in {"AOD", "AOA"}."""
        prefix = side.lower()
        if prefix not in ("aod", "aoa"):
            raise ValueError(f"side must be AOD or AOA, got {side!r}")
        return self._column(f"{prefix}_az_deg"), self._column(f"{prefix}_el_deg")


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def _wrap_az(az: float) -> float:
    az = az % 360.0
    # a tiny negative input can round up to exactly 360
    return 0.0 if az >= 360.0 else az


def _clamp_el(el: float) -> float:
    return min(90.0, max(-90.0, el))


# -- temporal steps ------------------------------------------------------------


def gen_num_clusters(params: ScenarioParams, rng: RngStream) -> int:
    return sample_poisson(params.lambda_c, rng) + 1


def gen_num_subpaths(params: ScenarioParams, rng: RngStream) -> int:
    law = CompositeSubpathLaw(params.beta_s, params.mu_s)
    return sample_composite_count(law, rng) + 1


def gen_intra_cluster_delays(num_subpaths: int, params: ScenarioParams, rng: RngStream) -> list[float]:
    """Sorted subpath delays relative to the first subpath, which sits at 0."""
    if num_subpaths < 1:
        raise DomainError(f"a cluster needs at least one subpath, got {num_subpaths}")
    draws: list[float] = []
    seen = {0.0}
    while len(draws) < num_subpaths - 1:
        x = sample_exponential(params.mu_rho_ns, rng)
        if x in seen:
            continue
        seen.add(x)
        draws.append(x)
    return [0.0] + sorted(draws)


def _draw_inter_cluster(params: ScenarioParams, rng: RngStream) -> float:
    law = params.inter_cluster_delay_law
    if law.family == "exp":
        return sample_exponential(law.a, rng)
    return sample_lognormal(law.a, law.b, rng)


def gen_cluster_delays(
    num_clusters: int,
    last_intra_delays: Sequence[float],
    params: ScenarioParams,
    rng: RngStream,
) -> list[float]:
    """Cluster start delays in ns.

    ``last_intra_delays[n]`` is the intra-cluster delay of the last subpath of
    cluster ``n``. Each cluster starts an MTI plus a sorted, min-shifted draw
    from the inter-cluster law after the previous cluster ends.
    """
    if len(last_intra_delays) != num_clusters:
        raise ValueError("need one last intra-cluster delay per cluster")
    raw = sorted(_draw_inter_cluster(params, rng) for _ in range(num_clusters))
    offsets = [x - raw[0] for x in raw]
    taus = [0.0]
    for n in range(1, num_clusters):
        taus.append(taus[n - 1] + last_intra_delays[n - 1] + offsets[n] + params.mti_ns)
    return taus


# relative weights are floored 1000 dB below the strongest component, so that
# powers stay normal doubles and both normalisation levels remain exact
_MIN_LOG_WEIGHT = -100.0 * math.log(10.0)


def _normalised_powers(base: float, log_terms: list[float], total: float) -> list[float]:
    top = max(log_terms)
    rel = [base * math.exp(max(t - top, _MIN_LOG_WEIGHT)) for t in log_terms]
    s = math.fsum(rel)
    return [r / s * total for r in rel]


_LN10_OVER_10 = math.log(10.0) / 10.0


def gen_cluster_powers(
    taus: Sequence[float], total_power_mw: float, params: ScenarioParams, rng: RngStream
) -> list[float]:
    """Exponentially decaying, log-normally shadowed cluster powers summing to ``total_power_mw``."""
    if not total_power_mw > 0:
        raise DomainError(f"total power must be positive, got {total_power_mw}")
    logs = [
        -tau / params.Gamma_ns + sample_normal(0.0, params.sigma_Z_db, rng) * _LN10_OVER_10
        for tau in taus
    ]
    return _normalised_powers(params.P0_bar, logs, total_power_mw)


def gen_subpath_powers(
    rhos: Sequence[float], cluster_power_mw: float, params: ScenarioParams, rng: RngStream
) -> list[float]:
    if not cluster_power_mw > 0:
        raise DomainError(f"cluster power must be positive, got {cluster_power_mw}")
    logs = [
        -rho / params.gamma_ns + sample_normal(0.0, params.sigma_U_db, rng) * _LN10_OVER_10
        for rho in rhos
    ]
    return _normalised_powers(params.Pi0_bar, logs, cluster_power_mw)


def gen_phases(count: int, rng: RngStream) -> list[float]:
    out = []
    for _ in range(count):
        phi = sample_uniform(0.0, TWO_PI, rng)
        out.append(0.0 if phi >= TWO_PI else phi)
    return out


# -- spatial steps ---------------------------------------------------------------


def _lobe_set(l_max: int, mu_el: float, sigma_el: float, rng: RngStream) -> tuple[Lobe, ...]:
    count = sample_discrete_uniform(1, l_max, rng)
    lobes = []
    for i in range(count):
        az = sample_uniform(360.0 * i / count, 360.0 * (i + 1) / count, rng)
        el = sample_normal(mu_el, sigma_el, rng)
        lobes.append(Lobe(_wrap_az(az), _clamp_el(el)))
    return tuple(lobes)


def gen_lobes(params: ScenarioParams, rng: RngStream) -> tuple[tuple[Lobe, ...], tuple[Lobe, ...]]:
    """Draw departure and arrival lobes; lobe ``i`` of ``L`` owns azimuth sector ``i``."""
    aod = _lobe_set(params.L_aod_max, params.mu_l_zod_deg, params.sigma_l_zod_deg, rng)
    aoa = _lobe_set(params.L_aoa_max, params.mu_l_zoa_deg, params.sigma_l_zoa_deg, rng)
    return aod, aoa


def gen_subpath_angles(
    count: int,
    lobes_aod: Sequence[Lobe],
    lobes_aoa: Sequence[Lobe],
    params: ScenarioParams,
    rng: RngStream,
) -> list[tuple[int, float, float, int, float, float]]:
    """Per-subpath ``(aod_lobe, aod_az, aod_el, aoa_lobe, aoa_az, aoa_el)``.

    Azimuth offsets wrap modulo 360; elevations are clamped to [-90, 90].
    """
    if not lobes_aod or not lobes_aoa:
        raise DomainError("at least one departure and one arrival lobe are required")
    out = []
    for _ in range(count):
        i = sample_discrete_uniform(1, len(lobes_aod), rng) - 1
        j = sample_discrete_uniform(1, len(lobes_aoa), rng) - 1
        lo_d, lo_a = lobes_aod[i], lobes_aoa[j]
        aod_az = _wrap_az(lo_d.mean_az_deg + sample_normal(0.0, params.sigma_phi_aod_deg, rng))
        aod_el = _clamp_el(lo_d.mean_el_deg + sample_normal(0.0, params.sigma_theta_aod_deg, rng))
        aoa_az = _wrap_az(lo_a.mean_az_deg + sample_normal(0.0, params.sigma_phi_aoa_deg, rng))
        aoa_el = _clamp_el(lo_a.mean_el_deg + sample_normal(0.0, params.sigma_theta_aoa_deg, rng))
        out.append((i, aod_az, aod_el, j, aoa_az, aoa_el))
    return out


# -- orchestration -----------------------------------------------------------------


def generate_channel(
    params: ScenarioParams,
    distance_m: float,
    rng: RngStream,
    tx_power_dbm: float = 0.0,
    ple: float | None = None,
    sigma_sf_db: float | None = None,
) -> ChannelRealization:
    """Draw one omnidirectional channel realization.

    The total received power is ``tx_power_dbm`` minus the CI path loss at
    ``distance_m`` (``ple`` and ``sigma_sf_db`` default to the scenario's).
    """
    if not distance_m >= REFERENCE_DISTANCE_M:
        raise DomainError(f"distance must be at least 1 m, got {distance_m}")
    ple = params.ple if ple is None else ple
    sigma_sf_db = params.sigma_sf_db if sigma_sf_db is None else sigma_sf_db

    pl_db = ci_path_loss_db(params.frequency_ghz * 1e9, distance_m, ple, sigma_sf_db, rng)
    p_r = dbm_to_mw(tx_power_dbm - pl_db)

    n_clusters = gen_num_clusters(params, rng)
    sizes = [gen_num_subpaths(params, rng) for _ in range(n_clusters)]
    rhos = [gen_intra_cluster_delays(m, params, rng) for m in sizes]
    taus = gen_cluster_delays(n_clusters, [r[-1] for r in rhos], params, rng)
    cluster_powers = gen_cluster_powers(taus, p_r, params, rng)
    subpath_powers = [gen_subpath_powers(r, p, params, rng) for r, p in zip(rhos, cluster_powers)]
    total = sum(sizes)
    phases = gen_phases(total, rng)
    lobes_aod, lobes_aoa = gen_lobes(params, rng)
    angles = gen_subpath_angles(total, lobes_aod, lobes_aoa, params, rng)

    clusters = []
    k = 0
    for tau, p_n, rho, pis in zip(taus, cluster_powers, rhos, subpath_powers):
        subs = []
        for r, pi in zip(rho, pis):
            i, aod_az, aod_el, j, aoa_az, aoa_el = angles[k]
            subs.append(
                Subpath(
                    abs_delay_ns=tau + r, intra_delay_ns=r, power_mw=pi, phase_rad=phases[k],
                    aod_az_deg=aod_az, aod_el_deg=aod_el, aoa_az_deg=aoa_az, aoa_el_deg=aoa_el,
                    aod_lobe_id=i, aoa_lobe_id=j,
                )
            )
            k += 1
        clusters.append(TimeCluster(excess_delay_ns=tau, power_mw=p_n, subpaths=tuple(subs)))

    return ChannelRealization(
        params_used=params, distance_m=float(distance_m), total_power_mw=p_r,
        clusters=tuple(clusters), lobes_aod=lobes_aod, lobes_aoa=lobes_aoa,
        seed=rng.seed, stream_id=rng.stream_id, tx_power_dbm=float(tx_power_dbm),
        path_loss_db=pl_db,
    )


def generate_batch(
    params: ScenarioParams,
    distance_m: float,
    count: int,
    seed: int,
    first_stream: int = 0,
    **kwargs,
) -> list[ChannelRealization]:
    """``count`` realizations, realization ``k`` on stream ``first_stream + k``."""
    return [
        generate_channel(params, distance_m, RngStream(seed, first_stream + k), **kwargs)
        for k in range(count)
    ]
