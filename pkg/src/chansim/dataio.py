"""Measurement records, refits against them, realization I/O and the validation harness."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import tables
from .antenna import HornPattern, directional_rms_ds, measurement_horn
from .cirgen import ChannelRealization, Lobe, Subpath, TimeCluster, generate_channel
from .errors import DataError, ParameterError, ValidationError
from .params import Condition, ScenarioParams, builtin, load_config, save_config
from .pathloss import PathLossSample, fit_ple_mmse
from .randvar import RngStream, discrete_exponential_mean, fit_poisson_mle
from .stats import (
    aps_from_realization,
    global_rms_as_deg,
    lobe_rms_as_deg,
    partition_spatial_lobes,
    pdp_from_realization,
    rms_delay_spread_ns,
)

__all__ = [
    "MeasurementRecord",
    "DataQualityWarning",
    "embedded_measurements",
    "distance_anomalies",
    "refit_lambda_c",
    "refit_ple",
    "ScenarioSummary",
    "ValidationReport",
    "REFERENCE_OMNI_DS_MEDIANS_NS",
    "REFERENCE_LAMBDA_C",
    "REFERENCE_PLE_28GHZ",
    "summarize_scenario",
    "run_validation",
    "export_realizations",
    "import_realizations_json",
    "import_realizations_csv",
    "export_measurements_csv",
    "import_measurement_csv",
    "REALIZATION_CSV_COLUMNS",
]


class DataQualityWarning(UserWarning):
    """Source data contains values that look inconsistent."""


@dataclass(frozen=True)
class MeasurementRecord:
    frequency_ghz: int
    condition: Condition
    tx_id: int
    rx_id: int
    distance_m: float
    path_loss_db: float
    num_tc: int
    num_sp: int
    rms_ds_ns: float

    def __post_init__(self):
        object.__setattr__(self, "condition", Condition.parse(self.condition))
        if self.frequency_ghz not in (28, 140):
            raise ValidationError("must be 28 or 140", field="frequency_ghz")
        if not self.distance_m > 0:
            raise ValidationError("must be positive", field="distance_m")
        if not self.num_tc >= 1:
            raise ValidationError("must be at least 1", field="num_tc")
        if not self.num_sp >= self.num_tc:
            raise ValidationError("must be at least num_tc", field="num_sp")
        if not self.rms_ds_ns >= 0:
            raise ValidationError("must be non-negative", field="rms_ds_ns")

    def as_pathloss_sample(self) -> PathLossSample:
        return PathLossSample(self.distance_m, self.path_loss_db, self.condition)


_FIELD_TYPES = {
    "frequency_ghz": int, "condition": str, "tx_id": int, "rx_id": int,
    "distance_m": float, "path_loss_db": float, "num_tc": int, "num_sp": int, "rms_ds_ns": float,
}
MEASUREMENT_COLUMNS = tuple(_FIELD_TYPES)


def _parse_table(text: str, frequency: int) -> list[MeasurementRecord]:
    out = []
    for line in text.strip().splitlines():
        cond, tx, rx, d, pl, ntc, nsp, ds = line.split(",")
        out.append(
            MeasurementRecord(frequency, Condition(cond), int(tx), int(rx), float(d), float(pl), int(ntc), int(nsp), float(ds))
        )
    return out


_EMBEDDED = {28: _parse_table(tables.ROWS_28GHZ, 28), 140: _parse_table(tables.ROWS_140GHZ, 140)}


def embedded_measurements(frequency: int, condition=None) -> list[MeasurementRecord]:
    """Appendix rows at ``frequency`` (28 or 140), optionally one condition only."""
    if frequency not in _EMBEDDED:
        raise ParameterError(f"embedded measurements exist for 28 and 140 GHz, not {frequency}")
    rows = _EMBEDDED[frequency]
    if condition is not None:
        cond = Condition.parse(condition)
        rows = [r for r in rows if r.condition is cond]
    return list(rows)


def distance_anomalies() -> list[MeasurementRecord]:
    """140 GHz rows whose distance disagrees with the 28 GHz row for the same TX/RX pair."""
    ref = {(r.tx_id, r.rx_id): r.distance_m for r in _EMBEDDED[28]}
    return [
        r for r in _EMBEDDED[140]
        if (r.tx_id, r.rx_id) in ref and ref[(r.tx_id, r.rx_id)] != r.distance_m
    ]


def refit_lambda_c(records: Sequence[MeasurementRecord]) -> float:
    """Poisson MLE of the cluster count minus one."""
    if not records:
        raise DataError("no measurement records to fit")
    return fit_poisson_mle([r.num_tc - 1 for r in records])


# path loss was measured with a 142 GHz carrier for the 140 GHz campaign
_CARRIER_HZ = {28: 28e9, 140: 142e9}


def refit_ple(records: Sequence[MeasurementRecord], frequency: int) -> tuple[float, float]:
    """``(ple_los, ple_nlos)`` from MMSE CI fits of the omnidirectional path loss."""
    if frequency not in _CARRIER_HZ:
        raise ParameterError(f"no carrier frequency known for {frequency} GHz")
    if frequency == 140:
        bad = {(r.tx_id, r.rx_id) for r in distance_anomalies()}
        hits = [r for r in records if (r.tx_id, r.rx_id) in bad and r.frequency_ghz == 140]
        if hits:
            ids = ", ".join(f"TX{r.tx_id}-RX{r.rx_id}" for r in hits)
            warnings.warn(
                f"140 GHz PLE fit includes rows with suspicious distances ({ids})",
                DataQualityWarning,
                stacklevel=2,
            )
    out = []
    for cond in (Condition.LOS, Condition.NLOS):
        group = [r.as_pathloss_sample() for r in records if r.condition is cond]
        if len(group) < 2:
            raise DataError(f"PLE fit needs at least two {cond.value} records")
        out.append(fit_ple_mmse(group, _CARRIER_HZ[frequency])[0])
    return out[0], out[1]


# -- validation harness ------------------------------------------------------------

REFERENCE_OMNI_DS_MEDIANS_NS = {
    (28, Condition.LOS): 10.8,
    (28, Condition.NLOS): 16.7,
    (140, Condition.LOS): 2.6,
    (140, Condition.NLOS): 6.7,
}
REFERENCE_LAMBDA_C = {
    (28, Condition.LOS): 3.6,
    (28, Condition.NLOS): 5.1,
    (140, Condition.LOS): 0.9,
    (140, Condition.NLOS): 1.8,
}
REFERENCE_PLE_28GHZ = {Condition.LOS: 1.2, Condition.NLOS: 2.7}

_SCENARIOS = ((28, Condition.LOS), (28, Condition.NLOS), (140, Condition.LOS), (140, Condition.NLOS))


@dataclass
class ScenarioSummary:
    """Monte Carlo statistics of one parameter set."""

    frequency_ghz: float
    condition: str
    realizations: int
    mean_num_clusters: float
    mean_subpaths_per_cluster: float
    median_omni_ds_ns: float
    median_dir_ds_ns: float | None
    median_global_as_deg: float | None
    median_lobe_as_deg: float | None
    omni_ds_ns: np.ndarray = field(repr=False)
    lobe_as_deg: np.ndarray | None = field(default=None, repr=False)


def summarize_scenario(
    params: ScenarioParams,
    count: int,
    seed: int,
    stream_offset: int = 0,
    distance_m: float = 10.0,
    directional: bool = True,
    angular: bool = True,
    horn: HornPattern | None = None,
    angular_count: int | None = None,
) -> ScenarioSummary:
    """Generate ``count`` realizations and reduce them to scenario statistics.

    Realization ``k`` uses stream ``stream_offset + k``. Directional delay
    spreads and angular spreads use ``horn`` (the sounder horn of the nearer
    anchor frequency by default) at both ends and for APS smoothing.
    Angular statistics are limited to the first ``angular_count``
    realizations when given, since APS smoothing dominates the run time.
    """
    horn = horn or measurement_horn(params.frequency_ghz)
    n_clusters = np.empty(count)
    n_sub = np.empty(count)
    omni = np.empty(count)
    dir_ds: list[np.ndarray] = []
    global_as = []
    lobe_as = []
    for k in range(count):
        r = generate_channel(params, distance_m, RngStream(seed, stream_offset + k))
        n_clusters[k] = r.num_clusters
        n_sub[k] = r.num_subpaths
        omni[k] = rms_delay_spread_ns(pdp_from_realization(r))
        if directional:
            dir_ds.append(directional_rms_ds(r, horn, horn))
        if angular and (angular_count is None or k < angular_count):
            aps = aps_from_realization(r, "AOA", horn)
            global_as.append(global_rms_as_deg(aps))
            lobe_as.extend(lobe_rms_as_deg(lobe) for lobe in partition_spatial_lobes(aps, params.slt_db))
    lobe_arr = np.asarray(lobe_as) if angular else None
    return ScenarioSummary(
        frequency_ghz=params.frequency_ghz,
        condition=params.condition.value,
        realizations=count,
        mean_num_clusters=float(n_clusters.mean()),
        mean_subpaths_per_cluster=float(n_sub.sum() / n_clusters.sum()),
        median_omni_ds_ns=float(np.median(omni)),
        median_dir_ds_ns=float(np.median(np.concatenate(dir_ds))) if directional else None,
        median_global_as_deg=float(np.median(global_as)) if angular else None,
        median_lobe_as_deg=float(np.median(lobe_arr)) if angular else None,
        omni_ds_ns=omni,
        lobe_as_deg=lobe_arr,
    )


@dataclass
class Check:
    name: str
    value: float
    reference: float
    tolerance: float
    relative: bool = True

    @property
    def passed(self) -> bool:
        bound = self.tolerance * abs(self.reference) if self.relative else self.tolerance
        return abs(self.value - self.reference) <= bound

    def to_dict(self) -> dict:
        return {
            "name": self.name, "value": self.value, "reference": self.reference,
            "tolerance": self.tolerance, "relative": self.relative, "passed": self.passed,
        }


@dataclass
class ValidationReport:
    seed: int
    realizations_per_scenario: int
    tolerance_pct: float
    scenarios: dict[str, ScenarioSummary]
    checks: dict[str, list[Check]]
    refits: dict[str, dict]
    elapsed_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for group in self.checks.values() for c in group)

    def failures(self) -> list[str]:
        return [f"{key}: {c.name}" for key, group in self.checks.items() for c in group if not c.passed]

    def to_dict(self) -> dict:
        blocks = {}
        for key, s in self.scenarios.items():
            ref_lambda = REFERENCE_LAMBDA_C[(int(s.frequency_ghz), Condition(s.condition))]
            blocks[key] = {
                "frequency_ghz": s.frequency_ghz,
                "condition": s.condition,
                "realizations": s.realizations,
                "simulated": {
                    "median_omni_rms_ds_ns": s.median_omni_ds_ns,
                    "median_dir_rms_ds_ns": s.median_dir_ds_ns,
                    "median_global_aoa_as_deg": s.median_global_as_deg,
                    "median_lobe_aoa_as_deg": s.median_lobe_as_deg,
                    "mean_num_clusters": s.mean_num_clusters,
                    "mean_subpaths_per_cluster": s.mean_subpaths_per_cluster,
                },
                "reference": {
                    "median_omni_rms_ds_ns": REFERENCE_OMNI_DS_MEDIANS_NS[(int(s.frequency_ghz), Condition(s.condition))],
                    "lambda_c": ref_lambda,
                },
                "checks": [c.to_dict() for c in self.checks[key]],
                "passed": all(c.passed for c in self.checks[key]),
            }
        return {
            "seed": self.seed,
            "realizations_per_scenario": self.realizations_per_scenario,
            "tolerance_pct": self.tolerance_pct,
            "elapsed_s": self.elapsed_s,
            "scenarios": blocks,
            "refits": self.refits,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


REPORT_SCHEMA = {
    "type": "object",
    "required": ["seed", "realizations_per_scenario", "tolerance_pct", "scenarios", "refits", "passed"],
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "realizations_per_scenario": {"type": "integer", "minimum": 100},
        "tolerance_pct": {"type": "number", "exclusiveMinimum": 0},
        "passed": {"type": "boolean"},
        "scenarios": {
            "type": "object",
            "minProperties": 4,
            "additionalProperties": {
                "type": "object",
                "required": ["frequency_ghz", "condition", "realizations", "simulated", "reference", "checks", "passed"],
                "properties": {
                    "condition": {"enum": ["LOS", "NLOS"]},
                    "checks": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["name", "value", "reference", "tolerance", "passed"],
                        },
                    },
                },
            },
        },
        "refits": {"type": "object"},
    },
}


def _scenario_key(freq: int, cond: Condition) -> str:
    return f"{freq}GHz_{cond.value}"


def run_validation(
    realizations_per_scenario: int = 10_000,
    seed: int = 0,
    tolerance_pct: float = 20.0,
    angular: bool = True,
    directional: bool = True,
    angular_count: int | None = 2000,
) -> ValidationReport:
    """Simulate the four common-set scenarios and compare with reference values.

    Checks per scenario: median omnidirectional RMS DS within
    ``tolerance_pct`` of the reference median, mean cluster count within 2 %
    of ``lambda_c + 1`` and mean subpaths per cluster within 3 % of
    ``1 + beta * mu_DE``. Scenario ``i`` draws streams ``i * 2**32 + k``.
    Angular medians use the first ``angular_count`` realizations.
    """
    if realizations_per_scenario < 100:
        raise ParameterError("run_validation needs at least 100 realizations per scenario")
    if not tolerance_pct > 0:
        raise ParameterError("tolerance must be positive")
    start = time.perf_counter()
    scenarios: dict[str, ScenarioSummary] = {}
    checks: dict[str, list[Check]] = {}
    for i, (freq, cond) in enumerate(_SCENARIOS):
        params = builtin(freq, cond)
        summary = summarize_scenario(
            params, realizations_per_scenario, seed, stream_offset=i << 32,
            angular=angular, directional=directional, angular_count=angular_count,
        )
        key = _scenario_key(freq, cond)
        scenarios[key] = summary
        expected_m = 1.0 + (params.beta_s * discrete_exponential_mean(params.mu_s) if params.beta_s else 0.0)
        checks[key] = [
            Check("median_omni_rms_ds_ns", summary.median_omni_ds_ns,
                  REFERENCE_OMNI_DS_MEDIANS_NS[(freq, cond)], tolerance_pct / 100.0),
            Check("mean_num_clusters", summary.mean_num_clusters, params.lambda_c + 1.0, 0.02),
            Check("mean_subpaths_per_cluster", summary.mean_subpaths_per_cluster, expected_m, 0.03),
        ]

    refits: dict[str, dict] = {}
    for freq in (28, 140):
        for cond in (Condition.LOS, Condition.NLOS):
            lam = refit_lambda_c(embedded_measurements(freq, cond))
            refits[f"lambda_c_{_scenario_key(freq, cond)}"] = {
                "value": lam, "reference": REFERENCE_LAMBDA_C[(freq, cond)],
                "matches_after_rounding": round(lam, 1) == REFERENCE_LAMBDA_C[(freq, cond)],
            }
    ple_los, ple_nlos = refit_ple(embedded_measurements(28), 28)
    refits["ple_28GHz_LOS"] = {"value": ple_los, "reference": REFERENCE_PLE_28GHZ[Condition.LOS]}
    refits["ple_28GHz_NLOS"] = {"value": ple_nlos, "reference": REFERENCE_PLE_28GHZ[Condition.NLOS]}

    return ValidationReport(
        seed=seed,
        realizations_per_scenario=realizations_per_scenario,
        tolerance_pct=tolerance_pct,
        scenarios=scenarios,
        checks=checks,
        refits=refits,
        elapsed_s=time.perf_counter() - start,
    )


# -- serialization -------------------------------------------------------------------

REALIZATION_CSV_COLUMNS = (
    "realization_id", "cluster_id", "subpath_id", "abs_delay_ns", "power_mw", "phase_rad",
    "aod_az_deg", "aod_el_deg", "aoa_az_deg", "aoa_el_deg",
)


def _realization_to_dict(rid: int, r: ChannelRealization) -> dict:
    return {
        "realization_id": rid,
        "seed": r.seed,
        "stream_id": r.stream_id,
        "distance_m": r.distance_m,
        "tx_power_dbm": r.tx_power_dbm,
        "path_loss_db": r.path_loss_db,
        "total_power_mw": r.total_power_mw,
        "params": save_config(r.params_used),
        "lobes_aod": [[lo.mean_az_deg, lo.mean_el_deg] for lo in r.lobes_aod],
        "lobes_aoa": [[lo.mean_az_deg, lo.mean_el_deg] for lo in r.lobes_aoa],
        "clusters": [
            {
                "excess_delay_ns": c.excess_delay_ns,
                "power_mw": c.power_mw,
                "subpaths": [dataclasses.asdict(s) for s in c.subpaths],
            }
            for c in r.clusters
        ],
    }


def export_realizations(realizations: Iterable[ChannelRealization], fmt: str = "csv") -> bytes:
    """Serialise realizations as CSV (one row per subpath) or JSON (one object each)."""
    fmt = fmt.lower()
    if fmt == "json":
        objs = [_realization_to_dict(i, r) for i, r in enumerate(realizations)]
        return (json.dumps(objs, indent=1) + "\n").encode()
    if fmt != "csv":
        raise ParameterError(f"unknown export format {fmt!r}; expected csv or json")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REALIZATION_CSV_COLUMNS)
    for rid, r in enumerate(realizations):
        for cid, c in enumerate(r.clusters):
            for sid, s in enumerate(c.subpaths):
                w.writerow([
                    rid, cid, sid, repr(s.abs_delay_ns), repr(s.power_mw), repr(s.phase_rad),
                    repr(s.aod_az_deg), repr(s.aod_el_deg), repr(s.aoa_az_deg), repr(s.aoa_el_deg),
                ])
    return buf.getvalue().encode()


def import_realizations_json(data: bytes | str) -> list[ChannelRealization]:
    objs = json.loads(data)
    out = []
    for obj in objs:
        clusters = tuple(
            TimeCluster(
                excess_delay_ns=c["excess_delay_ns"],
                power_mw=c["power_mw"],
                subpaths=tuple(Subpath(**s) for s in c["subpaths"]),
            )
            for c in obj["clusters"]
        )
        out.append(
            ChannelRealization(
                params_used=load_config(obj["params"]),
                distance_m=obj["distance_m"],
                total_power_mw=obj["total_power_mw"],
                clusters=clusters,
                lobes_aod=tuple(Lobe(*lo) for lo in obj["lobes_aod"]),
                lobes_aoa=tuple(Lobe(*lo) for lo in obj["lobes_aoa"]),
                seed=obj["seed"],
                stream_id=obj["stream_id"],
                tx_power_dbm=obj["tx_power_dbm"],
                path_loss_db=obj["path_loss_db"],
            )
        )
    return out


def import_realizations_csv(data: bytes | str) -> dict[int, list[dict]]:
    """Rows of a realization CSV grouped by ``realization_id``."""
    text = data.decode() if isinstance(data, bytes) else data
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != REALIZATION_CSV_COLUMNS:
        raise ValidationError(f"realization CSV header must be {','.join(REALIZATION_CSV_COLUMNS)}")
    out: dict[int, list[dict]] = {}
    for row_no, row in enumerate(reader, start=1):
        parsed = {}
        for col in REALIZATION_CSV_COLUMNS:
            try:
                parsed[col] = int(row[col]) if col.endswith("_id") else float(row[col])
            except (TypeError, ValueError):
                raise ValidationError(f"cannot parse {row[col]!r}", field=col, row=row_no) from None
        out.setdefault(parsed["realization_id"], []).append(parsed)
    return out


def export_measurements_csv(records: Iterable[MeasurementRecord]) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MEASUREMENT_COLUMNS)
    for r in records:
        w.writerow([
            r.condition.value if col == "condition" else repr(getattr(r, col)) if isinstance(getattr(r, col), float)
            else getattr(r, col)
            for col in MEASUREMENT_COLUMNS
        ])
    return buf.getvalue().encode()


def import_measurement_csv(data: bytes | str) -> list[MeasurementRecord]:
    """Parse a measurement CSV; errors name the offending row and column."""
    text = data.decode() if isinstance(data, bytes) else data
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise ValidationError("measurement CSV is empty")
    missing = [c for c in MEASUREMENT_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise ValidationError("missing column", field=missing[0])
    out = []
    for row_no, row in enumerate(reader, start=1):
        values = {}
        for col, typ in _FIELD_TYPES.items():
            raw = (row.get(col) or "").strip()
            try:
                if typ is int:
                    f = float(raw)
                    if not f.is_integer():
                        raise ValueError
                    values[col] = int(f)
                elif typ is float:
                    values[col] = float(raw)
                    if not math.isfinite(values[col]):
                        raise ValueError
                else:
                    values[col] = Condition.parse(raw)
            except (ValueError, ParameterError):
                raise ValidationError(f"cannot parse {raw!r}", field=col, row=row_no) from None
        try:
            out.append(MeasurementRecord(**values))
        except ValidationError as exc:
            raise ValidationError(str(exc).split(": ", 1)[-1], field=exc.field, row=row_no) from None
    return out
