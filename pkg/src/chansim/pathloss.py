"""Close-in (CI) free-space reference distance path loss model."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, DomainError, ParameterError, ValidationError
from .params import Condition
from .randvar import RngStream, sample_normal

__all__ = [
    "SPEED_OF_LIGHT",
    "REFERENCE_DISTANCE_M",
    "DirectionClass",
    "PathLossSample",
    "fspl_db",
    "ci_path_loss_db",
    "fit_ple_mmse",
    "fit_ple_by_class",
    "read_pathloss_csv",
]

SPEED_OF_LIGHT = 299_792_458.0
REFERENCE_DISTANCE_M = 1.0


class DirectionClass(str, enum.Enum):
    OMNI = "Omni"
    LOS_DIR = "LosDir"
    NLOS_BEST = "NlosBest"
    NLOS_DIR = "NlosDir"

    @classmethod
    def parse(cls, value) -> "DirectionClass":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        for member in cls:
            if member.value.lower() == text:
                return member
        raise ParameterError(f"unknown direction class {value!r}")


@dataclass(frozen=True)
class PathLossSample:
    distance_m: float
    path_loss_db: float
    condition: Condition = Condition.NLOS
    direction_class: DirectionClass = DirectionClass.OMNI

    def __post_init__(self):
        object.__setattr__(self, "condition", Condition.parse(self.condition))
        object.__setattr__(self, "direction_class", DirectionClass.parse(self.direction_class))
        if not self.distance_m >= REFERENCE_DISTANCE_M:
            raise DomainError(f"CI model needs distance >= 1 m, got {self.distance_m}")
        if not self.path_loss_db > 0:
            raise ParameterError(f"path loss must be positive, got {self.path_loss_db}")


def fspl_db(f_hz: float, d_m: float) -> float:
    """Friis free-space path loss ``20 log10(4 pi d f / c)`` in dB."""
    if not (f_hz > 0 and d_m > 0):
        raise ParameterError(f"frequency and distance must be positive, got f={f_hz}, d={d_m}")
    return 20.0 * math.log10(4.0 * math.pi * d_m * f_hz / SPEED_OF_LIGHT)


def ci_path_loss_db(
    f_hz: float,
    d_m: float,
    ple: float,
    sigma_sf_db: float = 0.0,
    rng: RngStream | None = None,
) -> float:
    """CI path loss with optional zero-mean Gaussian shadow fading (dB).

    With ``sigma_sf_db == 0`` the mean path loss is returned and ``rng`` is
    not consumed.
    """
    if not d_m >= REFERENCE_DISTANCE_M:
        raise DomainError(f"CI model is undefined below the 1 m reference distance, got {d_m} m")
    if sigma_sf_db < 0:
        raise ParameterError(f"shadow fading std must be non-negative, got {sigma_sf_db}")
    pl = fspl_db(f_hz, REFERENCE_DISTANCE_M) + 10.0 * ple * math.log10(d_m / REFERENCE_DISTANCE_M)
    if sigma_sf_db > 0:
        if rng is None:
            raise ParameterError("a random stream is required when sigma_sf_db > 0")
        pl += sample_normal(0.0, sigma_sf_db, rng)
    return pl


def fit_ple_mmse(samples: Sequence[PathLossSample], f_hz: float) -> tuple[float, float]:
    """Least-squares PLE through the 1 m FSPL anchor.

    Returns ``(ple, sigma_sf_db)`` where the shadow fading std is the ddof=0
    std of the fit residuals.
    """
    if len(samples) < 2:
        raise DataError("PLE fit needs at least two samples")
    d = np.array([s.distance_m for s in samples], dtype=float)
    pl = np.array([s.path_loss_db for s in samples], dtype=float)
    if np.any(d < REFERENCE_DISTANCE_M):
        raise DomainError("all distances must be at least 1 m")
    a = pl - fspl_db(f_hz, REFERENCE_DISTANCE_M)
    b = 10.0 * np.log10(d / REFERENCE_DISTANCE_M)
    denom = float(np.dot(b, b))
    if denom == 0.0:
        raise DataError("degenerate PLE fit: every sample sits at the reference distance")
    ple = float(np.dot(a, b) / denom)
    resid = a - ple * b
    return ple, float(np.std(resid))


def fit_ple_by_class(
    samples: Iterable[PathLossSample], f_hz: float
) -> dict[tuple[Condition, DirectionClass], tuple[float, float]]:
    """Fit each ``(condition, direction_class)`` population separately."""
    groups: dict[tuple[Condition, DirectionClass], list[PathLossSample]] = {}
    for s in samples:
        groups.setdefault((s.condition, s.direction_class), []).append(s)
    return {key: fit_ple_mmse(group, f_hz) for key, group in groups.items() if len(group) >= 2}


_PL_COLUMNS = ("condition", "direction_class", "distance_m", "path_loss_db")


def read_pathloss_csv(text: str) -> list[PathLossSample]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise ValidationError("empty path loss CSV")
    missing = [c for c in _PL_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise ValidationError("missing column", field=missing[0])
    out = []
    for row_no, row in enumerate(reader, start=1):
        try:
            out.append(
                PathLossSample(
                    distance_m=float(row["distance_m"]),
                    path_loss_db=float(row["path_loss_db"]),
                    condition=row["condition"],
                    direction_class=row["direction_class"],
                )
            )
        except (ValueError, TypeError) as exc:
            raise ValidationError(str(exc), row=row_no) from None
    return out
