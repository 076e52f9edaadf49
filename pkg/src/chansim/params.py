"""Scenario parameter sets for the indoor office channel generator.

Built-in sets cover 28 GHz (all measured locations and the subset shared with
140 GHz) and 140 GHz, each for LOS and NLOS. Frequencies in between are
obtained by linear interpolation of the two "common" sets.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import re
from dataclasses import dataclass

from .errors import ParameterError, ScenarioLookupError, ValidationError

__all__ = [
    "Condition",
    "Dataset",
    "DelayLaw",
    "ScenarioParams",
    "builtin",
    "interpolate",
    "scenario_for",
    "load_config",
    "save_config",
    "DEFAULT_MTI_NS",
    "DEFAULT_SLT_DB",
]

DEFAULT_MTI_NS = 6.0
DEFAULT_SLT_DB = -15.0


class Condition(str, enum.Enum):
    LOS = "LOS"
    NLOS = "NLOS"

    @classmethod
    def parse(cls, value) -> "Condition":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ParameterError(f"unknown condition {value!r}; expected LOS or NLOS") from None


class Dataset(str, enum.Enum):
    ALL28 = "All28"
    COMMON28 = "Common28"
    COMMON140 = "Common140"
    INTERPOLATED = "Interpolated"

    @classmethod
    def parse(cls, value) -> "Dataset":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        for member in cls:
            if member.value.lower() == text:
                return member
        raise ParameterError(f"unknown dataset {value!r}; expected one of {[m.value for m in cls]}")


_LAW_RE = re.compile(r"^\s*(exp|logn)\s*\(\s*([^,()]+?)\s*(?:,\s*([^,()]+?)\s*)?\)\s*$", re.I)


@dataclass(frozen=True)
class DelayLaw:
    """Inter-cluster delay law.

    ``Exp(mean_ns)`` or ``Logn(mu_log, sigma_log)``, the latter parameterised
    by the mean and standard deviation of ``ln(delay / 1 ns)``.
    """

    family: str
    a: float
    b: float | None = None

    def __post_init__(self):
        if self.family == "exp":
            if self.b is not None:
                raise ParameterError("Exp delay law takes a single mean")
            if not (self.a > 0 and math.isfinite(self.a)):
                raise ParameterError(f"Exp delay law mean must be positive, got {self.a}")
        elif self.family == "logn":
            if self.b is None or not (self.b > 0 and math.isfinite(self.b)):
                raise ParameterError(f"Logn delay law needs a positive sigma, got {self.b}")
            if not math.isfinite(self.a):
                raise ParameterError(f"Logn delay law mu must be finite, got {self.a}")
        else:
            raise ParameterError(f"unknown delay law family {self.family!r}")

    @classmethod
    def exp(cls, mean_ns: float) -> "DelayLaw":
        return cls("exp", float(mean_ns))

    @classmethod
    def logn(cls, mu_log: float, sigma_log: float) -> "DelayLaw":
        return cls("logn", float(mu_log), float(sigma_log))

    @classmethod
    def parse(cls, text: str) -> "DelayLaw":
        m = _LAW_RE.match(text)
        if not m:
            raise ParameterError(f"cannot parse delay law {text!r}; expected Exp(m) or Logn(mu, sigma)")
        family = m.group(1).lower()
        a = float(m.group(2))
        b = float(m.group(3)) if m.group(3) is not None else None
        return cls(family, a, b)

    def __str__(self) -> str:
        if self.family == "exp":
            return f"Exp({self.a!r})"
        return f"Logn({self.a!r}, {self.b!r})"


@dataclass(frozen=True)
class ScenarioParams:
    """All inputs of the channel generation procedure for one scenario.

    Delays are in ns, shadowing stds in dB, angles in degrees. ``ple`` and
    ``sigma_sf_db`` feed the close-in path loss model that sets the total
    received power of a realization.
    """

    frequency_ghz: float
    condition: Condition
    dataset: Dataset
    lambda_c: float
    beta_s: float
    mu_s: float
    inter_cluster_delay_law: DelayLaw
    mu_rho_ns: float
    Gamma_ns: float
    sigma_Z_db: float
    gamma_ns: float
    sigma_U_db: float
    L_aod_max: int
    L_aoa_max: int
    mu_l_zod_deg: float
    sigma_l_zod_deg: float
    mu_l_zoa_deg: float
    sigma_l_zoa_deg: float
    sigma_phi_aod_deg: float
    sigma_theta_aod_deg: float
    sigma_phi_aoa_deg: float
    sigma_theta_aoa_deg: float
    P0_bar: float = 1.0
    Pi0_bar: float = 1.0
    mti_ns: float = DEFAULT_MTI_NS
    slt_db: float = DEFAULT_SLT_DB
    ple: float = 2.0
    sigma_sf_db: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "condition", Condition.parse(self.condition))
        object.__setattr__(self, "dataset", Dataset.parse(self.dataset))
        if isinstance(self.inter_cluster_delay_law, str):
            object.__setattr__(self, "inter_cluster_delay_law", DelayLaw.parse(self.inter_cluster_delay_law))
        for name in ("L_aod_max", "L_aoa_max"):
            value = getattr(self, name)
            if int(value) != value:
                raise ValidationError("must be an integer", field=name)
            object.__setattr__(self, name, int(value))
        self.validate()

    def validate(self) -> None:
        def bad(name, why):
            raise ValidationError(f"{why} (got {getattr(self, name)!r})", field=name)

        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and not math.isfinite(v):
                bad(f.name, "must be finite")
        if not self.frequency_ghz > 0:
            bad("frequency_ghz", "must be positive")
        if not self.lambda_c >= 0:
            bad("lambda_c", "must be non-negative")
        if not 0.0 <= self.beta_s <= 1.0:
            bad("beta_s", "must lie in [0, 1]")
        for name in ("mu_s", "mu_rho_ns", "Gamma_ns", "gamma_ns", "mti_ns", "P0_bar", "Pi0_bar"):
            if not getattr(self, name) > 0:
                bad(name, "must be positive")
        for name in (
            "sigma_Z_db", "sigma_U_db", "sigma_l_zod_deg", "sigma_l_zoa_deg",
            "sigma_phi_aod_deg", "sigma_theta_aod_deg", "sigma_phi_aoa_deg",
            "sigma_theta_aoa_deg", "sigma_sf_db",
        ):
            if not getattr(self, name) >= 0:
                bad(name, "must be non-negative")
        for name in ("L_aod_max", "L_aoa_max"):
            if getattr(self, name) < 1:
                bad(name, "must be at least 1")
        if not self.slt_db < 0:
            bad("slt_db", "must be negative")
        if not self.ple > 0:
            bad("ple", "must be positive")
        for name in ("mu_l_zod_deg", "mu_l_zoa_deg"):
            if not -90.0 <= getattr(self, name) <= 90.0:
                bad(name, "must lie in [-90, 90]")

    def replace(self, **changes) -> "ScenarioParams":
        return dataclasses.replace(self, **changes)


def _col(f, cond, ds, lam, beta, mu_s, law, mu_rho, Gamma, sZ, gamma, sU, L, zod, zoa, aod, aoa, ple, **extra):
    return ScenarioParams(
        frequency_ghz=f, condition=cond, dataset=ds, lambda_c=lam, beta_s=beta, mu_s=mu_s,
        inter_cluster_delay_law=law, mu_rho_ns=mu_rho, Gamma_ns=Gamma, sigma_Z_db=sZ,
        gamma_ns=gamma, sigma_U_db=sU, L_aod_max=L[0], L_aoa_max=L[1],
        mu_l_zod_deg=zod[0], sigma_l_zod_deg=zod[1], mu_l_zoa_deg=zoa[0], sigma_l_zoa_deg=zoa[1],
        sigma_phi_aod_deg=aod[0], sigma_theta_aod_deg=aod[1],
        sigma_phi_aoa_deg=aoa[0], sigma_theta_aoa_deg=aoa[1], ple=ple, **extra,
    )


_LOS, _NLOS = Condition.LOS, Condition.NLOS
_A28, _C28, _C140 = Dataset.ALL28, Dataset.COMMON28, Dataset.COMMON140

# omnidirectional PLE defaults: 28 GHz LOS 1.2 and NLOS ~2.7 at both bands;
# the 140 GHz LOS value is only bounded (< 2), 2.0 is used
_BUILTIN: dict[tuple[int, Condition, Dataset], ScenarioParams] = {
    (28, _LOS, _A28): _col(
        28.0, _LOS, _A28, 3.6, 0.7, 3.7, DelayLaw.logn(2.1, 1.6), 3.4, 20.7, 15.4, 2.0, 5.2,
        (2, 2), (-7.3, 3.8), (7.4, 3.8), (7.1, 13.0), (19.3, 11.3), ple=1.2),
    (28, _NLOS, _A28): _col(
        28.0, _NLOS, _A28, 5.1, 0.7, 5.3, DelayLaw.exp(10.9), 22.7, 23.6, 9.6, 9.2, 6.0,
        (3, 3), (-5.5, 2.9), (5.5, 2.9), (17.6, 13.0), (20.2, 11.6), ple=2.7,
        P0_bar=0.68, Pi0_bar=0.42),
    (28, _LOS, _C28): _col(
        28.0, _LOS, _C28, 3.6, 0.7, 3.4, DelayLaw.logn(1.9, 1.6), 3.4, 20.6, 15.9, 2.0, 5.0,
        (2, 2), (-7.2, 3.5), (7.2, 3.5), (7.0, 12.9), (19.9, 11.8), ple=1.2),
    (28, _NLOS, _C28): _col(
        28.0, _NLOS, _C28, 4.4, 0.7, 4.6, DelayLaw.exp(9.8), 14.2, 22.5, 11.3, 9.9, 5.7,
        (3, 3), (-5.8, 2.6), (5.8, 2.6), (16.1, 12.9), (19.0, 11.6), ple=2.7),
    (140, _LOS, _C140): _col(
        140.0, _LOS, _C140, 0.9, 1.0, 1.4, DelayLaw.exp(14.6), 1.1, 18.2, 9.1, 2.0, 4.6,
        (2, 2), (-6.8, 4.9), (7.4, 4.5), (4.3, 3.4), (4.4, 3.3), ple=2.0),
    (140, _NLOS, _C140): _col(
        140.0, _NLOS, _C140, 1.8, 1.0, 1.2, DelayLaw.exp(21.0), 2.7, 16.1, 12.8, 2.4, 5.8,
        (2, 2), (-2.5, 2.7), (4.8, 2.8), (4.0, 3.3), (5.6, 3.3), ple=2.7),
}


def builtin(frequency, condition, dataset=None) -> ScenarioParams:
    """Return the tabulated parameter set for ``(frequency, condition, dataset)``.

    ``dataset`` defaults to the common set of the requested frequency.
    """
    try:
        freq = int(frequency)
    except (TypeError, ValueError):
        raise ScenarioLookupError(f"no built-in parameters for frequency {frequency!r}") from None
    if freq != frequency:
        raise ScenarioLookupError(f"no built-in parameters for frequency {frequency!r}")
    cond = Condition.parse(condition)
    if dataset is None:
        ds = _C28 if freq == 28 else _C140
    else:
        ds = Dataset.parse(dataset)
    try:
        return _BUILTIN[(freq, cond, ds)]
    except KeyError:
        raise ScenarioLookupError(
            f"no built-in parameters for ({frequency} GHz, {cond.value}, {ds.value})"
        ) from None


def builtin_keys() -> list[tuple[int, Condition, Dataset]]:
    return list(_BUILTIN)


_INT_FIELDS = ("L_aod_max", "L_aoa_max")
_TAG_FIELDS = ("frequency_ghz", "condition", "dataset", "inter_cluster_delay_law")


def interpolate(f_ghz: float, condition) -> ScenarioParams:
    """Linear-in-frequency blend of the 28 and 140 GHz common sets.

    Integer lobe caps are rounded to the nearest integer and the delay-law
    family follows the nearer anchor (28 GHz on a tie). The anchors themselves
    are returned unchanged.
    """
    if not 28.0 <= f_ghz <= 140.0:
        raise ParameterError(f"interpolation frequency must lie in [28, 140] GHz, got {f_ghz}")
    cond = Condition.parse(condition)
    lo, hi = _BUILTIN[(28, cond, _C28)], _BUILTIN[(140, cond, _C140)]
    if f_ghz == 28.0:
        return lo
    if f_ghz == 140.0:
        return hi
    w = (f_ghz - 28.0) / (140.0 - 28.0)

    def blend(a, b):
        return (1.0 - w) * a + w * b

    values = {}
    for f in dataclasses.fields(ScenarioParams):
        if f.name in _TAG_FIELDS:
            continue
        a, b = getattr(lo, f.name), getattr(hi, f.name)
        values[f.name] = int(math.floor(blend(a, b) + 0.5)) if f.name in _INT_FIELDS else blend(a, b)

    law_lo, law_hi = lo.inter_cluster_delay_law, hi.inter_cluster_delay_law
    if law_lo.family == law_hi.family:
        b = None if law_lo.b is None else blend(law_lo.b, law_hi.b)
        law = DelayLaw(law_lo.family, blend(law_lo.a, law_hi.a), b)
    else:
        law = law_lo if w <= 0.5 else law_hi
    return ScenarioParams(
        frequency_ghz=float(f_ghz), condition=cond, dataset=Dataset.INTERPOLATED,
        inter_cluster_delay_law=law, **values,
    )


def scenario_for(frequency_ghz: float, condition, dataset=None) -> ScenarioParams:
    """Built-in set at an anchor frequency, interpolated set elsewhere."""
    if dataset is not None and Dataset.parse(dataset) is not Dataset.INTERPOLATED:
        return builtin(frequency_ghz, condition, dataset)
    if frequency_ghz in (28, 140):
        return builtin(frequency_ghz, condition)
    return interpolate(frequency_ghz, condition)


# ---------------------------------------------------------------------------
# config files: ``key = value`` per line, ``#`` starts a comment

_REQUIRED = tuple(
    f.name for f in dataclasses.fields(ScenarioParams) if f.default is dataclasses.MISSING
)


def save_config(params: ScenarioParams) -> str:
    lines = [f"# scenario parameters ({params.frequency_ghz!r} GHz {params.condition.value})"]
    for f in dataclasses.fields(params):
        v = getattr(params, f.name)
        if isinstance(v, enum.Enum):
            text = v.value
        elif isinstance(v, DelayLaw):
            text = str(v)
        else:
            text = repr(v)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"


def load_config(text: str) -> ScenarioParams:
    types = {f.name: f.type for f in dataclasses.fields(ScenarioParams)}
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ValidationError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in types:
            raise ValidationError(f"line {lineno}: unknown key", field=key)
        if key in raw:
            raise ValidationError(f"line {lineno}: duplicate key", field=key)
        raw[key] = value

    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise ValidationError("missing required key", field=missing[0])

    values = {}
    for key, value in raw.items():
        try:
            if key == "condition":
                values[key] = Condition.parse(value)
            elif key == "dataset":
                values[key] = Dataset.parse(value)
            elif key == "inter_cluster_delay_law":
                values[key] = DelayLaw.parse(value)
            elif key in _INT_FIELDS:
                values[key] = int(value)
            else:
                values[key] = float(value)
        except (ValueError, ParameterError) as exc:
            raise ValidationError(f"cannot parse {value!r}: {exc}", field=key) from None
    try:
        return ScenarioParams(**values)
    except ValidationError:
        raise
    except ParameterError as exc:
        raise ValidationError(str(exc), field="inter_cluster_delay_law") from None
