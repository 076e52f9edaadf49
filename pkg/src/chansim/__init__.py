"""Statistical indoor mmWave and sub-THz channel simulator.

Generates omnidirectional and directional channel impulse responses from
time-cluster / spatial-lobe statistics at 28 and 140 GHz, and refits the
model inputs from per-location measurement summaries.
"""

from .antenna import HornPattern, Pointing, directional_cir, directional_sweep, relative_gain_db
from .cirgen import ChannelRealization, generate_batch, generate_channel
from .errors import (
    ChansimError,
    DataError,
    DomainError,
    ParameterError,
    ScenarioLookupError,
    ValidationError,
)
from .params import Condition, Dataset, ScenarioParams, builtin, interpolate, load_config, save_config
from .pathloss import ci_path_loss_db, fit_ple_mmse, fspl_db
from .randvar import RngStream

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization",
    "ChansimError",
    "Condition",
    "DataError",
    "Dataset",
    "DomainError",
    "HornPattern",
    "ParameterError",
    "Pointing",
    "RngStream",
    "ScenarioLookupError",
    "ScenarioParams",
    "ValidationError",
    "builtin",
    "ci_path_loss_db",
    "directional_cir",
    "directional_sweep",
    "fit_ple_mmse",
    "fspl_db",
    "generate_batch",
    "generate_channel",
    "interpolate",
    "load_config",
    "relative_gain_db",
    "save_config",
]
