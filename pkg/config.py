import dataclasses
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, Optional, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import tomli_w
from dotenv import load_dotenv

from errors import ConfigError

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

VERSION = "0.3.0"

# Grid presets: name -> (values, midpoint)
GRID_PRESETS: Dict[str, Tuple[Tuple[float, ...], float]] = {
    "experiment": (tuple(float(v) for v in range(1, 10)), 5.0),
    "normalized": (tuple(round(0.1 * v, 1) for v in range(1, 10)), 0.5),
    "extended": (tuple(float(v) for v in range(1, 11)), 5.0),
}

# World settings
STICK_COUNT = 5
ENUMERATION_CAP = 10_000_000
EXAMPLE_SET = (2.0, 4.0, 7.0, 8.0, 9.0)
LONG_EVIDENCE = (6.0, 7.0, 8.0, 9.0)
SHORT_EVIDENCE = (1.0, 2.0, 3.0, 4.0)

# Response model
RESPONSE_SD = 0.3
BETA_MAX = 10.0
W_C_MAX = 5.0

# MCMC protocol
MCMC_CHAINS = 4
MCMC_SAMPLES = 1000
MCMC_BURNIN = 7500
MCMC_LAG = 100

# Simulation defaults
SWEEP_BETAS = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0)
CURVE_BETA = 2.03
CURVE_OFFSET = -0.13

DEFAULT_OUTPUT_DIR = "output"


def env_seed() -> Optional[int]:
    """Seed from the SEED environment variable, if set."""
    raw = os.getenv("SEED")
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"SEED must be an unsigned integer, got {raw!r}")


@dataclass(frozen=True)
class WorldSection:
    preset: str = "experiment"
    values: Tuple[float, ...] = GRID_PRESETS["experiment"][0]
    midpoint: float = GRID_PRESETS["experiment"][1]
    n: int = STICK_COUNT
    enumeration_cap: int = ENUMERATION_CAP
    example_set: Tuple[float, ...] = EXAMPLE_SET
    long_evidence: Tuple[float, ...] = LONG_EVIDENCE
    short_evidence: Tuple[float, ...] = SHORT_EVIDENCE


@dataclass(frozen=True)
class ModelSection:
    family: str = "rsa"
    variant: str = "speaker-dependent"
    levels: Tuple[str, ...] = ("J0", "J1")
    alpha: float = 1.0
    beta_support_points: int = 101
    beta_max: float = BETA_MAX
    w_c_max: float = W_C_MAX
    response_sd: float = RESPONSE_SD
    second_pick: str = "independent"


@dataclass(frozen=True)
class MCMCSection:
    chains: int = MCMC_CHAINS
    samples: int = MCMC_SAMPLES
    burnin: int = MCMC_BURNIN
    lag: int = MCMC_LAG
    seed: int = 0
    proposal_fraction: float = 0.05
    adapt_interval: int = 100
    target_acceptance: float = 0.3


@dataclass(frozen=True)
class SearchSection:
    grid_budget: int = 4096
    max_rounds: int = 20
    tolerance: float = 1e-6


@dataclass(frozen=True)
class SweepSection:
    preset: str = "extended"
    goal: str = "longer"
    beta_values: Tuple[float, ...] = SWEEP_BETAS
    evidence_values: Tuple[float, ...] = (5.0, 6.0, 7.0, 8.0, 9.0, 10.0)
    curve_preset: str = "experiment"
    curve_beta: float = CURVE_BETA
    curve_offset: float = CURVE_OFFSET


@dataclass(frozen=True)
class SyntheticSection:
    n_participants: int = 723
    # strongest, second strongest, weaker
    group_proportions: Tuple[float, ...] = (0.67, 0.2, 0.13)
    beta: float = 2.26
    offset: float = -0.11
    p_z: Tuple[float, ...] = (0.99, 0.1, 0.1)
    long_first_share: float = 0.5
    weak_cell_weight: float = 0.4
    seed: int = 0


@dataclass(frozen=True)
class OutputSection:
    directory: str = DEFAULT_OUTPUT_DIR
    float_format: str = "%.12g"


@dataclass(frozen=True)
class RunConfig:
    world: WorldSection = field(default_factory=WorldSection)
    model: ModelSection = field(default_factory=ModelSection)
    mcmc: MCMCSection = field(default_factory=MCMCSection)
    search: SearchSection = field(default_factory=SearchSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    synthetic: SyntheticSection = field(default_factory=SyntheticSection)
    output: OutputSection = field(default_factory=OutputSection)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """
        Build a config from a nested mapping, rejecting unknown sections and keys.

        Args:
            data: Mapping of section name to key/value mapping

        Returns:
            Validated RunConfig
        """
        sections = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(sections))
        if unknown:
            raise ConfigError(f"unknown config section(s): {', '.join(unknown)}")

        built = {}
        for name, section_field in sections.items():
            section_cls = section_field.default_factory
            built[name] = _section_from_dict(section_cls, data.get(name, {}), name)
        config = cls(**built)
        config.validate()
        return config

    def validate(self) -> None:
        if self.world.preset not in GRID_PRESETS and self.world.preset != "custom":
            raise ConfigError(f"world.preset must be one of {sorted(GRID_PRESETS)} or 'custom'")
        if self.sweep.preset not in GRID_PRESETS or self.sweep.curve_preset not in GRID_PRESETS:
            raise ConfigError(f"sweep presets must be one of {sorted(GRID_PRESETS)}")
        if self.model.second_pick not in ("independent", "exclusive"):
            raise ConfigError("model.second_pick must be 'independent' or 'exclusive'")
        if self.sweep.goal not in ("longer", "shorter"):
            raise ConfigError("sweep.goal must be 'longer' or 'shorter'")
        if len(self.synthetic.group_proportions) != 3 or len(self.synthetic.p_z) != 3:
            raise ConfigError("synthetic.group_proportions and synthetic.p_z need three entries")
        if abs(sum(self.synthetic.group_proportions) - 1.0) > 1e-9:
            raise ConfigError("synthetic.group_proportions must sum to 1")
        if self.mcmc.chains < 1 or self.mcmc.samples < 1 or self.mcmc.lag < 1 or self.mcmc.burnin < 0:
            raise ConfigError("mcmc chains, samples and lag must be positive and burnin non-negative")

    def grid_spec(self) -> Tuple[Tuple[float, ...], float]:
        """Values and midpoint of the world grid."""
        if self.world.preset == "custom":
            return tuple(self.world.values), float(self.world.midpoint)
        return GRID_PRESETS[self.world.preset]

    def to_dict(self) -> Dict[str, Any]:
        return _plain(dataclasses.asdict(self))

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _section_from_dict(section_cls, values: Dict[str, Any], section_name: str):
    if not isinstance(values, dict):
        raise ConfigError(f"[{section_name}] must be a table")
    known = {f.name: f for f in fields(section_cls)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section_name}]: {', '.join(unknown)}")

    kwargs = {}
    for key, value in values.items():
        default = getattr(section_cls(), key)
        try:
            kwargs[key] = _coerce(value, default)
        except (TypeError, ValueError):
            raise ConfigError(f"{section_name}.{key} has the wrong type: {value!r}")
    return section_cls(**kwargs)


def _coerce(value: Any, default: Any) -> Any:
    if isinstance(default, tuple):
        if not isinstance(value, (list, tuple)):
            raise TypeError(value)
        if default and isinstance(default[0], str):
            return tuple(str(v) for v in value)
        return tuple(float(v) for v in value)
    if isinstance(default, bool):
        return bool(value)
    if isinstance(default, int):
        if isinstance(value, float) and not value.is_integer():
            raise ValueError(value)
        return int(value)
    if isinstance(default, float):
        return float(value)
    return str(value)


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def load_config(path: Optional[str]) -> RunConfig:
    """
    Load a run configuration file.

    Args:
        path: Path to a TOML document (None for all defaults)

    Returns:
        RunConfig instance
    """
    if path is None:
        return RunConfig()
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "rb") as f:
        try:
            data = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"cannot parse {path}: {e}")
    config = RunConfig.from_dict(data)
    logger.info(f"Loaded config {path} (hash {config.digest()})")
    return config


def render_defaults() -> str:
    """Every default, as a TOML document."""
    return tomli_w.dumps(RunConfig().to_dict())
