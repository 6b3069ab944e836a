"""
Response models: what each model family predicts for a participant and how likely the response is.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm

from baselines.adjust import StrengthMap, adjust_update_array, evidence_strength
from errors import LikelihoodError, ValidationError
from inference.records import SPEAKER_GROUPS, ResponseRecord
from rsa.beliefs import DEFAULT_BETA_PRIOR, BetaPrior
from rsa.listeners import level2_curve, literal_curve, pragmatic_curve
from world.grid import Proposition, WorldPrior

logger = logging.getLogger(__name__)

GOALS = (Proposition.LONGER, Proposition.SHORTER)


class Family(Enum):
    RSA = "rsa"
    AA = "aa"
    MAS = "mas"


class Variant(Enum):
    HOMOGENEOUS = "homogeneous"
    HETEROGENEOUS = "heterogeneous"
    SPEAKER_DEPENDENT = "speaker-dependent"


class Component(Enum):
    J0 = "J0"
    J1 = "J1"
    J2 = "J2"
    AA = "AA"
    MAS = "MAS"


LEVELS = (Component.J0, Component.J1, Component.J2)


@dataclass(frozen=True)
class ModelSpec:
    family: Family
    variant: Variant
    levels: Tuple[Component, ...] = (Component.J0, Component.J1)

    def __post_init__(self):
        if not self.levels or any(level not in LEVELS for level in self.levels):
            raise ValidationError("levels must be a non-empty subset of J0, J1, J2")
        levels = tuple(sorted(set(self.levels), key=LEVELS.index))
        object.__setattr__(self, "levels", levels)
        if self.variant is Variant.SPEAKER_DEPENDENT and self.family is not Family.RSA:
            raise ValidationError("the speaker-dependent variant exists only for RSA models")
        if self.variant is not Variant.HOMOGENEOUS and len(self.components) < 2:
            raise ValidationError(f"{self.variant.value} {self.family.value} needs at least two mixture components")

    @classmethod
    def parse(cls, family: str, variant: str, levels: Sequence[str] = ("J0", "J1")) -> "ModelSpec":
        try:
            return cls(Family(family.lower()), Variant(variant.lower()),
                       tuple(Component(level.strip().upper()) for level in levels))
        except ValueError as e:
            raise ValidationError(f"unknown model option: {e}")

    @classmethod
    def from_label(cls, label: str) -> "ModelSpec":
        """Inverse of label, e.g. 'rsa/speaker-dependent/J0,J1'."""
        parts = label.split("/")
        if len(parts) not in (2, 3):
            raise ValidationError(f"not a model label: {label!r}")
        levels = parts[2].split(",") if len(parts) == 3 else ("J0", "J1")
        return cls.parse(parts[0], parts[1], levels)

    @property
    def components(self) -> Tuple[Component, ...]:
        if self.family is Family.RSA:
            if self.variant is Variant.HOMOGENEOUS:
                return (self.levels[-1],)
            return self.levels
        if self.family is Family.AA:
            return (Component.AA,)
        if self.variant is Variant.HETEROGENEOUS:
            return (Component.AA, Component.MAS)
        return (Component.MAS,)

    @property
    def label(self) -> str:
        parts = [self.family.value, self.variant.value]
        if self.family is Family.RSA:
            parts.append(",".join(level.value for level in self.levels))
        return "/".join(parts)


@dataclass(frozen=True)
class ModelSettings:
    alpha: float = 1.0
    response_sd: float = 0.3
    beta_max: float = 10.0
    w_c_max: float = 5.0
    beta_prior: BetaPrior = DEFAULT_BETA_PRIOR


@dataclass(frozen=True)
class ParamVector:
    names: Tuple[str, ...]
    values: Tuple[float, ...]

    def __getitem__(self, name: str) -> float:
        try:
            return self.values[self.names.index(name)]
        except ValueError:
            raise KeyError(name)

    def get(self, name: str, default: float = None) -> float:
        return self[name] if name in self.names else default

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(self.names, self.values))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class ParameterSpace:
    names: Tuple[str, ...]
    lows: Tuple[float, ...]
    highs: Tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def low_array(self) -> np.ndarray:
        return np.asarray(self.lows, dtype=float)

    @property
    def high_array(self) -> np.ndarray:
        return np.asarray(self.highs, dtype=float)

    @property
    def widths(self) -> np.ndarray:
        return self.high_array - self.low_array

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.low_array) and np.all(x <= self.high_array))

    def vector(self, x: np.ndarray) -> ParamVector:
        return ParamVector(self.names, tuple(float(v) for v in x))

    def log_prior(self, x: np.ndarray) -> float:
        """Independent uniform priors over the box."""
        if not self.contains(x):
            return float("-inf")
        widths = self.widths
        return float(-np.sum(np.log(widths[widths > 0])))


def _group_names(prefix: str) -> List[str]:
    return [f"{prefix}[{group.value}]" for group in SPEAKER_GROUPS]


def parameter_space(spec: ModelSpec, settings: ModelSettings = ModelSettings()) -> ParameterSpace:
    """
    The prior box of a model.

    Args:
        spec: Model specification
        settings: Bounds for beta and w_c

    Returns:
        ParameterSpace listing names and bounds in a fixed order
    """
    bounds: List[Tuple[str, float, float]] = []
    components = spec.components
    if spec.family is Family.RSA:
        if any(c is not Component.J0 for c in components):
            bounds.append(("beta", 0.0, settings.beta_max))
        if Component.J2 in components:
            bounds.append(("w_c", 0.0, settings.w_c_max))
        if spec.variant is Variant.HETEROGENEOUS:
            bounds.append(("p_z", 0.0, 1.0))
            if len(components) == 3:
                bounds.append(("p_2", 0.0, 1.0))
        elif spec.variant is Variant.SPEAKER_DEPENDENT:
            bounds.extend((name, 0.0, 1.0) for name in _group_names("p_z"))
            if len(components) == 3:
                bounds.extend((name, 0.0, 1.0) for name in _group_names("p_2"))
    else:
        bounds.append(("B", 0.0, 10.0))
        if Component.MAS in components:
            bounds.append(("R", -1.0, 1.0))
        if spec.variant is Variant.HETEROGENEOUS:
            bounds.append(("p_z", 0.0, 1.0))
    bounds.append(("offset", -0.5, 0.5))
    names, lows, highs = zip(*bounds)
    return ParameterSpace(tuple(names), tuple(lows), tuple(highs))


def mixture_weights(p_z, p_2, n_components: int) -> np.ndarray:
    """
    Stick-breaking weights, lowest level first.

    With two components: (1 - p_z, p_z). With three: (1 - p_z, p_z (1 - p_2), p_z p_2).
    """
    p_z = np.asarray(p_z, dtype=float)
    if n_components == 1:
        return np.ones(p_z.shape + (1,))
    if n_components == 2:
        return np.stack([1.0 - p_z, p_z], axis=-1)
    p_2 = np.asarray(p_2, dtype=float)
    return np.stack([1.0 - p_z, p_z * (1.0 - p_2), p_z * p_2], axis=-1)


class ResponseModel:
    """A model specification bound to a dataset."""

    def __init__(self, spec: ModelSpec, records: Sequence[ResponseRecord], prior: WorldPrior,
                 settings: ModelSettings = ModelSettings()):
        self.logger = logging.getLogger(__name__)
        self.spec = spec
        self.prior = prior
        self.settings = settings
        self.records = list(records)
        self.space = parameter_space(spec, settings)

        grid = prior.grid
        self.y = np.array([r.y for r in self.records], dtype=float)
        self.evidence = np.array([r.evidence_1 for r in self.records], dtype=float)
        self.evidence_index = np.array([grid.index_of(r.evidence_1) for r in self.records], dtype=int)
        self.goal_index = np.array([GOALS.index(r.goal) for r in self.records], dtype=int)
        if spec.variant is Variant.SPEAKER_DEPENDENT:
            missing = [r.participant_id for r in self.records if r.speaker_group is None]
            if missing:
                raise ValidationError(f"records without a speaker group: {missing[:5]}")
            self.group_index = np.array([SPEAKER_GROUPS.index(r.speaker_group) for r in self.records],
                                        dtype=int)
        else:
            self.group_index = np.zeros(len(self.records), dtype=int)
        self._literal = literal_curve(prior)
        self.logger.debug(f"Bound {spec.label} to {len(self.records)} records")

    @property
    def n_data(self) -> int:
        return len(self.records)

    def _goal_curves(self, curve) -> np.ndarray:
        return np.stack([curve(goal) for goal in GOALS])

    def component_means(self, component: Component, params: ParamVector) -> np.ndarray:
        """
        Predicted belief that the sticks are longer, per record.

        Args:
            component: Which listener or adjustment model predicts
            params: Parameter values

        Returns:
            (records,) array of mu in [0, 1]
        """
        alpha = self.settings.alpha
        if component is Component.J0:
            return self._literal[self.evidence_index]
        if component is Component.J1:
            beta = params["beta"]
            table = self._goal_curves(lambda g: pragmatic_curve(self.prior, g, beta, alpha))
            return table[self.goal_index, self.evidence_index]
        if component is Component.J2:
            beta, w_c = params["beta"], params["w_c"]
            table = self._goal_curves(
                lambda g: level2_curve(self.prior, g, beta, w_c, self.settings.beta_prior, alpha))
            return table[self.goal_index, self.evidence_index]

        reference = params["R"] if component is Component.MAS else 0.0
        strength = evidence_strength(self.evidence, StrengthMap(params["B"], self.prior.grid.midpoint))
        toward_goal = np.where(self.goal_index == 0, strength, -strength)
        belief = adjust_update_array(np.full(self.n_data, 0.5), toward_goal, reference)
        return np.where(self.goal_index == 0, belief, 1.0 - belief)

    def weights(self, params: ParamVector) -> np.ndarray:
        """(records, components) mixture weights."""
        n_components = len(self.spec.components)
        if self.spec.variant is Variant.HOMOGENEOUS:
            return np.ones((self.n_data, 1))
        if self.spec.variant is Variant.HETEROGENEOUS:
            w = mixture_weights(params["p_z"], params.get("p_2", 0.0), n_components)
            return np.broadcast_to(w, (self.n_data, n_components))
        p_z = np.array([params[name] for name in _group_names("p_z")])
        p_2 = np.array([params.get(name, 0.0) for name in _group_names("p_2")])
        return mixture_weights(p_z, p_2, n_components)[self.group_index]

    def pointwise_log_likelihood(self, params: ParamVector) -> np.ndarray:
        """
        Per-record log density of y under the (mixture) Gaussian response model.

        Raises:
            LikelihoodError naming the first record whose density is not finite
        """
        offset = params["offset"]
        means = np.stack([self.component_means(c, params) for c in self.spec.components], axis=1)
        log_dens = norm.logpdf(self.y[:, None], loc=means + offset, scale=self.settings.response_sd)
        with np.errstate(divide="ignore"):
            pointwise = logsumexp(log_dens, b=self.weights(params), axis=1)
        bad = np.flatnonzero(~np.isfinite(pointwise))
        if bad.size:
            record = self.records[bad[0]]
            raise LikelihoodError(f"non-finite likelihood for participant {record.participant_id} "
                                  f"under {self.spec.label} at {params.as_dict()}")
        return pointwise

    def log_likelihood(self, params: ParamVector) -> Tuple[float, np.ndarray]:
        pointwise = self.pointwise_log_likelihood(params)
        return float(np.sum(pointwise)), pointwise

    def log_posterior(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        """Uniform prior plus log likelihood; -inf outside the prior box."""
        lp = self.space.log_prior(x)
        if not np.isfinite(lp):
            return lp, np.full(self.n_data, -np.inf)
        total, pointwise = self.log_likelihood(self.space.vector(x))
        return lp + total, pointwise


def predict_response(component: Component, params: ParamVector, record: ResponseRecord,
                     prior: WorldPrior, settings: ModelSettings = ModelSettings()) -> float:
    """
    Predicted belief in LONGER for one record under one model component.

    Args:
        component: J0, J1, J2, AA or MAS
        params: Parameter values (beta, w_c, B, R as needed)
        record: The participant's record
        prior: World prior
        settings: Alpha and inner beta prior

    Returns:
        mu in [0, 1], before the response offset
    """
    family = Family.RSA if component in LEVELS else (Family.MAS if component is Component.MAS else Family.AA)
    levels = (component,) if component in LEVELS else (Component.J0, Component.J1)
    model = ResponseModel(ModelSpec(family, Variant.HOMOGENEOUS, levels), [record], prior, settings)
    return float(model.component_means(component, params)[0])


def log_likelihood(spec: ModelSpec, params: ParamVector, records: Sequence[ResponseRecord],
                   prior: WorldPrior, settings: ModelSettings = ModelSettings()) -> Tuple[float, np.ndarray]:
    """Total and per-record log likelihood of the data."""
    return ResponseModel(spec, records, prior, settings).log_likelihood(params)
