"""
Random-walk Metropolis-Hastings over a bounded parameter box.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from inference.models import ParameterSpace

# (log posterior, per-datum log likelihood)
LogDensity = Callable[[np.ndarray], Tuple[float, np.ndarray]]

ACCEPTANCE_RANGE = (0.05, 0.8)


@dataclass(frozen=True)
class MCMCConfig:
    chains: int = 4
    samples: int = 1000  # kept per chain
    burnin: int = 7500
    lag: int = 100
    seed: int = 0
    proposal_fraction: float = 0.05
    adapt_interval: int = 100
    target_acceptance: float = 0.3


@dataclass
class ChainResult:
    samples: np.ndarray  # (samples, dim)
    loglik: np.ndarray  # (samples, data)
    acceptance: float
    scales: np.ndarray


@dataclass
class SamplerResult:
    chains: List[ChainResult]

    @property
    def samples(self) -> np.ndarray:
        """Pooled samples, chain after chain."""
        return np.concatenate([c.samples for c in self.chains])

    @property
    def loglik_matrix(self) -> np.ndarray:
        return np.concatenate([c.loglik for c in self.chains])


def reflect(x: np.ndarray, lows: np.ndarray, highs: np.ndarray) -> np.ndarray:
    """Fold a point back into the box; keeps the proposal symmetric."""
    widths = highs - lows
    safe = np.where(widths > 0, widths, 1.0)
    period = 2.0 * safe
    shifted = np.mod(x - lows, period)
    folded = np.where(shifted > safe, period - shifted, shifted)
    return np.where(widths > 0, lows + folded, lows)


class MetropolisSampler:
    """Independent chains with per-chain seeded generators."""

    def __init__(self, log_density: LogDensity, space: ParameterSpace, config: MCMCConfig = MCMCConfig(),
                 start: Optional[np.ndarray] = None):
        self.log_density = log_density
        self.space = space
        self.config = config
        self.start = None if start is None else np.asarray(start, dtype=float)
        self.logger = logging.getLogger(__name__)

    def _chain(self, index: int, rng: np.random.Generator) -> ChainResult:
        cfg = self.config
        lows, highs = self.space.low_array, self.space.high_array
        widths = self.space.widths
        scales = cfg.proposal_fraction * widths

        if self.start is None:
            x = lows + rng.uniform(size=self.space.dim) * widths
        else:
            x = reflect(self.start, lows, highs)
        lp, ll = self.log_density(x)

        window_accepts = 0
        kept, kept_ll = [], []
        accepts = 0
        total_steps = cfg.burnin + cfg.samples * cfg.lag
        for step in range(total_steps):
            proposal = reflect(x + scales * rng.standard_normal(self.space.dim), lows, highs)
            new_lp, new_ll = self.log_density(proposal)
            if np.log(rng.uniform()) < new_lp - lp:
                x, lp, ll = proposal, new_lp, new_ll
                accepted = True
            else:
                accepted = False

            if step < cfg.burnin:
                window_accepts += accepted
                if (step + 1) % cfg.adapt_interval == 0:
                    rate = window_accepts / cfg.adapt_interval
                    scales = np.minimum(scales * np.exp(rate - cfg.target_acceptance), widths)
                    window_accepts = 0
                continue

            accepts += accepted
            if (step - cfg.burnin + 1) % cfg.lag == 0:
                kept.append(x.copy())
                kept_ll.append(np.array(ll, copy=True))

        acceptance = accepts / max(1, cfg.samples * cfg.lag)
        low, high = ACCEPTANCE_RANGE
        if not low <= acceptance <= high:
            self.logger.warning(f"Chain {index}: acceptance rate {acceptance:.3f} outside [{low}, {high}]")
        else:
            self.logger.info(f"Chain {index}: acceptance rate {acceptance:.3f}")
        return ChainResult(np.array(kept), np.array(kept_ll), acceptance, scales)

    def run(self) -> SamplerResult:
        """
        Run every chain.

        Returns:
            SamplerResult with post-burn-in, thinned samples and their per-datum log likelihoods
        """
        seeds = np.random.SeedSequence(self.config.seed).spawn(self.config.chains)
        chains = []
        for index, seed in enumerate(seeds):
            self.logger.info(f"Running chain {index + 1}/{self.config.chains}")
            chains.append(self._chain(index, np.random.default_rng(seed)))
        return SamplerResult(chains)


def mh_sample(log_density: LogDensity, space: ParameterSpace, config: MCMCConfig = MCMCConfig(),
              start: Optional[np.ndarray] = None) -> SamplerResult:
    return MetropolisSampler(log_density, space, config, start).run()
