"""
Information criteria from a (samples x data) log-likelihood matrix, on the deviance scale.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from errors import ValidationError

logger = logging.getLogger(__name__)

K_WARNING = 0.7
MIN_TAIL = 5


@dataclass
class Criterion:
    estimate: float
    se: float
    penalty: float
    pointwise: np.ndarray  # deviance-scale contribution per datum


@dataclass
class PsisResult(Criterion):
    pareto_k: np.ndarray = None
    fallback: np.ndarray = None  # True where truncated importance sampling was used


def _check(loglik: np.ndarray, min_samples: int) -> np.ndarray:
    loglik = np.asarray(loglik, dtype=float)
    if loglik.ndim != 2:
        raise ValidationError("log-likelihood matrix must be 2-D (samples x data)")
    if loglik.shape[0] < min_samples or loglik.shape[1] < 1:
        raise ValidationError(f"need at least {min_samples} sample(s) and one datum, got {loglik.shape}")
    return loglik


def lppd_pointwise(loglik: np.ndarray) -> np.ndarray:
    """log mean_s exp(ll[s, i])"""
    return logsumexp(loglik, axis=0) - np.log(loglik.shape[0])


def _standard_error(pointwise: np.ndarray) -> float:
    return float(np.sqrt(pointwise.size * np.var(pointwise)))


def waic(loglik: np.ndarray) -> Criterion:
    """
    WAIC = -2 * sum_i (lppd_i - p_i), p_i the posterior variance of ll[:, i].

    A single sample gives p_i = 0.
    """
    loglik = _check(loglik, 1)
    lppd = lppd_pointwise(loglik)
    if loglik.shape[0] > 1:
        penalty = np.var(loglik, axis=0, ddof=1)
    else:
        penalty = np.zeros(loglik.shape[1])
    pointwise = -2.0 * (lppd - penalty)
    return Criterion(float(np.sum(pointwise)), _standard_error(pointwise), float(np.sum(penalty)), pointwise)


def gpd_fit(x: np.ndarray):
    """
    Zhang-Stephens empirical Bayes fit of a generalized Pareto distribution to exceedances.

    Args:
        x: One-dimensional, non-negative exceedances over the tail cutoff

    Returns:
        (k, sigma) shape and scale estimates
    """
    y = np.sort(x)
    n = len(y)
    m = 30 + int(np.sqrt(n))
    b = 1 - np.sqrt(m / (np.arange(1, m + 1, dtype=float) - 0.5))
    b = b / (3 * y[int(n / 4 + 0.5) - 1]) + 1 / y[-1]
    k = np.mean(np.log1p(-b[:, None] * y), axis=1)
    profile = n * (np.log(-(b / k)) - k - 1)
    weights = 1 / np.sum(np.exp(profile - profile[:, None]), axis=1)
    weights = weights / weights.sum()
    b_post = np.sum(b * weights)
    k_post = np.mean(np.log1p(-b_post * y))
    sigma = -k_post / b_post
    # weakly informative prior pulling k towards 0.5
    k_post = (n * k_post + 10 * 0.5) / (n + 10)
    return float(k_post), float(sigma)


def gpd_quantile(p: np.ndarray, k: float, sigma: float) -> np.ndarray:
    if abs(k) < 1e-12:
        return -sigma * np.log1p(-p)
    return sigma * np.expm1(-k * np.log1p(-p)) / k


def smooth_log_weights(log_weights: np.ndarray):
    """
    Replace the largest 20% of importance weights with generalized Pareto quantiles.

    Args:
        log_weights: Unnormalized log importance ratios for one datum

    Returns:
        (smoothed log weights, k_hat, fallback flag)
    """
    S = log_weights.size
    lw = log_weights - np.max(log_weights)
    tail_len = int(np.floor(0.2 * S))

    if np.ptp(lw) == 0:
        return lw, 0.0, False
    if tail_len < MIN_TAIL:
        return _truncate(lw), np.nan, True

    order = np.argsort(lw)
    tail_index = order[-tail_len:]
    cutoff = lw[order[-tail_len - 1]]
    tail = np.exp(lw[tail_index])
    exceed = tail - np.exp(cutoff)
    if exceed[np.argsort(exceed)][int(tail_len / 4 + 0.5) - 1] <= 0 or exceed.max() <= 0:
        return _truncate(lw), np.nan, True

    k, sigma = gpd_fit(exceed)
    if not (np.isfinite(k) and np.isfinite(sigma) and sigma > 0):
        return _truncate(lw), np.nan, True

    probs = (np.arange(1, tail_len + 1) - 0.5) / tail_len
    smoothed = np.exp(cutoff) + gpd_quantile(probs, k, sigma)
    # largest raw weight is 1 after shifting by the max
    smoothed = np.minimum(smoothed, 1.0)
    out = lw.copy()
    out[tail_index] = np.log(smoothed)
    return out, k, False


def _truncate(lw: np.ndarray) -> np.ndarray:
    """Truncated importance sampling: cap weights at mean * sqrt(S)."""
    cap = logsumexp(lw) - np.log(lw.size) + 0.5 * np.log(lw.size)
    return np.minimum(lw, cap)


def psis_loo(loglik: np.ndarray) -> PsisResult:
    """
    Pareto-smoothed importance-sampling leave-one-out, on the deviance scale.

    Returns:
        PsisResult with the estimate, its standard error, p_loo and per-datum k_hat
    """
    loglik = _check(loglik, 2)
    n = loglik.shape[1]
    elpd = np.empty(n)
    ks = np.empty(n)
    fallback = np.zeros(n, dtype=bool)
    for i in range(n):
        smoothed, ks[i], fallback[i] = smooth_log_weights(-loglik[:, i])
        elpd[i] = logsumexp(smoothed + loglik[:, i]) - logsumexp(smoothed)

    if fallback.any():
        logger.warning(f"PSIS tail too short or degenerate for {int(fallback.sum())} datum/data; "
                       f"used truncated importance sampling")
    high = np.flatnonzero(ks > K_WARNING)
    if high.size:
        logger.warning(f"Pareto k above {K_WARNING} for {high.size} datum/data (indices {high[:10].tolist()})")

    pointwise = -2.0 * elpd
    penalty = float(np.sum(lppd_pointwise(loglik) - elpd))
    return PsisResult(float(np.sum(pointwise)), _standard_error(pointwise), penalty, pointwise,
                      pareto_k=ks, fallback=fallback)
