"""Random-variate samplers and maximum-likelihood fits.

Every sampler takes an explicit :class:`RngStream`; there is no module level
random state. A stream is keyed by ``(seed, stream_id)`` so that a batch of
realizations can use one independent stream each and still be reproduced
individually.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DataError, ParameterError

__all__ = [
    "RngStream",
    "CompositeSubpathLaw",
    "sample_poisson",
    "sample_composite_count",
    "sample_exponential",
    "sample_lognormal",
    "sample_normal",
    "sample_uniform",
    "sample_discrete_uniform",
    "discrete_exponential_pmf",
    "discrete_exponential_mean",
    "composite_pmf",
    "composite_log_likelihood",
    "fit_poisson_mle",
    "fit_composite_mle",
    "fit_exponential_mle",
    "fit_lognormal_mle",
]

_UINT64_MAX = 2**64 - 1


class RngStream:
    """Reproducible random stream identified by ``(seed, stream_id)``.

    Streams with the same seed but different ``stream_id`` are derived through
    :class:`numpy.random.SeedSequence` spawn keys, which gives statistically
    independent PCG64 sequences.
    """

    __slots__ = ("seed", "stream_id", "generator")

    def __init__(self, seed: int, stream_id: int = 0):
        for name, value in (("seed", seed), ("stream_id", stream_id)):
            if int(value) != value or not 0 <= value <= _UINT64_MAX:
                raise ParameterError(f"{name} must be a 64-bit unsigned integer, got {value!r}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class CompositeSubpathLaw:
    """Delta-at-zero plus discrete-exponential count law.

    ``P(0) = (1 - beta) + beta * P_DE(0)`` and ``P(k) = beta * P_DE(k)`` for
    ``k > 0``, where ``P_DE(k)`` is the mass an exponential of mean ``mu_s``
    places on ``[k, k + 1)``.

    ``mu_s_identified`` is False only for fits to all-zero data, where ``beta``
    is 0 and ``mu_s`` carries no information (stored as NaN).
    """

    beta: float
    mu_s: float
    mu_s_identified: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ParameterError(f"beta must lie in [0, 1], got {self.beta}")
        if self.mu_s_identified:
            if not self.mu_s > 0.0:
                raise ParameterError(f"mu_s must be positive, got {self.mu_s}")
        elif self.beta != 0.0:
            raise ParameterError("an unidentified mu_s requires beta = 0")

    def pmf(self, k):
        return composite_pmf(k, self.beta, self.mu_s)

    def mean(self) -> float:
        if self.beta == 0.0:
            return 0.0
        return self.beta * discrete_exponential_mean(self.mu_s)


def _check_positive(name: str, value: float) -> None:
    if not (value > 0.0 and math.isfinite(value)):
        raise ParameterError(f"{name} must be positive and finite, got {value}")


def sample_poisson(lam: float, rng: RngStream) -> int:
    if not (lam >= 0.0 and math.isfinite(lam)):
        raise ParameterError(f"Poisson rate must be non-negative, got {lam}")
    return int(rng.generator.poisson(lam))


def sample_composite_count(law: CompositeSubpathLaw, rng: RngStream) -> int:
    """Draw one count from a :class:`CompositeSubpathLaw`.

    The discrete-exponential branch is the floor of an exponential variate,
    which puts exactly ``integral_k^{k+1} exp(-x/mu)/mu dx`` on ``k``.
    """
    if law.beta == 0.0:
        return 0
    gen = rng.generator
    if gen.random() >= law.beta:
        return 0
    return int(math.floor(gen.exponential(law.mu_s)))


def sample_exponential(mu: float, rng: RngStream) -> float:
    _check_positive("exponential mean", mu)
    return float(rng.generator.exponential(mu))


def sample_lognormal(mu_log: float, sigma_log: float, rng: RngStream) -> float:
    """Lognormal draw; ``mu_log`` and ``sigma_log`` are moments of ``ln(x)``."""
    if not math.isfinite(mu_log):
        raise ParameterError(f"lognormal mu_log must be finite, got {mu_log}")
    _check_positive("lognormal sigma_log", sigma_log)
    return float(rng.generator.lognormal(mu_log, sigma_log))


def sample_normal(mu: float, sigma: float, rng: RngStream) -> float:
    if not (sigma >= 0.0 and math.isfinite(sigma)):
        raise ParameterError(f"normal std must be non-negative, got {sigma}")
    if sigma == 0.0:
        return float(mu)
    return float(rng.generator.normal(mu, sigma))


def sample_uniform(lo: float, hi: float, rng: RngStream) -> float:
    """Continuous uniform on ``[lo, hi)``."""
    if not lo <= hi:
        raise ParameterError(f"uniform bounds must satisfy lo <= hi, got ({lo}, {hi})")
    return float(rng.generator.uniform(lo, hi))


def sample_discrete_uniform(lo: int, hi: int, rng: RngStream) -> int:
    """Integer uniform on ``{lo, ..., hi}`` (both ends inclusive)."""
    if int(lo) != lo or int(hi) != hi:
        raise ParameterError("discrete uniform bounds must be integers")
    if not lo <= hi:
        raise ParameterError(f"discrete uniform bounds must satisfy lo <= hi, got ({lo}, {hi})")
    if lo == hi:
        return int(lo)
    return int(rng.generator.integers(lo, hi, endpoint=True))


def discrete_exponential_pmf(k, mu_s: float):
    """Mass of ``Exp(mu_s)`` on ``[k, k+1)``; vectorised over ``k``."""
    k = np.asarray(k, dtype=float)
    q = -math.expm1(-1.0 / mu_s)
    out = np.exp(-k / mu_s) * q
    return np.where(k >= 0, out, 0.0)


def discrete_exponential_mean(mu_s: float) -> float:
    """Closed form ``sum_k k P_DE(k) = 1 / (exp(1/mu_s) - 1)``."""
    return 1.0 / math.expm1(1.0 / mu_s)


def composite_pmf(k, beta: float, mu_s: float):
    k = np.asarray(k)
    if beta == 0.0:
        return np.where(k == 0, 1.0, 0.0)
    de = discrete_exponential_pmf(k, mu_s)
    return beta * de + np.where(k == 0, 1.0 - beta, 0.0)


def composite_log_likelihood(counts, beta: float, mu_s: float) -> float:
    """Joint log-PMF of ``counts`` under the composite law."""
    counts = np.asarray(counts, dtype=float)
    positive = counts[counts > 0]
    return _composite_ll(counts.size - positive.size, positive.size, float(positive.sum()), beta, mu_s)


def _composite_ll(n_zero: int, n_pos: int, pos_sum: float, beta: float, mu_s: float) -> float:
    q = -math.expm1(-1.0 / mu_s)
    ll = 0.0
    if n_zero:
        p0 = (1.0 - beta) + beta * q
        if p0 <= 0.0:
            return -math.inf
        ll += n_zero * math.log(p0)
    if n_pos:
        if beta <= 0.0:
            return -math.inf
        ll += n_pos * (math.log(beta) + math.log(q)) - pos_sum / mu_s
    return ll


def _as_nonempty(samples, name: str) -> np.ndarray:
    arr = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float)
    if arr.size == 0:
        raise DataError(f"{name} needs at least one sample")
    return arr


def fit_poisson_mle(counts: Sequence[int]) -> float:
    """Poisson rate MLE, which is the sample mean."""
    arr = _as_nonempty(counts, "Poisson fit")
    if np.any(arr < 0):
        raise DataError("Poisson counts must be non-negative")
    return float(arr.mean())


def fit_composite_mle(
    counts: Sequence[int],
    tol: float = 1e-4,
    mu_bounds: tuple[float, float] = (1e-3, 1e3),
) -> CompositeSubpathLaw:
    """Joint MLE of ``(beta, mu_s)`` by bounded grid search with zoom refinement.

    A coarse grid over ``beta`` in [0, 1] and ``log(mu_s)`` over ``mu_bounds``
    is refined around the best cell until both step sizes drop below ``tol``
    (absolute for beta, relative for mu_s).
    """
    arr = _as_nonempty(counts, "composite fit")
    if np.any(arr < 0) or np.any(arr != np.floor(arr)):
        raise DataError("composite counts must be non-negative integers")
    if not np.any(arr > 0):
        return CompositeSubpathLaw(beta=0.0, mu_s=math.nan, mu_s_identified=False)

    positive = arr[arr > 0]
    n_pos, pos_sum = positive.size, float(positive.sum())
    n_zero = arr.size - n_pos

    def ll(b, log_mu):
        return _composite_ll(n_zero, n_pos, pos_sum, b, math.exp(log_mu))

    b_lo, b_hi = 0.0, 1.0
    m_lo, m_hi = math.log(mu_bounds[0]), math.log(mu_bounds[1])
    n_grid = 41
    best = (-math.inf, 1.0, 0.0)
    while True:
        betas = np.linspace(b_lo, b_hi, n_grid)
        log_mus = np.linspace(m_lo, m_hi, n_grid)
        for b in betas:
            for lm in log_mus:
                val = ll(b, lm)
                if val > best[0]:
                    best = (val, float(b), float(lm))
        b_step = (b_hi - b_lo) / (n_grid - 1)
        m_step = (m_hi - m_lo) / (n_grid - 1)
        if b_step < tol and m_step < tol:
            break
        _, b_best, m_best = best
        b_lo, b_hi = max(0.0, b_best - 2 * b_step), min(1.0, b_best + 2 * b_step)
        m_lo = max(math.log(mu_bounds[0]), m_best - 2 * m_step)
        m_hi = min(math.log(mu_bounds[1]), m_best + 2 * m_step)
        n_grid = 11
    _, b_best, m_best = best
    return CompositeSubpathLaw(beta=b_best, mu_s=math.exp(m_best))


def _as_positive(samples, name: str) -> np.ndarray:
    arr = _as_nonempty(samples, name)
    if np.any(~(arr > 0)):
        raise DataError(f"{name} requires strictly positive samples")
    return arr


def fit_exponential_mle(samples: Sequence[float]) -> float:
    return float(_as_positive(samples, "exponential fit").mean())


def fit_lognormal_mle(samples: Sequence[float]) -> tuple[float, float]:
    """Return ``(mu_log, sigma_log)``: mean and ML (ddof=0) std of ``ln(x)``."""
    logs = np.log(_as_positive(samples, "lognormal fit"))
    return float(logs.mean()), float(logs.std())
