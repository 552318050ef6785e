"""Steady-state analysis of single-station queueing systems.

Each ``qs_*`` function returns a :class:`StationMetrics`. Markovian systems
accept an optional sequence ``k`` of queue lengths and then also return the
marginal probabilities ``pk[j] = Pr{k[j] jobs in the system}``.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    InvalidCapacity,
    InvalidInput,
    InvalidPhases,
    InvalidServerCount,
    Unstable,
    UnsupportedMetric,
)

__all__ = [
    "StationMetrics",
    "qs_mm1",
    "qs_mmm",
    "qs_mminf",
    "qs_mm1k",
    "qs_mmmk",
    "qs_mg1",
    "qs_mh1",
    "qs_ammm",
    "erlang_sum",
]


@dataclass
class StationMetrics:
    U: float
    R: float
    Q: float
    X: float
    p0: float
    pK: Optional[float] = None
    pk: Optional[np.ndarray] = None
    approximate: bool = False

    def as_dict(self):
        d = {"U": self.U, "R": self.R, "Q": self.Q, "X": self.X, "p0": self.p0}
        if self.pK is not None:
            d["pK"] = self.pK
        if self.pk is not None:
            d["pk"] = [float(v) for v in self.pk]
        if self.approximate:
            d["approximate"] = True
        return d


def _positive(name, value):
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise InvalidInput(f"{name} must be positive and finite, got {value!r}")
    return value


def _kvec(k):
    k = np.atleast_1d(np.asarray(k))
    if k.size and (np.any(k < 0) or np.any(k != np.floor(k))):
        raise InvalidInput("queue lengths k must be non-negative integers")
    return k.astype(np.int64)


def erlang_sum(a, n):
    """``sum(a**j / j! for j in 0..n)`` evaluated by Horner's rule."""
    s = 1.0
    for j in range(n, 0, -1):
        s = 1.0 + a / j * s
    return s


def qs_mm1(lam, mu, k=None):
    lam, mu = _positive("lambda", lam), _positive("mu", mu)
    rho = lam / mu
    if rho >= 1:
        raise Unstable(f"M/M/1 unstable: lambda={lam} >= mu={mu}")
    pk = None
    if k is not None:
        pk = (1 - rho) * rho ** _kvec(k).astype(float)
    return StationMetrics(U=rho, R=1 / (mu - lam), Q=rho / (1 - rho), X=lam,
                          p0=1 - rho, pk=pk)


def qs_mmm(lam, mu, m, k=None):
    """M/M/m queue with ``m`` identical servers of rate ``mu``."""
    lam, mu = _positive("lambda", lam), _positive("mu", mu)
    if m < 1 or int(m) != m:
        raise InvalidServerCount(f"server count must be a positive integer, got {m!r}")
    m = int(m)
    a = lam / mu
    rho = a / m
    if rho >= 1:
        raise Unstable(f"M/M/{m} unstable: lambda={lam} >= m*mu={m * mu}")
    # a**m / m! as a running product, avoids huge factorials
    am = 1.0
    for j in range(1, m + 1):
        am *= a / j
    p0 = 1.0 / (erlang_sum(a, m - 1) + am / (1 - rho))
    wait_prob = am / (1 - rho) * p0
    Q = a + wait_prob * rho / (1 - rho)
    pk = None
    if k is not None:
        kk = _kvec(k)
        log_p0, log_a = math.log(p0), math.log(a)
        log_am = math.log(am) if am > 0 else -math.inf
        pk = np.array([
            math.exp(log_p0 + j * log_a - math.lgamma(j + 1)) if j <= m
            else math.exp(log_p0 + log_am + (j - m) * math.log(rho))
            for j in kk
        ])
    return StationMetrics(U=rho, R=Q / lam, Q=Q, X=lam, p0=p0, pk=pk)


def qs_mminf(lam, mu, k=None):
    lam, mu = _positive("lambda", lam), _positive("mu", mu)
    a = lam / mu
    pk = None
    if k is not None:
        kk = _kvec(k)
        pk = np.exp(-a + kk * math.log(a) - np.array([math.lgamma(j + 1) for j in kk]))
    return StationMetrics(U=a, R=1 / mu, Q=a, X=lam, p0=math.exp(-a), pk=pk)


def _finite_bd(lam, mu, m, K, k):
    states = np.arange(K + 1)
    servers = np.minimum(states[1:], m)
    log_w = np.concatenate([[0.0], np.cumsum(np.log(lam / (servers * mu)))])
    w = np.exp(log_w - log_w.max())
    pi = w / w.sum()
    X = lam * (1 - pi[K])
    Q = float(states @ pi)
    U = float(np.minimum(states, m) @ pi) / m
    pk = None
    if k is not None:
        kk = _kvec(k)
        pk = np.where(kk <= K, pi[np.minimum(kk, K)], 0.0)
    return StationMetrics(U=U, R=Q / X, Q=Q, X=X, p0=float(pi[0]), pK=float(pi[K]), pk=pk)


def qs_mm1k(lam, mu, K, k=None):
    """M/M/1/K queue: at most ``K`` jobs in the system, arrivals beyond that are lost."""
    lam, mu = _positive("lambda", lam), _positive("mu", mu)
    if K < 1 or int(K) != K:
        raise InvalidCapacity(f"capacity must be a positive integer, got {K!r}")
    return _finite_bd(lam, mu, 1, int(K), k)


def qs_mmmk(lam, mu, m, K, k=None):
    lam, mu = _positive("lambda", lam), _positive("mu", mu)
    if m < 1 or int(m) != m:
        raise InvalidServerCount(f"server count must be a positive integer, got {m!r}")
    if int(K) != K or K < m:
        raise InvalidCapacity(f"capacity K={K!r} must be an integer >= m={m}")
    return _finite_bd(lam, mu, int(m), int(K), k)


def qs_mg1(lam, mean_s, scv, k=None):
    """M/G/1 queue by the Pollaczek-Khinchine formula.

    ``scv`` is the squared coefficient of variation of the service time.
    """
    if k is not None:
        raise UnsupportedMetric("marginal probabilities are only available for Markovian queues")
    lam, mean_s = _positive("lambda", lam), _positive("mean service time", mean_s)
    if not (scv >= 0 and math.isfinite(scv)):
        raise InvalidInput(f"scv must be non-negative, got {scv!r}")
    rho = lam * mean_s
    if rho >= 1:
        raise Unstable(f"M/G/1 unstable: utilization {rho} >= 1")
    Q = rho + rho * rho * (1 + scv) / (2 * (1 - rho))
    return StationMetrics(U=rho, R=Q / lam, Q=Q, X=lam, p0=1 - rho)


def _hyperexp_moments(mu, alpha):
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    if mu.ndim != 1 or mu.shape != alpha.shape or mu.size == 0:
        raise InvalidPhases("mu and alpha must be non-empty vectors of equal length")
    if np.any(mu <= 0) or not np.all(np.isfinite(mu)):
        raise InvalidPhases("phase rates must be positive")
    if np.any(alpha < 0) or abs(alpha.sum() - 1) > 1e-9:
        raise InvalidPhases("phase probabilities must be non-negative and sum to 1")
    m1 = float(alpha @ (1 / mu))
    m2 = float(alpha @ (2 / mu ** 2))
    return m1, m2 / m1 ** 2 - 1


def qs_mh1(lam, mu, alpha, k=None):
    """M/H_m/1 queue: phase ``i`` with rate ``mu[i]`` is chosen with probability ``alpha[i]``."""
    mean_s, scv = _hyperexp_moments(mu, alpha)
    return qs_mg1(lam, mean_s, max(scv, 0.0), k)


def qs_ammm(lam, mu, k=None):
    """Asymmetric M/M/m queue with per-server rates ``mu``.

    Approximation: the service time is taken as the equiprobable mixture of
    the server rates, and the Pollaczek-Khinchine formula is applied to a
    single server running at the pooled rate ``sum(mu)`` with that mixture's
    coefficient of variation. Results are flagged ``approximate``.
    """
    if k is not None:
        raise UnsupportedMetric("marginal probabilities are only available for Markovian queues")
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if mu.size == 0 or np.any(mu <= 0):
        raise InvalidPhases("server rates must be positive")
    lam = _positive("lambda", lam)
    total = float(mu.sum())
    if lam >= total:
        raise Unstable(f"asymmetric M/M/{mu.size} unstable: lambda={lam} >= sum(mu)={total}")
    _, scv = _hyperexp_moments(mu, np.full(mu.size, 1 / mu.size))
    out = qs_mg1(lam, 1 / total, max(scv, 0.0))
    out.approximate = mu.size > 1
    return out
