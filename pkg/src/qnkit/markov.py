"""Discrete- and continuous-time Markov chain analysis.

Matrices are dense ``numpy`` arrays. DTMCs are given by a row-stochastic
transition matrix ``P``, CTMCs by an infinitesimal generator ``Q`` whose rows
sum to zero. Probability vectors are row vectors.
"""

import numpy as np
from scipy.stats import poisson

from ._linalg import solve_checked
from .errors import (
    DimensionMismatch,
    InvalidMatrix,
    InvalidRates,
    NoAbsorbingState,
    NonUniqueStationary,
    ReducibleChain,
    SingularFundamentalMatrix,
)

ROW_SUM_ATOL = 1e-8
CLAMP_ATOL = 1e-12
POISSON_TAIL = 1e-12
DTMC_ABSORBING_ATOL = 1e-10
CTMC_ABSORBING_ATOL = 1e-12

__all__ = [
    "check_stochastic",
    "check_generator",
    "check_probability",
    "dtmc_solve",
    "ctmc_solve",
    "dtmc_bd",
    "ctmc_bd",
    "dtmc_mtta",
    "ctmc_mtta",
    "dtmc_fpt",
    "ctmc_fpt",
    "dtmc_exps",
    "ctmc_exps",
    "uniformization_weights",
]


def _square(M, name):
    M = np.array(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InvalidMatrix(f"{name} must be a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidMatrix(f"{name} contains non-finite entries")
    return M


def check_stochastic(P):
    """Return ``P`` as a validated float array (tiny negatives clamped to 0)."""
    P = _square(P, "P")
    P[(P < 0) & (P >= -CLAMP_ATOL)] = 0.0
    if np.any(P < 0):
        raise InvalidMatrix("transition matrix has negative entries")
    sums = P.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_ATOL)
    if bad.size:
        i = bad[0]
        raise InvalidMatrix(f"row {i} of the transition matrix sums to {sums[i]!r}, not 1")
    return P


def check_generator(Q):
    """Return ``Q`` as a validated float array (tiny negative rates clamped to 0)."""
    Q = _square(Q, "Q")
    off = ~np.eye(Q.shape[0], dtype=bool)
    Q[off & (Q < 0) & (Q >= -CLAMP_ATOL)] = 0.0
    if np.any(Q[off] < 0):
        raise InvalidMatrix("generator has negative off-diagonal rates")
    sums = Q.sum(axis=1)
    scale = max(1.0, np.abs(Q).max())
    bad = np.flatnonzero(np.abs(sums) > ROW_SUM_ATOL * scale)
    if bad.size:
        i = bad[0]
        raise InvalidMatrix(f"row {i} of the generator sums to {sums[i]!r}, not 0")
    return Q


def check_probability(p, n=None, name="p0"):
    p = np.array(p, dtype=float).ravel()
    if n is not None and p.size != n:
        raise DimensionMismatch(f"{name} has {p.size} entries, expected {n}")
    p[(p < 0) & (p >= -CLAMP_ATOL)] = 0.0
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidMatrix(f"{name} has negative or non-finite entries")
    if abs(p.sum() - 1.0) > ROW_SUM_ATOL:
        raise InvalidMatrix(f"{name} sums to {p.sum()!r}, not 1")
    return p


def _stationary(A):
    # A is P - I (DTMC) or Q (CTMC); solve pi A = 0 with the last balance
    # equation replaced by the normalization.
    n = A.shape[0]
    M = A.T.copy()
    M[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = solve_checked(M, b, NonUniqueStationary,
                       "stationary distribution is not unique (several recurrent classes)")
    pi[np.abs(pi) < CLAMP_ATOL] = 0.0
    return pi


def dtmc_solve(P, horizon=None, p0=None):
    """State occupancy probabilities of a DTMC.

    With ``horizon`` the transient vector ``p0 @ P**horizon`` is returned,
    otherwise the stationary distribution.
    """
    P = check_stochastic(P)
    n = P.shape[0]
    if horizon is None:
        return _stationary(P - np.eye(n))
    if p0 is None:
        raise DimensionMismatch("transient analysis needs an initial vector p0")
    if horizon < 0 or int(horizon) != horizon:
        raise InvalidMatrix(f"horizon must be a non-negative integer, got {horizon!r}")
    p = check_probability(p0, n)
    return p @ np.linalg.matrix_power(P, int(horizon))


def uniformization_weights(rate_time):
    """Poisson(k; rate_time) for k = 0..R, where the tail beyond R is below 1e-12.

    Returns ``(pmf, sf)`` where ``sf[k] = Pr{N > k}``.
    """
    if rate_time <= 0:
        return np.ones(1), np.zeros(1)
    R = int(poisson.isf(POISSON_TAIL, rate_time)) + 1
    k = np.arange(R + 1)
    return poisson.pmf(k, rate_time), poisson.sf(k, rate_time)


def _uniformized(Q):
    lam = float(np.max(-np.diag(Q)))
    if lam <= 0:
        return 0.0, None
    return lam, np.eye(Q.shape[0]) + Q / lam


def ctmc_solve(Q, horizon=None, p0=None):
    """State occupancy probabilities of a CTMC.

    With ``horizon`` the transient vector ``p0 @ expm(Q * horizon)`` is
    computed by uniformization, otherwise the stationary distribution.
    """
    Q = check_generator(Q)
    n = Q.shape[0]
    if horizon is None:
        return _stationary(Q)
    if p0 is None:
        raise DimensionMismatch("transient analysis needs an initial vector p0")
    if horizon < 0:
        raise InvalidMatrix(f"horizon must be non-negative, got {horizon!r}")
    p = check_probability(p0, n)
    lam, Pu = _uniformized(Q)
    if lam == 0.0 or horizon == 0:
        return p
    pmf, _ = uniformization_weights(lam * horizon)
    out = pmf[0] * p
    v = p
    for w in pmf[1:]:
        v = v @ Pu
        out += w * v
    return out


def _bd_vectors(b, d):
    b = np.atleast_1d(np.asarray(b, dtype=float))
    d = np.atleast_1d(np.asarray(d, dtype=float))
    if b.ndim != 1 or d.ndim != 1 or b.size != d.size:
        raise InvalidRates(f"birth and death vectors must have equal length, got {b.size} and {d.size}")
    if np.any(b < 0) or np.any(d < 0) or not (np.all(np.isfinite(b)) and np.all(np.isfinite(d))):
        raise InvalidRates("birth and death rates must be finite and non-negative")
    return b, d


def dtmc_bd(b, d):
    """Transition matrix of an (N+1)-state birth-death DTMC."""
    b, d = _bd_vectors(b, d)
    n = b.size + 1
    P = np.diag(b, 1) + np.diag(d, -1)
    diag = 1.0 - P.sum(axis=1)
    if np.any(diag < -ROW_SUM_ATOL):
        i = int(np.argmin(diag))
        raise InvalidRates(f"outgoing probabilities of state {i} exceed 1")
    P[np.arange(n), np.arange(n)] = np.clip(diag, 0.0, None)
    return P


def ctmc_bd(b, d):
    """Generator of an (N+1)-state birth-death CTMC."""
    b, d = _bd_vectors(b, d)
    Q = np.diag(b, 1) + np.diag(d, -1)
    Q -= np.diag(Q.sum(axis=1))
    return Q


def _dtmc_absorbing(P):
    return np.diag(P) >= 1.0 - DTMC_ABSORBING_ATOL


def _ctmc_absorbing(Q):
    return np.all(np.abs(Q) <= CTMC_ABSORBING_ATOL, axis=1)


def _transient_solve(A, rhs, absorbing):
    if not absorbing.any():
        raise NoAbsorbingState("the chain has no absorbing state")
    return solve_checked(A, rhs, SingularFundamentalMatrix,
                         "absorption is not reachable from every transient state")


def dtmc_mtta(P, p0):
    """Mean number of steps before absorption, starting from ``p0``."""
    P = check_stochastic(P)
    p = check_probability(p0, P.shape[0])
    absorbing = _dtmc_absorbing(P)
    t = ~absorbing
    if not absorbing.any():
        raise NoAbsorbingState("the chain has no absorbing state")
    if not t.any():
        return 0.0
    Pt = P[np.ix_(t, t)]
    steps = _transient_solve(np.eye(t.sum()) - Pt, np.ones(t.sum()), absorbing)
    return float(p[t] @ steps)


def ctmc_mtta(Q, p0):
    """Mean time before absorption, starting from ``p0``."""
    Q = check_generator(Q)
    p = check_probability(p0, Q.shape[0])
    absorbing = _ctmc_absorbing(Q)
    t = ~absorbing
    if not absorbing.any():
        raise NoAbsorbingState("the chain has no absorbing state")
    if not t.any():
        return 0.0
    times = _transient_solve(-Q[np.ix_(t, t)], np.ones(t.sum()), absorbing)
    return float(p[t] @ times)


def dtmc_fpt(P):
    """Mean first passage times ``M[i, j]`` from state i to state j.

    The diagonal holds mean recurrence times.
    """
    P = check_stochastic(P)
    n = P.shape[0]
    M = np.empty((n, n))
    eye = np.eye(n)
    for j in range(n):
        A = P.copy()
        A[:, j] = 0.0
        M[:, j] = solve_checked(eye - A, np.ones(n), ReducibleChain,
                                f"state {j} is not reachable from every state")
    return M


def ctmc_fpt(Q):
    """Mean first passage times ``M[i, j]`` from state i to state j.

    The diagonal holds mean return times: the holding time in j plus the
    passage time back to j from wherever the chain jumps next.
    """
    Q = check_generator(Q)
    n = Q.shape[0]
    out_rate = -np.diag(Q)
    if np.any(out_rate <= 0):
        raise ReducibleChain("the chain has an absorbing state")
    M = np.zeros((n, n))
    for j in range(n):
        others = np.arange(n) != j
        A = Q[np.ix_(others, others)]
        M[others, j] = solve_checked(A, -np.ones(n - 1), ReducibleChain,
                                     f"state {j} is not reachable from every state")
        M[j, j] = (1.0 + Q[j, others] @ M[others, j]) / out_rate[j]
    return M


def dtmc_exps(P, p0, horizon=None, time_averaged=False):
    """Expected number of visits to each state.

    With a finite ``horizon`` n, visits at steps 0..n-1 are counted (so the
    entries sum to n). Without a horizon, the expected visits to transient
    states before absorption are returned (zero for absorbing states).
    """
    P = check_stochastic(P)
    n = P.shape[0]
    p = check_probability(p0, n)
    if horizon is None:
        if time_averaged:
            raise InvalidMatrix("time-averaged sojourn times need a finite horizon")
        absorbing = _dtmc_absorbing(P)
        t = ~absorbing
        L = np.zeros(n)
        if not absorbing.any():
            raise NoAbsorbingState("the chain has no absorbing state")
        if t.any():
            A = np.eye(t.sum()) - P[np.ix_(t, t)]
            L[t] = _transient_solve(A.T, p[t], absorbing)
        return L
    if horizon < 0 or int(horizon) != horizon:
        raise InvalidMatrix(f"horizon must be a non-negative integer, got {horizon!r}")
    L = np.zeros(n)
    v = p
    for _ in range(int(horizon)):
        L += v
        v = v @ P
    if time_averaged:
        if horizon == 0:
            raise InvalidMatrix("time-averaged sojourn times need a positive horizon")
        L /= horizon
    return L


def ctmc_exps(Q, p0, horizon=None, time_averaged=False):
    """Expected time spent in each state.

    With a finite ``horizon`` t, returns the integral of the state
    probabilities over [0, t]; without one, the expected time spent in
    each transient state before absorption.
    """
    Q = check_generator(Q)
    n = Q.shape[0]
    p = check_probability(p0, n)
    if horizon is None:
        if time_averaged:
            raise InvalidMatrix("time-averaged sojourn times need a finite horizon")
        absorbing = _ctmc_absorbing(Q)
        t = ~absorbing
        L = np.zeros(n)
        if not absorbing.any():
            raise NoAbsorbingState("the chain has no absorbing state")
        if t.any():
            L[t] = _transient_solve(-Q[np.ix_(t, t)].T, p[t], absorbing)
        return L
    if horizon < 0:
        raise InvalidMatrix(f"horizon must be non-negative, got {horizon!r}")
    lam, Pu = _uniformized(Q)
    if lam == 0.0:
        L = p * float(horizon)
    else:
        # integral of Poisson(k; lam u) over [0, t] is Pr{N(lam t) > k} / lam
        _, sf = uniformization_weights(lam * horizon)
        L = sf[0] * p
        v = p
        for w in sf[1:]:
            v = v @ Pu
            L += w * v
        L /= lam
    if time_averaged:
        if horizon == 0:
            raise InvalidMatrix("time-averaged sojourn times need a positive horizon")
        L /= horizon
    return L
