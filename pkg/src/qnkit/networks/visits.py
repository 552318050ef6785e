"""Visit ratios from routing probabilities.

Routing matrices are ``K x K`` (single class) or ``C x K x C x K`` with
entry ``[r, i, s, j]`` the probability that a class-r job leaving center i
moves to center j as class s. Class switching is not supported.
"""

import numpy as np

from .._linalg import solve_checked
from ..errors import InvalidMatrix, InvalidModel, ReducibleRouting, SingularRouting

ROW_ATOL = 1e-9


def _routing(P):
    P = np.array(P, dtype=float)
    if P.ndim == 4:
        C, K = P.shape[:2]
        if P.shape != (C, K, C, K):
            raise InvalidMatrix(f"multiclass routing must have shape (C, K, C, K), got {P.shape}")
        for r in range(C):
            for s in range(C):
                if r != s and np.any(P[r, :, s, :] != 0):
                    raise InvalidModel("class switching is not supported")
        return [P[c, :, c, :] for c in range(C)], True
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise InvalidMatrix(f"routing matrix must be square, got shape {P.shape}")
    return [P], False


def _check_rows(P, closed):
    if np.any(P < 0) or not np.all(np.isfinite(P)):
        raise InvalidMatrix("routing probabilities must be finite and non-negative")
    sums = P.sum(axis=1)
    if closed:
        # all-zero rows mark centers the chain never visits
        bad = np.flatnonzero((np.abs(sums - 1) > ROW_ATOL) & (sums > ROW_ATOL))
    else:
        bad = np.flatnonzero(sums > 1 + ROW_ATOL)
    if bad.size:
        raise InvalidMatrix(f"routing row {bad[0]} sums to {sums[bad[0]]!r}")


def _open_single(P, lam_in):
    lam_in = np.asarray(lam_in, dtype=float).ravel()
    K = P.shape[0]
    if lam_in.size != K or np.any(lam_in < 0):
        raise InvalidMatrix(f"external arrivals must be {K} non-negative rates")
    total = lam_in.sum()
    if total <= 0:
        raise InvalidMatrix("total external arrival rate must be positive")
    V = solve_checked(np.eye(K) - P.T, lam_in / total, SingularRouting,
                      "some jobs never leave the network")
    if np.any(V < -1e-9):
        raise SingularRouting("routing yields negative visit ratios")
    return np.clip(V, 0.0, None)


def visits_open(P, lam_in):
    """Visit ratios of an open network.

    ``lam_in[i]`` is the external arrival rate at center ``i`` (``[c][i]``
    for multiclass routing). Row deficits of ``P`` are exit probabilities.
    """
    mats, multi = _routing(P)
    for M in mats:
        _check_rows(M, closed=False)
    if not multi:
        return _open_single(mats[0], lam_in)
    lam_in = np.asarray(lam_in, dtype=float)
    return np.array([_open_single(M, lam_in[c]) for c, M in enumerate(mats)])


def _closed_single(P, r):
    K = P.shape[0]
    if not 0 <= r < K:
        raise InvalidModel(f"reference station {r} out of range")
    A = P.T - np.eye(K)
    A[r, :] = 0.0
    A[r, r] = 1.0
    b = np.zeros(K)
    b[r] = 1.0
    V = solve_checked(A, b, ReducibleRouting, "routing matrix is reducible")
    if np.any(V < -1e-9):
        raise ReducibleRouting("routing yields negative visit ratios")
    return np.clip(V, 0.0, None)


def visits_closed(P, r=0):
    """Visit ratios of a closed network, normalized so that ``V[r] == 1``.

    Centers are 0-based; ``r`` defaults to the first center. For multiclass
    routing ``r`` may be a per-class sequence.
    """
    mats, multi = _routing(P)
    for M in mats:
        _check_rows(M, closed=True)
    if not multi:
        return _closed_single(mats[0], r)
    refs = np.broadcast_to(np.asarray(r), (len(mats),))
    return np.array([_closed_single(M, int(refs[c])) for c, M in enumerate(mats)])
