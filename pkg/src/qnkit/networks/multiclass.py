"""Multiclass closed networks: exact MVA and the Bard-Schweitzer approximation."""

import math

import numpy as np

from ..errors import CapacityExceeded, InvalidModel, NoConvergence
from .model import NetworkSolution

DEFAULT_LATTICE_BUDGET = 2 ** 31


def _require_closed_multi(model):
    if model.kind != "closed":
        raise InvalidModel("expected a closed network model")
    if model.ld:
        raise InvalidModel("load-dependent centers are not supported for multiclass models")
    bad = np.flatnonzero(np.isfinite(model.m) & (model.m != 1))
    if bad.size:
        raise InvalidModel(f"center {bad[0]} has {model.m[bad[0]]:g} servers; "
                           "multiclass solvers support single-server and delay centers only")
    model.check_fcfs_class_independent()


def lattice_size(pop):
    return math.prod(int(n) + 1 for n in pop)


def lattice_levels(pop):
    """Feasible populations grouped by total job count.

    Returns ``(strides, levels)``: ``levels[n]`` is an integer array of shape
    ``(points, C)`` holding every population vector with ``n`` jobs, and the
    flat storage index of a vector ``v`` is ``v @ strides``.
    """
    pop = np.asarray(pop, dtype=np.int64)
    C = pop.size
    radix = pop + 1
    strides = np.ones(C, dtype=np.int64)
    for c in range(C - 2, -1, -1):
        strides[c] = strides[c + 1] * radix[c + 1]
    points = np.indices(tuple(radix)).reshape(C, -1).T
    total = points.sum(axis=1)
    order = np.argsort(total, kind="stable")
    cuts = np.searchsorted(total[order], np.arange(int(pop.sum()) + 2))
    levels = [points[order[cuts[n]:cuts[n + 1]]] for n in range(int(pop.sum()) + 1)]
    return strides, levels


def solve_closed_multi_mva(model, budget=DEFAULT_LATTICE_BUDGET):
    """Exact multiclass MVA over every feasible population vector.

    Populations are visited in nondecreasing total, so every
    ``Q(n - 1_c)`` read has been written on the previous level. Storage is
    one row of K queue lengths per lattice point.
    """
    _require_closed_multi(model)
    S, V, Z = model.S, model.V, model.Z
    pop = model.N
    C, K = S.shape
    size = lattice_size(pop)
    if size > budget:
        raise CapacityExceeded(size, budget)
    strides, levels = lattice_levels(pop)
    delay = np.isinf(model.m)
    store = np.full((size, K), np.nan)
    store[0] = 0.0
    R = np.broadcast_to(S, (1, C, K)).copy()
    X = np.zeros((1, C))
    for pts in levels[1:]:
        idx = pts @ strides
        R = np.empty((len(pts), C, K))
        for c in range(C):
            has = pts[:, c] > 0
            Qprev = np.zeros((len(pts), K))
            Qprev[has] = store[idx[has] - strides[c]]
            R[:, c, :] = S[c] * (1.0 + Qprev)
        R[:, :, delay] = S[:, delay]
        cycle = Z + np.einsum("pck,ck->pc", R, V)
        X = np.divide(pts, cycle, out=np.zeros(cycle.shape), where=pts > 0)
        store[idx] = np.einsum("pc,ck,pck->pk", X, V, R)
    R, X = R[-1], X[-1]
    Q = X[:, None] * V * R
    U = X[:, None] * S * V
    return NetworkSolution.from_centers(U, R, Q, X[:, None] * V, V)


def solve_closed_multi_bs(model, tol=1e-7, max_iter=100000):
    """Bard-Schweitzer approximate MVA.

    The queue length seen by an arriving class-c job is estimated as
    ``Q_i - Q_ci / N_c``. Iteration starts from ``Q_ci = N_c / K`` and stops
    when no queue length moves by ``tol`` or more. Raises
    :class:`NoConvergence` (carrying the last iterate) after ``max_iter``
    sweeps.
    """
    _require_closed_multi(model)
    S, V, Z = model.S, model.V, model.Z
    C, K = S.shape
    pop = model.N.astype(float)
    active = pop > 0
    inv_pop = np.divide(1.0, pop, out=np.zeros(C), where=active)
    delay = np.isinf(model.m)
    queueing = (~delay).astype(float)
    Q = np.repeat(pop[:, None] / K, K, axis=1)
    R = S.copy()
    X = np.zeros(C)
    residual = math.inf
    for it in range(1, max_iter + 1):
        seen = Q.sum(axis=0)[None, :] - Q * inv_pop[:, None]
        R = S * (1.0 + seen * queueing)
        X = pop / (Z + (V * R).sum(axis=1))
        Qn = X[:, None] * V * R
        residual = float(np.abs(Qn - Q).max())
        Q = Qn
        if residual < tol:
            break
    sol = NetworkSolution.from_centers(X[:, None] * S * V, R, Q, X[:, None] * V, V,
                                       approximate=True, iterations=it, residual=residual)
    if residual >= tol:
        raise NoConvergence(f"Bard-Schweitzer did not converge in {max_iter} iterations "
                            f"(residual {residual:.3g})", result=sol, residual=residual)
    return sol
