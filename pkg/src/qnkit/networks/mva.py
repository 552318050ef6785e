"""Exact single-class Mean Value Analysis."""

import warnings

import numpy as np

from ..errors import InvalidModel, NumericalUnderflow
from .model import NetworkSolution

CLAMP_WARN = 1e-6


def _require_closed_single(model):
    if model.kind != "closed":
        raise InvalidModel("expected a closed network model")
    if model.n_classes != 1:
        raise InvalidModel("expected a single-class model")


def _multiserver_table(S, m, N):
    j = np.arange(1, N + 1)
    return S / np.minimum(j, m)


def _mva(S, V, Z, N, delay, tables, want_marginals=False):
    """Core recursion over n = 1..N.

    ``tables`` maps a center index to its load-dependent service times
    ``S_i(1..N)``; those centers are handled through marginal queue-length
    probabilities, the others with the arrival-theorem update.
    """
    K = S.size
    Q = np.zeros(K)
    R = S.copy()
    X = 0.0
    ld = sorted(tables)
    fixed = ~delay.copy()
    fixed[ld] = False
    # p[i][j] = Pr{j jobs at center i | n jobs in the network}
    p = {i: np.zeros(N + 1) for i in ld}
    for i in ld:
        p[i][0] = 1.0
    j = np.arange(1, N + 1)
    worst_clamp = 0.0
    for n in range(1, N + 1):
        R[fixed] = S[fixed] * (1 + Q[fixed])
        R[delay] = S[delay]
        for i in ld:
            R[i] = float(j[:n] @ (tables[i][:n] * p[i][:n]))
        X = n / (Z + V @ R)
        Q = X * V * R
        for i in ld:
            prev = p[i]
            cur = np.zeros(N + 1)
            cur[1:n + 1] = X * V[i] * tables[i][:n] * prev[:n]
            idle = 1.0 - cur[1:n + 1].sum()
            clamped = min(max(idle, 0.0), 1.0)
            worst_clamp = max(worst_clamp, abs(clamped - idle))
            cur[0] = clamped
            p[i] = cur
    msgs = []
    if worst_clamp > CLAMP_WARN:
        msg = (f"idle probability of a load-dependent center clamped by {worst_clamp:.3g}; "
               "results may be inaccurate")
        warnings.warn(msg, NumericalUnderflow, stacklevel=3)
        msgs.append(msg)
    marg = {i: p[i] for i in ld} if want_marginals else None
    return R, Q, X, {i: p[i][0] for i in ld}, marg, msgs


def _finish(model, R, Q, X, idle, marg, msgs):
    S, V = model.S[0], model.V[0]
    m = model.m
    U = X * V * S / np.where(np.isfinite(m), m, 1.0)
    for i, p0 in idle.items():
        if i in model.ld:
            U[i] = 1.0 - p0
    return NetworkSolution.from_centers(U, R, Q, X * V, model.V, marginals=marg,
                                        warnings=msgs)


def _zero(model):
    S = model.S[0]
    K = S.size
    marg = {i: np.ones(1) for i in model.ld} or None
    return NetworkSolution.from_centers(np.zeros(K), S.copy(), np.zeros(K), np.zeros(K),
                                        model.V, marginals=marg)


def solve_closed_single_mva(model):
    """Exact MVA for single-class closed networks.

    Centers may be single-server, multi-server (folded into the
    load-dependent recursion with ``S_i(j) = S_i / min(j, m_i)``) or delay
    centers. Utilizations of multi-server centers are per server.
    """
    _require_closed_single(model)
    if model.ld:
        return solve_closed_single_mva_ld(model)
    N = int(model.N[0])
    if N == 0:
        return _zero(model)
    S, V = model.S[0].copy(), model.V[0]
    delay = np.isinf(model.m)
    tables = {i: _multiserver_table(S[i], model.m[i], N)
              for i in range(S.size) if not delay[i] and model.m[i] > 1}
    return _finish(model, *_mva(S, V, float(model.Z[0]), N, delay, tables))


def solve_closed_single_mva_ld(model, marginals=False):
    """Exact MVA with general load-dependent centers.

    ``model.ld[i]`` lists ``S_i(1), ..., S_i(N)``, the mean service time at
    center ``i`` when it holds ``j`` jobs. Utilization of a load-dependent
    center is its busy probability ``1 - p_i(0|N)``. With ``marginals``
    the queue-length distributions ``p_i(j|N)`` of those centers are
    returned in ``solution.marginals``.
    """
    _require_closed_single(model)
    N = int(model.N[0])
    if N == 0:
        return _zero(model)
    S, V = model.S[0].copy(), model.V[0]
    delay = np.isinf(model.m)
    tables = {}
    for i in range(S.size):
        if i in model.ld:
            t = model.ld[i]
            if t.size < N:
                raise InvalidModel(f"center {i} needs {N} load-dependent service times, got {t.size}")
            if delay[i]:
                raise InvalidModel(f"center {i} cannot be both load-dependent and a delay center")
            tables[i] = t[:N]
            S[i] = t[0]
        elif not delay[i] and model.m[i] > 1:
            tables[i] = _multiserver_table(S[i], model.m[i], N)
    R, Q, X, idle, marg, msgs = _mva(S, V, float(model.Z[0]), N, delay, tables, marginals)
    if marg is not None:
        marg = {i: marg[i] for i in model.ld}
    return _finish(model, R, Q, X, idle, marg, msgs)
