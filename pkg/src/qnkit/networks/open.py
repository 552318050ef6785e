"""Open product-form (Jackson / BCMP) networks."""

import math

import numpy as np

from .. import stations
from ..errors import InvalidModel, Unstable
from .model import NetworkSolution


def _require_open(model):
    if model.kind != "open":
        raise InvalidModel("expected an open network model")
    if model.ld:
        raise InvalidModel("load-dependent centers are not supported in open networks")


def _check_saturation(model, load):
    for i, (u, m) in enumerate(zip(load, model.m)):
        if math.isfinite(m) and u / m >= 1:
            name = model.center_names[i] if model.center_names else str(i)
            raise Unstable(f"center {name} is saturated: utilization {u / m:.6g} >= 1")


def solve_open_single(model):
    """Single-class open network; each center is solved in isolation.

    Centers with one server are M/M/1, with ``m > 1`` servers M/M/m, and
    delay centers M/M/inf, each at arrival rate ``lam * V[i]``.
    """
    _require_open(model)
    if model.n_classes != 1:
        raise InvalidModel("solve_open_single expects a single-class model")
    lam = float(model.lam[0])
    S, V = model.S[0], model.V[0]
    _check_saturation(model, lam * V * S)
    K = model.n_centers
    U, R, Q, X = (np.zeros(K) for _ in range(4))
    for i in range(K):
        li = lam * V[i]
        X[i] = li
        if li == 0 or S[i] == 0:
            U[i], R[i], Q[i] = 0.0, S[i], 0.0
            continue
        mu = 1.0 / S[i]
        if math.isinf(model.m[i]):
            st = stations.qs_mminf(li, mu)
        elif model.m[i] == 1:
            st = stations.qs_mm1(li, mu)
        else:
            st = stations.qs_mmm(li, mu, int(model.m[i]))
        U[i], R[i], Q[i] = st.U, st.R, st.Q
    return NetworkSolution.from_centers(U, R, Q, X, model.V)


def solve_open_multi(model):
    """Multiclass open network.

    Single-server centers use ``R[c, i] = S[c, i] / (1 - U_i)``, delay centers
    ``R[c, i] = S[c, i]``. Multi-server centers must be FCFS with
    class-independent service times and are solved as M/M/m at the
    aggregate arrival rate.
    """
    _require_open(model)
    model.check_fcfs_class_independent()
    C, K = model.S.shape
    lam = model.lam
    Xci = lam[:, None] * model.V
    load = (Xci * model.S).sum(axis=0)
    _check_saturation(model, load)
    # per-server utilization; traffic intensity at delay centers
    U = Xci * model.S / np.where(np.isinf(model.m), 1.0, model.m)
    R = np.array(model.S, dtype=float)
    for i in range(K):
        if math.isinf(model.m[i]):
            continue
        if model.m[i] == 1:
            R[:, i] = model.S[:, i] / (1 - load[i])
            continue
        s = model.S[model.V[:, i] > 0, i]
        if model.discipline[i] != "fcfs" and s.size and np.ptp(s) > 0:
            raise InvalidModel(f"multi-server center {i} needs class-independent service times")
        if load[i] == 0:
            continue
        S_i = s[0]
        R[:, i] = stations.qs_mmm(Xci[:, i].sum(), 1 / S_i, int(model.m[i])).R
    Q = Xci * R
    return NetworkSolution.from_centers(U, R, Q, Xci, model.V)
