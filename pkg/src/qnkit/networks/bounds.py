"""Asymptotic (ABA) and balanced system (BSB) bounds.

Delay centers contribute their demand as pure delay: in closed models it
is folded into the think time, in open models it is added to both
response time bounds.
"""

import numpy as np

from ..errors import InvalidModel, Unstable
from .model import BoundsResult


def _split_demands(model):
    if model.ld:
        raise InvalidModel("bounds do not support load-dependent centers")
    bad = np.flatnonzero(np.isfinite(model.m) & (model.m != 1))
    if bad.size:
        raise InvalidModel(f"bounds need single-server or delay centers; center {bad[0]} "
                           f"has {model.m[bad[0]]:g} servers")
    delay = np.isinf(model.m)
    D = model.D
    return D[:, ~delay], D[:, delay].sum(axis=1), delay


def bottleneck(load, delay=None):
    """Indices of the queueing centers with the largest load, lowest index first."""
    load = np.asarray(load, dtype=float)
    if delay is not None:
        load = np.where(delay, 0.0, load)
    peak = load.max(initial=0.0)
    return [int(i) for i in np.flatnonzero(load == peak)] if peak > 0 else []


def bounds_closed(model, method="aba"):
    """Throughput and response time bounds of a closed network.

    ``method`` is ``"aba"`` (single or multiclass) or ``"bsb"`` (single
    class). Response time bounds are the images ``R = N / X - Z`` of the
    throughput bounds.
    """
    if model.kind != "closed":
        raise InvalidModel("expected a closed network model")
    method = method.lower()
    Dq, Dz, delay = _split_demands(model)
    C = model.n_classes
    neck = bottleneck(model.D.sum(axis=0), delay)
    N = model.N.astype(float)
    Z = model.Z + Dz
    if method == "aba":
        return _aba_closed(Dq, N, Z, model.Z, neck)
    if method == "bsb":
        if C != 1:
            raise InvalidModel("balanced system bounds are implemented for single-class models only")
        return _bsb_closed(Dq[0], N[0], Z[0], model.Z[0], neck)
    raise InvalidModel(f"unknown bounds method {method!r}")


def _aba_closed(Dq, N, Z, Z_user, neck):
    C = Dq.shape[0]
    Ntot = N.sum()
    X_lo, X_hi = np.zeros(C), np.zeros(C)
    for c in range(C):
        D, Dmax = Dq[c].sum(), Dq[c].max(initial=0.0)
        if N[c] == 0:
            continue
        # at worst every other job is queued ahead at each visit
        X_lo[c] = N[c] / (Ntot * D + Z[c])
        X_hi[c] = N[c] / (D + Z[c])
        if Dmax > 0:
            X_hi[c] = min(X_hi[c], 1.0 / Dmax)
    R_lo, R_hi = _response_images(N, X_lo, X_hi, Z_user)
    return BoundsResult(X_lower=X_lo, X_upper=X_hi, R_lower=R_lo, R_upper=R_hi,
                        method="aba", bottleneck=neck)


def _bsb_closed(Dq, N, Z, Z_user, neck):
    D, Dmax = Dq.sum(), Dq.max(initial=0.0)
    if N == 0:
        zero = np.zeros(1)
        return BoundsResult(zero, zero.copy(), zero.copy(), zero.copy(), "bsb", neck)
    if D == 0:
        X_lo = X_hi = N / Z
    else:
        Davg = D / np.count_nonzero(Dq)
        X_lo = N / (D + Z + (N - 1) * Dmax / (1 + Z / (N * D)))
        X_hi = min(1 / Dmax, N / (D + Z + (N - 1) * Davg / (1 + Z / D)))
    X_lo, X_hi = np.array([X_lo]), np.array([X_hi])
    R_lo, R_hi = _response_images(np.array([N]), X_lo, X_hi, np.array([Z_user]))
    return BoundsResult(X_lower=X_lo, X_upper=X_hi, R_lower=R_lo, R_upper=R_hi,
                        method="bsb", bottleneck=neck)


def _response_images(N, X_lo, X_hi, Z):
    R_lo = np.divide(N, X_hi, out=np.zeros_like(X_hi), where=X_hi > 0) - Z
    R_hi = np.divide(N, X_lo, out=np.zeros_like(X_lo), where=X_lo > 0) - Z
    active = N > 0
    return np.where(active, np.maximum(R_lo, 0.0), 0.0), np.where(active, R_hi, 0.0)


def bounds_open(model, method="aba"):
    """Response time bounds of an open network.

    ``lambda_max`` is the arrival-rate scaling factor at which the
    bottleneck saturates (for one class, ``1 / D_max``). Throughput bounds
    equal the arrival rates. Raises :class:`Unstable` at or beyond
    saturation.
    """
    if model.kind != "open":
        raise InvalidModel("expected an open network model")
    method = method.lower()
    if method not in ("aba", "bsb"):
        raise InvalidModel(f"unknown bounds method {method!r}")
    Dq, Dz, delay = _split_demands(model)
    lam = model.lam
    load = lam @ Dq
    peak = load.max(initial=0.0)
    lambda_max = float(1.0 / peak) if peak > 0 else float("inf")
    if model.n_classes == 1:
        lambda_max *= float(lam[0])
    if peak >= 1:
        raise Unstable(f"arrival rate at or beyond saturation (bottleneck utilization {peak:.6g})")
    if method == "aba":
        R_lo = Dz + Dq.sum(axis=1)
        R_hi = Dz + (Dq / (1 - load)).sum(axis=1)
    else:
        if model.n_classes != 1:
            raise InvalidModel("balanced system bounds are implemented for single-class models only")
        D, Dmax, l = Dq[0].sum(), Dq[0].max(initial=0.0), lam[0]
        Davg = D / max(np.count_nonzero(Dq[0]), 1)
        R_lo = np.array([Dz[0] + D / (1 - l * Davg)])
        R_hi = np.array([Dz[0] + D / (1 - l * Dmax)])
    return BoundsResult(X_lower=lam.copy(), X_upper=lam.copy(), R_lower=R_lo, R_upper=R_hi,
                        method=method, bottleneck=bottleneck(lam @ model.D, delay), lambda_max=lambda_max)
