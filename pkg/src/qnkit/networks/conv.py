"""Buzen's convolution algorithm for closed single-class networks."""

import math

import numpy as np

from ..errors import InvalidModel
from .model import NetworkSolution


def normalization_constants(D, N):
    """Scaled normalization constants for fixed-rate demands ``D``.

    Returns ``(g, scale)`` with ``G(n) = scale**n * g[n]`` for n = 0..N. The
    demands are divided by their maximum, which keeps ``g`` between 1 and a
    polynomial in N.
    """
    D = np.asarray(D, dtype=float)
    scale = float(D.max()) if D.size and D.max() > 0 else 1.0
    d = D / scale
    g = np.zeros(N + 1)
    g[0] = 1.0
    for dk in d:
        for n in range(1, N + 1):
            g[n] += dk * g[n - 1]
    return g, scale


def solve_closed_single_conv(model):
    """Closed single-class network with fixed-rate centers and no think time."""
    if model.kind != "closed" or model.n_classes != 1:
        raise InvalidModel("convolution expects a closed single-class model")
    if model.ld or np.any(model.m != 1):
        raise InvalidModel("convolution supports single-server fixed-rate centers only")
    if model.Z[0] != 0:
        raise InvalidModel("convolution does not support think time")
    N = int(model.N[0])
    S, V = model.S[0], model.V[0]
    D = S * V
    K = D.size
    if D.max() <= 0:
        raise InvalidModel("all service demands are zero")
    g, scale = normalization_constants(D, N)
    log_G = math.log(g[N]) + N * math.log(scale)
    try:
        G = math.exp(log_G)
    except OverflowError:
        G = math.inf
    if N == 0:
        return NetworkSolution.from_centers(np.zeros(K), S.copy(), np.zeros(K), np.zeros(K),
                                            model.V, G=G, log_G=log_G)
    X = g[N - 1] / (g[N] * scale)
    d = D / scale
    # Q_i = sum_{k=1..N} d_i**k g(N-k) / g(N)
    powers = d[:, None] ** np.arange(1, N + 1)[None, :]
    Q = powers @ g[N - 1::-1] / g[N]
    U = D * X
    Xi = X * V
    R = np.divide(Q, Xi, out=S.copy(), where=Xi > 0)
    return NetworkSolution.from_centers(U, R, Q, Xi, model.V, G=G, log_G=log_G)
