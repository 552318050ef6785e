"""Network model, solution and bounds containers."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..errors import ClassDependentFcfsService, InvalidModel

DISCIPLINES = ("fcfs", "ps", "lcfs-pr", "is")


def _as_2d(a, name, dtype=float):
    a = np.array(a, dtype=dtype)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise InvalidModel(f"{name} must be a vector or a class x center matrix")
    return a


@dataclass
class NetworkModel:
    """Product-form network description.

    Arrays are indexed ``[class, center]``. ``m[i]`` is the number of servers
    at center ``i``; ``math.inf`` marks an infinite-server (delay) center.
    ``ld`` optionally maps a center index to its load-dependent service
    times ``S_i(1), ..., S_i(N)`` (single-class closed models only).
    Closed models use ``N`` and ``Z``; open models use ``lam``, the total
    external arrival rate of each class.
    """

    kind: str
    S: np.ndarray
    V: Optional[np.ndarray] = None
    m: Optional[np.ndarray] = None
    N: Optional[np.ndarray] = None
    Z: Optional[np.ndarray] = None
    lam: Optional[np.ndarray] = None
    ld: Dict[int, np.ndarray] = field(default_factory=dict)
    discipline: Optional[List[str]] = None
    center_names: Optional[List[str]] = None
    class_names: Optional[List[str]] = None

    def __post_init__(self):
        if self.kind not in ("open", "closed"):
            raise InvalidModel(f"kind must be 'open' or 'closed', got {self.kind!r}")
        self.S = _as_2d(self.S, "S")
        C, K = self.S.shape
        if K == 0:
            raise InvalidModel("the network has no service centers")
        self.V = np.ones((C, K)) if self.V is None else _as_2d(self.V, "V")
        if self.V.shape != (C, K):
            raise InvalidModel(f"V has shape {self.V.shape}, expected {(C, K)}")
        self.m = np.ones(K) if self.m is None else np.array(self.m, dtype=float).ravel()
        if self.m.shape != (K,):
            raise InvalidModel(f"m has {self.m.size} entries, expected {K}")
        if self.discipline is None:
            self.discipline = ["is" if math.isinf(x) else "ps" for x in self.m]
        self.discipline = [d.lower() for d in self.discipline]
        if self.kind == "closed":
            if self.N is None:
                raise InvalidModel("closed models need a population N")
            N = np.atleast_1d(np.asarray(self.N, dtype=float))
            if N.shape != (C,) or np.any(N < 0) or np.any(N != np.floor(N)):
                raise InvalidModel("N must hold one non-negative integer per class")
            self.N = N.astype(np.int64)
            self.Z = np.zeros(C) if self.Z is None else np.atleast_1d(np.asarray(self.Z, dtype=float))
            if self.Z.shape != (C,):
                raise InvalidModel(f"Z has {self.Z.size} entries, expected {C}")
        else:
            if self.lam is None:
                raise InvalidModel("open models need arrival rates lam")
            self.lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
            if self.lam.shape != (C,):
                raise InvalidModel(f"lam has {self.lam.size} entries, expected {C}")
        self.ld = {int(i): np.asarray(t, dtype=float).ravel() for i, t in self.ld.items()}
        self.validate()

    @property
    def n_classes(self):
        return self.S.shape[0]

    @property
    def n_centers(self):
        return self.S.shape[1]

    @property
    def D(self):
        """Service demands ``S * V``."""
        return self.S * self.V

    @property
    def is_delay(self):
        return np.isinf(self.m)

    def validate(self):
        C, K = self.S.shape
        for name, arr in (("S", self.S), ("V", self.V)):
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                c, i = np.argwhere(~(np.isfinite(arr) & (arr >= 0)))[0]
                raise InvalidModel(f"{name}[{c}][{i}] must be finite and non-negative")
        if np.any(np.isnan(self.m)) or np.any(self.m < 1) or np.any(
                np.isfinite(self.m) & (self.m != np.floor(self.m))):
            raise InvalidModel("server counts must be positive integers or inf")
        if len(self.discipline) != K or any(d not in DISCIPLINES for d in self.discipline):
            raise InvalidModel(f"discipline must list one of {DISCIPLINES} per center")
        if self.kind == "closed":
            if np.any(self.Z < 0) or not np.all(np.isfinite(self.Z)):
                raise InvalidModel("think times must be finite and non-negative")
        elif np.any(self.lam < 0) or not np.all(np.isfinite(self.lam)) or self.lam.sum() <= 0:
            raise InvalidModel("arrival rates must be non-negative with a positive total")
        for i, table in self.ld.items():
            if not 0 <= i < K:
                raise InvalidModel(f"load-dependent center index {i} out of range")
            if np.any(table <= 0) or not np.all(np.isfinite(table)):
                raise InvalidModel(f"load-dependent service times of center {i} must be positive")
        for c in range(C):
            active = (self.N[c] > 0) if self.kind == "closed" else (self.lam[c] > 0)
            if active and not np.any(self.V[c] > 0) and self.kind == "open":
                raise InvalidModel(f"class {c} has arrivals but visits no center")
            if active and self.kind == "closed" and self.Z[c] + self.D[c].sum() <= 0:
                raise InvalidModel(f"class {c} has zero think time and zero service demand")

    def check_fcfs_class_independent(self):
        for i, disc in enumerate(self.discipline):
            if disc != "fcfs" or math.isinf(self.m[i]):
                continue
            s = self.S[self.V[:, i] > 0, i]
            if s.size and np.ptp(s) > 1e-12 * max(1.0, s.max()):
                raise ClassDependentFcfsService(
                    f"FCFS center {i} has class-dependent service times {s.tolist()}")


def aggregate(R, Q, X, V):
    """System-level measures from per-center results.

    Returns ``(X_class, R_class, X_sys, R_sys, Q_sys)``. Class throughput is
    ``X[c, i] / V[c, i]`` at the first center the class visits; class
    response time is ``sum_i R[c, i] * V[c, i]``.
    """
    R, Q, X, V = (np.atleast_2d(np.asarray(a, dtype=float)) for a in (R, Q, X, V))
    C = V.shape[0]
    X_class = np.empty(C)
    for c in range(C):
        visited = np.flatnonzero(V[c] > 0)
        if visited.size == 0:
            raise ZeroDivisionError(f"class {c} has no center with positive visits")
        X_class[c] = X[c, visited[0]] / V[c, visited[0]]
    R_class = (R * V).sum(axis=1)
    X_sys = float(X_class.sum())
    Q_sys = float(Q.sum())
    R_sys = float(X_class @ R_class / X_sys) if X_sys > 0 else 0.0
    return X_class, R_class, X_sys, R_sys, Q_sys


@dataclass
class NetworkSolution:
    U: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    X: np.ndarray
    X_class: np.ndarray
    R_class: np.ndarray
    X_sys: float
    R_sys: float
    Q_sys: float
    G: Optional[float] = None
    log_G: Optional[float] = None
    approximate: bool = False
    iterations: Optional[int] = None
    residual: Optional[float] = None
    marginals: Optional[Dict[int, np.ndarray]] = None
    warnings: List[str] = field(default_factory=list)

    @classmethod
    def from_centers(cls, U, R, Q, X, V, **extra):
        U, R, Q, X = (np.atleast_2d(np.asarray(a, dtype=float)) for a in (U, R, Q, X))
        X_class, R_class, X_sys, R_sys, Q_sys = aggregate(R, Q, X, V)
        return cls(U=U, R=R, Q=Q, X=X, X_class=X_class, R_class=R_class,
                   X_sys=X_sys, R_sys=R_sys, Q_sys=Q_sys, **extra)

    def as_dict(self):
        d = {
            "U": self.U.tolist(), "R": self.R.tolist(), "Q": self.Q.tolist(),
            "X": self.X.tolist(), "X_class": self.X_class.tolist(),
            "R_class": self.R_class.tolist(), "X_sys": self.X_sys,
            "R_sys": self.R_sys, "Q_sys": self.Q_sys, "approximate": self.approximate,
        }
        if self.G is not None:
            d["G"] = self.G
            d["log_G"] = self.log_G
        if self.iterations is not None:
            d["iterations"] = self.iterations
            d["residual"] = self.residual
        if self.marginals:
            d["marginals"] = {str(i): p.tolist() for i, p in self.marginals.items()}
        return d


@dataclass
class BoundsResult:
    """Throughput and response time bounds, one entry per class."""

    X_lower: np.ndarray
    X_upper: np.ndarray
    R_lower: np.ndarray
    R_upper: np.ndarray
    method: str
    bottleneck: List[int] = field(default_factory=list)
    lambda_max: Optional[float] = None

    def as_dict(self):
        d = {"method": self.method, "X_lower": self.X_lower.tolist(),
             "X_upper": self.X_upper.tolist(), "R_lower": self.R_lower.tolist(),
             "R_upper": self.R_upper.tolist(), "bottleneck": list(self.bottleneck)}
        if self.lambda_max is not None:
            d["lambda_max"] = self.lambda_max
        return d
