import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

PIVOT_RTOL = 1e-12


def solve_checked(A, b, error, message="singular linear system"):
    """Solve ``A x = b`` by partial-pivot LU, raising ``error`` on a tiny pivot.

    A pivot is tiny when its magnitude is below ``PIVOT_RTOL`` times the
    largest entry of ``A``.
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return np.zeros_like(np.asarray(b, dtype=float))
    scale = max(np.abs(A).max(), np.finfo(float).tiny)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(A, check_finite=True)
    if np.abs(np.diag(lu)).min() < PIVOT_RTOL * scale:
        raise error(message)
    return lu_solve((lu, piv), b)
