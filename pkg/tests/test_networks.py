import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qnkit.errors import (
    CapacityExceeded,
    ClassDependentFcfsService,
    InvalidMatrix,
    InvalidModel,
    NoConvergence,
    NumericalUnderflow,
    ReducibleRouting,
    SingularRouting,
    Unstable,
)
from qnkit.networks import (
    NetworkModel,
    aggregate,
    bounds_closed,
    bounds_open,
    lattice_levels,
    normalization_constants,
    solve_closed_multi_bs,
    solve_closed_multi_mva,
    solve_closed_single_conv,
    solve_closed_single_mva,
    solve_closed_single_mva_ld,
    solve_open_multi,
    solve_open_single,
    visits_closed,
    visits_open,
)
from qnkit.stations import qs_mm1

from oracles import cyclic_ctmc, enumerate_closed, mvaloop_single, random_closed


def closed(S, N, V=None, m=None, Z=0.0, **kw):
    S = np.atleast_2d(S)
    N = np.atleast_1d(N)
    Z = np.broadcast_to(np.asarray(Z, dtype=float), N.shape)
    return NetworkModel(kind="closed", S=S, V=V, m=m, N=N, Z=Z, **kw)


def assert_same_solution(a, b, rel=1e-10, keys=("U", "R", "Q", "X")):
    for key in keys:
        np.testing.assert_allclose(getattr(a, key), getattr(b, key), rtol=rel, atol=1e-300,
                                   err_msg=key)
    assert a.X_sys == pytest.approx(b.X_sys, rel=rel)


# visit ratios ------------------------------------------------------------------

def test_visits_open_examples():
    np.testing.assert_allclose(visits_open([[0.0]], [1]), [1])
    np.testing.assert_allclose(visits_open([[0, 1], [0, 0]], [1, 0]), [1, 1])
    np.testing.assert_allclose(visits_open([[0.5]], [1]), [2])


def test_visits_open_errors():
    with pytest.raises(SingularRouting):
        visits_open([[0, 1], [1, 0]], [1, 0])
    with pytest.raises(InvalidMatrix):
        visits_open([[0.7, 0.5], [0, 0]], [1, 0])
    with pytest.raises(InvalidMatrix):
        visits_open([[0.5]], [0])


def test_visits_closed_examples():
    cycle = np.roll(np.eye(3), 1, axis=1)
    np.testing.assert_allclose(visits_closed(cycle), [1, 1, 1])
    P = [[0, 0.7, 0.3], [1, 0, 0], [1, 0, 0]]
    np.testing.assert_allclose(visits_closed(P), [1, 0.7, 0.3])
    np.testing.assert_allclose(visits_closed(P, r=1), [1 / 0.7, 1, 0.3 / 0.7])


def test_visits_closed_reducible():
    with pytest.raises(ReducibleRouting):
        visits_closed(np.eye(2))
    with pytest.raises(InvalidMatrix):
        visits_closed([[0.5, 0.4], [1, 0]])


def test_visits_closed_random_residual():
    rng = np.random.default_rng(7)
    for K in range(2, 10):
        P = rng.random((K, K))
        P /= P.sum(axis=1, keepdims=True)
        V = visits_closed(P)
        assert V[0] == 1
        assert np.max(np.abs(V - V @ P)) < 1e-10


def test_visits_multiclass_routing():
    P = np.zeros((2, 2, 2, 2))
    P[0, :, 0, :] = [[0, 1], [1, 0]]
    P[1, :, 1, :] = [[0.5, 0.5], [1, 0]]
    np.testing.assert_allclose(visits_closed(P), [[1, 1], [1, 0.5]])
    P[0, 0, 1, 1] = 0.1
    P[0, 0, 0, 1] = 0.9
    with pytest.raises(InvalidModel):
        visits_closed(P)


# model validation ----------------------------------------------------------------

def test_model_validation():
    with pytest.raises(InvalidModel):
        closed([1, -1], 2)
    with pytest.raises(InvalidModel):
        closed([1, 1], 2.5)
    with pytest.raises(InvalidModel):
        closed([1, 1], 2, m=[0, 1])
    with pytest.raises(InvalidModel):
        closed([0, 0], 2)
    with pytest.raises(InvalidModel):
        NetworkModel(kind="open", S=[[1.0]], lam=[0.0])
    with pytest.raises(ClassDependentFcfsService):
        m = closed([[1, 1], [2, 1]], [1, 1], discipline=["fcfs", "ps"])
        solve_closed_multi_mva(m)


def test_demands():
    m = closed([[2.0, 1.0]], 3, V=[[0.5, 3.0]])
    np.testing.assert_allclose(m.D, [[1.0, 3.0]])


# open networks -------------------------------------------------------------------

def test_open_single_center_is_mm1():
    sol = solve_open_single(NetworkModel(kind="open", S=[[0.5]], lam=[1.0]))
    ref = qs_mm1(1, 2)
    assert (sol.U[0, 0], sol.R[0, 0], sol.Q[0, 0], sol.X_sys) == pytest.approx(
        (ref.U, ref.R, ref.Q, ref.X))


def test_open_tandem():
    sol = solve_open_single(NetworkModel(kind="open", S=[[0.5, 0.25]], lam=[1.0]))
    np.testing.assert_allclose(sol.U[0], [0.5, 0.25])
    np.testing.assert_allclose(sol.R[0], [1, 1 / 3])
    assert sol.R_sys == pytest.approx(4 / 3)
    assert sol.X_sys == pytest.approx(1)


def test_open_unstable_names_center():
    model = NetworkModel(kind="open", S=[[0.5, 1.0]], lam=[1.0], center_names=["a", "disk"])
    with pytest.raises(Unstable, match="disk"):
        solve_open_single(model)
    with pytest.raises(Unstable):
        solve_open_multi(model)


def test_open_mixed_center_types():
    model = NetworkModel(kind="open", S=[[0.5, 2.0, 3.0]], lam=[1.0], m=[1, 3, math.inf])
    sol = solve_open_single(model)
    assert sol.R[0, 2] == pytest.approx(3.0)
    assert sol.U[0, 1] == pytest.approx(2 / 3)
    np.testing.assert_allclose(solve_open_multi(model).R, sol.R, rtol=1e-12)


def test_open_multi_examples():
    sol = solve_open_multi(NetworkModel(kind="open", S=[[1.0], [1.0]], lam=[0.2, 0.3]))
    assert sol.U.sum() == pytest.approx(0.5)
    np.testing.assert_allclose(sol.R[:, 0], [2, 2])
    np.testing.assert_allclose(sol.Q[:, 0], [0.4, 0.6])
    assert sol.X_sys == pytest.approx(0.5)


def test_open_multi_reduces_and_merges():
    S, V = [[0.3, 0.1, 0.2]], [[1.0, 2.0, 0.5]]
    one = NetworkModel(kind="open", S=S, V=V, lam=[1.5])
    assert_same_solution(solve_open_multi(one), solve_open_single(one), rel=1e-12)
    two = NetworkModel(kind="open", S=S * 2, V=V * 2, lam=[0.75, 0.75])
    a, b = solve_open_multi(two), solve_open_single(one)
    np.testing.assert_allclose(a.U.sum(axis=0), b.U[0], rtol=1e-12)
    np.testing.assert_allclose(a.Q.sum(axis=0), b.Q[0], rtol=1e-12)


# single-class MVA ----------------------------------------------------------------

def test_mva_hand_unrolled():
    sol = solve_closed_single_mva(closed([1, 1], 1))
    assert sol.X_sys == pytest.approx(0.5)
    np.testing.assert_allclose(sol.Q[0], [0.5, 0.5])
    np.testing.assert_allclose(sol.U[0], [0.5, 0.5])
    sol = solve_closed_single_mva(closed([1, 1], 2))
    assert sol.X_sys == pytest.approx(2 / 3)
    np.testing.assert_allclose(sol.Q[0], [1, 1])


@pytest.mark.parametrize("N", [1, 2, 7, 40])
def test_mva_single_saturated_queue(N):
    sol = solve_closed_single_mva(closed([0.25], N))
    assert (sol.U[0, 0], sol.X_sys, sol.R_sys) == pytest.approx((1, 4, N * 0.25))


def test_mva_zero_population():
    sol = solve_closed_single_mva(closed([1, 2], 0, Z=1))
    assert sol.X_sys == 0 and sol.Q_sys == 0


def test_mva_matches_textbook_loop():
    rng = np.random.default_rng(12)
    for _ in range(20):
        D = rng.uniform(0.1, 2, int(rng.integers(1, 7)))
        N = int(rng.integers(1, 40))
        X, Q = mvaloop_single(D, N)
        sol = solve_closed_single_mva(closed(D, N))
        assert sol.X_sys == pytest.approx(X, rel=1e-12)
        np.testing.assert_allclose(sol.Q[0], Q, rtol=1e-12)


@pytest.mark.parametrize("K,N", [(1, 1), (1, 4), (2, 3), (3, 4), (3, 1)])
def test_mva_matches_enumeration(K, N):
    rng = np.random.default_rng(100 * K + N)
    for _ in range(5):
        S = rng.uniform(0.1, 2, K)
        V = rng.uniform(0.2, 2, K)
        m = rng.choice([1, 2, 3, math.inf], K)
        Z = float(rng.choice([0.0, rng.uniform(0.5, 5)]))
        if Z == 0 and np.all(np.isinf(m)):
            m[0] = 1
        sol = solve_closed_single_mva(closed(S, N, V=[V], m=m, Z=Z))
        ref = enumerate_closed(S, V, m, N, Z)
        assert sol.X_sys == pytest.approx(ref["X_sys"], rel=1e-9)
        np.testing.assert_allclose(sol.Q[0], ref["Q"], rtol=1e-9)
        np.testing.assert_allclose(sol.X[0], ref["X"], rtol=1e-9)
        np.testing.assert_allclose(sol.R[0], ref["R"], rtol=1e-9)
        single = m == 1
        np.testing.assert_allclose(sol.U[0][single], ref["busy"][single], rtol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mva_throughput_nondecreasing_concave(seed):
    rng = np.random.default_rng(seed)
    K = int(rng.integers(1, 7))
    S, V = rng.uniform(0.1, 2, K), rng.uniform(0.2, 2, K)
    Z = float(rng.choice([0.0, rng.uniform(0, 10)]))
    X = np.array([solve_closed_single_mva(closed(S, n, V=[V], Z=Z)).X_sys for n in range(0, 31)])
    dX = np.diff(X)
    assert np.all(dX >= -1e-12 * X[1:])
    assert np.all(np.diff(dX) <= 1e-12 * X[2:])


# load-dependent MVA ----------------------------------------------------------------

def test_ld_constant_table_matches_fixed_rate():
    S, V, N = np.array([0.4, 1.0, 0.7]), np.array([1.0, 0.5, 2.0]), 12
    fixed = solve_closed_single_mva(closed(S, N, V=[V], Z=3.0))
    ld = solve_closed_single_mva_ld(closed(S, N, V=[V], Z=3.0, ld={1: np.full(N, S[1])}))
    assert_same_solution(ld, fixed)


def test_ld_multiserver_equivalence():
    S, V, m, N = np.array([0.4, 1.0, 0.7]), np.array([1.0, 0.5, 2.0]), [1, 3, 1], 15
    multi = solve_closed_single_mva(closed(S, N, V=[V], m=m, Z=1.0))
    table = S[1] / np.minimum(np.arange(1, N + 1), 3)
    ld = solve_closed_single_mva_ld(closed(S, N, V=[V], Z=1.0, ld={1: table}))
    assert_same_solution(ld, multi, keys=("R", "Q", "X"))
    np.testing.assert_allclose(ld.U[0, [0, 2]], multi.U[0, [0, 2]], rtol=1e-10)


@pytest.mark.parametrize("N", [1, 2, 5])
def test_ld_matches_two_center_ctmc(N):
    table = np.array([1.0, 0.4, 0.3, 0.35, 0.2])[:N]  # S_1(j), hand-set
    S2 = 0.8
    model = closed([table[0], S2], N, ld={0: table})
    sol = solve_closed_single_mva_ld(model, marginals=True)
    p = cyclic_ctmc(lambda n: 1 / table[n - 1], lambda n: 1 / S2, N)
    np.testing.assert_allclose(sol.marginals[0], p, rtol=1e-10, atol=1e-14)
    X_ref = p[1:] @ (1 / table)
    assert sol.X_sys == pytest.approx(X_ref, rel=1e-10)
    assert sol.Q[0, 0] == pytest.approx(np.arange(N + 1) @ p, rel=1e-10)
    assert sol.U[0, 0] == pytest.approx(1 - p[0], rel=1e-10)


def test_ld_matches_enumeration():
    rng = np.random.default_rng(21)
    for N in (1, 3, 4):
        table = rng.uniform(0.2, 2, N)
        S, V = rng.uniform(0.2, 1.5, 3), rng.uniform(0.5, 2, 3)
        sol = solve_closed_single_mva_ld(closed(S, N, V=[V], Z=1.5, ld={2: table}))
        ref = enumerate_closed(S, V, [1, 1, 1], N, 1.5, ld={2: table})
        np.testing.assert_allclose(sol.Q[0], ref["Q"], rtol=1e-9)
        assert sol.X_sys == pytest.approx(ref["X_sys"], rel=1e-9)


def test_ld_short_table_rejected():
    with pytest.raises(InvalidModel):
        solve_closed_single_mva_ld(closed([1, 1], 3, ld={0: [1, 1]}))


def test_ld_clamp_warning():
    # strongly accelerating server over a long chain drives the idle
    # probability recursion into cancellation
    N = 400
    table = 1.0 / (1.0 + np.arange(N)) ** 2
    model = closed([table[0], 1e-3], N, ld={0: table})
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sol = solve_closed_single_mva_ld(model)
    flagged = [w for w in caught if issubclass(w.category, NumericalUnderflow)]
    assert flagged and sol.warnings


# convolution ---------------------------------------------------------------------

def test_conv_single_center():
    D, N = 0.7, 9
    sol = solve_closed_single_conv(closed([D], N))
    assert sol.G == pytest.approx(D**N)
    assert sol.X_sys == pytest.approx(1 / D)


def test_conv_hand_table():
    g, scale = normalization_constants([1.0, 1.0], 2)
    np.testing.assert_allclose(g * scale ** np.arange(3), [1, 2, 3])
    sol = solve_closed_single_conv(closed([1, 1], 2))
    assert sol.X_sys == pytest.approx(2 / 3)
    assert sol.G == pytest.approx(3)


def test_conv_rejects_unsupported():
    with pytest.raises(InvalidModel):
        solve_closed_single_conv(closed([1, 1], 2, Z=1))
    with pytest.raises(InvalidModel):
        solve_closed_single_conv(closed([1, 1], 2, m=[1, math.inf]))


def test_conv_large_population_no_overflow():
    sol = solve_closed_single_conv(closed([300.0, 200.0], 2000))
    assert math.isinf(sol.G)
    assert sol.log_G == pytest.approx(2000 * math.log(300) + math.log(3), rel=1e-9)
    ref = solve_closed_single_mva(closed([300.0, 200.0], 2000))
    assert sol.X_sys == pytest.approx(ref.X_sys, rel=1e-10)


def test_conv_matches_mva_random():
    rng = np.random.default_rng(31)
    for _ in range(50):
        K, N = int(rng.integers(1, 6)), int(rng.integers(1, 21))
        model = closed(rng.uniform(0.05, 2, K), N, V=[rng.uniform(0.2, 3, K)])
        assert_same_solution(solve_closed_single_conv(model), solve_closed_single_mva(model),
                             rel=1e-8)


# multiclass ------------------------------------------------------------------------

def test_multiclass_reduces_to_single():
    model = closed([[0.3, 1.2, 0.5]], 17, V=[[1, 0.5, 2]], m=[1, 1, math.inf], Z=4.0)
    assert_same_solution(solve_closed_multi_mva(model), solve_closed_single_mva(model), rel=1e-12)


def test_multiclass_symmetric_classes():
    S = [[0.5, 1.0, 2.0]] * 2
    sol = solve_closed_multi_mva(closed(S, [6, 6], Z=[1.0, 1.0]))
    np.testing.assert_allclose(sol.X[0], sol.X[1], rtol=1e-12)
    np.testing.assert_allclose(sol.Q[0], sol.Q[1], rtol=1e-12)
    np.testing.assert_allclose(sol.R[0], sol.R[1], rtol=1e-12)


def test_multiclass_matches_enumeration():
    """Two classes, two queues and a think station, enumerated directly."""
    S = np.array([[0.5, 1.5], [1.0, 0.3]])
    Z = np.array([2.0, 1.0])
    N = (3, 2)
    weights, states = [], []
    for a in itertools_product(N):
        # a = (n_c,i) for class c at queue i; the rest are thinking
        n = np.array(a).reshape(2, 2)
        think = np.array(N) - n.sum(axis=1)
        if np.any(think < 0):
            continue
        w = 1.0
        for i in range(2):
            tot = n[:, i].sum()
            w *= math.factorial(tot) / math.prod(math.factorial(k) for k in n[:, i])
            w *= math.prod(S[c, i] ** n[c, i] for c in range(2))
        w *= math.prod(Z[c] ** think[c] / math.factorial(think[c]) for c in range(2))
        weights.append(w)
        states.append(n)
    p = np.array(weights) / sum(weights)
    Q = np.einsum("s,sci->ci", p, np.array(states))
    X = (np.array(N) - Q.sum(axis=1)) / Z
    sol = solve_closed_multi_mva(closed(S, N, Z=Z))
    np.testing.assert_allclose(sol.Q, Q, rtol=1e-10)
    np.testing.assert_allclose(sol.X_class, X, rtol=1e-10)


def itertools_product(N):
    import itertools

    return itertools.product(*[range(n + 1) for n in N for _ in range(2)])


def test_lattice_levels_order():
    for pop in ([2, 3], [1, 0, 2], [4], [2, 2, 2]):
        strides, levels = lattice_levels(pop)
        seen = set()
        for n, pts in enumerate(levels):
            assert np.all(pts.sum(axis=1) == n)
            for v in pts:
                for c in range(len(pop)):
                    if v[c] > 0:
                        # the predecessor was produced on an earlier level
                        assert int(v @ strides - strides[c]) in seen
            seen.update(int(i) for i in pts @ strides)
        assert seen == set(range(math.prod(k + 1 for k in pop)))


def test_multiclass_never_reads_unwritten():
    # storage starts as NaN, so any premature read would surface as NaN
    rng = np.random.default_rng(41)
    for _ in range(10):
        C, K = int(rng.integers(2, 4)), int(rng.integers(1, 4))
        sol = solve_closed_multi_mva(closed(rng.uniform(0.1, 2, (C, K)),
                                            rng.integers(0, 5, C), Z=rng.uniform(0, 3, C)))
        for key in ("U", "R", "Q", "X"):
            assert np.all(np.isfinite(getattr(sol, key)))


def test_multiclass_capacity_budget():
    with pytest.raises(CapacityExceeded) as err:
        solve_closed_multi_mva(closed([[1, 1]] * 3, [99, 99, 99]), budget=10**5)
    assert err.value.required == 10**6
    assert err.value.exit_code == 1


def test_multiclass_rejects_multiserver():
    with pytest.raises(InvalidModel):
        solve_closed_multi_mva(closed([[1, 1]] * 2, [1, 1], m=[2, 1]))


# Bard-Schweitzer ------------------------------------------------------------------

def test_bs_single_center_exact():
    model = closed([[0.4]], [9])
    sol = solve_closed_multi_bs(model)
    assert sol.approximate
    assert sol.X_sys == pytest.approx(solve_closed_single_mva(model).X_sys, rel=1e-7)


def test_bs_close_to_exact():
    model = closed([[0.5, 1.0, 0.8], [1.2, 0.2, 0.4]], [5, 4], Z=[2, 3])
    approx, exact = solve_closed_multi_bs(model), solve_closed_multi_mva(model)
    assert approx.X_sys == pytest.approx(exact.X_sys, rel=0.05)


def test_bs_scaled_populations_converge():
    S = [[0.5, 1.0, 0.8], [1.2, 0.2, 0.4]]
    counts = []
    for scale in (1, 10):
        sol = solve_closed_multi_bs(closed(S, [5 * scale, 4 * scale], Z=[2, 3]), tol=1e-9)
        assert sol.residual < 1e-9
        counts.append(sol.iterations)
    assert max(counts) < 10_000


def test_bs_no_convergence_carries_result():
    with pytest.raises(NoConvergence) as err:
        solve_closed_multi_bs(closed([[0.5, 1.0], [1.0, 0.5]], [10, 10]), max_iter=2)
    assert err.value.result is not None
    assert err.value.residual > 0
    assert err.value.exit_code == 3


# bounds ------------------------------------------------------------------------------

def test_bounds_single_job():
    b = bounds_closed(closed([0.5, 1.5], 1), "aba")
    assert b.X_lower[0] == pytest.approx(0.5) and b.X_upper[0] == pytest.approx(0.5)


def test_bounds_asymptote():
    b = bounds_closed(closed([0.5, 1.5], 10**6), "aba")
    assert b.X_upper[0] == pytest.approx(1 / 1.5)
    assert b.bottleneck == [1]


def test_bounds_bottleneck_ties():
    assert bounds_closed(closed([2.0, 1.0, 2.0], 3)).bottleneck == [0, 2]
    # indices refer to the full center list even with a delay center first
    b = bounds_closed(closed([9.0, 1.0, 2.0], 3, m=[math.inf, 1, 1]))
    assert b.bottleneck == [2]
    b = bounds_open(NetworkModel(kind="open", S=[[9.0, 0.5]], lam=[1.0], m=[math.inf, 1]))
    assert b.bottleneck == [1]


@pytest.mark.parametrize("method", ["aba", "bsb"])
def test_bounds_contain_exact(method):
    rng = np.random.default_rng(51)
    for _ in range(100):
        model = random_closed(rng, K_max=6, delay=True)
        b = bounds_closed(model, method)
        exact = solve_closed_single_mva(model)
        assert b.X_lower[0] <= exact.X_sys * (1 + 1e-12)
        assert exact.X_sys <= b.X_upper[0] * (1 + 1e-12)
        assert b.R_lower[0] <= exact.R_sys * (1 + 1e-9) + 1e-12
        assert exact.R_sys <= b.R_upper[0] * (1 + 1e-9)


def test_bsb_inside_aba():
    rng = np.random.default_rng(52)
    for _ in range(100):
        model = random_closed(rng, K_max=6, delay=True)
        a, b = bounds_closed(model, "aba"), bounds_closed(model, "bsb")
        assert a.X_lower[0] <= b.X_lower[0] * (1 + 1e-12)
        assert b.X_upper[0] <= a.X_upper[0] * (1 + 1e-12)


def test_bounds_multiclass_aba_contains_exact():
    rng = np.random.default_rng(53)
    for _ in range(30):
        C, K = 2, int(rng.integers(1, 5))
        model = closed(rng.uniform(0.1, 2, (C, K)), rng.integers(1, 8, C), Z=rng.uniform(0, 5, C))
        b = bounds_closed(model, "aba")
        exact = solve_closed_multi_mva(model)
        assert np.all(b.X_lower <= exact.X_class * (1 + 1e-12))
        assert np.all(exact.X_class <= b.X_upper * (1 + 1e-12))
    with pytest.raises(InvalidModel):
        bounds_closed(model, "bsb")


def test_bounds_open_examples():
    b = bounds_open(NetworkModel(kind="open", S=[[0.5]], lam=[1.0]))
    assert (b.R_lower[0], b.R_upper[0]) == pytest.approx((0.5, 1.0))
    assert b.lambda_max == pytest.approx(2.0)
    b = bounds_open(NetworkModel(kind="open", S=[[0.5, 0.2]], lam=[1e-9]))
    assert b.R_upper[0] == pytest.approx(b.R_lower[0], rel=1e-8)
    with pytest.raises(Unstable):
        bounds_open(NetworkModel(kind="open", S=[[0.5]], lam=[2.0]))


@pytest.mark.parametrize("method", ["aba", "bsb"])
def test_bounds_open_contain_exact(method):
    rng = np.random.default_rng(54)
    for _ in range(100):
        K = int(rng.integers(1, 7))
        D = rng.uniform(0.05, 2, K)
        lam = float(rng.uniform(0.01, 0.99) / D.max())
        m = np.where(rng.random(K) < 0.2, math.inf, 1)
        model = NetworkModel(kind="open", S=[D], lam=[lam], m=m)
        b = bounds_open(model, method)
        R = solve_open_single(model).R_sys
        assert b.R_lower[0] <= R * (1 + 1e-12)
        assert R <= b.R_upper[0] * (1 + 1e-12)


def test_bounds_reject_multiserver():
    with pytest.raises(InvalidModel):
        bounds_closed(closed([1, 1], 3, m=[2, 1]))


# aggregation ------------------------------------------------------------------------

def test_aggregate_examples():
    X_c, R_c, X_sys, R_sys, Q_sys = aggregate([[1, 1]], [[1, 2]], [[2, 4]], [[1, 2]])
    assert X_sys == 2 and R_sys == 3 and Q_sys == 3
    with pytest.raises(ZeroDivisionError):
        aggregate([[1, 1]], [[1, 1]], [[0, 0]], [[0, 0]])


def test_aggregate_response_time_law():
    rng = np.random.default_rng(61)
    for _ in range(20):
        model = random_closed(rng, delay=True)
        sol = solve_closed_single_mva(model)
        assert model.N[0] == pytest.approx(sol.X_sys * (sol.R_sys + model.Z[0]), rel=1e-9)
