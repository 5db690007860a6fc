"""Exact transport: primal/dual certificates and metric structure."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pvmk.errors import DimensionMismatch, StaleVertexSet
from pvmk.metric_core import lip1_vertices, validate_space
from pvmk.rng import SplitMix64
from pvmk.sampling import random_metric_space, random_rational_measure
from pvmk.transport import (
    ProbMeasure,
    SignedMeasure,
    kantorovich,
    kantorovich_dual_oracle,
    weak_gap,
)

F = Fraction


def two_point_space():
    return validate_space([[0, 1], [1, 0]])


def test_same_measure_zero_value_identity_plan():
    space = two_point_space()
    mu = ProbMeasure.from_values(["3/4", "1/4"])
    res = kantorovich(space, mu, mu)
    assert res.value == 0
    # zero cost forces all mass onto the zero-distance diagonal
    for i in range(2):
        for j in range(2):
            if i != j:
                assert res.plan[i][j] == 0


def test_dirac_pair_value_is_distance():
    space = validate_space([[0, "1/3"], ["1/3", 0]])
    res = kantorovich(space, ProbMeasure.dirac(2, 0), ProbMeasure.dirac(2, 1))
    assert res.value == F(1, 3)
    assert res.plan[0][1] == 1


def brute_force_two_point(space, mu, nu):
    """One-parameter plan family: optimum sits at an endpoint."""
    lo = max(F(0), mu.weights[0] - nu.weights[1])
    hi = min(mu.weights[0], nu.weights[0])
    d = space.dist
    best = None
    for t in (lo, hi):
        plan = [
            [t, mu.weights[0] - t],
            [nu.weights[0] - t, mu.weights[1] - (nu.weights[0] - t)],
        ]
        val = sum(plan[i][j] * d[i][j] for i in range(2) for j in range(2))
        best = val if best is None else min(best, val)
    return best


def test_two_point_half_example():
    space = two_point_space()
    mu = ProbMeasure.from_values(["3/4", "1/4"])
    nu = ProbMeasure.from_values(["1/4", "3/4"])
    assert brute_force_two_point(space, mu, nu) == F(1, 2)
    res = kantorovich(space, mu, nu)
    assert res.value == F(1, 2)
    verts = lip1_vertices(space)
    assert kantorovich_dual_oracle(space, mu, nu, verts) == F(1, 2)


def test_two_point_brute_force_sweep():
    rng = SplitMix64(5)
    space = two_point_space()
    for _ in range(20):
        mu = random_rational_measure(2, rng)
        nu = random_rational_measure(2, rng)
        assert kantorovich(space, mu, nu).value == brute_force_two_point(space, mu, nu)


def test_dual_oracle_dirac_attained_at_distance_vertex():
    space = validate_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    verts = lip1_vertices(space)
    val = kantorovich_dual_oracle(
        space, ProbMeasure.dirac(3, 0), ProbMeasure.dirac(3, 2), verts
    )
    assert val == space.dist[0][2]


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        kantorovich(two_point_space(), ProbMeasure.dirac(3, 0), ProbMeasure.dirac(3, 1))


def test_stale_vertex_set():
    rng = SplitMix64(9)
    s1 = random_metric_space(3, rng)
    s2 = random_metric_space(3, rng)
    verts = lip1_vertices(s1)
    with pytest.raises(StaleVertexSet):
        kantorovich_dual_oracle(
            s2, ProbMeasure.dirac(3, 0), ProbMeasure.dirac(3, 1), verts
        )


def test_duality_on_random_instances():
    rng = SplitMix64(13)
    for _ in range(15):
        n = rng.randint(2, 5)
        space = random_metric_space(n, rng)
        verts = lip1_vertices(space)
        mu = random_rational_measure(n, rng)
        nu = random_rational_measure(n, rng)
        res = kantorovich(space, mu, nu)
        assert res.value == kantorovich_dual_oracle(space, mu, nu, verts)
        assert res.potential.constant <= 1
        assert res.value <= space.diam
        assert (res.value == 0) == (mu.weights == nu.weights)


def test_against_scipy_linprog():
    linprog = pytest.importorskip("scipy.optimize").linprog
    import numpy as np

    rng = SplitMix64(21)
    for _ in range(8):
        n = rng.randint(2, 5)
        space = random_metric_space(n, rng)
        mu = random_rational_measure(n, rng)
        nu = random_rational_measure(n, rng)
        cost = np.array([[float(space.dist[i][j]) for j in range(n)] for i in range(n)])
        a_eq = []
        for i in range(n):
            row = np.zeros((n, n))
            row[i, :] = 1
            a_eq.append(row.ravel())
        for j in range(n):
            col = np.zeros((n, n))
            col[:, j] = 1
            a_eq.append(col.ravel())
        b_eq = [float(w) for w in mu.weights] + [float(w) for w in nu.weights]
        res = linprog(cost.ravel(), A_eq=np.array(a_eq), b_eq=b_eq, bounds=(0, None))
        assert res.success
        assert abs(float(kantorovich(space, mu, nu).value) - res.fun) < 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_metric_axioms_of_h(seed):
    rng = SplitMix64(seed)
    n = rng.randint(2, 4)
    space = random_metric_space(n, rng)
    mu = random_rational_measure(n, rng)
    nu = random_rational_measure(n, rng)
    tau = random_rational_measure(n, rng)
    h_mn = kantorovich(space, mu, nu).value
    h_nm = kantorovich(space, nu, mu).value
    h_mt = kantorovich(space, mu, tau).value
    h_tn = kantorovich(space, tau, nu).value
    assert h_mn == h_nm
    assert h_mn <= h_mt + h_tn
    assert h_mn >= 0


def test_weak_gap_examples():
    space = two_point_space()
    mu = ProbMeasure.from_values(["3/4", "1/4"])
    nu = ProbMeasure.from_values(["1/4", "3/4"])
    lhs, rhs = weak_gap(space, [5, 5], mu, nu)
    assert (lhs, rhs) == (0, 0)
    # f = d(., p0) between diracs at p0 and p1: both sides equal the distance
    lhs, rhs = weak_gap(space, [0, 1], ProbMeasure.dirac(2, 0), ProbMeasure.dirac(2, 1))
    assert lhs == 1 and rhs == 1


def test_weak_gap_random_bound():
    rng = SplitMix64(33)
    for _ in range(10):
        n = rng.randint(2, 5)
        space = random_metric_space(n, rng)
        f = [F(rng.randint(-24, 24), 8) for _ in range(n)]
        mu = random_rational_measure(n, rng)
        nu = random_rational_measure(n, rng)
        lhs, rhs = weak_gap(space, f, mu, nu)
        assert lhs <= rhs


def test_signed_measure_total_variation():
    s = SignedMeasure((F(1, 2), F(-1, 3), F(0)))
    assert s.total_variation == F(5, 6)
