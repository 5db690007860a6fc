"""Metric space validation and exact Lipschitz polytope geometry."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pvmk.errors import (
    AsymmetricDistance,
    SpaceTooLarge,
    TriangleViolation,
    ZeroDistanceDistinctPoints,
)
from pvmk.metric_core import (
    audit_space,
    certify_lipschitz,
    lip1_vertices,
    lip_constant,
    mcshane,
    validate_space,
)
from pvmk.rng import SplitMix64
from pvmk.sampling import random_metric_space

F = Fraction


def path_space():
    # three points in a row: d(p0,p1) = d(p1,p2) = 1, d(p0,p2) = 2
    return validate_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_validate_two_points():
    space = validate_space([[0, 1], [1, 0]])
    assert space.diam == 1
    assert space.point_ids == ("p0", "p1")


def test_validate_dyadic_depth2_representatives():
    # |x - y| on {0, 1/4, 1/2, 3/4}; diameter computed by direct arithmetic
    reps = [F(0), F(1, 4), F(1, 2), F(3, 4)]
    dist = [[abs(a - b) for b in reps] for a in reps]
    space = validate_space(dist)
    assert space.diam == F(3, 4)


def test_triangle_violation_witness():
    with pytest.raises(TriangleViolation) as err:
        validate_space([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert err.value.witness == ("p0", "p1", "p2")


def test_asymmetric_distance_rejected():
    with pytest.raises(AsymmetricDistance):
        validate_space([[0, 1], [2, 0]])


def test_zero_distance_distinct_points_rejected():
    with pytest.raises(ZeroDistanceDistinctPoints):
        validate_space([[0, 0], [0, 0]])


def test_audit_collects_all_violations():
    bad = audit_space([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert any(isinstance(v, TriangleViolation) for v in bad)


def test_lip_constant_examples():
    space = path_space()
    assert lip_constant([3, 3, 3], space) == 0
    dist_to_p0 = [space.dist[0][j] for j in range(3)]
    assert lip_constant(dist_to_p0, space) == 1
    assert lip_constant([2 * x for x in dist_to_p0], space) == 2


def test_lip1_vertices_two_points():
    space = validate_space([[0, 1], [1, 0]])
    verts = lip1_vertices(space)
    assert set(verts.vertices) == {(F(0), F(1)), (F(0), F(-1))}


def test_lip1_vertices_path_frozen():
    verts = lip1_vertices(path_space())
    expected = {
        (F(0), F(1), F(2)),
        (F(0), F(1), F(0)),
        (F(0), F(-1), F(0)),
        (F(0), F(-1), F(-2)),
    }
    assert set(verts.vertices) == expected


def test_lip1_vertices_cap():
    rng = SplitMix64(3)
    space = random_metric_space(5, rng)
    with pytest.raises(SpaceTooLarge):
        lip1_vertices(space, cap=4)


def test_lip1_vertices_negation_closure():
    rng = SplitMix64(17)
    for _ in range(5):
        space = random_metric_space(rng.randint(2, 5), rng)
        verts = set(lip1_vertices(space).vertices)
        assert {tuple(-x for x in v) for v in verts} == verts


def _gauss_solve(rows, rhs):
    """Exact solve of a square rational system; None if singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col]
        aug[col] = [x / inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def brute_force_vertices(space, anchor=0):
    """Literal enumeration: (n-1)-subsets of one-sided constraints, rank
    test by exact elimination, then feasibility."""
    n = space.n
    constraints = [
        (x, y) for x in range(n) for y in range(n) if x != y
    ]  # phi(x) - phi(y) <= d(x, y), tight when chosen
    found = set()
    for subset in itertools.combinations(constraints, n - 1):
        rows = []
        rhs = []
        for x, y in subset:
            row = [F(0)] * n
            row[x] += 1
            row[y] -= 1
            rows.append(row)
            rhs.append(space.dist[x][y])
        row = [F(0)] * n
        row[anchor] = F(1)
        rows.append(row)
        rhs.append(F(0))
        sol = _gauss_solve(rows, rhs)
        if sol is None:
            continue
        feasible = all(
            sol[x] - sol[y] <= space.dist[x][y] for x, y in constraints
        )
        if feasible:
            found.add(tuple(sol))
    return found


def test_vertices_match_subset_enumeration_oracle():
    rng = SplitMix64(23)
    for _ in range(4):
        space = random_metric_space(rng.randint(2, 4), rng)
        assert set(lip1_vertices(space).vertices) == brute_force_vertices(space)


def test_vertices_match_oracle_on_path():
    space = path_space()
    assert set(lip1_vertices(space).vertices) == brute_force_vertices(space)


def test_anchored_lip1_membership_lp():
    # every anchored 1-Lipschitz function is a convex combination of vertices
    scipy = pytest.importorskip("scipy.optimize")
    import numpy as np

    rng = SplitMix64(29)
    for _ in range(5):
        space = random_metric_space(rng.randint(2, 4), rng)
        verts = lip1_vertices(space)
        raw = [rng.uniform(-float(space.diam), float(space.diam)) for _ in range(space.n)]
        phi = mcshane(space, raw)
        phi = [x - phi[0] for x in phi]
        vmat = np.array([[float(x) for x in v] for v in verts.vertices]).T
        n_verts = vmat.shape[1]
        a_eq = np.vstack([vmat, np.ones((1, n_verts))])
        b_eq = np.array([float(x) for x in phi] + [1.0])
        res = scipy.linprog(
            c=np.zeros(n_verts), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * n_verts
        )
        assert res.success


def test_vertex_lipschitz_exactness():
    rng = SplitMix64(31)
    space = random_metric_space(5, rng)
    for vert in lip1_vertices(space).vertices:
        assert lip_constant(vert, space) <= 1


def test_mcshane_is_one_lipschitz():
    rng = SplitMix64(37)
    for _ in range(5):
        space = random_metric_space(rng.randint(2, 5), rng)
        raw = [F(rng.randint(-32, 32), 8) for _ in range(space.n)]
        reg = mcshane(space, raw)
        assert lip_constant(reg, space) <= 1


def test_certify_lipschitz():
    space = path_space()
    f = certify_lipschitz(space, [F(0), F(1, 2), F(1)])
    assert f.constant == F(1, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=5))
def test_random_metric_spaces_validate(seed, n):
    space = random_metric_space(n, SplitMix64(seed))
    # triangle inequality and symmetry hold after closure
    for i in range(n):
        for j in range(n):
            assert space.dist[i][j] == space.dist[j][i]
            for k in range(n):
                assert space.dist[i][j] <= space.dist[i][k] + space.dist[k][j]


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_vertices_are_feasible_and_mirrored(seed):
    rng = SplitMix64(seed)
    space = random_metric_space(rng.randint(2, 5), rng)
    verts = lip1_vertices(space)
    anchor = space.index(verts.anchor)
    for v in verts.vertices:
        assert v[anchor] == 0
        for i in range(space.n):
            for j in range(space.n):
                assert abs(v[i] - v[j]) <= space.dist[i][j]
        assert tuple(-x for x in v) in set(verts.vertices)
