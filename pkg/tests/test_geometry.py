import random
from itertools import chain, combinations, product
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from latsize.geometry import (
    AffineUnimodularMap,
    BudgetExceeded,
    DimensionMismatch,
    LatticePolytope,
    apply_map,
    directions_within,
    is_empty_polytope,
    is_primitive,
    l1,
    lattice_length,
    lattice_points,
    lattice_width,
    minimal_directions,
    pullback_direction,
    standard_simplex,
    unit_cube,
    vertices,
    width_in_direction,
)
from latsize.oracle import oracle_width

from conftest import random_full_polytope, random_polytope, random_unimodular

L = LatticePolytope.from_points
T13 = L([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 3, 1)])
T22 = L([(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 2, 1)])
T23 = L([(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 3, 1)])
A_EX = ((1, 0, 0), (0, 0, 1), (1, -1, 1))


def points_in_simplex(verts, box):
    """Lattice points of a full-dimensional simplex by exact barycentric solve."""
    n = len(verts[0])
    M = sympy.Matrix([[v[i] for v in verts] for i in range(n)] + [[1] * len(verts)])
    out = []
    for x in box:
        lam = M.LUsolve(sympy.Matrix(list(x) + [1]))
        if all(c >= 0 for c in lam):
            out.append(tuple(x))
    return sorted(out)


# ---------------------------------------------------------------- widths / l1


def test_width_examples():
    assert width_in_direction(standard_simplex(3), (1, 1, 1)) == 1
    assert width_in_direction(T13, (0, 0, 1)) == 1
    assert width_in_direction(T13, (1, -1, 1)) == 2


def test_width_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        width_in_direction(T13, (1, 0))


def test_l1_examples():
    assert l1(standard_simplex(3)) == 1
    assert l1(T13) == 5
    assert l1(L([(7, -2)])) == 0


def test_polytope_validation():
    with pytest.raises(ValueError):
        LatticePolytope(())
    with pytest.raises(DimensionMismatch):
        L([(0, 0), (1, 0, 0)])
    assert L([("12345678901234567890", 0)]).points == ((12345678901234567890, 0),)
    assert len(L([(0, 0), (0, 0), (1, 0)]).canonical()) == 2


# ---------------------------------------------------------------- maps


def test_apply_map_examples():
    ident = AffineUnimodularMap(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert apply_map(ident, T13) == T13
    image = apply_map(AffineUnimodularMap(A_EX), T13)
    assert image.points == ((1, 0, 1), (0, 0, -1), (0, 1, 1), (1, 1, -1))
    shifted = apply_map(AffineUnimodularMap(A_EX, (0, 0, 1)), T13)
    assert all(0 <= c <= 2 for p in shifted.points for c in p)


def test_map_rejects_non_unimodular():
    with pytest.raises(ValueError):
        AffineUnimodularMap(((2, 0), (0, 1)))
    with pytest.raises(DimensionMismatch):
        apply_map(AffineUnimodularMap(((1, 0), (0, 1))), T13)


def test_pullback_examples():
    assert pullback_direction(((1, 0, 0), (0, 1, 0), (0, 0, 1)), (3, -1, 2)) == (3, -1, 2)
    assert pullback_direction(A_EX, (0, 0, 1)) == (1, -1, 1)


# ---------------------------------------------------------------- primitivity, lengths


def test_is_primitive():
    assert is_primitive((1, 0, 0))
    assert not is_primitive((2, 4, 6))
    p = 5
    assert is_primitive((p - 1, -1, p - 1))


def test_lattice_length():
    assert lattice_length((0, 0, 1), (2, 6, 1)) == 2
    assert lattice_length((4, 4), (4, 4)) == 0
    assert lattice_length((0, 0), (3, 5)) == 1


@settings(deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=3), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_lattice_length_counts_points(a, b):
    b = b[: len(a)]
    d = [y - x for x, y in zip(a, b)]
    dd = sum(v * v for v in d)
    count = 0
    for x in product(*(range(min(u, v), max(u, v) + 1) for u, v in zip(a, b))):
        r = [xi - ai for xi, ai in zip(x, a)]
        # on the segment iff r = t d with 0 <= t <= 1
        dot = sum(u * v for u, v in zip(r, d))
        if dot * dot == sum(v * v for v in r) * dd and 0 <= dot <= dd:
            count += 1
    assert lattice_length(a, b) == count - 1


# ---------------------------------------------------------------- lattice points, emptiness


def test_lattice_points_examples():
    assert lattice_points(standard_simplex(3)) == sorted(standard_simplex(3).points)
    pts = lattice_points(T22)
    assert pts == points_in_simplex(T22.points, product(range(3), repeat=3))
    assert len(pts) == 5 and (1, 1, 1) in pts
    assert len(lattice_points(L([(0, 0), (2, 0)]))) == 3


@pytest.mark.parametrize("seed", range(8))
def test_lattice_points_against_barycentric_oracle(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    while True:
        P = random_polytope(n, rng, n + 1, -3, 3)
        if P.is_full_dimensional() and len(P.canonical()) == n + 1:
            break
    box = product(*(range(min(c), max(c) + 1) for c in zip(*P.points)))
    assert lattice_points(P) == points_in_simplex(P.points, box)


def test_lattice_points_degenerate_hulls():
    # a triangle spanning a plane inside Z^3
    tri = L([(0, 0, 0), (2, 0, 2), (0, 2, 2)])
    pts = lattice_points(tri)
    assert pts == sorted([(0, 0, 0), (1, 0, 1), (2, 0, 2), (0, 1, 1), (1, 1, 2), (0, 2, 2)])
    assert lattice_points(L([(1, 1, 1)])) == [(1, 1, 1)]
    # a diagonal segment has gcd + 1 points
    assert len(lattice_points(L([(0, 0, 0), (3, 6, 9)]))) == 4


def test_lattice_points_budget():
    with pytest.raises(BudgetExceeded):
        lattice_points(standard_simplex(3, 100), max_cells=1000)


def test_vertices():
    square = L([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0)])
    assert vertices(square) == [(0, 0), (0, 2), (2, 0), (2, 2)]
    assert vertices(L([(0, 0), (1, 1), (2, 2)])) == [(0, 0), (2, 2)]


def test_emptiness_examples():
    assert is_empty_polytope(T23)
    assert not is_empty_polytope(T22)
    assert is_empty_polytope(unit_cube(3))


@pytest.mark.parametrize("a, b", [((0, 0), (4, 6)), ((1, 2, 3), (4, 2, 0)), ((0,), (5,)), ((0, 0), (3, 5))])
def test_segment_emptiness_matches_lattice_length(a, b):
    seg = L([a, b])
    assert is_empty_polytope(seg) == (lattice_length(a, b) == 1)


# ---------------------------------------------------------------- lattice width


def test_lattice_width_examples():
    T125 = L([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 2, 5, 1)])
    assert lattice_width(T125)[0] == 1
    for n in (1, 2, 3, 4):
        assert lattice_width(standard_simplex(n))[0] == 1
    assert lattice_width(standard_simplex(2, 2))[0] == 2
    assert oracle_width(standard_simplex(2, 2), 2) == 2
    assert lattice_width(T13) == (1, (0, 0, 1))


def test_lattice_width_degenerate():
    w, h = lattice_width(L([(0, 0), (5, 0)]))
    assert w == 0 and h == (0, 1)
    w, h = lattice_width(L([(0, 0, 1), (1, 0, 0), (0, 1, 0)]))
    assert w == 0 and width_in_direction(L([(0, 0, 1), (1, 0, 0), (0, 1, 0)]), h) == 0


def test_directions_within_simplex():
    assert directions_within(standard_simplex(2), 1) == [(0, 1), (1, 0), (1, 1)]
    assert directions_within(standard_simplex(2), 0) == []


@pytest.mark.parametrize("seed", range(15))
def test_directions_within_matches_box_scan(seed):
    rng = random.Random(100 + seed)
    n = rng.choice([2, 3])
    P = random_full_polytope(n, rng, -2, 2)
    B = rng.randint(1, 4)
    R = 2 * B  # |h_i| <= B * (some edge length bound); generous box
    brute = set()
    for h in product(range(-R, R + 1), repeat=n):
        if any(h) and gcd(*h) == 1 and width_in_direction(P, h) <= B:
            first = next(x for x in h if x)
            brute.add(h if first > 0 else tuple(-x for x in h))
    got = directions_within(P, B)
    assert set(got) >= brute
    assert all(width_in_direction(P, h) <= B and is_primitive(h) for h in got)
    assert got == sorted(got)


@pytest.mark.parametrize("seed", range(10))
def test_lattice_width_against_oracle(seed):
    rng = random.Random(200 + seed)
    n = rng.choice([2, 3])
    P = random_full_polytope(n, rng, -3, 3)
    w, h = lattice_width(P)
    assert width_in_direction(P, h) == w and is_primitive(h)
    assert oracle_width(P, 6) == w


def test_minimal_directions():
    assert minimal_directions(T13) == [(0, 0, 1), (1, 0, 0)]


# ---------------------------------------------------------------- properties

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 4)


def _instance(seed, n):
    rng = random.Random(seed)
    A = random_unimodular(n, rng)
    P = random_polytope(n, rng)
    h = tuple(rng.randint(-5, 5) for _ in range(n))
    return A, P, h


def _image(A, P):
    return apply_map(AffineUnimodularMap(tuple(map(tuple, A))), P)


def _nonempty_subsets(k):
    return chain.from_iterable(combinations(range(k), r) for r in range(1, k + 1))


@settings(max_examples=200, deadline=None)
@given(seeds, dims)
def test_translation_invariance(seed, n):
    rng = random.Random(seed)
    P = random_polytope(n, rng)
    t = tuple(rng.randint(-9, 9) for _ in range(n))
    h = tuple(rng.randint(-5, 5) for _ in range(n))
    assert width_in_direction(P.translate(t), h) == width_in_direction(P, h)
    assert l1(P.translate(t)) == l1(P)


@settings(max_examples=200, deadline=None)
@given(seeds, dims)
def test_width_pullback_identity(seed, n):
    A, P, h = _instance(seed, n)
    assert width_in_direction(_image(A, P), h) == width_in_direction(P, pullback_direction(A, h))


@settings(max_examples=100, deadline=None)
@given(seeds, dims)
def test_zero_one_widths_bounded_by_l1(seed, n):
    _, P, _ = _instance(seed, n)
    for e in product((0, 1), repeat=n):
        if any(e):
            assert width_in_direction(P, e) <= l1(P)


@settings(max_examples=100, deadline=None)
@given(seeds, dims)
def test_row_subset_sums_bounded_by_image_l1(seed, n):
    A, P, _ = _instance(seed, n)
    bound = l1(_image(A, P))
    for S in _nonempty_subsets(n):
        h = [sum(A[i][j] for i in S) for j in range(n)]
        assert width_in_direction(P, h) <= bound


@settings(max_examples=100, deadline=None)
@given(seeds, dims)
def test_l1_row_formula_and_symmetries(seed, n):
    A, P, _ = _instance(seed, n)
    direct = l1(_image(A, P))

    def dmin(h):
        return min(sum(a * b for a, b in zip(h, x)) for x in P.points)

    total = [sum(col) for col in zip(*A)]
    formula = max(sum(a * b for a, b in zip(total, x)) for x in P.points) - sum(dmin(h) for h in A)
    assert formula == direct
    rng = random.Random(seed)
    perm = list(A)
    rng.shuffle(perm)
    assert l1(_image(perm, P)) == direct
    replaced = A[:-1] + [[-x for x in total]]
    assert l1(_image(replaced, P)) == direct


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(2, 3))
def test_lattice_width_is_minimal(seed, n):
    rng = random.Random(seed)
    P = random_full_polytope(n, rng, -3, 3)
    w, _ = lattice_width(P)
    for _ in range(20):
        h = tuple(rng.randint(-6, 6) for _ in range(n))
        if any(h) and is_primitive(h):
            assert w <= width_in_direction(P, h)
