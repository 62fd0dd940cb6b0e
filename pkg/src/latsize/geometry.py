"""Lattice points, lattice polytopes and the functionals measured on them.

A polytope is kept as the list of lattice points whose convex hull it is.
Every quantity used by the rest of the package (directional widths, the l1
functional, images under unimodular maps) is a linear functional evaluated
on those points, so no facet description is ever needed for them. Facets
are only computed on demand for lattice point enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

from . import linalg

Point = tuple[int, ...]

#: default cap on the number of cells scanned by box enumerations
DEFAULT_MAX_CELLS = 10**7


class DimensionMismatch(ValueError):
    pass


class DegeneratePolytopeError(ValueError):
    """Raised when an operation needs a full-dimensional polytope."""


class BudgetExceeded(RuntimeError):
    """An enumeration would scan more cells than its configured cap."""


def as_point(coords: Iterable) -> Point:
    """Coerce to a tuple of ints; numeric strings are accepted for big values."""
    out = []
    for x in coords:
        if isinstance(x, bool):
            raise TypeError("booleans are not lattice coordinates")
        if isinstance(x, str):
            x = int(x.strip())
        elif int(x) != x:
            raise ValueError(f"non-integer coordinate {x!r}")
        out.append(int(x))
    return tuple(out)


def dot(h: Sequence[int], x: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(h, x))


def normalize_sign(h: Sequence[int]) -> Point:
    """Flip ``h`` so that its first nonzero entry is positive."""
    for x in h:
        if x != 0:
            return tuple(h) if x > 0 else tuple(-y for y in h)
    return tuple(h)


def is_primitive(h: Sequence[int]) -> bool:
    g = 0
    for x in h:
        g = gcd(g, x)
    return g == 1


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many lattice points."""

    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        if not pts:
            raise ValueError("a lattice polytope needs at least one point")
        dim = len(pts[0])
        if dim < 1:
            raise ValueError("points must have at least one coordinate")
        if any(len(p) != dim for p in pts):
            raise DimensionMismatch("all points must have the same dimension")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points: Iterable[Iterable]) -> "LatticePolytope":
        return cls(tuple(as_point(p) for p in points))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self):
        return len(self.points)

    def canonical(self) -> "LatticePolytope":
        """Sorted, duplicate-free copy with the same convex hull."""
        return LatticePolytope(tuple(sorted(set(self.points))))

    def translate(self, t: Sequence[int]) -> "LatticePolytope":
        t = _check_dim(as_point(t), self.dim)
        return LatticePolytope(tuple(tuple(a + b for a, b in zip(p, t)) for p in self.points))

    def scale(self, c: int) -> "LatticePolytope":
        return LatticePolytope(tuple(tuple(c * a for a in p) for p in self.points))

    def affine_dim(self) -> int:
        p0 = self.points[0]
        diffs = [tuple(a - b for a, b in zip(p, p0)) for p in self.points[1:]]
        return linalg.rank(diffs) if diffs else 0

    def is_full_dimensional(self) -> bool:
        return self.affine_dim() == self.dim


def _check_dim(v: Point, dim: int) -> Point:
    if len(v) != dim:
        raise DimensionMismatch(f"expected length {dim}, got {len(v)}")
    return v


def standard_simplex(n: int, scale: int = 1) -> LatticePolytope:
    pts = [(0,) * n] + [tuple(scale if i == j else 0 for j in range(n)) for i in range(n)]
    return LatticePolytope(tuple(pts))


def unit_cube(n: int) -> LatticePolytope:
    return LatticePolytope(tuple(product((0, 1), repeat=n)))


# ----------------------------------------------------------------------------
# linear functionals


def width_in_direction(P: LatticePolytope, h: Sequence[int]) -> int:
    """max - min of <h, x> over the points of P."""
    h = _check_dim(as_point(h), P.dim)
    vals = [dot(h, x) for x in P.points]
    return max(vals) - min(vals)


def l1(P: LatticePolytope) -> int:
    """Max coordinate sum minus the sum of the coordinatewise minima.

    This is the smallest l with P - m inside l times the standard simplex,
    where m is the vector of coordinate minima.
    """
    top = max(sum(x) for x in P.points)
    return top - sum(min(col) for col in zip(*P.points))


def coordinate_minima(P: LatticePolytope) -> Point:
    return tuple(min(col) for col in zip(*P.points))


def max_coordinate_width(P: LatticePolytope) -> int:
    return max(max(col) - min(col) for col in zip(*P.points))


def fits_in_simplex(P: LatticePolytope, l: int) -> bool:
    """True iff every point is in l times the standard simplex (no translation)."""
    return all(min(x) >= 0 and sum(x) <= l for x in P.points)


def fits_in_cube(P: LatticePolytope, l: int) -> bool:
    """True iff every point lies in [0, l]^n (no translation)."""
    return all(0 <= c <= l for x in P.points for c in x)


# ----------------------------------------------------------------------------
# unimodular maps


@dataclass(frozen=True)
class AffineUnimodularMap:
    """x -> matrix @ x + translation with det(matrix) = +-1."""

    matrix: tuple[Point, ...]
    translation: Point = ()

    def __post_init__(self):
        m = tuple(as_point(r) for r in self.matrix)
        n = len(m)
        if n == 0 or any(len(r) != n for r in m):
            raise ValueError("matrix must be square and nonempty")
        t = as_point(self.translation) if self.translation else (0,) * n
        _check_dim(t, n)
        if abs(linalg.det(m)) != 1:
            raise ValueError(f"matrix is not unimodular (det = {linalg.det(m)})")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", t)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def determinant(self) -> int:
        return linalg.det(self.matrix)

    def __call__(self, x: Sequence[int]) -> Point:
        x = _check_dim(as_point(x), self.dim)
        return tuple(dot(r, x) + t for r, t in zip(self.matrix, self.translation))

    def with_translation(self, t: Sequence[int]) -> "AffineUnimodularMap":
        return AffineUnimodularMap(self.matrix, as_point(t))


def apply_map(L: AffineUnimodularMap, P: LatticePolytope) -> LatticePolytope:
    if L.dim != P.dim:
        raise DimensionMismatch(f"map acts on Z^{L.dim}, polytope lives in Z^{P.dim}")
    return LatticePolytope(tuple(L(x) for x in P.points))


def pullback_direction(A: Sequence[Sequence[int]], h: Sequence[int]) -> Point:
    """A^T h, so that w_h(A P) = w_{A^T h}(P)."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("matrix must be square")
    h = _check_dim(as_point(h), n)
    return tuple(sum(A[i][j] * h[i] for i in range(n)) for j in range(n))


# ----------------------------------------------------------------------------
# lattice points, vertices, emptiness


def lattice_length(a: Sequence[int], b: Sequence[int]) -> int:
    a, b = as_point(a), as_point(b)
    _check_dim(b, len(a))
    g = 0
    for x, y in zip(a, b):
        g = gcd(g, y - x)
    return g


class _Hull:
    """Exact membership test for the convex hull of a point set.

    The hull is described inside its affine hull: equations cut out the
    affine hull, and facet inequalities are computed for the projection onto
    pivot coordinates, which is injective on the affine hull.
    """

    def __init__(self, points: Sequence[Point]):
        pts = sorted(set(points))
        self.n = len(pts[0])
        self.base = pts[0]
        diffs = [tuple(a - b for a, b in zip(p, self.base)) for p in pts[1:]]
        basis, pivots = linalg.rref(diffs) if diffs else ([], [])
        self.basis = basis
        self.pivots = pivots
        self.m = len(pivots)
        self.equations = linalg.integer_kernel(diffs, self.n) if diffs else [
            tuple(1 if i == j else 0 for j in range(self.n)) for i in range(self.n)
        ]
        self.projected = [tuple(p[c] for c in pivots) for p in pts]
        self.facets = _facets(self.projected, self.m) if self.m else []

    def contains(self, x: Sequence[int]) -> bool:
        for a in self.equations:
            if dot(a, x) != dot(a, self.base):
                return False
        y = tuple(x[c] for c in self.pivots)
        return all(dot(a, y) <= b for a, b in self.facets)

    def lift(self, y: Sequence[int]) -> Point | None:
        """Lattice point of the affine hull with pivot coordinates y, if any."""
        x = list(self.base)
        for yj, row, c in zip(y, self.basis, self.pivots):
            step = yj - self.base[c]
            for i in range(self.n):
                x[i] += step * row[i]
        if any(v.denominator != 1 for v in x if hasattr(v, "denominator")):
            return None
        return tuple(int(v) for v in x)


def _facets(points: Sequence[Point], m: int) -> list[tuple[Point, int]]:
    """Facet inequalities <a, y> <= b of a full-dimensional point set in Z^m.

    Brute force over m-subsets of points; fine for the handful of points
    used here.
    """
    found = set()
    for combo in combinations(points, m):
        q0 = combo[0]
        diffs = [tuple(a - b for a, b in zip(q, q0)) for q in combo[1:]]
        a = linalg.cross(diffs, m)
        if not any(a):
            continue
        a = linalg.primitive(a)
        b = dot(a, q0)
        vals = [dot(a, p) for p in points]
        if all(v <= b for v in vals):
            found.add((a, b))
        elif all(v >= b for v in vals):
            found.add((tuple(-c for c in a), -b))
    return sorted(found)


def lattice_points(P: LatticePolytope, max_cells: int = DEFAULT_MAX_CELLS) -> list[Point]:
    """All lattice points of conv(P), sorted.

    Scans the bounding box of the projection onto the pivot coordinates of
    the affine hull, lifting each candidate back exactly.
    """
    hull = _Hull(P.points)
    if hull.m == 0:
        return [hull.base]
    lo = [min(q[j] for q in hull.projected) for j in range(hull.m)]
    hi = [max(q[j] for q in hull.projected) for j in range(hull.m)]
    cells = 1
    for a, b in zip(lo, hi):
        cells *= b - a + 1
    if cells > max_cells:
        raise BudgetExceeded(f"bounding box has {cells} cells (cap {max_cells})")
    out = []
    for y in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if not all(dot(a, y) <= b for a, b in hull.facets):
            continue
        x = hull.lift(y)
        if x is not None:
            out.append(x)
    return sorted(out)


def in_hull(points: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    return _Hull([as_point(p) for p in points]).contains(as_point(x))


def vertices(P: LatticePolytope) -> list[Point]:
    """Points of P that are not in the convex hull of the remaining ones."""
    pts = P.canonical().points
    if len(pts) == 1:
        return list(pts)
    return [p for i, p in enumerate(pts) if not in_hull(pts[:i] + pts[i + 1:], p)]


def is_empty_polytope(P: LatticePolytope, max_cells: int = DEFAULT_MAX_CELLS) -> bool:
    return set(lattice_points(P, max_cells)) == set(vertices(P))


# ----------------------------------------------------------------------------
# directions of small width


def _spanning_differences(P: LatticePolytope) -> list[Point]:
    pts = P.canonical().points
    p0 = pts[0]
    chosen: list[Point] = []
    for p in pts[1:]:
        u = tuple(a - b for a, b in zip(p, p0))
        if linalg.rank(chosen + [u]) > len(chosen):
            chosen.append(u)
        if len(chosen) == P.dim:
            break
    return chosen


def directions_within(
    P: LatticePolytope, bound: int, max_cells: int = DEFAULT_MAX_CELLS
) -> list[Point]:
    """Every primitive h with w_h(P) <= bound, sign-normalized and sorted.

    Complete by the dual-box argument: for n linearly independent
    differences u_i of points of P, any such h has |<h, u_i>| <= bound, so
    h = U^{-1} z for some integer z in [-bound, bound]^n.
    """
    if bound < 0:
        return []
    U = _spanning_differences(P)
    n = P.dim
    if len(U) < n:
        raise DegeneratePolytopeError("polytope is not full-dimensional")
    cells = (2 * bound + 1) ** n
    if cells > max_cells:
        raise BudgetExceeded(f"dual box has {cells} cells (cap {max_cells})")
    adj, d = linalg.adjugate(U)
    pts = P.points
    found = []
    # z and -z give h and -h; keep z with first nonzero entry positive
    for z in product(range(-bound, bound + 1), repeat=n):
        if normalize_sign(z) != z or not any(z):
            continue
        num = [dot(row, z) for row in adj]
        if any(v % d for v in num):
            continue
        h = normalize_sign([v // d for v in num])
        if not is_primitive(h):
            continue
        vals = [dot(h, x) for x in pts]
        if max(vals) - min(vals) <= bound:
            found.append(h)
    return sorted(set(found))


def lattice_width(
    P: LatticePolytope, max_cells: int = DEFAULT_MAX_CELLS
) -> tuple[int, Point]:
    """Lattice width of P and the lexicographically smallest primitive witness.

    A polytope that is not full-dimensional has width 0, witnessed by a
    primitive normal of its affine hull.
    """
    if not P.is_full_dimensional():
        hull = _Hull(P.points)
        return 0, normalize_sign(min(normalize_sign(a) for a in hull.equations))
    bound = min(width_in_direction(P, e) for e in _unit_vectors(P.dim))
    dirs = directions_within(P, bound, max_cells)
    widths = [width_in_direction(P, h) for h in dirs]
    best = min(widths)
    return best, dirs[widths.index(best)]


def minimal_directions(P: LatticePolytope, max_cells: int = DEFAULT_MAX_CELLS) -> list[Point]:
    """All sign-normalized primitive directions attaining the lattice width."""
    w, _ = lattice_width(P, max_cells)
    return [h for h in directions_within(P, w, max_cells) if width_in_direction(P, h) == w]


def _unit_vectors(n: int) -> list[Point]:
    return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
