"""The simplices T_{p_1...p_d} = conv{e_1, ..., e_{d+1}, (p_1, ..., p_d, 1)}.

For d = 2 these are White's empty tetrahedra T_pq (when gcd(p, q) = 1).
With alpha = p_1 + ... + p_{d-1} and k = floor((p_d - 2) / (alpha + 1)),
the lattice sizes are k + 3 (standard simplex) and k + 2 (unit cube)
whenever d >= 2, p_1, ..., p_{d-1} > 0, p_d >= 2 and p_d >= alpha^2 - alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Sequence

from .geometry import (
    AffineUnimodularMap,
    LatticePolytope,
    Point,
    as_point,
    directions_within,
    lattice_width,
    width_in_direction,
)

REASON_DIM = "d < 2"
REASON_POSITIVE = "some p_i <= 0 for i < d"
REASON_PD = "p_d < 2"
REASON_ALPHA = "p_d < alpha^2 - alpha"


class UndefinedK(ValueError):
    """k needs p_d >= 2."""


class OutOfScopeError(ValueError):
    def __init__(self, scope: "TheoremScope"):
        super().__init__("closed form does not apply: " + "; ".join(scope.reasons))
        self.scope = scope


@dataclass(frozen=True)
class FamilyParams:
    p: tuple[int, ...]

    def __post_init__(self):
        p = as_point(self.p)
        if not p:
            raise ValueError("need at least one parameter")
        if any(x < 0 for x in p):
            raise ValueError("parameters must be nonnegative")
        object.__setattr__(self, "p", p)

    @classmethod
    def of(cls, *p: int) -> "FamilyParams":
        return cls(tuple(p))

    @property
    def d(self) -> int:
        return len(self.p)

    @property
    def alpha(self) -> int:
        return sum(self.p[:-1])

    @property
    def pd(self) -> int:
        return self.p[-1]

    @property
    def has_k(self) -> bool:
        return self.pd >= 2

    @property
    def k(self) -> int:
        if not self.has_k:
            raise UndefinedK(f"k is undefined for p_d = {self.pd} < 2")
        return (self.pd - 2) // (self.alpha + 1)

    @property
    def gcd(self) -> int:
        g = 0
        for x in self.p:
            g = gcd(g, x)
        return g

    def __str__(self):
        return ",".join(map(str, self.p))


@dataclass(frozen=True)
class TheoremScope:
    in_scope: bool
    reasons: tuple[str, ...] = ()


def make_family_simplex(params: FamilyParams) -> LatticePolytope:
    n = params.d + 1
    pts = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    pts.append(params.p + (1,))
    return LatticePolytope(tuple(pts))


def white_tetrahedron(p: int, q: int) -> LatticePolytope:
    return make_family_simplex(FamilyParams.of(p, q))


def theorem_scope(params: FamilyParams) -> TheoremScope:
    reasons = []
    if params.d < 2:
        reasons.append(REASON_DIM)
    if any(x <= 0 for x in params.p[:-1]):
        reasons.append(REASON_POSITIVE)
    if params.pd < 2:
        reasons.append(REASON_PD)
    a = params.alpha
    if params.pd < a * a - a:
        reasons.append(REASON_ALPHA)
    return TheoremScope(not reasons, tuple(reasons))


def _require_scope(params: FamilyParams) -> None:
    scope = theorem_scope(params)
    if not scope.in_scope:
        raise OutOfScopeError(scope)


def closed_form_ls_delta(params: FamilyParams) -> int:
    _require_scope(params)
    return params.k + 3


def closed_form_ls_cube(params: FamilyParams) -> int:
    _require_scope(params)
    return params.k + 2


def witness_matrix(params: FamilyParams) -> AffineUnimodularMap:
    """The explicit unimodular map realizing both upper bounds.

    Rows are e_1, ..., e_{d-1}, e_{d+1} and (k+1, ..., k+1, -1, p_d - alpha(k+1) - 1).
    The translation e_{d+1} lifts the one negative coordinate, so the image
    sits in (k+3) times the standard simplex and in [0, k+2]^{d+1} when
    the parameters are in scope.
    """
    d, k, a = params.d, params.k, params.alpha
    n = d + 1

    def e(i):
        return tuple(1 if j == i else 0 for j in range(n))

    rows = [e(i) for i in range(d - 1)]
    rows.append(e(d))
    rows.append((k + 1,) * (d - 1) + (-1, params.pd - a * (k + 1) - 1))
    return AffineUnimodularMap(tuple(rows), e(d))


def family_width(params: FamilyParams) -> int:
    return lattice_width(make_family_simplex(params))[0]


@dataclass
class LemmaReport:
    """Outcome of a complete enumeration of narrow directions."""

    params: FamilyParams
    bound: int
    directions: list[Point] = field(default_factory=list)
    violations: list[Point] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def unit_directions(self) -> list[Point]:
        """Enumerated directions whose d-th coordinate is +-1."""
        i = self.params.d - 1
        return [h for h in self.directions if abs(h[i]) == 1]


def _narrow_directions(params: FamilyParams, max_cells: int | None) -> tuple[int, list[Point]]:
    bound = params.k + 2
    T = make_family_simplex(params)
    kw = {} if max_cells is None else {"max_cells": max_cells}
    return bound, directions_within(T, bound, **kw)


def check_lemma_ad_restriction(
    params: FamilyParams, max_cells: int | None = None
) -> LemmaReport:
    """Every primitive h with w_h(T) <= k+2 has d-th coordinate in {0, 1, -1}."""
    bound, dirs = _narrow_directions(params, max_cells)
    i = params.d - 1
    return LemmaReport(params, bound, dirs, [h for h in dirs if abs(h[i]) >= 2])


def check_lemma_forced_width(
    params: FamilyParams, max_cells: int | None = None
) -> LemmaReport:
    """Every primitive h with d-th coordinate +-1 and w_h(T) <= k+2 has width exactly k+2."""
    bound, dirs = _narrow_directions(params, max_cells)
    T = make_family_simplex(params)
    report = LemmaReport(params, bound, dirs)
    report.violations = [h for h in report.unit_directions() if width_in_direction(T, h) != bound]
    return report


def proposition_inequalities(params: FamilyParams) -> dict[str, bool]:
    """The three integer inequalities behind l1(A T) = k + 3."""
    k, a, pd = params.k, params.alpha, params.pd
    return {
        "p_d - alpha(k+1) <= k+2": pd - a * (k + 1) <= k + 2,
        "p_d - alpha(k+1) - 1 >= -1": pd - a * (k + 1) - 1 >= -1,
        "alpha <= k+2": a <= k + 2,
    }


def long_edge(params: FamilyParams) -> tuple[Point, Point]:
    """The only edge of T that can be non-primitive: e_{d+1} to (p, 1)."""
    n = params.d + 1
    return (0,) * (n - 1) + (1,), params.p + (1,)


def iter_params(ranges: Sequence[tuple[int, int]]):
    """All parameter tuples in the given inclusive ranges, lexicographically."""
    if not ranges:
        return
    for p in product(*(range(lo, hi + 1) for lo, hi in ranges)):
        yield FamilyParams(tuple(p))
