"""Exact lattice size by iterative deepening over unimodular matrices.

For a bound B the search decides whether some unimodular A has
l1(A P) <= B (simplex mode) or max_i w_{row_i}(A P) <= B (cube mode).
Every row of such an A is a primitive direction of width <= B, so the rows
are drawn from the complete list produced by the dual-box enumeration and
matrices are assembled row by row. Pruning rules:

* row order: rows are taken in strictly increasing candidate order, since
  permuting rows changes neither l1 nor the maximal row width;
* partial score (simplex mode): l1 of the partial image, i.e.
  ``max_x sum_i (<h_i, x> - min <h_i, .>)``, only grows as rows are added,
  and bounds the width of every sum of chosen rows;
* extendability: a partial matrix extends to a unimodular one only if the
  gcd of its maximal minors is 1 (this also catches rank deficiency);
* span: a level is skipped outright when the candidates do not generate Z^n;
* last-row replacement (simplex mode): (h_1, ..., h_n) and the tuple with
  h_n replaced by -(h_1 + ... + h_n) give the same l1, so only the
  representative whose implied extra vector comes last is accepted.

Translations never matter for l1 or widths; the witness translation is
chosen afterwards so that the image lies in the nonnegative orthant.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from math import factorial
from typing import Sequence

import numpy as np

from . import linalg
from .geometry import (
    AffineUnimodularMap,
    DegeneratePolytopeError,
    LatticePolytope,
    Point,
    apply_map,
    coordinate_minima,
    directions_within,
    fits_in_cube,
    fits_in_simplex,
    l1,
    lattice_width,
    max_coordinate_width,
    normalize_sign,
)

log = logging.getLogger(__name__)

SIMPLEX = "simplex"
CUBE = "cube"

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for :func:`ls_delta` and :func:`ls_cube`.

    ``initial_upper_bound`` caps the deepening: levels above it are not
    searched. ``hints`` are extra matrices whose scores seed the upper bound.
    ``prune=False`` switches to the plain filter-and-determinant enumeration
    (exponentially slower; meant for cross-checking the pruning rules).
    """

    initial_upper_bound: int | None = None
    node_budget: int = 10**8
    report_witness: bool = True
    threads: int = 1
    prune: bool = True
    hints: tuple = ()

    def __post_init__(self):
        if self.node_budget < 1:
            raise ValueError("node_budget must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


@dataclass
class SearchResult:
    value: int
    witness: AffineUnimodularMap | None
    nodes_explored: int = 0
    candidates_considered: int = 0
    certified: bool = True
    lower_bound: int = 0
    mode: str = SIMPLEX
    levels: list = field(default_factory=list)

    def verify(self, P: LatticePolytope) -> bool:
        """Re-check that the witness maps P into the claimed dilate."""
        if self.witness is None:
            return False
        image = apply_map(self.witness, P)
        if self.mode == SIMPLEX:
            return fits_in_simplex(image, self.value)
        return fits_in_cube(image, self.value)


def candidate_rows(P: LatticePolytope, B: int, max_cells: int | None = None) -> list[Point]:
    """Sign-normalized primitive directions of width <= B, sorted."""
    if not P.is_full_dimensional():
        raise DegeneratePolytopeError("candidate rows need a full-dimensional polytope")
    kw = {} if max_cells is None else {"max_cells": max_cells}
    return directions_within(P, B, **kw)


def ls_delta(P: LatticePolytope, cfg: SearchConfig | None = None) -> SearchResult:
    """Lattice size with respect to the standard simplex."""
    return _solve(P, cfg or SearchConfig(), SIMPLEX)


def ls_cube(P: LatticePolytope, cfg: SearchConfig | None = None) -> SearchResult:
    """Lattice size with respect to the unit cube."""
    return _solve(P, cfg or SearchConfig(), CUBE)


def score(matrix: Sequence[Sequence[int]], P: LatticePolytope, mode: str) -> int:
    image = LatticePolytope(tuple(tuple(sum(a * b for a, b in zip(r, x)) for r in matrix) for x in P.points))
    return l1(image) if mode == SIMPLEX else max_coordinate_width(image)


def _witness(matrix, P: LatticePolytope) -> AffineUnimodularMap:
    L = AffineUnimodularMap(tuple(tuple(int(v) for v in r) for r in matrix))
    mins = coordinate_minima(apply_map(L, P))
    return L.with_translation(tuple(-m for m in mins))


class _Budget(Exception):
    pass


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0

    def tick(self, k: int = 1):
        self.nodes += k
        if self.nodes > self.budget:
            raise _Budget


def _dtype_for(cands: Sequence[Point], pts: Sequence[Point], n: int):
    c = max((abs(x) for h in cands for x in h), default=1)
    p = max((abs(x) for q in pts for x in q), default=1)
    # worst of: summed function values, and an n x n minor times an entry
    bound = max(n * n * c * p, factorial(n) * max(c, 1) ** n * n)
    return np.int64 if bound < _INT64_SAFE else object


class _Level:
    """Decision problem "is there a matrix scoring <= B" for one B."""

    def __init__(self, P: LatticePolytope, cands: list[Point], B: int, mode: str):
        self.n = P.dim
        self.B = B
        self.mode = mode
        self.cands = cands
        dtype = _dtype_for(cands, P.points, self.n)
        C = np.array(cands, dtype=dtype).reshape(len(cands), self.n)
        X = np.array(P.points, dtype=dtype)
        vals = C @ X.T
        if mode == SIMPLEX:
            lo = vals.min(axis=1, keepdims=True)
            hi = vals.max(axis=1, keepdims=True)
            m = len(cands)
            self.V = np.empty((2 * m, self.n), dtype=dtype)
            self.V[0::2], self.V[1::2] = C, -C
            self.S = np.empty((2 * m, len(P.points)), dtype=dtype)
            self.S[0::2], self.S[1::2] = vals - lo, hi - vals
            self.key_of = {c: i for i, c in enumerate(cands)}
        else:
            self.V = C
            self.S = None
        self.size = len(self.V)
        self.zero = np.zeros(len(P.points), dtype=dtype)

    # signed index s encodes candidate s // 2 with sign (-1) ** (s % 2)
    def first_rows(self) -> list[int]:
        return list(range(self.size))

    def _after(self, s: int) -> int:
        return 2 * (s // 2 + 1) if self.mode == SIMPLEX else s + 1

    def rows_of(self, idx: Sequence[int]) -> list[Point]:
        return [tuple(int(v) for v in self.V[s]) for s in idx]

    def branch(self, first: int, budget: int):
        """Depth-first search below a fixed first row.

        Returns (row indices or None, nodes, budget exceeded).
        """
        counter = _Counter(budget)
        try:
            counter.tick()
            partial = self.S[first] if self.S is not None else self.zero
            if self.n == 1:
                found = [first] if self._complete([first]) else None
            else:
                found = self._dfs([first], partial, counter)
        except _Budget:
            return None, counter.nodes, True
        return found, counter.nodes, False

    def _minor_functionals(self, rows: Sequence[int]) -> np.ndarray:
        R = self.rows_of(rows)
        j = len(R)
        out = []
        for cols in combinations(range(self.n), j + 1):
            coeff = linalg.cross([[r[c] for c in cols] for r in R], j + 1)
            g = [0] * self.n
            for c, v in zip(cols, coeff):
                g[c] = v
            out.append(g)
        return np.array(out, dtype=self.V.dtype).reshape(len(out), self.n)

    def _dfs(self, rows: list[int], partial, counter: _Counter):
        start = self._after(rows[-1])
        if start >= self.size:
            return None
        last = len(rows) + 1 == self.n
        block = self.V[start:]
        ok = np.ones(len(block), dtype=bool)
        if self.S is not None:
            sums = partial + self.S[start:]
            ok &= sums.max(axis=1) <= self.B
        minors = block @ self._minor_functionals(rows).T
        if last:
            ok &= np.abs(minors[:, 0]) == 1
        else:
            ok &= np.gcd.reduce(minors, axis=1) == 1
        for off in np.nonzero(ok)[0]:
            s = start + int(off)
            counter.tick()
            nxt = rows + [s]
            if last:
                if self._complete(nxt):
                    return nxt
                continue
            found = self._dfs(nxt, sums[off] if self.S is not None else partial, counter)
            if found is not None:
                return found
        return None

    def _complete(self, rows: list[int]) -> bool:
        if self.mode != SIMPLEX:
            return True
        # the implied vector -(h_1 + ... + h_n) must come after h_n
        total = [-sum(col) for col in zip(*self.rows_of(rows))]
        norm = normalize_sign(total)
        i = self.key_of.get(norm)
        if i is None:
            return False
        key = 2 * i + (0 if tuple(total) == norm else 1)
        return key > rows[-1]


def _run_level(level: _Level, budget: int, threads: int):
    """Ordered reduction over first-row branches, identical for any thread count.

    Each branch gets the same budget; branches are consumed in canonical
    order and the first solution wins, so the result and node count do not
    depend on how branches were scheduled.
    """
    firsts = level.first_rows()
    total = 0

    def consume(results):
        nonlocal total
        for found, nodes, exceeded in results:
            total += nodes
            if exceeded or total > budget:
                return None, True
            if found is not None:
                return found, False
        return None, False

    if threads == 1:
        out = consume(level.branch(f, budget) for f in firsts)
        return out[0], total, out[1]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(level.branch, f, budget) for f in firsts]
        out = consume(f.result() for f in futures)
        for f in futures:
            f.cancel()
    return out[0], total, out[1]


def _run_unpruned(P: LatticePolytope, cands: list[Point], B: int, mode: str, budget: int):
    signed = cands if mode == CUBE else [s for c in cands for s in (c, tuple(-x for x in c))]
    nodes = 0
    for rows in product(signed, repeat=P.dim):
        nodes += 1
        if nodes > budget:
            return None, nodes, True
        if abs(linalg.det(rows)) == 1 and score(rows, P, mode) <= B:
            return list(rows), nodes, False
    return None, nodes, False


def _solve(P: LatticePolytope, cfg: SearchConfig, mode: str) -> SearchResult:
    P = P.canonical()
    n = P.dim
    if not P.is_full_dimensional():
        raise DegeneratePolytopeError("lattice size search needs a full-dimensional polytope")

    identity = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    best_rows, best = identity, score(identity, P, mode)
    for h in cfg.hints:
        m = h.matrix if isinstance(h, AffineUnimodularMap) else tuple(map(tuple, h))
        if abs(linalg.det(m)) != 1:
            raise ValueError("hint matrix is not unimodular")
        s = score(m, P, mode)
        if s < best:
            best_rows, best = m, s

    result = SearchResult(value=best, witness=None, mode=mode)
    lower = max(1, lattice_width(P)[0])
    B = lower
    try:
        while B < best:
            if cfg.initial_upper_bound is not None and B > cfg.initial_upper_bound:
                break
            cands = candidate_rows(P, B)
            result.candidates_considered += len(cands)
            budget = cfg.node_budget - result.nodes_explored
            if not cfg.prune:
                found, nodes, exceeded = _run_unpruned(P, cands, B, mode, budget)
                rows = found
            else:
                if linalg.lattice_index(cands, n) != 1:
                    log.debug("B=%d: candidates do not span Z^%d", B, n)
                    result.levels.append((B, len(cands), 0))
                    B += 1
                    continue
                level = _Level(P, cands, B, mode)
                found, nodes, exceeded = _run_level(level, budget, cfg.threads)
                rows = level.rows_of(found) if found is not None else None
            result.nodes_explored += nodes
            result.levels.append((B, len(cands), nodes))
            if exceeded:
                raise _Budget
            if rows is not None:
                best_rows, best = tuple(map(tuple, rows)), B
                break
            B += 1
    except _Budget:
        log.info("node budget exhausted at B=%d", B)
        result.certified = False
    result.value = best
    result.lower_bound = B if not result.certified or B < best else best
    if result.certified and B < best:
        # deepening stopped at the cap below the best known value
        result.certified = False
    if cfg.report_witness:
        result.witness = _witness(best_rows, P)
    return result
