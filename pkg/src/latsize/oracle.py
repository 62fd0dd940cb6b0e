"""Brute-force baselines: enumerate every integer matrix in a box.

Nothing here knows about candidate rows, symmetry or pruning. Matrices are
visited in row-major lexicographic order over entries in [-M, M]; the only
filter is the determinant. The last two rows are handled as a numpy batch
(Plucker coordinates of the pair against complementary minors of the
prefix), which is a vectorized restatement of the same enumeration.

The results are minima *within the box*: they bound the true lattice size
from above and agree with it once M covers some optimal witness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import linalg
from .geometry import LatticePolytope


class OracleTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    entry_bound: int
    time_budget: float | None = None

    def __post_init__(self):
        if self.entry_bound < 1:
            raise ValueError("entry_bound must be >= 1")


def _box_rows(n: int, M: int) -> np.ndarray:
    return np.array(list(product(range(-M, M + 1), repeat=n)), dtype=object).reshape(-1, n)


def _to_int64(a):
    if a.size == 0 or max(abs(int(x)) for x in a.flat) < 2**40:
        return a.astype(np.int64)
    return a


def _enumerate(P: LatticePolytope, cfg: OracleConfig, reduce):
    """min over unimodular matrices in the box of ``reduce(row_ids)``.

    ``reduce(prefix_ids, pair_j, pair_k)`` returns per-pair scores for the
    batch of matrices prefix + (rows[j], rows[k]).
    """
    n, M = P.dim, cfg.entry_bound
    deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
    rows = _to_int64(_box_rows(n, M))
    K = len(rows)
    X = _to_int64(np.array(P.points, dtype=object))
    vals = rows @ X.T  # <row, x> for every row and point
    best = None

    if n == 1:
        for i in range(K):
            if abs(int(rows[i, 0])) == 1:
                s = reduce(vals, (i,), None, None)
                best = s if best is None else min(best, s)
        return best

    jj, kk = np.meshgrid(np.arange(K), np.arange(K), indexing="ij")
    jj, kk = jj.ravel(), kk.ravel()
    pairs = list(combinations(range(n), 2))
    plucker = np.stack([rows[jj, a] * rows[kk, b] - rows[jj, b] * rows[kk, a] for a, b in pairs], axis=1)

    for prefix in product(range(K), repeat=n - 2):
        if deadline is not None and time.monotonic() > deadline:
            raise OracleTimeout(f"time budget of {cfg.time_budget}s exceeded")
        # det(prefix; u; v) = sum over column pairs (a, b) of
        # (-1)^(1+a+b) (u_a v_b - u_b v_a) det(prefix without columns a, b)
        pre = [list(rows[i]) for i in prefix]
        coeff = []
        for a, b in pairs:
            keep = [c for c in range(n) if c not in (a, b)]
            coeff.append((-1) ** (1 + a + b) * linalg.det([[int(r[c]) for c in keep] for r in pre]))
        det = plucker @ np.array(coeff, dtype=plucker.dtype)
        hit = np.nonzero(np.abs(det) == 1)[0]
        if hit.size == 0:
            continue
        s = reduce(vals, prefix, jj[hit], kk[hit])
        best = s if best is None else min(best, s)
    return best


def oracle_ls_delta(P: LatticePolytope, cfg: OracleConfig) -> int:
    """min of l1(A P) over unimodular A with entries in [-M, M]."""

    def reduce(vals, prefix, j, k):
        base = sum((vals[i] for i in prefix), np.zeros(vals.shape[1], dtype=vals.dtype))
        mins = sum(int(vals[i].min()) for i in prefix)
        if j is None:
            return int(base.max()) - mins
        tops = (base + vals[j] + vals[k]).max(axis=1)
        return int((tops - vals[j].min(axis=1) - vals[k].min(axis=1)).min()) - mins

    return _enumerate(P, cfg, reduce)


def oracle_ls_cube(P: LatticePolytope, cfg: OracleConfig) -> int:
    """min over the same matrices of the largest coordinate width of A P."""

    def reduce(vals, prefix, j, k):
        w = vals.max(axis=1) - vals.min(axis=1)
        fixed = max((int(w[i]) for i in prefix), default=0)
        if j is None:
            return fixed
        return max(fixed, int(np.maximum(w[j], w[k]).min()))

    return _enumerate(P, cfg, reduce)


def oracle_width(P: LatticePolytope, bound: int) -> int:
    """min of w_h(P) over nonzero integer h with entries in [-bound, bound]."""
    best = None
    for h in product(range(-bound, bound + 1), repeat=P.dim):
        if not any(h):
            continue
        vals = [sum(a * b for a, b in zip(h, x)) for x in P.points]
        w = max(vals) - min(vals)
        best = w if best is None else min(best, w)
    return best
