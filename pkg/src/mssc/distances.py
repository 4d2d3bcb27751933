"""Distances between permutations and between (doubly) stochastic matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EPS_NUM, EPS_ROW, GranularMatrix, Permutation, StochasticMatrix, as_matrix


def _positions(p) -> np.ndarray:
    if isinstance(p, Permutation):
        return np.asarray(p.inverse, dtype=np.int64)
    return np.asarray(Permutation(tuple(p)).inverse, dtype=np.int64)


def _count_discordant(x: np.ndarray, y: np.ndarray) -> int:
    """Pairs ``i < j`` where ``sign(x_i - x_j) != sign(y_i - y_j)``."""
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    return int(np.count_nonzero(np.triu(sx != sy, 1)))


def kendall_tau(a, b) -> int:
    """Number of element pairs ordered differently by ``a`` and ``b``."""
    pa, pb = _positions(a), _positions(b)
    if len(pa) != len(pb):
        raise ValueError(f"size mismatch: {len(pa)} vs {len(pb)}")
    return _count_discordant(pa, pb)


def footrule_perm(a, b) -> int:
    pa, pb = _positions(a), _positions(b)
    if len(pa) != len(pb):
        raise ValueError(f"size mismatch: {len(pa)} vs {len(pb)}")
    return int(np.abs(pa - pb).sum())


def footrule_matrix(a, b) -> float:
    """FootRule distance between stochastic matrices.

    Each row is an independent transport problem on the line with cost
    ``|i - j|``, whose optimum is the L1 distance between the row CDFs.
    """
    x, y = as_matrix(a), as_matrix(b)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    if not np.allclose(x.sum(axis=1), y.sum(axis=1), rtol=0, atol=EPS_ROW):
        raise ValueError("row masses of the two matrices differ")
    if isinstance(a, GranularMatrix) and isinstance(b, GranularMatrix) and a.r == b.r:
        cu = np.cumsum(a.units, axis=1)[:, :-1] - np.cumsum(b.units, axis=1)[:, :-1]
        return float(np.abs(cu).sum()) / a.r
    diff = np.cumsum(x, axis=1)[:, :-1] - np.cumsum(y, axis=1)[:, :-1]
    return float(np.abs(diff).sum())


def r_indices(a, r: int) -> np.ndarray:
    """1-indexed r-index of every element: first column where the row's prefix
    mass reaches ``1/r``."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if isinstance(a, GranularMatrix):
        # prefix_units / g >= 1 / r  <=>  prefix_units * r >= g, exact in integers
        reached = np.cumsum(a.units, axis=1) * r >= a.r
    else:
        reached = np.cumsum(as_matrix(a), axis=1) >= 1.0 / r - EPS_NUM
    # a stochastic row always reaches 1 >= 1/r; guard the last column anyway
    reached[:, -1] = True
    return np.argmax(reached, axis=1) + 1


def r_index(a, e: int, r: int) -> int:
    return int(r_indices(a, r)[e])


def fractional_kendall_tau(a, b, r: int) -> int:
    """Pairs of elements whose r-index order (including ties) differs."""
    ia, ib = r_indices(a, r), r_indices(b, r)
    if len(ia) != len(ib):
        raise ValueError(f"size mismatch: {len(ia)} vs {len(ib)}")
    return _count_discordant(ia, ib)


@dataclass(frozen=True)
class NeighborStep:
    matrix: StochasticMatrix
    moved_element: int
    from_col: int
    to_col: int
    mass: float


_FLOW_TOL = 1e-12


def _row_coupling(p: np.ndarray, q: np.ndarray) -> list[tuple[int, int, float]]:
    """Monotone (north-west corner) coupling of two distributions on a line."""
    arcs = []
    p, q = p.copy(), q.copy()
    i = j = 0
    n = len(p)
    while i < n and j < n:
        m = min(p[i], q[j])
        if m > _FLOW_TOL:
            arcs.append((i, j, m))
        p[i] -= m
        q[j] -= m
        if p[i] <= _FLOW_TOL:
            i += 1
        if j < n and q[j] <= _FLOW_TOL:
            j += 1
    return arcs


def decompose_neighboring(a, b, max_rounds: int | None = None) -> list[NeighborStep]:
    """Walk from ``a`` to ``b`` through neighboring stochastic matrices.

    Every step shifts mass between two adjacent columns of one row.  Column
    sums stay at most 2 along the way and the step costs add up to
    ``footrule_matrix(a, b)``.  The final step's matrix is ``b`` up to
    floating-point rounding.
    """
    cur = np.array(as_matrix(a), dtype=np.float64)
    target = as_matrix(b)
    if cur.shape != target.shape:
        raise ValueError(f"shape mismatch: {cur.shape} vs {target.shape}")
    for m, name in ((cur, "a"), (target, "b")):
        if not (
            np.allclose(m.sum(axis=0), 1, rtol=0, atol=EPS_ROW)
            and np.allclose(m.sum(axis=1), 1, rtol=0, atol=EPS_ROW)
        ):
            raise ValueError(f"{name} is not doubly stochastic")
    n = cur.shape[0]
    if max_rounds is None:
        max_rounds = 4 * n**3 + 100

    steps: list[NeighborStep] = []

    def shift(e: int, frm: int, to: int, eps: float) -> None:
        cur[e, frm] -= eps
        cur[e, to] += eps
        if cur[e, frm] < 0:
            cur[e, frm] = 0.0
        steps.append(NeighborStep(StochasticMatrix(cur), e, frm + 1, to + 1, eps))

    for _ in range(max_rounds):
        right: dict[tuple[int, int], float] = {}
        left: dict[tuple[int, int], float] = {}
        for e in range(n):
            for i, j, m in _row_coupling(cur[e], target[e]):
                if j > i:
                    right[(e, i)] = right.get((e, i), 0.0) + m
                elif j < i:
                    left[(e, i)] = left.get((e, i), 0.0) + m
        if not right:
            break
        best = None
        for (e1, i), _ in sorted(right.items()):
            for (e2, j), _ in sorted(left.items()):
                if j > i:
                    key = (j - i, e1, i, e2, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            raise RuntimeError("no right/left entry pair; inputs not doubly stochastic?")
        _, e1, i, e2, j = best
        eps = min(right[(e1, i)], left[(e2, j)], cur[e1, i], cur[e2, j])
        for k in range(i, j):
            shift(e1, k, k + 1, eps)
        for k in range(j, i, -1):
            shift(e2, k, k - 1, eps)
    else:
        raise RuntimeError(f"decomposition did not finish within {max_rounds} rounds")
    return steps
