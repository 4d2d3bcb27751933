"""Linear programs over sequences of doubly stochastic matrices.

Variables are the matrix entries ``("mass", t, e, i)`` for rounds
``t = 1..T`` and per-row transport flows ``("flow", t, e, i, j)`` that carry
row ``e`` of ``A^{t-1}`` onto row ``e`` of ``A^t`` at cost ``|i - j|``.  The
initial matrix is the permutation matrix of ``pi0`` and enters as constants.
Positions ``i, j`` in tags are 1-indexed.

The ``"cdf"`` formulation replaces the flows by a split gap per row prefix,
``("gap+", t, e, i) - ("gap-", t, e, i) = C^t[e, i] - C^{t-1}[e, i]`` where
``C`` is the row-wise cumulative sum.  It has the same optimum (transport
cost on a line is the L1 distance of the CDFs) with ``2n(n-1)T`` instead of
``n^3 T`` auxiliaries, and is what the ``solve_*`` helpers use.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..core import (
    EPS_NUM,
    EPS_ROW,
    FractionalSequence,
    Instance,
    Permutation,
    StochasticMatrix,
    as_matrix,
)
from .model import LinearProgram, LpBuilder, LpSolution
from .simplex import simplex_solve


class SolverError(RuntimeError):
    def __init__(self, status: str, message: str = "") -> None:
        super().__init__(message or f"LP solver finished with status {status!r}")
        self.status = status


FrontConstraint = Callable[[LpBuilder, int], None]


def _movement_lp(
    pi0: Permutation, T: int, front: FrontConstraint, formulation: str = "flow"
) -> LinearProgram:
    if formulation == "cdf":
        return _cdf_lp(pi0, T, front)
    if formulation != "flow":
        raise ValueError(f"unknown formulation {formulation!r}")
    n = pi0.n
    lp = LpBuilder()
    for t in range(1, T + 1):
        for e in range(n):
            for i in range(1, n + 1):
                lp.var(("mass", t, e, i))
    for t in range(1, T + 1):
        for e in range(n):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    lp.var(("flow", t, e, i, j), cost=abs(i - j))

    for t in range(1, T + 1):
        for e in range(n):
            lp.add({lp["mass", t, e, i]: 1.0 for i in range(1, n + 1)}, "=", 1.0, f"row_{t}_{e}")
        for i in range(1, n + 1):
            lp.add({lp["mass", t, e, i]: 1.0 for e in range(n)}, "=", 1.0, f"col_{t}_{i}")
        front(lp, t)
        for e in range(n):
            for i in range(1, n + 1):
                coeffs = {lp["flow", t, e, i, j]: 1.0 for j in range(1, n + 1)}
                if t == 1:
                    rhs = 1.0 if pi0.position(e) == i else 0.0
                else:
                    coeffs[lp["mass", t - 1, e, i]] = -1.0
                    rhs = 0.0
                lp.add(coeffs, "=", rhs, f"src_{t}_{e}_{i}")
            for j in range(1, n + 1):
                coeffs = {lp["flow", t, e, i, j]: 1.0 for i in range(1, n + 1)}
                coeffs[lp["mass", t, e, j]] = -1.0
                lp.add(coeffs, "=", 0.0, f"dst_{t}_{e}_{j}")
    return lp.build()


def _cdf_lp(pi0: Permutation, T: int, front: FrontConstraint) -> LinearProgram:
    n = pi0.n
    lp = LpBuilder()
    for t in range(1, T + 1):
        for e in range(n):
            for i in range(1, n + 1):
                lp.var(("mass", t, e, i))
    for t in range(1, T + 1):
        for e in range(n):
            for i in range(1, n):
                lp.var(("gap+", t, e, i), cost=1.0)
                lp.var(("gap-", t, e, i), cost=1.0)

    for t in range(1, T + 1):
        for e in range(n):
            lp.add({lp["mass", t, e, i]: 1.0 for i in range(1, n + 1)}, "=", 1.0, f"row_{t}_{e}")
        for i in range(1, n + 1):
            lp.add({lp["mass", t, e, i]: 1.0 for e in range(n)}, "=", 1.0, f"col_{t}_{i}")
        front(lp, t)
        for e in range(n):
            for i in range(1, n):
                # C^t[e, i] - C^{t-1}[e, i] = gap+ - gap-
                coeffs = {lp["mass", t, e, s]: 1.0 for s in range(1, i + 1)}
                if t == 1:
                    prev = 1.0 if pi0.position(e) <= i else 0.0
                else:
                    prev = 0.0
                    for s in range(1, i + 1):
                        coeffs[lp["mass", t - 1, e, s]] = -1.0
                coeffs[lp["gap+", t, e, i]] = -1.0
                coeffs[lp["gap-", t, e, i]] = 1.0
                lp.add(coeffs, "=", prev, f"cdf_{t}_{e}_{i}")
    return lp.build()


def build_fractional_mtf(inst: Instance, formulation: str = "flow") -> LinearProgram:
    """Relaxation in which every request carries full mass at position 1."""
    reqs = inst.requests

    def front(lp: LpBuilder, t: int) -> None:
        coeffs = {lp["mass", t, e, 1]: 1.0 for e in sorted(reqs[t - 1])}
        lp.add(coeffs, "=", 1.0, f"req_{t}")

    return _movement_lp(inst.initial, inst.T, front, formulation)


def build_first_position_lp(
    pi0: Permutation, chosen: Sequence[int], r: int, formulation: str = "flow"
) -> LinearProgram:
    """Like :func:`build_fractional_mtf`, but round ``t`` only needs
    ``A^t[chosen[t], 1] >= 1/r``."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    chosen = list(chosen)
    if any(not 0 <= e < pi0.n for e in chosen):
        raise ValueError("chosen element out of range")

    def front(lp: LpBuilder, t: int) -> None:
        lp.add({lp["mass", t, chosen[t - 1], 1]: 1.0}, ">=", 1.0 / r, f"front_{t}")

    return _movement_lp(pi0, len(chosen), front, formulation)


def build_footrule_lp(a, b) -> LinearProgram:
    """Transport LP whose optimum is the FootRule distance of ``a`` and ``b``."""
    x, y = as_matrix(a), as_matrix(b)
    n = x.shape[0]
    lp = LpBuilder()
    for e in range(n):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                lp.var(("flow", e, i, j), cost=abs(i - j))
    for e in range(n):
        for i in range(1, n + 1):
            lp.add({lp["flow", e, i, j]: 1.0 for j in range(1, n + 1)}, "=", x[e, i - 1])
        for j in range(1, n + 1):
            lp.add({lp["flow", e, i, j]: 1.0 for i in range(1, n + 1)}, "=", y[e, j - 1])
    return lp.build()


def extract_matrices(lp: LinearProgram, sol: LpSolution, n: int, T: int) -> list[np.ndarray]:
    idx = lp.index()
    out = []
    for t in range(1, T + 1):
        cols = [idx["mass", t, e, i] for e in range(n) for i in range(1, n + 1)]
        a = sol.values[cols].reshape(n, n).copy()
        a[np.abs(a) < EPS_NUM] = 0.0
        out.append(a)
    return out


def _solve(lp: LinearProgram) -> LpSolution:
    sol = simplex_solve(lp)
    if not sol.optimal:
        raise SolverError(sol.status)
    return sol


def solve_fractional_mtf(inst: Instance, formulation: str = "cdf") -> FractionalSequence:
    lp = build_fractional_mtf(inst, formulation)
    sol = _solve(lp)
    mats = []
    for t, a in enumerate(extract_matrices(lp, sol, inst.n, inst.T), start=1):
        m = StochasticMatrix(a)
        if not m.is_doubly_stochastic():
            raise SolverError("stalled", f"round {t} matrix is not doubly stochastic")
        front = sum(a[e, 0] for e in inst.requests[t - 1])
        if abs(front - 1.0) > EPS_ROW:
            raise SolverError("stalled", f"round {t} request mass at front is {front}")
        mats.append(m)
    return FractionalSequence(tuple(mats), sol.objective_value)


def solve_first_position_lp(
    pi0: Permutation, chosen: Sequence[int], r: int, formulation: str = "cdf"
) -> tuple[list[StochasticMatrix], float]:
    lp = build_first_position_lp(pi0, chosen, r, formulation)
    sol = _solve(lp)
    mats = [StochasticMatrix(a) for a in extract_matrices(lp, sol, pi0.n, len(chosen))]
    return mats, sol.objective_value
