"""Two-phase primal simplex on a dense tableau.

Entering columns are priced by Dantzig's most-negative reduced cost.  After
``DEGENERATE_STREAK`` consecutive pivots without objective progress the solver
switches to Bland's rule (lowest-index entering column, lowest-index leaving
basic variable among ratio ties) until the objective strictly improves again,
so cycling cannot occur on the highly degenerate transport-style programs
built in :mod:`.builders`.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg.blas import dger

from .model import EPS_LP, LinearProgram, LpSolution

PIVOT_TOL = 1e-9
COST_TOL = 1e-9
ITERATIONS_PER_VAR = 50
DEGENERATE_STREAK = 50
PERTURBATION = 1e-7


class _Tableau:
    def __init__(self, a: np.ndarray, b: np.ndarray, basis: np.ndarray) -> None:
        m, n = a.shape
        # column n is the working right-hand side, column n + 1 a shadow copy
        # that receives the same row operations but never gets perturbed
        self.t = np.zeros((m + 1, n + 2), order="F")
        self.t[:m, :n] = a
        self.t[:m, n] = b
        self.t[:m, n + 1] = b
        self.basis = basis.copy()
        self.m, self.n = m, n

    @property
    def rhs(self) -> np.ndarray:
        return self.t[: self.m, self.n]

    @property
    def reduced(self) -> np.ndarray:
        return self.t[self.m, : self.n]

    def set_costs(self, c: np.ndarray) -> None:
        row = np.zeros(self.n + 2)
        row[: self.n] = c
        cb = c[self.basis]
        nz = np.flatnonzero(cb)
        if len(nz):
            row -= cb[nz] @ self.t[nz]
        self.t[self.m] = row

    def pivot(self, r: int, k: int) -> None:
        t = self.t
        t[r] /= t[r, k]
        col = t[:, k].copy()
        col[r] = 0.0
        rows = np.flatnonzero(col)
        if len(rows):
            if 8 * len(rows) < len(col):
                t[rows] -= np.outer(col[rows], t[r])
            else:
                # in-place rank-one update; row r is untouched since col[r] == 0
                self.t = t = dger(-1.0, col, t[r].copy(), a=t, overwrite_a=1)
        t[rows, k] = 0.0
        self.basis[r] = k

    def leaving_row(self, k: int) -> int | None:
        col = self.t[: self.m, k]
        cand = np.flatnonzero(col > PIVOT_TOL)
        if not len(cand):
            return None
        ratios = np.maximum(self.rhs[cand], 0.0) / col[cand]
        best = ratios.min()
        tied = cand[ratios <= best + 1e-12 * max(1.0, abs(best))]
        return int(tied[np.argmin(self.basis[tied])])

    def run(self, allowed: np.ndarray, budget: int) -> tuple[str, int]:
        """Pivot until the current cost row is optimal."""
        done = 0
        stuck = 0
        while done < budget:
            red = np.where(allowed, self.reduced, 0.0)
            if stuck < DEGENERATE_STREAK:
                k = int(np.argmin(red))
                if red[k] >= -COST_TOL:
                    return "optimal", done
            else:
                neg = np.flatnonzero(red < -COST_TOL)
                if not len(neg):
                    return "optimal", done
                k = int(neg[0])
            r = self.leaving_row(k)
            if r is None:
                return "unbounded", done
            before = self.t[self.m, self.n]
            self.pivot(r, k)
            done += 1
            # the corner entry holds minus the objective value
            if self.t[self.m, self.n] > before + 1e-12:
                stuck = 0
            else:
                stuck += 1
        return "stalled", done


def simplex_solve(lp: LinearProgram, max_iterations: int | None = None) -> LpSolution:
    """Minimize ``lp``; status is optimal, infeasible, unbounded or stalled."""
    nvar = lp.num_vars
    if max_iterations is None:
        max_iterations = ITERATIONS_PER_VAR * max(nvar, 1)
    a = lp.matrix.copy()
    b = lp.rhs.copy()
    rel = list(lp.relations)
    m = len(b)

    neg = b < 0
    a[neg] *= -1
    b[neg] *= -1
    flip = {"=": "=", ">=": "<=", "<=": ">="}
    rel = [flip[r] if neg[i] else r for i, r in enumerate(rel)]

    # an equality row owning a +1 singleton column can start with it basic
    crash = {}
    nz_per_col = np.count_nonzero(a, axis=0)
    for k in np.flatnonzero(nz_per_col == 1):
        i = int(np.flatnonzero(a[:, k])[0])
        if rel[i] == "=" and a[i, k] == 1.0 and i not in crash:
            crash[i] = int(k)

    n_slack = sum(r != "=" for r in rel)
    needs_art = [r != "<=" and i not in crash for i, r in enumerate(rel)]
    n_art = sum(needs_art)
    total = nvar + n_slack + n_art
    full = np.zeros((m, total))
    full[:, :nvar] = a
    basis = np.zeros(m, dtype=np.int64)
    s = nvar
    art = nvar + n_slack
    for i, r in enumerate(rel):
        if r == "<=":
            full[i, s] = 1.0
            basis[i] = s
            s += 1
        elif r == ">=":
            full[i, s] = -1.0
            s += 1
        if i in crash:
            basis[i] = crash[i]
        elif needs_art[i]:
            full[i, art] = 1.0
            basis[i] = art
            art += 1

    tab = _Tableau(full, b, basis)
    is_art = np.zeros(total, dtype=bool)
    is_art[nvar + n_slack:] = True
    iterations = 0

    if n_art:
        tab.set_costs(is_art.astype(np.float64))
        status, used = tab.run(np.ones(total, dtype=bool), max_iterations)
        iterations += used
        if status == "stalled":
            return LpSolution("stalled", iterations=iterations)
        phase1 = -tab.t[tab.m, tab.n]
        if phase1 > EPS_LP * max(1.0, float(b.sum())):
            return LpSolution("infeasible", iterations=iterations)
        keep = []
        for r in range(tab.m):
            if not is_art[tab.basis[r]]:
                keep.append(r)
                continue
            row = tab.t[r, :total]
            mag = np.where(is_art, 0.0, np.abs(row))
            k = int(np.argmax(mag))
            if mag[k] > PIVOT_TOL:
                tab.pivot(r, k)
                keep.append(r)
            # otherwise the row is redundant and is dropped
        if len(keep) < tab.m:
            rows = keep + [tab.m]
            tab.t = np.asfortranarray(tab.t[rows])
            tab.basis = tab.basis[keep]
            tab.m = len(keep)

    # a tiny deterministic perturbation of the basic values breaks the ties
    # that make the movement programs massively degenerate; it lives in the
    # range of the current basis so the perturbed system stays consistent
    rng = np.random.default_rng(0)
    tab.t[: tab.m, tab.n] += PERTURBATION * (1.0 + rng.random(tab.m))

    c = np.zeros(total)
    c[:nvar] = lp.objective
    tab.set_costs(c)
    status, used = tab.run(~is_art, max_iterations - iterations)
    iterations += used
    if status != "optimal":
        return LpSolution(status, iterations=iterations)

    x = np.zeros(total)
    x[tab.basis] = tab.t[: tab.m, tab.n + 1]
    values = x[:nvar]
    values[np.abs(values) < 1e-12] = 0.0
    values[(values < 0) & (values > -EPS_LP)] = 0.0
    if lp.violation(values) > EPS_LP:
        return LpSolution("stalled", values=values, iterations=iterations)
    return LpSolution("optimal", values, float(lp.objective @ values), iterations)
