"""Turning fractional solutions into permutations.

Three procedures live here:

* :func:`randomized_round` couples all rounds through one random threshold per
  element, so unchanged matrices give unchanged permutations.
* :func:`greedy_round` moves one request element to the front per round.
* :func:`greedy_lp_solve` solves the relaxation that only asks for ``1/r`` mass
  of a chosen element at the front, using a furthest-in-future rule like
  optimal paging.  It works in integer units of ``1/r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    EPS_NUM,
    EPS_ROW,
    FractionalSequence,
    GranularMatrix,
    Instance,
    Permutation,
    as_matrix,
)

SEED_MODULUS = 2**64


@dataclass(frozen=True)
class RoundingSeedState:
    """Per-element thresholds drawn once from a seeded PCG64 stream.

    ``alpha[e]`` is the ``e``-th draw of ``numpy.random.default_rng(seed)``,
    so the sequence is reproducible anywhere PCG64 with numpy's seeding is.
    """

    seed: int
    alpha: np.ndarray = field(compare=False)

    @classmethod
    def from_seed(cls, seed: int, n: int) -> RoundingSeedState:
        seed = int(seed) % SEED_MODULUS
        alpha = np.random.default_rng(seed).random(n)
        alpha.setflags(write=False)
        return cls(seed, alpha)


def rounding_indices(a, alpha: np.ndarray) -> np.ndarray:
    """1-indexed ``I_e``: first column where ``min(1, log2(n) * prefix)``
    reaches ``alpha[e]``, or ``n`` if it never does."""
    x = as_matrix(a)
    n = x.shape[0]
    scaled = np.minimum(1.0, math.log2(n) * np.cumsum(x, axis=1))
    reached = scaled >= alpha[:, None]
    reached[:, -1] = True
    return np.argmax(reached, axis=1) + 1


def randomized_round(
    frac: FractionalSequence, inst: Instance, seed: int
) -> list[Permutation]:
    if len(frac) != inst.T:
        raise ValueError(f"{len(frac)} matrices for {inst.T} rounds")
    if inst.n < 2:
        return [inst.initial] * inst.T
    state = RoundingSeedState.from_seed(seed, inst.n)
    out = []
    for a in frac.matrices:
        idx = rounding_indices(a, state.alpha)
        # lexsort keys run last-to-first: primary index, then element id
        order = np.lexsort((np.arange(inst.n), idx))
        out.append(Permutation(tuple(int(e) for e in order)))
    return out


def move_to_front(pi: Permutation, e: int) -> tuple[Permutation, int]:
    """``pi`` with ``e`` moved to position 1 and the number of elements it passed."""
    cost = pi.position(e) - 1
    if cost == 0:
        return pi, 0
    rest = tuple(x for x in pi.forward if x != e)
    return Permutation((e, *rest)), cost


def mtf_sequence(pi0: Permutation, chosen: Sequence[int]) -> list[Permutation]:
    out = []
    pi = pi0
    for e in chosen:
        pi, _ = move_to_front(pi, int(e))
        out.append(pi)
    return out


def greedy_round(
    frac: FractionalSequence, inst: Instance
) -> tuple[list[Permutation], list[int]]:
    """Move to the front, every round, the smallest request element holding at
    least ``1/|R_t|`` of the front column."""
    if len(frac) != inst.T:
        raise ValueError(f"{len(frac)} matrices for {inst.T} rounds")
    chosen = []
    for t, (a, req) in enumerate(zip(frac.matrices, inst.requests), start=1):
        x = as_matrix(a)
        front = sum(x[e, 0] for e in req)
        if abs(front - 1.0) > EPS_ROW:
            raise ValueError(f"infeasible fractional input: round {t} front mass {front}")
        need = 1.0 / len(req) - EPS_NUM
        picks = [e for e in sorted(req) if x[e, 0] >= need]
        if not picks:
            raise ValueError(f"infeasible fractional input: round {t} has no qualifying element")
        chosen.append(picks[0])
    return mtf_sequence(inst.initial, chosen), chosen


def _next_use(chosen: Sequence[int], t: int, n: int) -> list[float]:
    """For every element, the first round ``>= t`` (0-indexed) in which it is
    chosen; ``inf`` if never."""
    nxt = [math.inf] * n
    for s in range(len(chosen) - 1, t - 1, -1):
        nxt[chosen[s]] = s
    return nxt


def greedy_lp_solve(
    pi0: Permutation, chosen: Sequence[int], r: int
) -> list[GranularMatrix]:
    """Optimal ``1/r``-granular solution of the front-mass relaxation.

    Whenever the chosen element lacks a unit at the front, one of its units
    jumps from its leftmost occupied column to column 1, and the surplus of
    column 1 is then pushed right one column at a time until it fills the
    vacated column.  Each push takes a unit that is redundant (its row already
    has two units up to here) if one exists, otherwise the unit of the element
    needed furthest in the future.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    chosen = [int(e) for e in chosen]
    n = pi0.n
    if any(not 0 <= e < n for e in chosen):
        raise ValueError("chosen element out of range")
    u = GranularMatrix.from_permutation(pi0, r).units.copy()
    out = []
    for t, et in enumerate(chosen):
        if u[et, 0] < 1:
            pos = int(np.flatnonzero(u[et] >= 1)[0])
            u[et, pos] -= 1
            u[et, 0] += 1
            nxt = None
            for j in range(pos):
                prefix = u[:, : j + 1].sum(axis=1)
                redundant = np.flatnonzero((prefix >= 2) & (u[:, j] >= 1))
                if len(redundant):
                    e = int(redundant[0])
                else:
                    if nxt is None:
                        # the current round counts as a use of e_t
                        nxt = _next_use(chosen, t, n)
                    holders = [int(x) for x in np.flatnonzero(u[:, j] >= 1)]
                    if not holders:
                        raise RuntimeError(f"column {j + 1} has no unit to push at round {t + 1}")
                    e = max(holders, key=lambda x: (nxt[x], -x))
                u[e, j] -= 1
                u[e, j + 1] += 1
        out.append(GranularMatrix(u.copy(), r))
    return out
