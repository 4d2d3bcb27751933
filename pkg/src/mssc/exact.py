"""Exact baselines by dynamic programming, and the set-cover reduction.

Elements that are never requested only ever add moving cost, so an optimal
solution keeps them in their initial relative order; any optimum that moved
one of those pairs would pay for it.  The DP therefore only ranges over the
"canonical" permutations where the inert elements appear in ``pi0`` order,
which is ``N! / (N - k)!`` states for ``k`` requested elements.  That is what
makes ``n = 8`` and the padded reduction instances tractable.

Kendall-Tau distance is the shortest-path metric of the graph whose edges are
adjacent transpositions, and a shortest path never swaps a concordant pair, so
it stays inside the canonical states.  ``min_p KT(q, p) + g(p)`` is then a
distance transform on that graph, computed by relaxing the edges until
nothing changes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import CostReport, Instance, Permutation, total_cost

MAX_STATES = 50_000
MAX_UNIVERSE = 1_000_000


class SizeGuardError(ValueError):
    """The instance is too large for an exhaustive method."""


def state_count(inst: Instance) -> int:
    k = len(frozenset().union(*inst.requests)) if inst.requests else 0
    return math.perm(inst.n, k)


def _check_guard(inst: Instance) -> None:
    states = state_count(inst)
    if states > MAX_STATES:
        raise SizeGuardError(
            f"{states} permutations to search, limit is {MAX_STATES}"
        )


class _StateSpace:
    """Canonical permutations in lexicographic order, with adjacency."""

    def __init__(self, inst: Instance) -> None:
        n = inst.n
        requested = sorted(frozenset().union(*inst.requests)) if inst.requests else []
        req_set = set(requested)
        inert = [e for e in inst.pi0 if e not in req_set]
        perms = []
        for slots in itertools.combinations(range(n), len(requested)):
            free = [i for i in range(n) if i not in set(slots)]
            for order in itertools.permutations(requested):
                fwd = [0] * n
                for i, e in zip(slots, order):
                    fwd[i] = e
                for i, e in zip(free, inert):
                    fwd[i] = e
                perms.append(tuple(fwd))
        perms.sort()
        self.perms = perms
        self.index = {p: s for s, p in enumerate(perms)}
        self.positions = np.empty((len(perms), n), dtype=np.int64)
        for s, p in enumerate(perms):
            self.positions[s, list(p)] = np.arange(n)
        neighbors = []
        for i in range(n - 1):
            nb = np.arange(len(perms))
            for s, p in enumerate(perms):
                if p[i] in req_set or p[i + 1] in req_set:
                    q = list(p)
                    q[i], q[i + 1] = q[i + 1], q[i]
                    nb[s] = self.index[tuple(q)]
            neighbors.append(nb)
        self.neighbors = neighbors

    def __len__(self) -> int:
        return len(self.perms)

    def covering(self, request: frozenset) -> np.ndarray:
        return self.positions[:, sorted(request)].min(axis=1) + 1

    def spread(self, g: np.ndarray) -> np.ndarray:
        """``h(p) = min_q KT(p, q) + g(q)`` over all states ``q``."""
        h = g.copy()
        while True:
            best = h
            for nb in self.neighbors:
                best = np.minimum(best, h[nb] + 1)
            if np.array_equal(best, h):
                return h
            h = best

    def distances_from(self, pi: tuple[int, ...]) -> np.ndarray:
        """Kendall-Tau distance from ``pi`` to every state."""
        n = len(pi)
        p = np.empty(n, dtype=np.int64)
        p[list(pi)] = np.arange(n)
        P = self.positions
        d = np.zeros(len(self.perms), dtype=np.int64)
        for a in range(n):
            for b in range(a + 1, n):
                d += (P[:, a] < P[:, b]) != (p[a] < p[b])
        return d


def brute_force_opt(inst: Instance) -> tuple[list[Permutation], CostReport]:
    """Minimum total cost solution; ties go to the lexicographically smallest
    sequence of permutations (each compared as its tuple of elements)."""
    if inst.T == 0:
        return [], CostReport((), ())
    _check_guard(inst)
    space = _StateSpace(inst)
    cover = [space.covering(req) for req in inst.requests]
    # future[t][s]: cheapest cost of rounds t..T given round t sits at state s
    future = [None] * inst.T
    future[-1] = cover[-1]
    for t in range(inst.T - 2, -1, -1):
        future[t] = cover[t] + space.spread(future[t + 1])
    sol = []
    prev = inst.initial.forward
    for t in range(inst.T):
        here = space.distances_from(prev) + future[t]
        s = int(np.argmin(here))
        prev = space.perms[s]
        sol.append(Permutation(prev))
    return sol, total_cost(inst, sol)


def brute_force_mtf(inst: Instance) -> tuple[list[Permutation], int]:
    """Cheapest move-to-front solution: every round some request element is
    moved to position 1.  Returns the permutations and total moving cost."""
    if inst.T == 0:
        return [], 0
    _check_guard(inst)

    def moves(p: tuple[int, ...], req: frozenset) -> Iterable[tuple[tuple[int, ...], int]]:
        for e in req:
            i = p.index(e)
            yield (e, *p[:i], *p[i + 1:]), i

    levels = [{inst.initial.forward}]
    for req in inst.requests:
        levels.append({q for p in levels[-1] for q, _ in moves(p, req)})
    future: list[dict] = [dict() for _ in levels]
    future[-1] = {p: 0 for p in levels[-1]}
    for t in range(inst.T - 1, -1, -1):
        nxt = future[t + 1]
        future[t] = {
            p: min(c + nxt[q] for q, c in moves(p, inst.requests[t])) for p in levels[t]
        }
    sol = []
    p = inst.initial.forward
    for t, req in enumerate(inst.requests):
        nxt = future[t + 1]
        p = min(moves(p, req), key=lambda qc: (qc[1] + nxt[qc[0]], qc[0]))[0]
        sol.append(Permutation(p))
    return sol, future[0][inst.initial.forward]


@dataclass(frozen=True)
class SetCoverInstance:
    """Elements ``1..n_elements`` and sets over them; a cover is a set of
    elements hitting every set."""

    n_elements: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", tuple(frozenset(int(x) for x in s) for s in self.sets))
        if self.n_elements < 1:
            raise ValueError("a set-cover instance needs at least one element")
        for k, s in enumerate(self.sets, start=1):
            if not s:
                raise ValueError(f"set {k} is empty")
            bad = sorted(x for x in s if not 1 <= x <= self.n_elements)
            if bad:
                raise ValueError(f"set {k}: element ids out of range {bad}")

    @property
    def m(self) -> int:
        return len(self.sets)

    def is_cover(self, chosen: Iterable[int]) -> bool:
        c = set(chosen)
        return all(s & c for s in self.sets)


def min_set_covers(sc: SetCoverInstance) -> list[frozenset[int]]:
    """Every minimum-size cover, by exhaustive enumeration."""
    for size in range(sc.n_elements + 1):
        found = [
            frozenset(c)
            for c in itertools.combinations(range(1, sc.n_elements + 1), size)
            if sc.is_cover(c)
        ]
        if found:
            return found
    return []


def default_dummy_count(sc: SetCoverInstance) -> int:
    return sc.n_elements**2 * sc.m


def setcover_reduce(sc: SetCoverInstance, dummy_count: int | None = None) -> Instance:
    """Multistage instance whose cheap solutions encode small covers.

    Dummies get ids ``0..D-1`` and sit in front; set-cover element ``k`` gets
    id ``D + k - 1``.  The requests are the sets, in order.
    """
    d = default_dummy_count(sc) if dummy_count is None else int(dummy_count)
    if d < 0:
        raise ValueError(f"dummy count must be nonnegative, got {d}")
    if d + sc.n_elements > MAX_UNIVERSE:
        raise SizeGuardError(f"universe of {d + sc.n_elements} elements exceeds {MAX_UNIVERSE}")
    pi0 = tuple(range(d + sc.n_elements))
    requests = tuple(frozenset(d + x - 1 for x in s) for s in sc.sets)
    return Instance(len(pi0), pi0, requests)


def extract_cover(inst: Instance, solution: list[Permutation], dummy_count: int) -> frozenset[int]:
    """Set-cover elements (1-indexed) that serve some request first."""
    hits = set()
    for pi, req in zip(solution, inst.requests):
        hits.add(min(req, key=pi.position))
    return frozenset(e - dummy_count + 1 for e in hits)
