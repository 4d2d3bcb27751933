"""Domain types and cost accounting for Multistage Min-Sum Set Cover.

Elements are dense integer ids ``0..n-1``.  Positions are 1-indexed in every
public function, matching the usual way the problem is written down; arrays are
0-indexed internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

EPS_NUM = 1e-9
EPS_ROW = 1e-7


@dataclass(frozen=True)
class Permutation:
    """A bijection between positions and elements.

    ``forward[i]`` is the element at (0-indexed) slot ``i``; use
    :meth:`element_at` and :meth:`position` for 1-indexed access.
    """

    forward: tuple[int, ...]
    inverse: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        fwd = tuple(int(x) for x in self.forward)
        n = len(fwd)
        inv = [-1] * n
        for i, e in enumerate(fwd):
            if not 0 <= e < n or inv[e] != -1:
                raise ValueError(f"not a bijection on [0, {n}): {list(fwd)}")
            inv[e] = i
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "inverse", tuple(inv))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.forward)

    def __len__(self) -> int:
        return len(self.forward)

    def __iter__(self):
        return iter(self.forward)

    def position(self, e: int) -> int:
        """1-indexed position of element ``e``."""
        return self.inverse[e] + 1

    def element_at(self, i: int) -> int:
        """Element at 1-indexed position ``i``."""
        return self.forward[i - 1]


Request = frozenset


@dataclass(frozen=True)
class Instance:
    """Universe size, initial order ``pi0`` and the request sequence.

    The constructor does not validate; call :func:`validate_instance` on
    untrusted input.  ``pi0`` is kept as a raw tuple so malformed instances
    can still be represented and reported on.
    """

    n: int
    pi0: tuple[int, ...]
    requests: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pi0", tuple(int(x) for x in self.pi0))
        object.__setattr__(
            self, "requests", tuple(frozenset(int(e) for e in r) for r in self.requests)
        )

    @property
    def T(self) -> int:
        return len(self.requests)

    @cached_property
    def initial(self) -> Permutation:
        return Permutation(self.pi0)

    @property
    def r_bound(self) -> int:
        return max((len(r) for r in self.requests), default=0)


def make_instance(pi0: Sequence[int], requests: Iterable[Iterable[int]]) -> Instance:
    pi0 = tuple(pi0)
    return Instance(len(pi0), pi0, tuple(frozenset(r) for r in requests))


def validate_instance(inst: Instance) -> list[str]:
    """Return every violated invariant of ``inst``; an empty list means ok."""
    problems = []
    if inst.n < 1:
        problems.append(f"universe size must be positive, got {inst.n}")
    if len(inst.pi0) != inst.n:
        problems.append(f"pi0 has {len(inst.pi0)} entries, expected {inst.n}")
    elif sorted(inst.pi0) != list(range(inst.n)):
        problems.append("pi0 is not a bijection on [0, n)")
    for t, req in enumerate(inst.requests, start=1):
        if not req:
            problems.append(f"request {t} is empty")
        bad = sorted(e for e in req if not 0 <= e < inst.n)
        if bad:
            problems.append(f"request {t}: element id out of range {bad}")
    return problems


@dataclass(frozen=True)
class CostReport:
    covering: tuple[int, ...]
    moving: tuple[int, ...]

    @property
    def total_covering(self) -> int:
        return sum(self.covering)

    @property
    def total_moving(self) -> int:
        return sum(self.moving)

    @property
    def total(self) -> int:
        return self.total_covering + self.total_moving

    def ratio(self, baseline_total: float) -> float:
        return self.total / baseline_total

    def as_dict(self) -> dict:
        return {
            "covering": list(self.covering),
            "moving": list(self.moving),
            "total_covering": self.total_covering,
            "total_moving": self.total_moving,
            "total": self.total,
        }


def covering_cost(pi: Permutation, request: Iterable[int]) -> int:
    """Position (1-indexed) of the first element of ``request`` in ``pi``."""
    return min(pi.position(e) for e in request)


def total_cost(inst: Instance, solution: Sequence[Permutation]) -> CostReport:
    """Covering plus Kendall-Tau moving cost of ``solution`` (rounds 1..T)."""
    from .distances import kendall_tau

    if len(solution) != inst.T:
        raise ValueError(f"solution has {len(solution)} rounds, instance has {inst.T}")
    covering, moving = [], []
    prev = inst.initial
    for pi, req in zip(solution, inst.requests):
        covering.append(covering_cost(pi, req))
        moving.append(kendall_tau(prev, pi))
        prev = pi
    return CostReport(tuple(covering), tuple(moving))


class StochasticMatrix:
    """Row-stochastic ``n x n`` matrix; ``entries[e, i]`` is the mass of element
    ``e`` at (0-indexed) column ``i``.

    Entries down to ``-EPS_NUM`` are clamped to zero.  Column sums are not
    enforced here since intermediate matrices may carry up to 2 per column.
    """

    __slots__ = ("entries",)

    def __init__(self, entries) -> None:
        a = np.array(entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if (a < -EPS_NUM).any():
            raise ValueError(f"negative entry {a.min():.3g}")
        a[a < 0] = 0.0
        rows = a.sum(axis=1)
        if not np.allclose(rows, 1.0, rtol=0, atol=EPS_ROW):
            raise ValueError(f"row sums deviate from 1 by {np.abs(rows - 1).max():.3g}")
        a.setflags(write=False)
        self.entries = a

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def is_doubly_stochastic(self, tol: float = EPS_ROW) -> bool:
        return bool(np.allclose(self.entries.sum(axis=0), 1.0, rtol=0, atol=tol))

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StochasticMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __repr__(self) -> str:
        return f"StochasticMatrix({self.entries.tolist()!r})"


def as_matrix(a) -> np.ndarray:
    """Entries of ``a`` as a float array (accepts StochasticMatrix, GranularMatrix
    or anything array-like)."""
    if isinstance(a, StochasticMatrix):
        return a.entries
    to_float = getattr(a, "to_float", None)
    if to_float is not None:
        return to_float()
    return np.asarray(a, dtype=np.float64)


def matrix_from_permutation(pi: Permutation) -> StochasticMatrix:
    n = pi.n
    a = np.zeros((n, n))
    a[list(pi.forward), np.arange(n)] = 1.0
    return StochasticMatrix(a)


def permutation_from_matrix(a) -> Permutation:
    """Inverse of :func:`matrix_from_permutation` (argmax per row)."""
    pos = np.argmax(as_matrix(a), axis=1)
    fwd = [0] * len(pos)
    for e, i in enumerate(pos):
        fwd[i] = e
    return Permutation(tuple(fwd))


@dataclass(frozen=True)
class FractionalSequence:
    """Optimal Fractional-MTF matrices ``A^1..A^T`` and their FootRule cost."""

    matrices: tuple[StochasticMatrix, ...]
    objective: float

    def __len__(self) -> int:
        return len(self.matrices)


class GranularMatrix:
    """Doubly stochastic matrix whose entries are multiples of ``1/r``.

    Stored as integer ``units`` (entry = units / r) so that all arithmetic on
    it is exact.
    """

    __slots__ = ("units", "r")

    def __init__(self, units, r: int) -> None:
        u = np.array(units, dtype=np.int64)
        if r < 1:
            raise ValueError(f"granularity must be >= 1, got {r}")
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {u.shape}")
        if (u < 0).any() or (u > r).any():
            raise ValueError(f"unit entries must lie in [0, {r}]")
        if (u.sum(axis=1) != r).any() or (u.sum(axis=0) != r).any():
            raise ValueError(f"rows and columns must each hold {r} units")
        u.setflags(write=False)
        self.units = u
        self.r = int(r)

    @classmethod
    def from_permutation(cls, pi: Permutation, r: int) -> GranularMatrix:
        n = pi.n
        u = np.zeros((n, n), dtype=np.int64)
        u[list(pi.forward), np.arange(n)] = r
        return cls(u, r)

    @property
    def n(self) -> int:
        return self.units.shape[0]

    def to_float(self) -> np.ndarray:
        return self.units / self.r

    def to_stochastic(self) -> StochasticMatrix:
        return StochasticMatrix(self.to_float())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GranularMatrix):
            return NotImplemented
        return self.r == other.r and bool(np.array_equal(self.units, other.units))

    def __repr__(self) -> str:
        return f"GranularMatrix({self.units.tolist()!r}, r={self.r})"
