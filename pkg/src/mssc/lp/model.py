from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EPS_LP = 1e-7

RELATIONS = ("=", ">=", "<=")


@dataclass
class LinearProgram:
    """``min c.x`` subject to row constraints and ``x >= 0``.

    ``tags`` name the variables with structured tuples, e.g.
    ``("mass", t, e, i)`` or ``("flow", t, e, i, j)``.
    """

    objective: np.ndarray
    matrix: np.ndarray
    relations: tuple[str, ...]
    rhs: np.ndarray
    tags: tuple[tuple, ...]
    row_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=np.float64)
        self.matrix = np.asarray(self.matrix, dtype=np.float64).reshape(-1, len(self.objective))
        self.rhs = np.asarray(self.rhs, dtype=np.float64)
        m, n = self.matrix.shape
        if len(self.relations) != m or len(self.rhs) != m:
            raise ValueError("matrix, relations and rhs disagree on the number of rows")
        if len(self.tags) != n:
            raise ValueError("one tag per variable required")
        if len(set(self.tags)) != n:
            raise ValueError("variable tags must be unique")
        bad = set(self.relations) - set(RELATIONS)
        if bad:
            raise ValueError(f"unknown relations {bad}")
        if not (np.isfinite(self.matrix).all() and np.isfinite(self.rhs).all()
                and np.isfinite(self.objective).all()):
            raise ValueError("coefficients must be finite")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.rhs)

    def index(self) -> dict[tuple, int]:
        return {tag: k for k, tag in enumerate(self.tags)}

    def violation(self, x: np.ndarray) -> float:
        """Largest constraint or bound violation at ``x``."""
        lhs = self.matrix @ x
        worst = max(0.0, float(-x.min())) if len(x) else 0.0
        for rel in RELATIONS:
            mask = np.array([r == rel for r in self.relations], dtype=bool)
            if not mask.any():
                continue
            d = lhs[mask] - self.rhs[mask]
            if rel == "=":
                worst = max(worst, float(np.abs(d).max()))
            elif rel == ">=":
                worst = max(worst, float(-d.min()))
            else:
                worst = max(worst, float(d.max()))
        return worst


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded | stalled
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    objective_value: float = float("nan")
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class LpBuilder:
    """Incremental construction of a :class:`LinearProgram`."""

    def __init__(self) -> None:
        self._tags: list[tuple] = []
        self._index: dict[tuple, int] = {}
        self._cost: list[float] = []
        self._rows: list[dict[int, float]] = []
        self._rel: list[str] = []
        self._rhs: list[float] = []
        self._names: list[str] = []

    def var(self, tag: tuple, cost: float = 0.0) -> int:
        if tag in self._index:
            raise ValueError(f"duplicate variable {tag}")
        k = len(self._tags)
        self._tags.append(tag)
        self._index[tag] = k
        self._cost.append(cost)
        return k

    def __getitem__(self, tag: tuple) -> int:
        return self._index[tag]

    def __contains__(self, tag: tuple) -> bool:
        return tag in self._index

    def add(self, coeffs: dict[int, float], rel: str, rhs: float, name: str = "") -> None:
        self._rows.append(coeffs)
        self._rel.append(rel)
        self._rhs.append(rhs)
        self._names.append(name or f"c{len(self._rows)}")

    def build(self) -> LinearProgram:
        n = len(self._tags)
        mat = np.zeros((len(self._rows), n))
        for r, coeffs in enumerate(self._rows):
            for k, v in coeffs.items():
                mat[r, k] += v
        return LinearProgram(
            objective=np.array(self._cost),
            matrix=mat,
            relations=tuple(self._rel),
            rhs=np.array(self._rhs),
            tags=tuple(self._tags),
            row_names=tuple(self._names),
        )


def _var_name(tag: tuple) -> str:
    return "_".join(str(p) for p in tag)


def _term(coef: float, name: str, first: bool) -> str:
    sign = "-" if coef < 0 else ("" if first else "+")
    mag = abs(coef)
    body = name if mag == 1 else f"{mag:.12g} {name}"
    return f"{sign} {body}".strip() if first else f"{sign} {body}"


def to_lp_format(lp: LinearProgram) -> str:
    """Render ``lp`` in CPLEX LP text format, one constraint per line."""
    names = [_var_name(t) for t in lp.tags]
    nzc = [(k, c) for k, c in enumerate(lp.objective) if c != 0]
    obj = [_term(c, names[k], i == 0) for i, (k, c) in enumerate(nzc)]
    lines = ["\\ generated by mssc", "Minimize", " obj: " + (" ".join(obj) if obj else "0")]
    lines.append("Subject To")
    row_names = lp.row_names or tuple(f"c{r + 1}" for r in range(lp.num_rows))
    for r in range(lp.num_rows):
        nz = np.flatnonzero(lp.matrix[r])
        terms = [_term(lp.matrix[r, k], names[k], i == 0) for i, k in enumerate(nz)]
        lhs = " ".join(terms) if terms else "0 " + names[0]
        lines.append(f" {row_names[r]}: {lhs} {lp.relations[r]} {lp.rhs[r]:.12g}")
    lines.append("Bounds")
    for name in names:
        lines.append(f" {name} >= 0")
    lines.append("End")
    return "\n".join(lines) + "\n"
