"""Instance generation, algorithm dispatch and batch experiments."""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import CostReport, Instance, make_instance, matrix_from_permutation, total_cost
from .distances import footrule_matrix
from .exact import MAX_STATES, brute_force_mtf, brute_force_opt, state_count
from .lp import solve_fractional_mtf
from .rounding import greedy_round, randomized_round

ALGORITHMS = ("exact", "mtf-exact", "frac", "rand", "greedy")
DISTRIBUTIONS = ("uniform-r", "mixed")
CSV_HEADER = (
    "instance", "n", "T", "r", "algo", "seed",
    "covering", "moving", "total", "baseline", "ratio", "wall_ms",
)
SUMMARY_HEADER = (
    "instance", "n", "T", "r", "algo", "runs",
    "mean_covering", "stderr_covering", "mean_moving", "stderr_moving",
    "mean_total", "stderr_total", "baseline", "mean_ratio",
)


def generate_instance(n: int, T: int, r: int, distribution: str, seed: int) -> Instance:
    """Random ``pi0`` and ``T`` requests of size ``r`` (``uniform-r``) or of
    size uniform in ``1..r`` (``mixed``)."""
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    if T < 1:
        raise ValueError(f"need T >= 1, got {T}")
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}")
    rng = np.random.default_rng(seed)
    pi0 = rng.permutation(n)
    reqs = []
    for _ in range(T):
        k = r if distribution == "uniform-r" else int(rng.integers(1, r + 1))
        reqs.append(rng.choice(n, size=k, replace=False))
    return make_instance(pi0, reqs)


@dataclass(frozen=True)
class Outcome:
    """What one algorithm run produced.

    ``covering`` and ``moving`` are per round.  For ``frac`` they are the
    fractional quantities: every request has full mass in front (covering 1)
    and moving is the FootRule distance between consecutive matrices.
    """

    algo: str
    covering: tuple
    moving: tuple
    seed: int | None = None
    lp_objective: float | None = None
    chosen: tuple[int, ...] | None = None

    @property
    def total_covering(self):
        return sum(self.covering)

    @property
    def total_moving(self):
        return sum(self.moving)

    @property
    def total(self):
        return self.total_covering + self.total_moving

    def as_dict(self) -> dict:
        d = {
            "algo": self.algo,
            "covering": list(self.covering),
            "moving": list(self.moving),
            "total_covering": self.total_covering,
            "total_moving": self.total_moving,
            "total": self.total,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        if self.lp_objective is not None:
            d["lp_objective"] = self.lp_objective
        if self.chosen is not None:
            d["chosen"] = list(self.chosen)
        return d


def _from_report(algo: str, rep: CostReport, **extra) -> Outcome:
    return Outcome(algo, rep.covering, rep.moving, **extra)


def run_algorithm(inst: Instance, algo: str, seed: int = 0, frac=None) -> Outcome:
    """Run one algorithm; ``frac`` may carry a precomputed LP solution."""
    if algo == "exact":
        return _from_report(algo, brute_force_opt(inst)[1])
    if algo == "mtf-exact":
        sol, _ = brute_force_mtf(inst)
        return _from_report(algo, total_cost(inst, sol))
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    if frac is None:
        frac = solve_fractional_mtf(inst)
    if algo == "frac":
        moving, prev = [], matrix_from_permutation(inst.initial)
        for a in frac.matrices:
            moving.append(footrule_matrix(prev, a))
            prev = a
        return Outcome(algo, (1,) * inst.T, tuple(moving), lp_objective=frac.objective)
    if algo == "rand":
        sol = randomized_round(frac, inst, seed)
        return _from_report(algo, total_cost(inst, sol), seed=seed, lp_objective=frac.objective)
    sol, chosen = greedy_round(frac, inst)
    return _from_report(
        algo, total_cost(inst, sol), lp_objective=frac.objective, chosen=tuple(chosen)
    )


@dataclass(frozen=True)
class ExperimentRow:
    instance: str
    n: int
    T: int
    r: int
    algo: str
    seed: int | None
    covering: float
    moving: float
    total: float
    baseline: float | None
    wall_ms: float

    @property
    def ratio(self) -> float | None:
        if self.baseline is None or self.baseline == 0:
            return None
        return self.total / self.baseline

    def cells(self) -> list[str]:
        def num(x) -> str:
            if x is None:
                return ""
            return str(x) if isinstance(x, (int, np.integer)) else f"{x:.10g}"

        return [
            self.instance, str(self.n), str(self.T), str(self.r), self.algo,
            num(self.seed), num(self.covering), num(self.moving), num(self.total),
            num(self.baseline), num(self.ratio), f"{self.wall_ms:.3f}",
        ]


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: Sequence[tuple[int, int]]
    trials: int = 1
    seeds: Sequence[int] = (0,)
    algorithms: Sequence[str] = ("greedy", "rand")
    r: int = 2
    distribution: str = "uniform-r"
    base_seed: int = 0


def instance_seed(base_seed: int, n: int, T: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed, n, T, trial])


def _run_instance(cfg: ExperimentConfig, n: int, T: int, trial: int) -> list[ExperimentRow]:
    r = min(cfg.r, n)
    inst = generate_instance(n, T, r, cfg.distribution, instance_seed(cfg.base_seed, n, T, trial))
    label = f"n{n}_T{T}_i{trial}"
    needs_lp = any(a in ("frac", "rand", "greedy") for a in cfg.algorithms)
    frac, lp_ms = None, 0.0
    if needs_lp or state_count(inst) > MAX_STATES:
        start = time.perf_counter()
        frac = solve_fractional_mtf(inst)
        lp_ms = (time.perf_counter() - start) * 1e3
    if state_count(inst) <= MAX_STATES:
        baseline = float(brute_force_opt(inst)[1].total)
    else:
        baseline = frac.objective
    rows = []
    for algo in cfg.algorithms:
        seeds = list(cfg.seeds) if algo == "rand" else [None]
        for seed in seeds:
            start = time.perf_counter()
            out = run_algorithm(inst, algo, seed or 0, frac)
            ms = (time.perf_counter() - start) * 1e3
            if algo in ("frac", "rand", "greedy"):
                ms += lp_ms
            rows.append(ExperimentRow(
                label, n, T, inst.r_bound, algo, seed,
                out.total_covering, out.total_moving, out.total, baseline, ms,
            ))
    return rows


def thread_count() -> int:
    raw = os.environ.get("MSSC_THREADS", "").strip()
    k = int(raw) if raw else 0
    return k if k > 0 else (os.cpu_count() or 1)


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRow]:
    bad = [a for a in cfg.algorithms if a not in ALGORITHMS]
    if bad:
        raise ValueError(f"unknown algorithms {bad}")
    if not cfg.algorithms:
        return []
    jobs = [(n, T, i) for n, T in cfg.sizes for i in range(cfg.trials)]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        parts = list(pool.map(lambda j: _run_instance(cfg, *j), jobs))
    order = {a: k for k, a in enumerate(ALGORITHMS)}
    rows = [row for part in parts for row in part]
    rows.sort(key=lambda w: (w.n, w.T, w.instance, order[w.algo], -1 if w.seed is None else w.seed))
    return rows


def summarize(rows: Sequence[ExperimentRow]) -> list[list[str]]:
    """Mean and standard error of each (instance, algorithm) group."""
    groups: dict[tuple, list[ExperimentRow]] = {}
    for row in rows:
        groups.setdefault((row.instance, row.algo), []).append(row)
    out = []
    for (label, algo), grp in groups.items():
        first = grp[0]
        cells = [label, str(first.n), str(first.T), str(first.r), algo, str(len(grp))]
        for field in ("covering", "moving", "total"):
            x = np.array([getattr(g, field) for g in grp], dtype=np.float64)
            se = x.std(ddof=1) / math.sqrt(len(x)) if len(x) > 1 else 0.0
            cells += [f"{x.mean():.10g}", f"{se:.10g}"]
        ratios = [g.ratio for g in grp if g.ratio is not None]
        cells.append("" if first.baseline is None else f"{first.baseline:.10g}")
        cells.append(f"{np.mean(ratios):.10g}" if ratios else "")
        out.append(cells)
    return out


def write_csv_atomic(path: str | Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    """Write to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
