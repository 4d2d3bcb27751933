import numpy as np
import pytest

from mssc.experiment import (
    ExperimentConfig,
    ExperimentRow,
    generate_instance,
    instance_seed,
    run_algorithm,
    run_experiment,
    summarize,
    thread_count,
    write_csv_atomic,
)
from mssc.core import make_instance
from mssc.exact import MAX_STATES, state_count
from mssc.lp import solve_fractional_mtf


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("MSSC_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("MSSC_THREADS", "0")
    assert thread_count() >= 1
    monkeypatch.delenv("MSSC_THREADS")
    assert thread_count() >= 1


def test_rows_are_sorted_regardless_of_thread_count(monkeypatch):
    cfg = ExperimentConfig(sizes=[(4, 2), (3, 2)], trials=3, seeds=[2, 0], algorithms=["rand", "exact"])
    monkeypatch.setenv("MSSC_THREADS", "1")
    one = [r.cells()[:-1] for r in run_experiment(cfg)]
    monkeypatch.setenv("MSSC_THREADS", "4")
    four = [r.cells()[:-1] for r in run_experiment(cfg)]
    assert one == four
    assert [r[0] for r in one[:3]] == ["n3_T2_i0"] * 3
    assert [(r[4], r[5]) for r in one[:3]] == [("exact", ""), ("rand", "0"), ("rand", "2")]


def test_baseline_falls_back_to_lp_objective_when_too_large():
    cfg = ExperimentConfig(sizes=[(10, 4)], algorithms=["greedy"], r=3, base_seed=5)
    (row,) = run_experiment(cfg)
    inst = generate_instance(10, 4, 3, "uniform-r", instance_seed(5, 10, 4, 0))
    assert state_count(inst) > MAX_STATES
    assert row.baseline == solve_fractional_mtf(inst).objective


def test_ratio_empty_for_zero_baseline():
    row = ExperimentRow("x", 1, 1, 1, "frac", None, 1, 0, 1, 0.0, 0.0)
    assert row.ratio is None and row.cells()[10] == ""


def test_frac_outcome_reports_fractional_quantities():
    out = run_algorithm(make_instance([0, 1], [{1}, {1}]), "frac")
    assert out.covering == (1, 1)
    assert out.moving == pytest.approx((2.0, 0.0))
    assert out.total == pytest.approx(2 + out.lp_objective)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        run_algorithm(make_instance([0], [{0}]), "magic")
    with pytest.raises(ValueError):
        run_experiment(ExperimentConfig(sizes=[(2, 1)], algorithms=["magic"]))


def test_summary_statistics():
    rows = [ExperimentRow("a", 3, 2, 1, "rand", s, 2, m, 2 + m, 4.0, 0.0) for s, m in enumerate([1, 3])]
    (cells,) = summarize(rows)
    assert cells[:6] == ["a", "3", "2", "1", "rand", "2"]
    assert float(cells[8]) == 2.0
    assert float(cells[9]) == pytest.approx(np.std([1, 3], ddof=1) / np.sqrt(2))
    assert float(cells[13]) == pytest.approx(1.0)


def test_atomic_write_leaves_no_temp_files(tmp_path):
    path = tmp_path / "out.csv"
    write_csv_atomic(path, ["a", "b"], [["1", "2"]])
    assert path.read_text() == "a,b\n1,2\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out.csv"]
