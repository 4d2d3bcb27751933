import itertools

import numpy as np
import pytest

from mssc.core import (
    CostReport,
    GranularMatrix,
    Instance,
    Permutation,
    StochasticMatrix,
    covering_cost,
    make_instance,
    matrix_from_permutation,
    permutation_from_matrix,
    total_cost,
    validate_instance,
)

from _util import random_instance, random_perm


def test_permutation_positions_are_one_indexed():
    p = Permutation((2, 0, 1))
    assert p.position(2) == 1
    assert p.position(1) == 3
    assert p.element_at(2) == 0
    assert all(p.forward[p.inverse[e]] == e for e in range(3))


@pytest.mark.parametrize("fwd", [(0, 0, 2), (0, 1, 3), (-1, 0)])
def test_permutation_rejects_non_bijections(fwd):
    with pytest.raises(ValueError):
        Permutation(fwd)


def test_validate_ok():
    assert validate_instance(make_instance([0, 1, 2], [{1}])) == []


def test_validate_reports_out_of_range_id():
    problems = validate_instance(make_instance([0, 1], [{5}]))
    assert any("element id out of range" in p for p in problems)


def test_validate_reports_duplicate_image():
    problems = validate_instance(Instance(3, (0, 0, 2), (frozenset({1}),)))
    assert any("not a bijection" in p for p in problems)


def test_validate_reports_empty_request_and_wrong_length():
    problems = validate_instance(Instance(3, (0, 1), (frozenset(),)))
    assert len(problems) == 2


@pytest.mark.parametrize(
    "fwd, req, expected",
    [((0, 1, 2), {2}, 3), ((0, 1, 2), {0, 2}, 1), ((1, 2, 0), {0}, 3)],
)
def test_covering_cost_examples(fwd, req, expected):
    assert covering_cost(Permutation(fwd), req) == expected


def test_covering_cost_of_full_universe_is_one():
    rng = np.random.default_rng(0)
    for n in range(1, 7):
        assert covering_cost(random_perm(rng, n), range(n)) == 1


def test_static_solution_has_no_moving_cost():
    inst = make_instance([2, 0, 1], [{0}, {1, 2}, {0}])
    rep = total_cost(inst, [inst.initial] * 3)
    assert rep.moving == (0, 0, 0)
    assert rep.covering == (2, 1, 2)


def test_single_swap_example():
    inst = make_instance([0, 1], [{1}])
    rep = total_cost(inst, [Permutation((1, 0))])
    assert (rep.total_covering, rep.total_moving, rep.total) == (1, 1, 2)


def _inversions(p, q):
    # independent pair count: for every pair, compare relative order directly
    pos_p = {e: i for i, e in enumerate(p)}
    pos_q = {e: i for i, e in enumerate(q)}
    return sum(
        (pos_p[a] < pos_p[b]) != (pos_q[a] < pos_q[b]) for a, b in itertools.combinations(p, 2)
    )


def test_total_cost_matches_per_round_oracle():
    rng = np.random.default_rng(1)
    for _ in range(50):
        inst = random_instance(rng, 4, 3)
        sol = [random_perm(rng, 4) for _ in range(3)]
        rep = total_cost(inst, sol)
        prev = inst.pi0
        for t, (pi, req) in enumerate(zip(sol, inst.requests)):
            assert rep.covering[t] == 1 + min(pi.forward.index(e) for e in req)
            assert rep.moving[t] == _inversions(prev, pi.forward)
            prev = pi.forward
        assert rep.total == rep.total_covering + rep.total_moving


def test_total_cost_is_additive_over_a_split():
    rng = np.random.default_rng(2)
    inst = random_instance(rng, 5, 6)
    sol = [random_perm(rng, 5) for _ in range(6)]
    whole = total_cost(inst, sol)
    first = total_cost(make_instance(inst.pi0, inst.requests[:3]), sol[:3])
    second = total_cost(make_instance(sol[2].forward, inst.requests[3:]), sol[3:])
    assert whole.covering == first.covering + second.covering
    assert whole.moving == first.moving + second.moving


def test_total_cost_length_mismatch():
    inst = make_instance([0, 1], [{1}, {0}])
    with pytest.raises(ValueError):
        total_cost(inst, [inst.initial])


def test_cost_report_ratio_and_dict():
    rep = CostReport((1, 2), (0, 3))
    assert rep.ratio(3) == 2.0
    assert rep.as_dict()["total"] == 6


def test_matrix_from_permutation_examples():
    assert np.array_equal(np.asarray(matrix_from_permutation(Permutation.identity(3))), np.eye(3))
    anti = np.asarray(matrix_from_permutation(Permutation((1, 0))))
    assert np.array_equal(anti, [[0, 1], [1, 0]])


def test_matrix_round_trip_and_double_stochasticity():
    rng = np.random.default_rng(3)
    for n in range(1, 8):
        p = random_perm(rng, n)
        m = matrix_from_permutation(p)
        assert m.is_doubly_stochastic()
        assert set(np.unique(m.entries)) <= {0.0, 1.0}
        assert permutation_from_matrix(m) == p


def test_stochastic_matrix_clamps_tiny_negatives_and_rejects_bad_rows():
    m = StochasticMatrix([[1 + 5e-10, -5e-10], [0, 1]])
    assert m.entries.min() == 0.0
    with pytest.raises(ValueError):
        StochasticMatrix([[0.5, 0.4], [0, 1]])
    with pytest.raises(ValueError):
        StochasticMatrix([[1.1, -0.1], [0, 1]])
    with pytest.raises(ValueError):
        StochasticMatrix([[1, 0, 0]])


def test_stochastic_matrix_allows_column_sums_above_one():
    m = StochasticMatrix([[1, 0], [1, 0]])
    assert not m.is_doubly_stochastic()


def test_granular_matrix_invariants():
    g = GranularMatrix([[1, 1], [1, 1]], 2)
    assert np.array_equal(g.to_float(), [[0.5, 0.5], [0.5, 0.5]])
    assert g.to_stochastic().is_doubly_stochastic()
    with pytest.raises(ValueError):
        GranularMatrix([[2, 0], [1, 1]], 2)
    with pytest.raises(ValueError):
        GranularMatrix([[3, -1], [-1, 3]], 2)
    assert GranularMatrix.from_permutation(Permutation((1, 0)), 3) == GranularMatrix(
        [[0, 3], [3, 0]], 3
    )
