import functools
import itertools

import numpy as np
import pytest

from mssc.core import Permutation, covering_cost, make_instance, total_cost
from mssc.distances import kendall_tau
from mssc.exact import (
    MAX_STATES,
    SetCoverInstance,
    SizeGuardError,
    brute_force_mtf,
    brute_force_opt,
    default_dummy_count,
    extract_cover,
    min_set_covers,
    setcover_reduce,
    state_count,
)
from mssc.lp import solve_fractional_mtf
from mssc.rounding import greedy_round, move_to_front, randomized_round

from _util import random_instance


@functools.lru_cache(maxsize=None)
def _table(n):
    perms = [Permutation(p) for p in itertools.permutations(range(n))]
    return perms, np.array([[kendall_tau(p, q) for q in perms] for p in perms])


def _naive_opt(inst):
    """Full table DP over all n! permutations, no structural shortcuts."""
    perms, kt = _table(inst.n)
    cover = [np.array([covering_cost(p, req) for p in perms]) for req in inst.requests]
    cost = np.array([kendall_tau(inst.initial, p) for p in perms]) + cover[0]
    for c in cover[1:]:
        cost = (cost[:, None] + kt).min(axis=0) + c
    return int(cost.min())


def _naive_mtf(inst):
    best = None
    for picks in itertools.product(*[sorted(r) for r in inst.requests]):
        p, total = inst.initial, 0
        for e in picks:
            p, c = move_to_front(p, e)
            total += c
        best = total if best is None else min(best, total)
    return best


def test_empty_horizon():
    inst = make_instance([1, 0], [])
    sol, rep = brute_force_opt(inst)
    assert sol == [] and rep.total == 0
    assert brute_force_mtf(inst) == ([], 0)


def test_two_element_example_prefers_staying():
    sol, rep = brute_force_opt(make_instance([0, 1], [{1}]))
    assert rep.total == 2
    assert sol == [Permutation((0, 1))]


def test_opt_matches_naive_table_dp():
    rng = np.random.default_rng(0)
    for _ in range(80):
        n, T = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        inst = random_instance(rng, n, T)
        sol, rep = brute_force_opt(inst)
        assert rep.total == _naive_opt(inst)
        assert total_cost(inst, sol) == rep


def test_opt_with_inert_elements_matches_naive():
    rng = np.random.default_rng(1)
    for _ in range(30):
        n = 5
        inst = random_instance(rng, n, 3, kmax=2)
        inst = make_instance(inst.pi0, [set(r) & {0, 1, 2} or {0} for r in inst.requests])
        assert brute_force_opt(inst)[1].total == _naive_opt(inst)


def test_opt_single_round_is_direct_minimisation():
    rng = np.random.default_rng(2)
    for _ in range(20):
        inst = random_instance(rng, 4, 1)
        direct = min(
            kendall_tau(inst.initial, p) + covering_cost(Permutation(p), inst.requests[0])
            for p in itertools.permutations(range(4))
        )
        assert brute_force_opt(inst)[1].total == direct


def test_opt_tie_break_is_lexicographic():
    # pulling 2 to the front costs 2 + 1; staying costs 3: every such tie resolves to the smallest tuple
    inst = make_instance([0, 1, 2], [{2}])
    sol, rep = brute_force_opt(inst)
    assert rep.total == 3
    candidates = [
        p for p in itertools.permutations(range(3))
        if kendall_tau(inst.initial, p) + covering_cost(Permutation(p), {2}) == 3
    ]
    assert sol[0].forward == min(candidates)


def test_opt_dominates_heuristics():
    rng = np.random.default_rng(3)
    for _ in range(15):
        inst = random_instance(rng, 3, 3)
        opt = brute_force_opt(inst)[1].total
        frac = solve_fractional_mtf(inst)
        for seed in range(5):
            assert opt <= total_cost(inst, randomized_round(frac, inst, seed)).total
        assert opt <= total_cost(inst, greedy_round(frac, inst)[0]).total
        assert opt <= total_cost(inst, brute_force_mtf(inst)[0]).total


def test_guard_refuses_large_instances():
    inst = make_instance(range(9), [set(range(9))])
    assert state_count(inst) > MAX_STATES
    with pytest.raises(SizeGuardError):
        brute_force_opt(inst)
    with pytest.raises(SizeGuardError):
        brute_force_mtf(inst)


def test_mtf_front_element_always_requested_costs_nothing():
    inst = make_instance([2, 0, 1], [{2}, {2, 0}, {1, 2}])
    sol, cost = brute_force_mtf(inst)
    assert cost == 0 and all(p == inst.initial for p in sol)


def test_mtf_matches_naive_enumeration():
    rng = np.random.default_rng(4)
    for _ in range(60):
        inst = random_instance(rng, int(rng.integers(1, 6)), int(rng.integers(1, 5)))
        sol, cost = brute_force_mtf(inst)
        assert cost == _naive_mtf(inst)
        rep = total_cost(inst, sol)
        assert rep.total_moving == cost
        assert rep.covering == (1,) * inst.T


def test_setcover_instance_validation():
    with pytest.raises(ValueError):
        SetCoverInstance(2, ({1}, set()))
    with pytest.raises(ValueError):
        SetCoverInstance(2, ({3},))
    with pytest.raises(ValueError):
        SetCoverInstance(0, ())


def test_min_set_covers_enumeration():
    sc = SetCoverInstance(4, ({1, 2}, {2, 3}, {3, 4}))
    assert sorted(sorted(c) for c in min_set_covers(sc)) == [[1, 3], [2, 3], [2, 4]]


def test_reduce_single_set_shape():
    inst = setcover_reduce(SetCoverInstance(1, ({1},)), 4)
    assert inst.n == 5 and inst.pi0 == (0, 1, 2, 3, 4)
    assert inst.requests == (frozenset({4}),)
    # the only element has to be pulled over all dummies once or paid for at position 5
    assert brute_force_opt(inst)[1].total == 5


def test_reduce_default_sizing_and_request_order():
    sc = SetCoverInstance(3, ({1, 2}, {3}, {2, 3}, {1}))
    inst = setcover_reduce(sc)
    d = default_dummy_count(sc)
    assert d == 3 * 3 * 4
    assert inst.n == 3 + d
    assert inst.requests == tuple(frozenset(d + x - 1 for x in s) for s in sc.sets)


def test_reduce_guards():
    sc = SetCoverInstance(1, ({1},))
    with pytest.raises(ValueError):
        setcover_reduce(sc, -1)
    with pytest.raises(SizeGuardError):
        setcover_reduce(sc, 10**7)


def test_extract_cover():
    sc = SetCoverInstance(2, ({1, 2}, {2}))
    inst = setcover_reduce(sc, 3)
    sol, _ = brute_force_opt(inst)
    cover = extract_cover(inst, sol, 3)
    assert sc.is_cover(cover) and cover == frozenset({2})
