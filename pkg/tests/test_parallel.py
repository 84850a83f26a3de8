"""Leaf parallelization: identical results at any width, exact dispatch."""

import threading

import pytest

from paretoplay.dds import DoubleDummySolver, dds_vector
from paretoplay.game import Contract, Layout, PlayState, random_deal
from paretoplay.parallel import WorkQueue, parallel_dds_vector, solve_worlds
from paretoplay.sampler import InformationSet, generate_worlds
from paretoplay.search import SearchConfig, pareto_choose
from paretoplay.worldvec import WorldMarks

from paretoplay.game import SOUTH


def test_workqueue_each_index_once():
    q = WorkQueue(range(37))
    seen = []
    lock = threading.Lock()

    def worker():
        while True:
            w = q.claim()
            if w is None:
                return
            with lock:
                seen.append(w)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(seen) == list(range(37))
    assert q.dispatched == 37


def test_solve_worlds_sequential_equals_threaded():
    calls = []

    def one(w):
        calls.append(w)
        return w * w

    seq = solve_worlds(range(10), one, threads=1)
    par = solve_worlds(range(10), one, threads=4)
    assert seq == par == {w: w * w for w in range(10)}


def test_solve_worlds_error_propagates():
    def one(w):
        if w == 3:
            raise RuntimeError("boom")
        return True

    with pytest.raises(RuntimeError, match="world 3"):
        solve_worlds(range(6), one, threads=3)


def make_leaf_case(rng, n_worlds):
    lay = Layout(4, 8)
    contract = Contract(5)
    deal = random_deal(lay, rng)
    state = PlayState.initial(deal)
    info = InformationSet.from_state(state, SOUTH)
    worlds = generate_worlds(info, n_worlds, seed=rng.randint(0, 10 ** 9))
    return lay, contract, state, worlds


def test_parallel_vector_bit_identical(rng):
    for trial in range(5):
        lay, contract, state, worlds = make_leaf_case(rng, n_worlds=12)
        marks = WorldMarks(len(worlds)).with_impossible(0b11).with_useless(1 << 11)
        base = None
        for threads in (1, 2, 4, 8):
            solvers = [DoubleDummySolver(contract, lay) for _ in range(len(worlds))]
            v = parallel_dds_vector(worlds, state, contract, marks, threads,
                                    solvers=solvers)
            if base is None:
                base = v
            assert v == base
        seq = dds_vector(worlds, state, contract, marks,
                         solvers=[DoubleDummySolver(contract, lay)
                                  for _ in range(len(worlds))])
        assert seq == base


def test_parallel_dispatch_counts(rng):
    lay, contract, state, worlds = make_leaf_case(rng, n_worlds=10)
    marks = WorldMarks(10).with_useless(0b1100000000)
    solvers = [DoubleDummySolver(contract, lay) for _ in range(10)]
    parallel_dds_vector(worlds, state, contract, marks, threads=4, solvers=solvers)
    assert [s.solves for s in solvers] == [1] * 8 + [0, 0]


def test_threaded_search_matches_sequential(rng):
    lay = Layout(2, 6)
    contract = Contract(2)
    deal = random_deal(lay, rng)
    state = PlayState.initial(deal)
    state = state.play(lay.canonical_order(state.legal_moves())[0])
    info = InformationSet.from_state(state, SOUTH)
    worlds = generate_worlds(info, 8, seed=5)
    results = []
    for threads in (1, 2, 4):
        cfg = SearchConfig(max_moves=2, num_worlds=8, threads=threads)
        results.append(pareto_choose(state, worlds, contract, cfg))
    assert len({r.card for r in results}) == 1
    assert len({r.score for r in results}) == 1
    fronts = {r.iterations[-1].root_front.render() for r in results}
    assert len(fronts) == 1
