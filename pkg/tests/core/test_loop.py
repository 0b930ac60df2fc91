# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import numpy as np
import pytest

from dslab.core.archive import ArchiveStore
from dslab.core.loop import Expansion, run_loop
from dslab.exceptions import EmptyCollectionError


def seeded_store():
    store = ArchiveStore(2)
    store.append(np.zeros(2), np.zeros(2))
    return store


def random_walk(seed):
    rng = np.random.default_rng(seed)

    def select(store):
        return store[int(rng.integers(len(store)))]

    def expand(parent):
        return Expansion(rng.uniform(-0.1, 0.1, 2), parent)

    def evaluate(candidate):
        return candidate.parent.outcome + candidate.params

    return select, expand, evaluate


class TestRunLoop:

    def test_zero_iterations(self):
        store = run_loop(*random_walk(0), seeded_store(), 0)
        assert len(store) == 1

    def test_deterministic(self):
        first = run_loop(*random_walk(5), seeded_store(), 50)
        second = run_loop(*random_walk(5), seeded_store(), 50)

        np.testing.assert_array_equal(first.outcomes, second.outcomes)
        assert first.parents.tolist() == second.parents.tolist()

    def test_generations_and_parents(self):
        store = run_loop(*random_walk(1), seeded_store(), 10, start=4)

        assert store.generations.tolist() == [0] + list(range(5, 15))
        assert all(p < i for i, p in enumerate(store.parents) if i)

    def test_discarded_candidates(self):
        select, expand, _ = random_walk(2)
        calls = []

        def evaluate(candidate):
            calls.append(candidate)
            return None if len(calls) % 2 else candidate.params

        store = run_loop(select, expand, evaluate, seeded_store(), 10)
        assert len(calls) == 10
        assert len(store) == 6

    def test_hooks_and_selection_observer(self):
        new, selected = [], []
        store = run_loop(
            *random_walk(3), seeded_store(), 7, [new.append],
            on_select=selected.append
        )

        assert [p.id for p in new] == list(range(1, 8))
        assert len(selected) == 7
        assert store.index.generation == 7

    def test_keys_are_stored(self):
        select, _, evaluate = random_walk(4)

        def expand(parent):
            return Expansion(np.ones(2) * 0.01, parent, key=11)

        store = run_loop(select, expand, evaluate, seeded_store(), 3)
        assert store.keys.tolist() == [0, 11, 11, 11]

    def test_empty_store(self):
        with pytest.raises(EmptyCollectionError):
            run_loop(*random_walk(0), ArchiveStore(2), 1)

    def test_partial_results_kept(self):
        select, expand, evaluate = random_walk(6)
        store = seeded_store()

        def failing(candidate):
            if len(store) == 4:
                raise RuntimeError("rollout crashed")
            return evaluate(candidate)

        with pytest.raises(RuntimeError):
            run_loop(select, expand, failing, store, 10)

        assert len(store) == 4
