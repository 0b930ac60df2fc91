# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import numpy as np
import pytest

from dslab.core.archive import (
    NO_PARENT, ArchiveStore, LineageParams, OutcomeBounds, SamplePair
)
from dslab.exceptions import (
    DimensionMismatchError, EmptyCollectionError, InvalidInputError
)
from dslab.policies.mutation import KeyedReplay, MutationSpec, draw_keys
from dslab.policies.mutation import mutate_keyed
from tests._utils import assert_not_raises


@pytest.fixture
def mutation():
    return MutationSpec(eta=15.0, p_mutation=0.5)


def grow_chain(store, rng, mutation, length):
    """Append a root and a chain of keyed mutants; returns the dense rows."""
    rows = [rng.uniform(-1, 1, 6)]
    store.append(rows[0], rng.uniform(size=2))

    for key in draw_keys(rng, length):
        rows.append(mutate_keyed(rows[-1], key, mutation))
        store.append(
            rows[-1], rng.uniform(size=2), parent_id=store.next_id - 1,
            key=int(key)
        )

    return np.array(rows)


class TestOutcomeBounds:

    def test_square(self):
        bounds = OutcomeBounds.square(1.0)
        assert bounds.lower == (-1.0, -1.0)
        assert bounds.upper == (1.0, 1.0)

    def test_rejects_empty_box(self):
        with pytest.raises(InvalidInputError):
            OutcomeBounds((0.0, 0.0), (1.0, 0.0))

    def test_closed_membership(self):
        bounds = OutcomeBounds.square(1.0)
        inside = bounds.contains(np.array([[-1.0, 0.0], [1.0, 1.0], [1.1, 0]]))
        assert inside.tolist() == [True, True, False]

    def test_sample_inside(self, rng):
        bounds = OutcomeBounds((0.0, -2.0), (1.0, 2.0))
        assert np.all(bounds.contains(bounds.sample(rng, 1000)))


class TestArchiveStore:

    def test_ids_increase(self, rng):
        store = ArchiveStore(2)

        for _ in range(5):
            store.append(rng.uniform(size=3), rng.uniform(size=2))

        assert store.ids.tolist() == [0, 1, 2, 3, 4]

        with pytest.raises(InvalidInputError):
            store.insert(SamplePair(np.zeros(3), np.zeros(2), 2))

    def test_unknown_parent(self):
        store = ArchiveStore(2)
        store.append(np.zeros(3), np.zeros(2))

        with pytest.raises(InvalidInputError):
            store.append(np.zeros(3), np.zeros(2), parent_id=42)

    def test_unchecked_lineage(self):
        store = ArchiveStore(2, check_lineage=False)

        with assert_not_raises():
            store.insert(SamplePair(np.zeros(3), np.zeros(2), 5, parent_id=3))

        assert store[0].parent_id == 3

    def test_outcome_dimension(self):
        store = ArchiveStore(2)

        with pytest.raises(DimensionMismatchError):
            store.append(np.zeros(3), np.zeros(3))

    def test_param_width(self):
        store = ArchiveStore(2)
        store.append(np.zeros(3), np.zeros(2))

        with pytest.raises(DimensionMismatchError):
            store.append(np.zeros(4), np.zeros(2))

    def test_round_trip_of_entries(self, rng):
        store = ArchiveStore(2)
        root = store.append(rng.uniform(size=3), [0.5, 0.5])
        child = store.append(
            rng.uniform(size=3), [0.1, 0.2], parent_id=root.id,
            generation=3, key=99
        )

        stored = store.get(child.id)
        np.testing.assert_array_equal(stored.params, child.params)
        np.testing.assert_array_equal(stored.outcome, [0.1, 0.2])
        assert (stored.parent_id, stored.generation, stored.key) == (0, 3, 99)
        assert store.parents.tolist() == [NO_PARENT, 0]

    def test_get_missing(self):
        with pytest.raises(KeyError):
            ArchiveStore(2).get(0)

    def test_contains(self):
        store = ArchiveStore(2)
        store.append(np.zeros(1), np.zeros(2))

        assert 0 in store
        assert 1 not in store

    def test_nearest(self):
        store = ArchiveStore(2)
        for outcome in ([1.0, 0.0], [-1.0, 0.0], [0.0, 5.0]):
            store.append(np.zeros(1), outcome)

        positions = store.nearest(np.array([[0.9, 0.1], [0.0, 0.0]]))
        assert positions.tolist() == [0, 0]

    def test_nearest_empty(self):
        with pytest.raises(EmptyCollectionError):
            ArchiveStore(2).nearest(np.zeros(2))

    def test_lineage_rebuilds_rows(self, rng, mutation):
        dense = ArchiveStore(2)
        lineage = ArchiveStore(2, replay=KeyedReplay(mutation))
        rows = grow_chain(dense, np.random.default_rng(3), mutation, 70)
        grow_chain(lineage, np.random.default_rng(3), mutation, 70)

        positions, _ = lineage.stored_rows()
        assert positions.tolist() == [0, 32, 64]

        fresh = ArchiveStore.restore(
            6, lineage.ids, lineage.parents, lineage.generations,
            lineage.keys, lineage.outcomes,
            dict(zip(*map(list, lineage.stored_rows()))),
            replay=KeyedReplay(mutation)
        )
        np.testing.assert_array_equal(
            fresh.params_of(range(len(rows))), rows
        )
        np.testing.assert_array_equal(
            dense.params_of(range(len(rows))), rows
        )

    def test_lineage_checkpoint_required(self, mutation):
        params = LineageParams(3, KeyedReplay(mutation))

        with pytest.raises(InvalidInputError):
            params.append(None)

    def test_restore_keeps_index(self, rng):
        store = ArchiveStore(2)
        for _ in range(10):
            store.append(rng.uniform(size=2), rng.uniform(size=2))

        positions, rows = store.stored_rows()
        fresh = ArchiveStore.restore(
            2, store.ids, store.parents, store.generations, store.keys,
            store.outcomes, dict(zip(positions.tolist(), rows))
        )

        assert fresh.index.main_size == 10
        assert fresh.check_lineage
        np.testing.assert_array_equal(fresh.outcomes, store.outcomes)
