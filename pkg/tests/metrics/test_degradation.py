# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import logging

import numpy as np
import pytest

from dslab.core.archive import ArchiveStore, OutcomeBounds
from dslab.exceptions import EmptyCollectionError
from dslab.metrics import (
    DegradationResult, ExpansionGrid, expansion_degradation, pool_degradation
)
from dslab.metrics import degradation
from dslab.policies import MutationSpec

FROZEN = MutationSpec(eta=15, p_mutation=0.0)


class ShiftEnv:
    """The outcome is the first two genes, moved by a fixed offset."""
    outcome_dim = 2

    def __init__(self, offset=(0.3, 0.0)):
        self.offset = np.asarray(offset)
        self.calls = 0

    def evaluate(self, params):
        self.calls += 1
        return np.atleast_2d(params)[:, :2] + self.offset


def filled_store(rng, cells):
    """``cells`` maps an outcome point to how many policies produce it."""
    store = ArchiveStore(2)

    for point, count in cells.items():
        for _ in range(count):
            params = rng.uniform(-0.2, 0.2, 4)
            params[:2] = point
            store.append(params, point)

    return store


class TestExpansionDegradation:

    def test_constant_offset(self, rng):
        store = filled_store(rng, {(0.5, 0.5): 30, (-0.5, -0.5): 5})
        grid = ExpansionGrid(OutcomeBounds.square(1.0), 2)

        result = expansion_degradation(
            ShiftEnv(), store, grid, FROZEN, rng, 10, 7
        )

        assert result.n_parents.tolist() == [[5, 0], [0, 10]]
        assert result.n_expansions.tolist() == [[35, 0], [0, 70]]
        np.testing.assert_allclose(result.mean_dist[0, 0], 0.3)
        np.testing.assert_allclose(result.mean_dist[1, 1], 0.3)
        assert np.isnan(result.mean_dist[0, 1])

    def test_grid_is_untouched(self, rng):
        store = filled_store(rng, {(0.5, 0.5): 3})
        grid = ExpansionGrid(OutcomeBounds.square(1.0), 2)

        expansion_degradation(ShiftEnv(), store, grid, FROZEN, rng, 2, 2)
        assert not grid.filled.any()

    def test_sparse_cell_warns(self, rng, caplog):
        store = filled_store(rng, {(0.5, 0.5): 3})
        grid = ExpansionGrid(OutcomeBounds.square(1.0), 2)

        with caplog.at_level(logging.WARNING, logger="dslab.metrics"):
            expansion_degradation(ShiftEnv(), store, grid, FROZEN, rng, 5, 2)

        assert "holds 3 policies" in caplog.text

    def test_batching_does_not_matter(self, monkeypatch):
        store = filled_store(
            np.random.default_rng(0), {(0.5, 0.5): 12, (-0.5, 0.5): 9}
        )
        grid = ExpansionGrid(OutcomeBounds.square(1.0), 2)
        mutation = MutationSpec(eta=5, p_mutation=0.5)

        def run():
            env = ShiftEnv((0.0, 0.0))
            result = expansion_degradation(
                env, store, grid, mutation, np.random.default_rng(1), 8, 5
            )
            return result, env.calls

        whole, whole_calls = run()
        monkeypatch.setattr(degradation, "EVAL_ROWS", 5)
        split, split_calls = run()

        assert split_calls > whole_calls
        np.testing.assert_allclose(whole.sums, split.sums)
        assert whole.sums.sum() > 0

    def test_rows(self, rng):
        store = filled_store(rng, {(0.5, 0.5): 4})
        result = expansion_degradation(
            ShiftEnv(), store, ExpansionGrid(OutcomeBounds.square(1.0), 2),
            FROZEN, rng, 4, 1
        )
        rows = list(result.rows())

        assert [r[:2] for r in rows] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert rows[3][2] == pytest.approx(0.3)
        assert rows[3][3:] == (4, 4)

    def test_empty_source(self, rng):
        with pytest.raises(EmptyCollectionError):
            expansion_degradation(
                ShiftEnv(), ArchiveStore(2),
                ExpansionGrid(OutcomeBounds.square(1.0), 2), FROZEN, rng
            )


class TestPoolDegradation:

    def test_weighted_by_expansions(self):
        a = DegradationResult(
            np.array([[1.0]]), np.array([[1]]), np.array([[10]])
        )
        b = DegradationResult(
            np.array([[6.0]]), np.array([[2]]), np.array([[20]])
        )
        pooled = pool_degradation([a, b])

        assert pooled.mean_dist[0, 0] == pytest.approx(7 / 30)
        assert pooled.n_parents[0, 0] == 3

    def test_nothing(self):
        with pytest.raises(EmptyCollectionError):
            pool_degradation([])
