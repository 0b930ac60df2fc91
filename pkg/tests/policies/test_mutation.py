# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import numpy as np
import pytest

from dslab.exceptions import InvalidInputError
from dslab.policies import (
    KeyedReplay, MutationSpec, draw_keys, expand_rows, mutate_keyed,
    polynomial_delta, polynomial_mutation
)


class TestPolynomialMutation:

    def test_no_mutation(self, rng):
        params = rng.uniform(-1, 1, 50)
        spec = MutationSpec(eta=15, p_mutation=0)
        np.testing.assert_array_equal(
            polynomial_mutation(params, spec, rng), params
        )

    def test_median_draw_is_identity(self):
        assert polynomial_delta(0.3, 0.5, 15, -1, 1) == 0.0

    def test_genes_stay_in_bounds(self, rng):
        params = rng.uniform(-1, 1, (200, 20))
        spec = MutationSpec(eta=1, p_mutation=1)
        mutated = polynomial_mutation(params, spec, rng)
        assert np.all((mutated >= -1) & (mutated <= 1))

    def test_rejects_out_of_bounds(self, rng):
        with pytest.raises(InvalidInputError):
            polynomial_mutation(
                np.array([1.5]), MutationSpec(15, 1), rng
            )

    def test_input_untouched(self, rng):
        params = np.zeros(10)
        polynomial_mutation(params, MutationSpec(15, 1), rng)
        assert params.tolist() == [0.0] * 10

    def test_eta_controls_locality(self, rng):
        genes = np.zeros(100_000)
        narrow = polynomial_mutation(genes, MutationSpec(2000, 1), rng)
        wide = polynomial_mutation(genes, MutationSpec(15, 1), rng)

        assert np.median(np.abs(narrow)) < 1e-3
        assert np.median(np.abs(wide)) > 10 * np.median(np.abs(narrow))

    @pytest.mark.parametrize("spec", [
        dict(eta=0, p_mutation=0.1),
        dict(eta=15, p_mutation=1.5),
        dict(eta=15, p_mutation=0.1, lower=1, upper=1),
    ])
    def test_invalid_spec(self, spec):
        with pytest.raises(InvalidInputError):
            MutationSpec(**spec)


class TestKeyedMutation:

    def test_keys_in_range(self, rng):
        keys = draw_keys(rng, 1000)
        assert keys.min() >= 1

    def test_replay(self, rng):
        spec = MutationSpec(15, 0.1)
        parent = rng.uniform(-1, 1, 30)
        key = int(draw_keys(rng, 1)[0])

        assert mutate_keyed(parent, key, spec).tolist() \
            == KeyedReplay(spec)(parent, key).tolist()

    def test_expand_rows(self, rng):
        spec = MutationSpec(15, 0.5)
        parents = rng.uniform(-1, 1, (4, 6))
        keys = draw_keys(rng, 4)

        rows = expand_rows(parents, keys, spec)
        for i in range(4):
            assert rows[i].tolist() \
                == mutate_keyed(parents[i], keys[i], spec).tolist()

    def test_expand_rows_counts(self, rng):
        with pytest.raises(InvalidInputError):
            expand_rows(np.zeros((2, 3)), np.ones(3, dtype=np.int64),
                        MutationSpec(15, 0.1))
