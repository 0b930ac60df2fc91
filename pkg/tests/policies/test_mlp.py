# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import numpy as np
import pytest

from dslab.exceptions import DimensionMismatchError, InvalidInputError
from dslab.policies import (
    MlpBatch, MlpPolicy, Topology, flatten, random_init, unflatten
)


def loop_forward(topology, params, obs, scale):
    """Independent forward pass with explicit loops."""
    at, x = 0, list(obs)

    for n_in, n_out in topology.shapes:
        w = params[at:at + n_in * n_out]
        at += n_in * n_out
        b = params[at:at + n_out]
        at += n_out
        x = [
            np.tanh(sum(x[i] * w[i * n_out + j] for i in range(n_in)) + b[j])
            for j in range(n_out)
        ]

    return np.array(x) * scale


@pytest.fixture
def topology():
    return Topology.mlp(2, 2, n_layers=2, n_neurons=5)


class TestTopology:

    def test_parameter_count(self):
        assert Topology.mlp(2, 2).n_params == 2 * 50 + 50 + 50 * 50 + 50 \
            + 50 * 2 + 2
        assert Topology.mlp(5, 5).n_params == 3105

    def test_rejects_empty_layer(self):
        with pytest.raises(InvalidInputError):
            Topology(2, (0,), 2)

    def test_flatten_inverts_unflatten(self, topology, rng):
        params = random_init(topology, rng)
        np.testing.assert_array_equal(
            flatten(unflatten(topology, params)), params
        )

    def test_wrong_length(self, topology):
        with pytest.raises(DimensionMismatchError):
            unflatten(topology, np.zeros(topology.n_params + 1))


class TestMlpPolicy:

    def test_zero_params(self, topology, rng):
        policy = MlpPolicy(topology, np.zeros(topology.n_params))
        assert policy.forward(rng.normal(size=2)).tolist() == [0.0, 0.0]

    def test_matches_loop_oracle(self, topology, rng):
        params = random_init(topology, rng)
        policy = MlpPolicy(topology, params, output_scale=0.1)

        for obs in rng.normal(size=(5, 2)):
            np.testing.assert_allclose(
                policy.forward(obs), loop_forward(topology, params, obs, 0.1),
                atol=1e-12
            )

    def test_repeatable(self, topology, rng):
        policy = MlpPolicy(topology, random_init(topology, rng))
        obs = rng.normal(size=2)
        assert policy.forward(obs).tolist() == policy.forward(obs).tolist()

    def test_output_scale(self, topology, rng):
        policy = MlpPolicy(
            topology, random_init(topology, rng), output_scale=0.1
        )
        out = policy.forward(rng.normal(size=(100, 2)) * 10)
        assert np.all(np.abs(out) <= 0.1)

    def test_params_are_frozen(self, topology):
        policy = MlpPolicy(topology, np.zeros(topology.n_params))

        with pytest.raises(ValueError):
            policy.params[0] = 1.0

    def test_observation_length(self, topology):
        policy = MlpPolicy(topology, np.zeros(topology.n_params))

        with pytest.raises(DimensionMismatchError):
            policy.forward(np.zeros(3))


class TestMlpBatch:

    def test_matches_single_policies(self, topology, rng):
        params = random_init(topology, rng, n=8)
        obs = rng.normal(size=(8, 2))

        batch = MlpBatch(topology, params, 0.1).forward(obs)
        for i in range(8):
            np.testing.assert_allclose(
                batch[i], MlpPolicy(topology, params[i], 0.1).forward(obs[i]),
                atol=1e-12
            )

    def test_broadcast_observation(self, topology, rng):
        batch = MlpBatch(topology, random_init(topology, rng, n=3))
        assert batch.forward(np.zeros(2)).shape == (3, 2)


class TestRandomInit:

    def test_reproducible(self, topology):
        a = random_init(topology, np.random.default_rng(1))
        b = random_init(topology, np.random.default_rng(1))
        assert a.tolist() == b.tolist()

    def test_seeds_differ(self, topology):
        a = random_init(topology, np.random.default_rng(1))
        b = random_init(topology, np.random.default_rng(2))
        assert a.tolist() != b.tolist()

    def test_uniform_genes(self, rng):
        draws = random_init(Topology(1, (1,), 1), rng, n=100_000)
        assert np.all((draws >= -1) & (draws <= 1))
        np.testing.assert_allclose(draws.mean(axis=0), 0.0, atol=0.01)
