# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import copy

import numpy as np
import pytest

from dslab.envs import SimpleMaze
from dslab.explorers import gep_generation, gep_init
from dslab.policies import MutationSpec, draw_keys

from tests._utils import brute_knn

MUTATION = MutationSpec(eta=15, p_mutation=0.1)


@pytest.fixture
def env():
    return SimpleMaze(n_layers=1, n_neurons=4)


class TestGep:

    def test_init(self, env, rng):
        state = gep_init(env, 20, MUTATION, rng)

        assert len(state.population) == 20
        assert state.bounds == env.reachable_bounds()
        assert state.generation == 0
        np.testing.assert_array_equal(
            state.population.outcomes,
            env.evaluate(state.population.params_of(range(20)))
        )

    def test_generation_appends(self, env, rng):
        state = gep_init(env, 20, MUTATION, rng)
        pairs = gep_generation(state, env, MUTATION, 5, rng, n_offspring=2)

        assert len(pairs) == 10
        assert len(state.population) == 30
        assert [p.id for p in pairs] == list(range(20, 30))
        assert {p.generation for p in pairs} == {1}
        assert [p.parent_id for p in pairs[::2]] \
            == [p.parent_id for p in pairs[1::2]]
        np.testing.assert_array_equal(
            state.last_selected,
            state.population.outcomes[[p.parent_id for p in pairs[::2]]]
        )

    def test_picks_nearest_to_goals(self, env, rng):
        state = gep_init(env, 30, MUTATION, rng)
        population = state.population
        points = list(population.outcomes)
        ids = list(population.ids)

        replay = copy.deepcopy(rng)
        pairs = gep_generation(state, env, MUTATION, 8, rng)

        for pair in pairs:
            goal = state.bounds.sample(replay, 1)[0]
            draw_keys(replay, 1)

            assert pair.parent_id == brute_knn(points, ids, goal, 1)[0][0]
            points.append(pair.outcome)
            ids.append(pair.id)

    def test_later_goal_picks_same_generation_child(self, env, rng):
        state = gep_init(env, 2, MUTATION, rng)
        pairs = gep_generation(state, env, MUTATION, 300, rng)

        assert len(state.population) == 302
        assert max(p.parent_id for p in pairs) >= 2
        assert all(p.parent_id < p.id for p in pairs)

    def test_lineage_replays_params(self, env, rng):
        state = gep_init(env, 10, MUTATION, rng)
        created = []
        for _ in range(4):
            created += gep_generation(state, env, MUTATION, 3, rng)

        positions = [state.population.position(p.id) for p in created]
        np.testing.assert_array_equal(
            state.population.params_of(positions),
            np.stack([p.params for p in created])
        )

    def test_deterministic(self, env):
        def run(seed):
            rng = np.random.default_rng(seed)
            state = gep_init(env, 10, MUTATION, rng)
            for _ in range(3):
                gep_generation(state, env, MUTATION, 4, rng)
            return state.population.outcomes

        np.testing.assert_array_equal(run(4), run(4))

    def test_zero_selection(self, env, rng):
        state = gep_init(env, 5, MUTATION, rng)

        assert gep_generation(state, env, MUTATION, 0, rng) == []
        assert len(state.population) == 5
