# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import hashlib

import numpy as np
import pytest

from dslab.core.archive import OutcomeBounds
from dslab.envs import (
    MazeSpec, SimpleMaze, load_maze, maze_rollout, maze_step,
    maze_step_checked, parse_layout, parse_ranks, segments_intersect,
    simplemaze_v1
)
from dslab.envs.maze import DATA_DIR
from dslab.exceptions import (
    DimensionMismatchError, InvalidInputError, LayoutFileError
)
from dslab.policies import MlpPolicy, Topology, random_init, unflatten

SIMPLEMAZE_V1_SHA256 = (
    "33385ec13208dce1195caab9584d03a49c38335db3ca4f0550a40d17d8b6b5fe"
)


@pytest.fixture
def empty_maze():
    return MazeSpec(OutcomeBounds.square(1.0), (), (-1.0, 0.0))


def saturated_policy(env, direction):
    """A policy whose outputs sit at the action bound along ``direction``."""
    params = np.zeros(env.topology.n_params)
    _, bias = unflatten(env.topology, params)[-1]
    bias[:] = 40 * np.sign(direction)
    return env.policy(params)


class TestSegments:

    @pytest.mark.parametrize("p, q, a, b, expected", [
        ((0, 0), (1, 1), (0, 1), (1, 0), True),
        ((0, 0), (1, 0), (0, 1), (1, 1), False),
        ((0, 0), (1, 0), (1, 0), (1, 1), True),
        ((0, 0), (2, 0), (1, 0), (3, 0), True),
        ((0, 0), (1, 0), (2, 0), (3, 0), False),
        ((0.5, 0.5), (0.5, 0.5), (0, 0), (1, 1), True),
    ])
    def test_pairs(self, p, q, a, b, expected):
        assert bool(segments_intersect(p, q, a, b)) is expected

    def test_broadcast(self):
        walls = np.array([[[0, -1], [0, 1]], [[5, -1], [5, 1]]], float)
        hits = segments_intersect(
            np.array([[-1.0, 0.0]])[:, None], np.array([[1.0, 0.0]])[:, None],
            walls[:, 0], walls[:, 1]
        )
        assert hits.tolist() == [[True, False]]


class TestLayout:

    def test_shipped_layout_is_pinned(self):
        data = (DATA_DIR / "simplemaze-v1.maze").read_bytes()
        assert hashlib.sha256(data).hexdigest() == SIMPLEMAZE_V1_SHA256

    def test_simplemaze_v1(self):
        spec = simplemaze_v1()

        assert spec.bounds == OutcomeBounds((-1, -1), (1, 1))
        assert spec.start == (-1.0, 0.0)
        assert len(spec.walls) == 2
        assert spec.ranks.grid == 4
        assert spec.ranks.start_rank == 0
        assert spec.ranks.final_rank == 7
        assert spec.ranks.cells_of_rank(7) == [(0, 3)]

    def test_unknown_directive(self):
        with pytest.raises(LayoutFileError) as info:
            parse_layout("bounds -1 -1 1 1\nstart 0 0\ndoor 0 0 1 1\n")

        assert info.value.line == 3

    def test_missing_start(self):
        with pytest.raises(LayoutFileError):
            parse_layout("bounds -1 -1 1 1\n")

    def test_start_on_wall(self):
        with pytest.raises(LayoutFileError):
            parse_layout("bounds -1 -1 1 1\nstart 0 0\nwall -1 0 1 0\n")

    def test_wall_out_of_bounds(self):
        with pytest.raises(InvalidInputError):
            MazeSpec(
                OutcomeBounds.square(1), (((0, 0), (2, 0)),), (0.0, 0.5)
            )

    def test_incomplete_ranks(self):
        with pytest.raises(LayoutFileError):
            parse_ranks("grid 2\nrank 0 0 0\n")

    def test_load_without_sidecar(self, tmp_path):
        path = tmp_path / "tiny.maze"
        path.write_text("bounds 0 0 2 2\nstart 1 1\n")

        spec = load_maze(path, horizon=10)
        assert spec.ranks is None
        assert spec.name == "tiny"
        assert spec.horizon == 10


class TestMazeStep:

    def test_null_action(self, empty_maze):
        assert maze_step(empty_maze, [0.2, 0.3], [0, 0]).tolist() == [0.2, 0.3]

    def test_free_move(self, empty_maze):
        np.testing.assert_allclose(
            maze_step(empty_maze, [-1.0, 0.0], [0.05, 0.0]), [-0.95, 0.0]
        )

    def test_wall_blocks(self):
        spec = simplemaze_v1()
        position, blocked = maze_step_checked(spec, [0.0, 0.3], [0.0, 0.1])

        assert position.tolist() == [0.0, 0.3]
        assert bool(blocked)

    def test_bounds_block(self, empty_maze):
        assert maze_step(empty_maze, [-1.0, 0.0], [-0.05, 0]).tolist() \
            == [-1.0, 0.0]

    def test_action_is_clamped(self, empty_maze):
        np.testing.assert_allclose(
            maze_step(empty_maze, [0.0, 0.0], [5.0, -5.0]), [0.1, -0.1]
        )

    def test_batch(self):
        spec = simplemaze_v1()
        positions = np.array([[0.0, 0.3], [0.0, 0.0]])
        moved = maze_step(spec, positions, np.array([[0.0, 0.1]] * 2))
        np.testing.assert_allclose(moved, [[0.0, 0.3], [0.0, 0.1]])


class TestMazeRollout:

    def test_zero_policy_stays_at_start(self):
        env = SimpleMaze()
        trajectory = env.rollout(env.policy(np.zeros(env.topology.n_params)))

        assert trajectory.outcome.tolist() == [-1.0, 0.0]
        assert trajectory.states.shape == (51, 2)

    def test_constant_push_stops_at_boundary(self, empty_maze):
        env = SimpleMaze(empty_maze, n_layers=1, n_neurons=2)
        trajectory = maze_rollout(
            empty_maze, saturated_policy(env, [1.0, 0.0])
        )

        x = -1.0
        for _ in range(50):
            if x + 0.1 <= 1.0:
                x += 0.1

        assert trajectory.outcome.tolist() == [x, 0.0]

    def test_deterministic(self, rng):
        env = SimpleMaze()
        policy = env.policy(random_init(env.topology, rng))

        first, second = env.rollout(policy), env.rollout(policy)
        np.testing.assert_array_equal(first.states, second.states)

    def test_batch_matches_rollouts(self, rng):
        env = SimpleMaze()
        params = random_init(env.topology, rng, n=20)

        outcomes = env.evaluate(params)
        for row, outcome in zip(params, outcomes):
            np.testing.assert_allclose(
                env.rollout(env.policy(row)).outcome, outcome, atol=1e-9
            )

    def test_outcomes_inside_bounds(self, rng):
        env = SimpleMaze()
        outcomes = env.evaluate(random_init(env.topology, rng, n=200))
        assert np.all(env.reachable_bounds().contains(outcomes))

    def test_reachable_bounds(self):
        bounds = SimpleMaze().reachable_bounds()
        assert bounds.lower == (-1.0, -1.0)
        assert bounds.upper == (1.0, 1.0)

    def test_wrong_policy(self):
        topology = Topology.mlp(5, 5, 1, 2)

        with pytest.raises(DimensionMismatchError):
            maze_rollout(simplemaze_v1(), MlpPolicy(
                topology, np.zeros(topology.n_params)
            ))
