# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import numpy as np
import pytest

from dslab.envs import simplemaze_v1
from dslab.exceptions import InvalidInputError, LayoutFileError
from dslab.planners import MpTree, parse_tree_dump, propagate, run_rrt


class TestPropagate:

    def test_free_steps(self):
        config = propagate(simplemaze_v1(), [-1.0, 0.0], [0.05, 0.02], 3)
        np.testing.assert_allclose(config, [-0.85, 0.06])

    def test_blocked(self):
        assert propagate(simplemaze_v1(), [0.0, 0.3], [0.0, 0.05]) is None

    def test_blocked_on_later_step(self):
        assert propagate(simplemaze_v1(), [0.0, 0.25], [0.0, 0.05], 2) \
            is None


class TestMpTree:

    def test_root(self):
        tree = MpTree([-1.0, 0.0])

        assert len(tree) == 1
        assert tree.root.tolist() == [-1.0, 0.0]
        assert tree.parents.tolist() == [-1]

    def test_dump_lines(self):
        tree = MpTree([-1.0, 0.0])
        tree.store.append([0.1, 0.0], [-0.9, 0.0], parent_id=0, generation=1)

        assert tree.dump().splitlines() == [
            "0 -1 -1 0 0 0",
            "1 0 -0.90000000000000002 0 0.10000000000000001 0",
        ]

    def test_dump_is_exact(self, rng):
        tree = run_rrt(simplemaze_v1(), rng, 100)
        ids, parents, configs, controls = parse_tree_dump(tree.dump())

        assert ids.tolist() == list(range(len(tree)))
        assert parents.tolist() == tree.parents.tolist()
        np.testing.assert_array_equal(configs, tree.configs)
        np.testing.assert_array_equal(controls, tree.controls)

    def test_parse_empty(self):
        ids, parents, configs, controls = parse_tree_dump("")

        assert len(ids) == len(parents) == 0
        assert configs.shape == controls.shape == (0, 2)

    def test_parse_bad_line(self):
        with pytest.raises(LayoutFileError) as info:
            parse_tree_dump("0 -1 0 0 0 0\n1 0 0.1 0\n")

        assert info.value.line == 2

    def test_parse_unknown_parent(self):
        with pytest.raises(InvalidInputError):
            parse_tree_dump("0 -1 0 0 0 0\n1 7 0.1 0 0.1 0\n")
