# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import xml.etree.ElementTree as ET

import pytest

from dslab._config import ExperimentConfig
from dslab.bench.render import render, score_band
from dslab.bench.telemetry import HISTORY_HEADER, write_csv
from dslab.exceptions import (
    AbsentDataError, ArtifactError, InvalidInputError
)

from tests._utils import fake_run

TREE = "0 -1 -1 0 0 0\n1 0 -0.9 0 0.1 0\n2 1 -0.8 0.05 0.1 0.05\n"


SVG = "{http://www.w3.org/2000/svg}"


def marks(path, gid):
    """Number of marks drawn in the layer with id ``gid``.

    Collections sharing one marker emit ``use`` elements that point at a
    single definition; the other layers emit one ``path`` per mark.
    """
    root = ET.parse(path).getroot()
    group = next(
        (g for g in root.iter(f"{SVG}g") if g.get("id") == gid), None
    )

    if group is None:
        return 0

    uses = list(group.iter(f"{SVG}use"))
    return len(uses) if uses else len(list(group.iter(f"{SVG}path")))


def planner_run(tmp_path, tree=TREE):
    run_dir = tmp_path / "rrt"
    (run_dir / "seed-3").mkdir(parents=True)

    config = ExperimentConfig.create("rrt", "simplemaze", seeds=(3,))
    (run_dir / "config.txt").write_text(config.to_text())
    (run_dir / "seed-3" / "tree.txt").write_text(tree)
    return run_dir


class TestTree:

    def test_edges(self, tmp_path):
        out = render(planner_run(tmp_path), "tree")

        assert out.name == "tree.svg"
        assert marks(out, "edges") == 2
        assert marks(out, "walls") == 2

    def test_empty_tree(self, tmp_path):
        out = render(planner_run(tmp_path, ""), "tree", tmp_path / "t.svg")

        assert out == tmp_path / "t.svg"
        assert marks(out, "edges") == 0
        assert marks(out, "walls") == 2

    def test_missing_seed(self, tmp_path):
        with pytest.raises(AbsentDataError):
            render(planner_run(tmp_path), "tree", seed=4)

    def test_unwritable_target(self, tmp_path):
        out = tmp_path / "missing" / "tree.svg"

        with pytest.raises(ArtifactError):
            render(planner_run(tmp_path), "tree", out)

    def test_policy_search_has_no_tree(self, tmp_path):
        run_dir = tmp_path / "ns"
        run_dir.mkdir()
        config = ExperimentConfig.create("ns", "simplemaze", seeds=(0,))
        (run_dir / "config.txt").write_text(config.to_text())

        with pytest.raises(InvalidInputError):
            render(run_dir, "tree")


class TestScatter:

    def test_history(self, tmp_path):
        run_dir = fake_run(tmp_path, "ns", {0: [0.1]})
        (run_dir / "seed-0").mkdir()
        write_csv(run_dir / "seed-0" / "history.csv", HISTORY_HEADER, [
            (0, -0.5, 0.5), (0, 0.1, 0.2), (1, 0.3, -0.9),
        ])

        out = render(run_dir, "scatter", seed=0)
        assert marks(out, "outcomes") == 3

    def test_outcomes_fallback(self, tmp_path):
        run_dir = fake_run(tmp_path, "gep", {2: [0.1]})
        (run_dir / "seed-2").mkdir()
        write_csv(run_dir / "seed-2" / "outcomes.csv", ("x", "y"), [
            (0.0, 0.0), (0.5, 0.5),
        ])

        out = render(run_dir, "scatter", seed=2)
        assert marks(out, "outcomes") == 2


class TestCurve:

    def test_band(self, tmp_path):
        run_dir = fake_run(
            tmp_path, "rrt", {0: [0.1, 0.4, 0.5], 1: [0.1, 0.6, 0.7]}
        )
        generations, mean, std = score_band(run_dir)

        assert generations.tolist() == [0, 1, 2]
        assert mean.tolist() == pytest.approx([0.1, 0.5, 0.6])
        assert std.tolist() == pytest.approx([0.0, 0.1, 0.1])

    def test_svg(self, tmp_path):
        run_dir = fake_run(tmp_path, "rrt", {0: [0.1, 0.4], 1: [0.2, 0.6]})
        out = render(run_dir, "curve")

        assert marks(out, "band") == 1
        assert marks(out, "mean") == 1


def test_unknown_kind(tmp_path):
    with pytest.raises(InvalidInputError):
        render(tmp_path, "heatmap")
