# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

"""SVG views of a run directory.

``tree`` draws the maze walls and one segment per tree edge, ``scatter`` the
selected (or final) outcomes colored by generation and ``curve`` the mean
expansion score with a one standard deviation band. Each drawn layer carries
a ``gid`` (``walls``, ``edges``, ``outcomes``, ``band``, ``mean``) which
ends up as the id of its group in the SVG.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Dict, List, Optional, Tuple

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402

from . import __package__  # noqa: E402
from .runner import build_maze  # noqa: E402
from .telemetry import (  # noqa: E402
    CONFIG_FILE, EXPANSION_FILE, HISTORY_FILE, MANIFEST_FILE, TREE_FILE,
    read_csv, read_history, read_manifest, read_outcomes, seed_dir
)
from .._config import ExperimentConfig  # noqa: E402
from ..core.archive import NO_PARENT  # noqa: E402
from ..exceptions import (  # noqa: E402
    AbsentDataError, ArtifactError, InvalidInputError
)
from ..planners.tree import parse_tree_dump  # noqa: E402

if TYPE_CHECKING:
    from typing import Union

    from matplotlib.axes import Axes
    from matplotlib.figure import Figure

    from ..utils.types import FloatArray

    PathLike = Union[str, Path]


_log = logging.getLogger(__package__)

KINDS = ("tree", "scatter", "curve")
# Figure side in inches.
SIZE = 6.0
COLORMAP = "coolwarm"


def _box(
    lower: Tuple[float, float], upper: Tuple[float, float]
) -> Tuple[Figure, Axes]:
    """Square figure whose axes span the world box ``lower``/``upper``."""
    fig, ax = plt.subplots(figsize=(SIZE, SIZE))
    ax.set_xlim(lower[0], upper[0] if upper[0] > lower[0] else lower[0] + 1)
    ax.set_ylim(lower[1], upper[1] if upper[1] > lower[1] else lower[1] + 1)
    return fig, ax


def _save(fig: Figure, out: Path):
    try:
        fig.savefig(out, format="svg")
    except OSError as e:
        raise ArtifactError(f"Could not write `{out}`: {e}") from e
    finally:
        plt.close(fig)


def _config(run_dir: Path) -> ExperimentConfig:
    path = run_dir / CONFIG_FILE

    if not path.exists():
        raise AbsentDataError(f"Missing config `{path}`.")

    return ExperimentConfig.from_text(path.read_text())


def _seed(run_dir: Path, seed: Optional[int]) -> int:
    return int(_config(run_dir).seeds[0]) if seed is None else seed


def render_tree(run_dir: Path, seed: Optional[int] = None) -> Figure:
    """Maze walls and one segment of the ``edges`` layer per non-root
    node.
    """
    config = _config(run_dir)

    if not config.is_motion_planning:
        raise InvalidInputError(f"{config.algorithm} runs do not grow trees.")

    path = seed_dir(run_dir, _seed(run_dir, seed)) / TREE_FILE

    if not path.exists():
        raise AbsentDataError(f"Missing tree `{path}`.")

    ids, parents, configs, _ = parse_tree_dump(path.read_text())
    position = {int(i): n for n, i in enumerate(ids)}
    edges = [
        (configs[position[int(parent)]][:2], configs[n][:2])
        for n, parent in enumerate(parents) if parent != NO_PARENT
    ]

    maze = build_maze(config)
    fig, ax = _box(maze.bounds.lower, maze.bounds.upper)
    ax.set_aspect("equal")

    ax.add_collection(LineCollection(
        [(a, b) for a, b in maze.walls], colors="black", linewidths=3,
        gid="walls"
    ))
    ax.add_collection(LineCollection(
        edges, colors="#36c", linewidths=0.5, gid="edges"
    ))
    return fig


def render_scatter(run_dir: Path, seed: Optional[int] = None) -> Figure:
    """Selected outcomes colored by generation; the final outcomes when
    selections were not logged.
    """
    grid = read_manifest(run_dir / MANIFEST_FILE)["grid"]
    directory = seed_dir(run_dir, _seed(run_dir, seed))
    fig, ax = _box(tuple(grid["lower"]), tuple(grid["upper"]))

    if (directory / HISTORY_FILE).exists():
        history = np.asarray(read_history(directory), dtype=np.float64)
        history = history.reshape(-1, 3)
        last = history[:, 0].max(initial=0.0) or 1.0
        points, shade = history[:, 1:], history[:, 0] / last
    else:
        _log.info("No selection history in %s, drawing outcomes", directory)
        points = np.asarray(read_outcomes(directory), dtype=np.float64)
        points = points.reshape(-1, 2)
        shade = np.zeros(len(points))

    ax.scatter(
        points[:, 0], points[:, 1], c=shade, cmap=COLORMAP, vmin=0.0,
        vmax=1.0, s=4, gid="outcomes"
    )
    return fig


def score_band(run_dir: Path) -> Tuple[FloatArray, FloatArray, FloatArray]:
    """Generations with the mean and population std of the score over
    seeds.
    """
    _, rows = read_csv(run_dir / EXPANSION_FILE)
    per_generation: Dict[int, List[float]] = {}

    for _, _, generation, score in rows:
        per_generation.setdefault(int(generation), []).append(float(score))

    if not per_generation:
        raise AbsentDataError(f"`{run_dir}` holds no expansion scores.")

    generations = np.array(sorted(per_generation), dtype=np.float64)
    values = [per_generation[int(g)] for g in generations]
    return (
        generations,
        np.array([np.mean(v) for v in values]),
        np.array([np.std(v) for v in values])
    )


def render_curve(run_dir: Path) -> Figure:
    generations, mean, std = score_band(run_dir)
    fig, ax = _box((generations[0], 0.0), (generations[-1], 1.0))

    ax.fill_between(
        generations, np.maximum(mean - std, 0.0), np.minimum(mean + std, 1.0),
        color="#9bd", alpha=0.5, gid="band"
    )
    ax.plot(generations, mean, color="#036", linewidth=1.5, gid="mean")
    ax.set_xlabel("generation")
    ax.set_ylabel("expansion score")
    return fig


def render(
    run_dir: PathLike,
    kind: str,
    out: Optional[PathLike] = None,
    seed: Optional[int] = None
) -> Path:
    """Render ``kind`` for a run directory and write the SVG.

    Parameters
    ----------
    run_dir: Union[:class:`str`, :class:`pathlib.Path`]
        A run directory.
    kind: :class:`str`
        One of ``tree``, ``scatter`` and ``curve``.
    out: Optional[Union[:class:`str`, :class:`pathlib.Path`]]
        Target file.
        |default| ``<run_dir>/<kind>.svg``
    seed: Optional[:class:`int`]
        Seed drawn by ``tree`` and ``scatter``.
        |default| first seed of the run

    Raises
    ------
    AbsentDataError
        A file the view needs is missing.
    ArtifactError
        The SVG could not be written.
    """
    run_dir = Path(run_dir)

    if kind == "tree":
        fig = render_tree(run_dir, seed)
    elif kind == "scatter":
        fig = render_scatter(run_dir, seed)
    elif kind == "curve":
        fig = render_curve(run_dir)
    else:
        raise InvalidInputError(f"Unknown view `{kind}`, expected {KINDS}.")

    out = Path(out) if out else run_dir / f"{kind}.svg"
    _save(fig, out)

    _log.info("Rendered %s view to %s", kind, out)
    return out
