# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from . import __package__
from .base import Environment, Trajectory
from ..core.archive import OutcomeBounds
from ..exceptions import InvalidInputError, LayoutFileError

if TYPE_CHECKING:
    from typing import Dict, List, Union

    from ..policies.mlp import MlpBatch, MlpPolicy
    from ..utils.types import FloatArray


_log = logging.getLogger(__package__)

DATA_DIR = Path(__file__).parent / "data"
SIMPLEMAZE_V1 = "simplemaze-v1"

Segment = Tuple[Tuple[float, float], Tuple[float, float]]


def _cross(o: FloatArray, a: FloatArray, b: FloatArray) -> FloatArray:
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) \
        - (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])


def _on_segment(a: FloatArray, b: FloatArray, c: FloatArray) -> np.ndarray:
    # c is known to be collinear with a-b
    return np.all(
        (np.minimum(a, b) <= c) & (c <= np.maximum(a, b)), axis=-1
    )


def segments_intersect(
    p: FloatArray, q: FloatArray, a: FloatArray, b: FloatArray
) -> np.ndarray:
    """Whether closed segments ``p-q`` and ``a-b`` share a point.

    Arguments broadcast over their leading axes; touching endpoints and
    collinear overlaps count as intersections.
    """
    p, q, a, b = (np.asarray(v, dtype=np.float64) for v in (p, q, a, b))

    d1 = _cross(a, b, p)
    d2 = _cross(a, b, q)
    d3 = _cross(p, q, a)
    d4 = _cross(p, q, b)

    proper = (((d1 > 0) & (d2 < 0)) | ((d1 < 0) & (d2 > 0))) \
        & (((d3 > 0) & (d4 < 0)) | ((d3 < 0) & (d4 > 0)))

    touching = ((d1 == 0) & _on_segment(a, b, p)) \
        | ((d2 == 0) & _on_segment(a, b, q)) \
        | ((d3 == 0) & _on_segment(p, q, a)) \
        | ((d4 == 0) & _on_segment(p, q, b))

    return proper | touching


@dataclass(frozen=True, eq=False)
class CellRanks:
    """Corridor order of the cells of a square grid over the maze bounds.

    Attributes
    ----------
    grid: :class:`int`
        Cells per axis.
    table: :class:`numpy.ndarray`
        ``(grid, grid)`` ranks indexed by ``[cell_x, cell_y]``.
    """
    grid: int
    table: np.ndarray = field(repr=False)

    @property
    def start_rank(self) -> int:
        return int(self.table.min())

    @property
    def final_rank(self) -> int:
        return int(self.table.max())

    def cells_of_rank(self, rank: int) -> List[Tuple[int, int]]:
        return [tuple(c) for c in np.argwhere(self.table == rank).tolist()]


@dataclass(frozen=True)
class MazeSpec:
    """A 2-D maze navigated by bounded displacements.

    Attributes
    ----------
    bounds: :class:`~dslab.core.archive.OutcomeBounds`
        The closed arena.
    walls: Tuple[Segment, ...]
        Wall segments as endpoint pairs.
    start: Tuple[:class:`float`, :class:`float`]
        Initial position.
    horizon: :class:`int`
        Steps per rollout.
        |default| ``50``
    action_bound: :class:`float`
        Per-axis displacement limit.
        |default| ``0.1``
    name: :class:`str`
        Layout name.
    ranks: Optional[:class:`CellRanks`]
        Corridor order of the grid cells, when known.
    """
    bounds: OutcomeBounds
    walls: Tuple[Segment, ...]
    start: Tuple[float, float]
    horizon: int = 50
    action_bound: float = 0.1
    name: str = "custom"
    ranks: Optional[CellRanks] = None

    def __post_init__(self):
        walls = tuple(
            (tuple(map(float, a)), tuple(map(float, b))) for a, b in self.walls
        )
        object.__setattr__(self, "walls", walls)
        object.__setattr__(self, "start", tuple(map(float, self.start)))

        if self.bounds.dim != 2:
            raise InvalidInputError("Maze bounds must be two-dimensional.")

        if self.horizon < 1:
            raise InvalidInputError("The horizon must be at least one step.")

        if not self.action_bound > 0:
            raise InvalidInputError("The action bound must be positive.")

        if not self.bounds.contains(self.start_point):
            raise InvalidInputError(f"Start {self.start} is out of bounds.")

        wall_array = self.wall_array
        if len(wall_array):
            if not np.all(self.bounds.contains(wall_array.reshape(-1, 2))):
                raise InvalidInputError("Every wall must lie within bounds.")

            if np.any(segments_intersect(
                self.start_point, self.start_point,
                wall_array[:, 0], wall_array[:, 1]
            )):
                raise InvalidInputError(f"Start {self.start} is on a wall.")

    @property
    def start_point(self) -> FloatArray:
        return np.asarray(self.start)

    @property
    def wall_array(self) -> FloatArray:
        """``(W, 2, 2)`` wall endpoints."""
        return np.asarray(self.walls, dtype=np.float64).reshape(-1, 2, 2)


def parse_ranks(text: str) -> CellRanks:
    """Parse a rank sidecar: a ``grid G`` line then one
    ``rank cell_x cell_y r`` line per cell.
    """
    grid: Optional[int] = None
    ranks: Dict[Tuple[int, int], int] = {}

    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()

        if not line:
            continue

        try:
            values = list(map(int, line[1:]))
        except ValueError as e:
            raise LayoutFileError(f"non-integer value in `{raw}`", n) from e

        if line[0] == "grid" and len(values) == 1 and values[0] > 0:
            grid = values[0]
        elif line[0] == "rank" and len(values) == 3 and grid is not None:
            cx, cy, rank = values

            if not (0 <= cx < grid and 0 <= cy < grid):
                raise LayoutFileError(f"cell ({cx}, {cy}) is off the grid", n)

            ranks[(cx, cy)] = rank
        else:
            raise LayoutFileError(f"unexpected line `{raw.strip()}`", n)

    if grid is None or len(ranks) != grid * grid:
        raise LayoutFileError("the rank table must cover every cell")

    table = np.empty((grid, grid), dtype=np.int64)
    for (cx, cy), rank in ranks.items():
        table[cx, cy] = rank

    return CellRanks(grid, table)


def parse_layout(
    text: str,
    name: str = "custom",
    ranks: Optional[CellRanks] = None,
    horizon: int = 50
) -> MazeSpec:
    """Parse a layout file.

    Lines are ``bounds x0 y0 x1 y1``, ``start x y`` and any number of
    ``wall ax ay bx by``; ``#`` starts a comment.

    Raises
    ------
    LayoutFileError
        A line is malformed, or bounds or start are missing.
    """
    arity = {"bounds": 4, "start": 2, "wall": 4}
    bounds = start = None
    walls: List[Segment] = []

    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()

        if not line:
            continue

        kind, args = line[0], line[1:]

        if kind not in arity:
            raise LayoutFileError(f"unknown directive `{kind}`", n)

        if len(args) != arity[kind]:
            raise LayoutFileError(
                f"`{kind}` takes {arity[kind]} values, got {len(args)}", n
            )

        try:
            values = list(map(float, args))
        except ValueError as e:
            raise LayoutFileError(f"non-numeric value in `{raw}`", n) from e

        if kind == "bounds":
            bounds = OutcomeBounds(values[:2], values[2:])
        elif kind == "start":
            start = tuple(values)
        else:
            walls.append((tuple(values[:2]), tuple(values[2:])))

    if bounds is None or start is None:
        raise LayoutFileError("a layout needs `bounds` and `start` lines")

    try:
        return MazeSpec(
            bounds, tuple(walls), start, horizon=horizon, name=name,
            ranks=ranks
        )
    except InvalidInputError as e:
        raise LayoutFileError(str(e)) from e


def load_maze(
    path: Union[str, Path], horizon: int = 50
) -> MazeSpec:
    """Load a layout file and its ``.ranks`` sidecar when present."""
    path = Path(path)
    sidecar = path.with_suffix(".ranks")
    ranks = parse_ranks(sidecar.read_text()) if sidecar.exists() else None

    _log.debug("Loading maze layout %s (ranks: %s)", path, ranks is not None)
    return parse_layout(path.read_text(), path.stem, ranks, horizon)


def simplemaze_v1(horizon: int = 50) -> MazeSpec:
    """The canonical S-corridor maze shipped with the package."""
    return load_maze(DATA_DIR / f"{SIMPLEMAZE_V1}.maze", horizon)


def maze_step_checked(
    spec: MazeSpec, position: FloatArray, action: FloatArray
) -> Tuple[FloatArray, np.ndarray]:
    """Move by the clamped action unless the path touches a wall or the
    end point leaves the bounds.

    Works on single points and on ``(B, 2)`` batches.

    Returns
    -------
    Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`]
        New positions and a flag per row telling whether the move was
        cancelled.
    """
    position = np.asarray(position, dtype=np.float64)
    action = np.clip(action, -spec.action_bound, spec.action_bound)
    target = position + action

    blocked = ~spec.bounds.contains(target)
    walls = spec.wall_array

    if len(walls):
        hits = segments_intersect(
            position[..., None, :], target[..., None, :],
            walls[:, 0], walls[:, 1]
        )
        blocked = blocked | hits.any(axis=-1)

    return np.where(blocked[..., None], position, target), blocked


def maze_step(
    spec: MazeSpec, position: FloatArray, action: FloatArray
) -> FloatArray:
    """Position after one clamped move; unchanged when blocked."""
    return maze_step_checked(spec, position, action)[0]


def _simulate(spec: MazeSpec, act, n: int) -> FloatArray:
    states = np.empty((spec.horizon + 1, n, 2))
    states[0] = spec.start_point

    for t in range(spec.horizon):
        states[t + 1] = maze_step(spec, states[t], act(states[t]))

    return states


def maze_rollout(spec: MazeSpec, policy: MlpPolicy) -> Trajectory:
    """Run ``policy`` for ``spec.horizon`` steps from the start.

    The policy observes the current position and emits the displacement.

    Raises
    ------
    DimensionMismatchError
        The policy does not map 2 inputs to 2 outputs.
    """
    SimpleMaze.check_policy(policy)
    states = _simulate(spec, policy.forward, 1)[:, 0]
    return Trajectory(states, states[-1].copy())


class SimpleMaze(Environment):
    """Maze navigation: the outcome is the final position.

    Parameters
    ----------
    spec: Optional[:class:`MazeSpec`]
        The layout, ``simplemaze-v1`` when omitted.
    """
    name = "simplemaze"
    n_inputs = 2
    n_outputs = 2

    def __init__(
        self,
        spec: Optional[MazeSpec] = None,
        n_layers: int = 2,
        n_neurons: int = 50
    ):
        super().__init__(n_layers, n_neurons)
        self.spec = spec or simplemaze_v1()

    @property
    def output_scale(self) -> float:
        return self.spec.action_bound

    def reachable_bounds(self) -> OutcomeBounds:
        return self.spec.bounds

    def rollout(self, policy: MlpPolicy) -> Trajectory:
        return maze_rollout(self.spec, policy)

    def _evaluate_batch(self, batch: MlpBatch) -> FloatArray:
        return _simulate(self.spec, batch.forward, len(batch))[-1]
