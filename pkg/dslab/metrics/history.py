# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional, Tuple

import numpy as np

from .expansion import cell_indices
from ..exceptions import AbsentDataError, InvalidInputError

if TYPE_CHECKING:
    from ..core.archive import OutcomeBounds
    from ..envs.maze import CellRanks
    from ..utils.types import FloatArray


@dataclass
class GenerationRecord:
    """Telemetry of one completed generation (or iteration).

    Generation ``0`` describes the initial state of the run.
    """
    generation: int
    score: float
    archive_size: int
    population_size: int
    rollouts: int
    wall_ms: float = 0.0


@dataclass
class RunTelemetry:
    """Everything recorded while a single seed runs.

    Attributes
    ----------
    run_id: :class:`str`
        Identifier shared by every seed of a run directory.
    seed: :class:`int`
        The seed.
    log_selection: :class:`bool`
        Whether selected outcomes are captured.
    records: List[:class:`GenerationRecord`]
        One record per generation, in order.
    selections: List[Tuple[:class:`int`, :class:`numpy.ndarray`]]
        Outcomes picked by the selection operator, tagged with the
        0-based generation in which the pick happened.
    out_of_bounds: :class:`int`
        Outcomes the expansion grid could not place.
    """
    run_id: str
    seed: int
    log_selection: bool = True
    records: List[GenerationRecord] = field(default_factory=list)
    selections: List[Tuple[int, FloatArray]] = field(default_factory=list)
    out_of_bounds: int = 0

    def record(self, record: GenerationRecord):
        self.records.append(record)

    def record_selection(self, generation: int, outcomes: Optional[FloatArray]):
        if self.log_selection and outcomes is not None:
            self.selections.append(
                (generation, np.array(outcomes, dtype=np.float64, ndmin=2))
            )

    @property
    def scores(self) -> List[Tuple[int, float]]:
        return [(r.generation, r.score) for r in self.records]


def selection_history(
    telemetry: RunTelemetry
) -> List[Tuple[int, FloatArray]]:
    """Outcomes chosen by the selection operator, per generation.

    Raises
    ------
    AbsentDataError
        The run was recorded without selection logging.
    """
    if not telemetry.log_selection:
        raise AbsentDataError(
            f"Run {telemetry.run_id} (seed {telemetry.seed}) was recorded "
            "without selection logging."
        )

    return [(g, points.copy()) for g, points in telemetry.selections]


def corridor_progress(
    outcomes: FloatArray, ranks: CellRanks, bounds: OutcomeBounds
) -> float:
    """Mean corridor rank of the cells holding ``outcomes``.

    Outcomes outside ``bounds`` are ignored.
    """
    cells, inside = cell_indices(bounds, ranks.grid, outcomes)

    if not inside.any():
        raise InvalidInputError("No outcome lies within the maze bounds.")

    cells = cells[inside]
    return float(np.mean(ranks.table[cells[:, 0], cells[:, 1]]))
