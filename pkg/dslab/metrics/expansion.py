# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Tuple

import numpy as np

from . import __package__
from ..exceptions import InvalidInputError

if TYPE_CHECKING:
    from ..core.archive import OutcomeBounds
    from ..utils.types import FloatArray, IntArray


_log = logging.getLogger(__package__)


def cell_indices(
    bounds: OutcomeBounds, resolution: int, points: FloatArray
) -> Tuple[IntArray, np.ndarray]:
    """Grid cell of each point and whether it lies in ``bounds``.

    Cells are half-open ``[lo, hi)`` except the last one on every axis,
    which also holds the upper bound.

    Returns
    -------
    Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`]
        ``(n, dim)`` cell indices, meaningful only where the ``(n,)`` mask
        is set.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    inside = bounds.contains(points)

    scaled = (points - bounds.low) / bounds.span * resolution
    cells = np.floor(scaled).astype(np.int64)
    cells = np.clip(cells, 0, resolution - 1)
    return cells, inside


class ExpansionGrid:
    """Tracks which cells of a ``G^dim`` grid over the outcome bounds
    have been reached.

    Parameters
    ----------
    bounds: :class:`~dslab.core.archive.OutcomeBounds`
        The gridded box.
    resolution: :class:`int`
        Cells per axis.
    """

    def __init__(self, bounds: OutcomeBounds, resolution: int):
        if resolution < 1:
            raise InvalidInputError(
                f"Grid resolution must be positive (got {resolution})."
            )

        self.bounds = bounds
        self.resolution = resolution
        self.filled = np.zeros((resolution,) * bounds.dim, dtype=bool)
        self.out_of_bounds = 0

    @property
    def n_cells(self) -> int:
        return self.filled.size

    @property
    def score(self) -> float:
        """:class:`float`: Fraction of filled cells."""
        return float(np.count_nonzero(self.filled)) / self.n_cells

    def cells(self, points: FloatArray) -> Tuple[IntArray, np.ndarray]:
        return cell_indices(self.bounds, self.resolution, points)

    def update(self, outcomes: FloatArray) -> float:
        """Mark the cells of ``outcomes`` and return the new score.

        Out-of-bounds outcomes are skipped and counted in
        :attr:`out_of_bounds`.
        """
        outcomes = np.asarray(outcomes, dtype=np.float64)

        if outcomes.size == 0:
            return self.score

        cells, inside = self.cells(outcomes)
        missed = int(np.count_nonzero(~inside))

        if missed:
            self.out_of_bounds += missed
            _log.warning("%i outcomes fell outside the expansion grid", missed)

        self.filled[tuple(cells[inside].T)] = True
        return self.score


def expansion_score(grid: ExpansionGrid, outcomes: FloatArray) -> float:
    """Fill ``grid`` with ``outcomes`` and return the filled fraction."""
    return grid.update(outcomes)
