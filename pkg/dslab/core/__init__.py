# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from .archive import (
    ArchiveStore, DenseParams, LineageParams, NO_PARENT, OutcomeBounds,
    SamplePair
)
from .index import KdIndex, euclidean
from .loop import Expansion, run_loop
from .selection import (
    novelty_scores, proportionate_draw, proportionate_probabilities,
    proportionate_sample, select_density_proportionate, select_goal_nearest,
    select_goal_nearest_batch
)

__all__ = (
    "ArchiveStore", "DenseParams", "Expansion", "KdIndex", "LineageParams",
    "NO_PARENT", "OutcomeBounds", "SamplePair", "euclidean",
    "novelty_scores", "proportionate_draw", "proportionate_probabilities",
    "proportionate_sample", "run_loop", "select_density_proportionate",
    "select_goal_nearest", "select_goal_nearest_batch"
)
