# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from .degradation import (
    DegradationResult, expansion_degradation, pool_degradation
)
from .expansion import ExpansionGrid, cell_indices, expansion_score
from .history import (
    GenerationRecord, RunTelemetry, corridor_progress, selection_history
)

__all__ = (
    "DegradationResult", "ExpansionGrid", "GenerationRecord",
    "RunTelemetry", "cell_indices", "corridor_progress",
    "expansion_degradation", "expansion_score", "pool_degradation",
    "selection_history"
)
