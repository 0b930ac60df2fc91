# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from .aggregate import aggregate, load_runs, summarize
from .render import render
from .runner import (
    SeedJob, SeedResult, run_degradation, run_experiment, run_seed
)

__all__ = (
    "SeedJob", "SeedResult", "aggregate", "load_runs", "render",
    "run_degradation", "run_experiment", "run_seed", "summarize"
)
