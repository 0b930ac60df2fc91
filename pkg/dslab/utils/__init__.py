# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from .seed import Seed, format_seeds, parse_seeds
from .tasks import SeedPool
from .types import (
    Applicable, FloatArray, IntArray, MISSING, MissingType, Observer, Rng
)


__all__ = (
    "Applicable", "FloatArray", "IntArray", "MISSING", "MissingType",
    "Observer", "Rng", "Seed", "SeedPool", "format_seeds", "parse_seeds"
)
