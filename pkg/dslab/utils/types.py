# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.
from __future__ import annotations

from typing import Any, Callable, TypeVar, Union

import numpy as np
from numpy.typing import NDArray


class MissingType:
    """Type class for hyper-parameters which do not apply to an
    (algorithm, environment) pair.
    """

    def __repr__(self):
        return "<MISSING>"

    def __bool__(self) -> bool:
        return False

    def __reduce__(self):
        # unpickles to the module singleton
        return "MISSING"


MISSING = MissingType()


T = TypeVar('T')


# Represents a hyper-parameter which is only meaningful for some experiments
Applicable = Union[T, MissingType]

# Real vectors and batches of real vectors (one row per sample).
FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]

# A random source owned by exactly one run.
Rng = np.random.Generator

Observer = Callable[..., Any]
