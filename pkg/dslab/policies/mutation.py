# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..exceptions import InvalidInputError

if TYPE_CHECKING:
    from ..utils.types import FloatArray, IntArray, Rng

# Expansion keys are drawn in [1, 2**63); 0 marks "not expanded".
_KEY_HIGH = 2 ** 63


@dataclass(frozen=True)
class MutationSpec:
    """Bounded polynomial mutation settings.

    Attributes
    ----------
    eta: :class:`float`
        Distribution index; larger values give smaller steps.
    p_mutation: :class:`float`
        Per-gene mutation probability.
    lower: :class:`float`
        Lower gene bound.
        |default| ``-1.0``
    upper: :class:`float`
        Upper gene bound.
        |default| ``1.0``
    """
    eta: float
    p_mutation: float
    lower: float = -1.0
    upper: float = 1.0

    def __post_init__(self):
        if not self.eta > 0:
            raise InvalidInputError(f"eta must be positive (got {self.eta}).")

        if not 0 <= self.p_mutation <= 1:
            raise InvalidInputError(
                f"p_mutation must lie in [0, 1] (got {self.p_mutation})."
            )

        if not self.lower < self.upper:
            raise InvalidInputError("Gene bounds must satisfy lower < upper.")

    @property
    def span(self) -> float:
        return self.upper - self.lower


def polynomial_delta(
    x: FloatArray, u: FloatArray, eta: float, lower: float, upper: float
) -> FloatArray:
    """Normalised bounded polynomial step for genes ``x`` and uniform
    draws ``u``; the mutated gene is ``x + delta * (upper - lower)``.
    """
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    span = upper - lower
    power = 1.0 / (eta + 1.0)

    d1 = (x - lower) / span
    d2 = (upper - x) / span

    with np.errstate(invalid="ignore"):
        low = (2 * u + (1 - 2 * u) * (1 - d1) ** (eta + 1)) ** power - 1
        high = 1 - (
            2 * (1 - u) + 2 * (u - 0.5) * (1 - d2) ** (eta + 1)
        ) ** power

    return np.where(u < 0.5, low, high)


def polynomial_mutation(
    params: FloatArray, spec: MutationSpec, rng: Rng
) -> FloatArray:
    """Mutate every gene independently with probability ``p_mutation``.

    Two uniform arrays of the parameter shape are drawn, the mutation mask
    first, so the stream consumption does not depend on the values.

    Parameters
    ----------
    params: :class:`numpy.ndarray`
        A parameter vector or a matrix of them.
    spec: :class:`MutationSpec`
        The operator settings.
    rng: :class:`numpy.random.Generator`
        Random source.

    Returns
    -------
    :class:`numpy.ndarray`
        A new array; ``params`` is left untouched.

    Raises
    ------
    InvalidInputError
        A gene lies outside the gene bounds.
    """
    params = np.asarray(params, dtype=np.float64)

    if np.any(params < spec.lower) or np.any(params > spec.upper):
        raise InvalidInputError(
            f"Genes must lie in [{spec.lower}, {spec.upper}] to be mutated."
        )

    mask = rng.random(params.shape) < spec.p_mutation
    u = rng.random(params.shape)

    delta = polynomial_delta(params, u, spec.eta, spec.lower, spec.upper)
    mutated = np.clip(params + delta * spec.span, spec.lower, spec.upper)
    return np.where(mask, mutated, params)


def draw_keys(rng: Rng, n: int) -> IntArray:
    """Pre-assign one expansion key per offspring slot."""
    return rng.integers(1, _KEY_HIGH, size=n, dtype=np.int64)


def mutate_keyed(params: FloatArray, key: int, spec: MutationSpec):
    """Mutate with a private stream seeded by ``key``.

    The result only depends on ``(params, key, spec)``, which lets a child
    be rebuilt from its parent long after it was evaluated.
    """
    return polynomial_mutation(params, spec, np.random.default_rng(int(key)))


def expand_rows(
    parents: FloatArray, keys: IntArray, spec: MutationSpec
) -> FloatArray:
    """Row ``i`` of the result is ``mutate_keyed(parents[i], keys[i])``."""
    parents = np.atleast_2d(parents)

    if len(parents) != len(keys):
        raise InvalidInputError(
            f"Got {len(parents)} parents but {len(keys)} keys."
        )

    if not len(parents):
        return np.empty_like(parents, dtype=np.float64)

    return np.stack([
        mutate_keyed(row, key, spec) for row, key in zip(parents, keys)
    ])


class KeyedReplay:
    """Picklable replay callable for
    :class:`~dslab.core.archive.LineageParams`.
    """

    def __init__(self, spec: MutationSpec):
        self.spec = spec

    def __call__(self, params: FloatArray, key: int) -> FloatArray:
        return mutate_keyed(params, key, self.spec)
