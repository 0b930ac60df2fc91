# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from typing import TYPE_CHECKING, List, NamedTuple

import numpy as np

from ..core.archive import SamplePair
from ..exceptions import InvalidInputError
from ..policies.mutation import draw_keys, expand_rows

if TYPE_CHECKING:
    from ..envs.base import Environment
    from ..policies.mutation import MutationSpec
    from ..utils.types import FloatArray, IntArray, Rng


class Offspring(NamedTuple):
    """Mutants of a selection, evaluated, in slot order."""
    params: FloatArray
    parent_ids: IntArray
    keys: IntArray
    outcomes: FloatArray

    def __len__(self) -> int:
        return len(self.keys)

    def pairs(self, first_id: int, generation: int) -> List[SamplePair]:
        return [
            SamplePair(
                params=self.params[i],
                outcome=self.outcomes[i],
                id=first_id + i,
                parent_id=int(self.parent_ids[i]),
                generation=generation,
                key=int(self.keys[i])
            )
            for i in range(len(self))
        ]


def breed(
    parents: FloatArray,
    parent_ids: IntArray,
    env: Environment,
    mutation: MutationSpec,
    n_offspring: int,
    p_expansion: float,
    rng: Rng
) -> Offspring:
    """Expand each selected parent into ``n_offspring`` mutants and roll
    them out as one batch.

    A parent is expanded with probability ``p_expansion``; the draw is
    skipped when it is 1. Every offspring slot gets its mutation key from
    ``rng`` before any evaluation, children of a parent are adjacent and
    parents keep their selection order.
    """
    if n_offspring < 0 or not 0 <= p_expansion <= 1:
        raise InvalidInputError(
            "n_offspring must be non-negative and p_expansion in [0, 1]."
        )

    parents = np.atleast_2d(parents)
    parent_ids = np.asarray(parent_ids, dtype=np.int64)

    if p_expansion < 1:
        keep = rng.random(len(parents)) < p_expansion
        parents, parent_ids = parents[keep], parent_ids[keep]

    parents = np.repeat(parents, n_offspring, axis=0)
    parent_ids = np.repeat(parent_ids, n_offspring)
    keys = draw_keys(rng, len(parents))

    children = expand_rows(parents, keys, mutation)
    outcomes = env.evaluate(children) if len(children) \
        else np.empty((0, env.outcome_dim))

    return Offspring(children, parent_ids, keys, outcomes)
