# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from typing import TYPE_CHECKING, List, Optional

from ..core.archive import SamplePair
from ..exceptions import DimensionMismatchError
from ..policies.mlp import random_init

if TYPE_CHECKING:
    from ..envs.base import Environment
    from ..policies.mlp import Topology
    from ..utils.types import Rng


def random_search_generation(
    env: Environment,
    topology: Optional[Topology],
    batch: int,
    rng: Rng,
    *,
    first_id: int = 0,
    generation: int = 0
) -> List[SamplePair]:
    """Evaluate ``batch`` freshly initialised policies.

    ``topology`` defaults to the environment's.
    """
    topology = topology or env.topology

    if topology.n_params != env.topology.n_params:
        raise DimensionMismatchError.from_sizes(
            "Parameter vector", env.topology.n_params, topology.n_params
        )

    if batch <= 0:
        return []

    params = random_init(topology, rng, n=batch)
    outcomes = env.evaluate(params)

    return [
        SamplePair(params[i], outcomes[i], first_id + i, generation=generation)
        for i in range(batch)
    ]
