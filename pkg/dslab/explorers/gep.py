# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Optional

import numpy as np

from . import __package__
from .offspring import breed
from ..core.archive import ArchiveStore
from ..core.selection import select_goal_nearest_batch
from ..exceptions import EmptyCollectionError, InvalidInputError
from ..policies.mlp import random_init
from ..policies.mutation import KeyedReplay

if TYPE_CHECKING:
    from ..core.archive import OutcomeBounds, SamplePair
    from ..envs.base import Environment
    from ..policies.mutation import MutationSpec
    from ..utils.types import FloatArray, Rng


_log = logging.getLogger(__package__)


@dataclass
class GepState:
    """State of a goal exploration process.

    Attributes
    ----------
    population: :class:`~dslab.core.archive.ArchiveStore`
        Every policy evaluated since the start; it only grows.
    bounds: :class:`~dslab.core.archive.OutcomeBounds`
        Goal sampling box.
    generation: :class:`int`
        Completed generations.
    last_selected: Optional[:class:`numpy.ndarray`]
        Outcomes of the policies selected in the last generation.
    """
    population: ArchiveStore
    bounds: OutcomeBounds
    generation: int = 0
    last_selected: Optional[FloatArray] = None


def gep_init(
    env: Environment,
    n_init: int,
    mutation: MutationSpec,
    rng: Rng,
    *,
    n_update: int = 10,
    lineage: bool = True
) -> GepState:
    """Evaluate ``n_init`` random policies as the initial population.

    With ``lineage`` the population keeps expanded policies as replayable
    lineage instead of dense rows.
    """
    if n_init < 1:
        raise InvalidInputError("GEP needs at least one initial policy.")

    params = random_init(env.topology, rng, n=n_init)
    outcomes = env.evaluate(params)

    store = ArchiveStore(
        env.outcome_dim, n_update=n_update,
        replay=KeyedReplay(mutation) if lineage else None
    )
    for row, outcome in zip(params, outcomes):
        store.append(row, outcome)

    store.index.flush()
    return GepState(store, env.reachable_bounds())


def gep_generation(
    state: GepState,
    env: Environment,
    mutation: MutationSpec,
    n_selection: int,
    rng: Rng,
    n_offspring: int = 1,
    p_expansion: float = 1.0
) -> List[SamplePair]:
    """Run one GEP generation.

    Repeats ``n_selection`` times: draw a goal uniformly in the state
    bounds, pick the policy whose outcome is nearest, mutate and roll it
    out, and append the mutants. A later goal may pick a mutant appended
    earlier in the same generation.

    Parameters
    ----------
    state: :class:`GepState`
        Updated in place.
    env: :class:`~dslab.envs.base.Environment`
        Evaluates the mutants.
    mutation: :class:`~dslab.policies.mutation.MutationSpec`
        The expansion operator.
    n_selection: :class:`int`
        Goals per generation.
    rng: :class:`numpy.random.Generator`
        The run's random stream.
    n_offspring: :class:`int`
        Mutants per selected policy.
        |default| ``1``
    p_expansion: :class:`float`
        Probability that a selected policy is expanded.
        |default| ``1.0``

    Returns
    -------
    List[:class:`~dslab.core.archive.SamplePair`]
        The new samples in creation order.

    Raises
    ------
    EmptyCollectionError
        The population is empty.
    """
    population = state.population

    if not population:
        raise EmptyCollectionError("The GEP population is empty.")

    if n_selection == 0:
        return []

    generation = state.generation + 1
    selected = np.empty((n_selection, population.outcome_dim))
    pairs: List[SamplePair] = []

    for i in range(n_selection):
        _, positions = select_goal_nearest_batch(
            population, state.bounds, rng, 1
        )
        selected[i] = population.outcomes[positions[0]]

        offspring = breed(
            population.params_of(positions), population.ids[positions], env,
            mutation, n_offspring, p_expansion, rng
        )
        new = offspring.pairs(population.next_id, generation)
        population.extend(new)
        pairs += new

    state.last_selected = selected
    population.end_generation()

    state.generation += 1
    _log.debug(
        "GEP generation %i: %i new policies, population %i",
        state.generation, len(pairs), len(population)
    )
    return pairs
