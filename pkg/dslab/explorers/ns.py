# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional

import numpy as np

from . import __package__
from .offspring import breed
from ..core.archive import ArchiveStore, SamplePair
from ..core.index import KdIndex
from ..core.selection import novelty_scores, proportionate_sample
from ..exceptions import EmptyCollectionError, InvalidInputError
from ..policies.mlp import random_init

if TYPE_CHECKING:
    from ..envs.base import Environment
    from ..policies.mutation import MutationSpec
    from ..utils.types import FloatArray, Rng


_log = logging.getLogger(__package__)


@dataclass
class NsState:
    """State of a novelty search.

    Attributes
    ----------
    population: List[:class:`~dslab.core.archive.SamplePair`]
        The current fixed-size population.
    archive: :class:`~dslab.core.archive.ArchiveStore`
        Novelty reference; its members have no parent inside it.
    offspring: List[:class:`~dslab.core.archive.SamplePair`]
        Mutants of the last generation.
    generation: :class:`int`
        Completed generations.
    next_id: :class:`int`
        Id of the next created sample.
    last_selected: Optional[:class:`numpy.ndarray`]
        Outcomes kept by the last population filtering.
    """
    population: List[SamplePair]
    archive: ArchiveStore
    offspring: List[SamplePair] = field(default_factory=list)
    generation: int = 0
    next_id: int = 0
    last_selected: Optional[FloatArray] = None


def ns_init(
    env: Environment, n_selection: int, rng: Rng, *, n_update: int = 10
) -> NsState:
    """Random initial population; the archive starts as a copy of it."""
    if n_selection < 1:
        raise InvalidInputError("NS needs a population of at least one.")

    params = random_init(env.topology, rng, n=n_selection)
    outcomes = env.evaluate(params)
    population = [
        SamplePair(params[i], outcomes[i], i) for i in range(n_selection)
    ]

    archive = ArchiveStore(
        env.outcome_dim, n_update=n_update, check_lineage=False
    )
    archive.extend(population)
    archive.index.flush()

    return NsState(population, archive, next_id=n_selection)


def _reference(state: NsState) -> KdIndex:
    # population members outside the archive ride along as a scanned buffer
    archive = state.archive
    extra = [p for p in state.population if p.id not in archive]

    if not extra:
        return archive.index

    return archive.index.with_buffer(
        np.stack([p.outcome for p in extra]), [p.id for p in extra]
    )


def ns_generation(
    state: NsState,
    env: Environment,
    mutation: MutationSpec,
    n_selection: int,
    n_offspring: int,
    k: int,
    n_filter_archive: int,
    rng: Rng,
    p_expansion: float = 1.0
) -> NsState:
    """Run one novelty search generation.

    1. Novelty of population and offspring against archive and population,
       a sample never being its own neighbour.
    2. Population filtering: ``n_selection`` novelty proportionate draws
       without replacement; everything not drawn is discarded.
    3. Each kept policy is mutated ``n_offspring`` times and evaluated.
    4. Archive filtering: ``n_filter_archive`` of the new offspring, drawn
       uniformly, join the archive.

    Parameters
    ----------
    state: :class:`NsState`
        Updated in place and returned.
    env: :class:`~dslab.envs.base.Environment`
        Evaluates the mutants.
    mutation: :class:`~dslab.policies.mutation.MutationSpec`
        The expansion operator.
    n_selection: :class:`int`
        Population size.
    n_offspring: :class:`int`
        Mutants per kept policy.
    k: :class:`int`
        Novelty neighbour count.
    n_filter_archive: :class:`int`
        Offspring archived per generation.
    rng: :class:`numpy.random.Generator`
        The run's random stream.
    p_expansion: :class:`float`
        Probability that a kept policy is expanded.
        |default| ``1.0``

    Raises
    ------
    InvalidInputError
        The population size differs from ``n_selection``.
    EmptyCollectionError
        The archive is empty.
    """
    if len(state.population) != n_selection:
        raise InvalidInputError(
            f"Population holds {len(state.population)} policies, "
            f"expected {n_selection}."
        )

    if not state.archive:
        raise EmptyCollectionError("The novelty archive is empty.")

    candidates = state.population + state.offspring
    outcomes = np.stack([c.outcome for c in candidates])
    ids = np.asarray([c.id for c in candidates], dtype=np.int64)

    scores = novelty_scores(outcomes, _reference(state), k, ids)
    chosen = proportionate_sample(scores, n_selection, rng)

    population = [candidates[i] for i in chosen]
    state.last_selected = outcomes[chosen]

    offspring = breed(
        np.stack([p.params for p in population]), ids[chosen], env,
        mutation, n_offspring, p_expansion, rng
    ).pairs(state.next_id, state.generation + 1)

    n_archived = min(n_filter_archive, len(offspring))
    picked = np.sort(rng.choice(len(offspring), n_archived, replace=False))
    state.archive.extend([offspring[i] for i in picked])
    state.archive.end_generation()

    state.population = population
    state.offspring = offspring
    state.next_id += len(offspring)
    state.generation += 1

    _log.debug(
        "NS generation %i: mean novelty %.4g, archive %i",
        state.generation, float(scores.mean()), len(state.archive)
    )
    return state
