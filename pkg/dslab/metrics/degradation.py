# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from . import __package__
from ..core.index import euclidean
from ..exceptions import EmptyCollectionError, InvalidInputError
from ..policies.mutation import draw_keys, expand_rows

if TYPE_CHECKING:
    from .expansion import ExpansionGrid
    from ..core.archive import ArchiveStore
    from ..envs.base import Environment
    from ..policies.mutation import MutationSpec
    from ..utils.types import FloatArray, IntArray, Rng


_log = logging.getLogger(__package__)

# Children rolled out per environment call.
EVAL_ROWS = 2000


@dataclass
class DegradationResult:
    """Per-cell parent to child outcome distances.

    Arrays are indexed by cell, ``[cell_x, cell_y]`` in two dimensions.

    Attributes
    ----------
    sums: :class:`numpy.ndarray`
        Sum of distances.
    n_parents: :class:`numpy.ndarray`
        Parents drawn in each cell.
    n_expansions: :class:`numpy.ndarray`
        Children evaluated in each cell.
    """
    sums: FloatArray
    n_parents: IntArray
    n_expansions: IntArray

    @property
    def mean_dist(self) -> FloatArray:
        """Mean distance per cell, ``nan`` where nothing was expanded."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(
                self.n_expansions > 0, self.sums / self.n_expansions, np.nan
            )

    def rows(self):
        """``(cell_x, cell_y, mean_dist, n_parents, n_expansions)`` per
        cell, row-major over the cell indices.
        """
        means = self.mean_dist

        for cell in np.ndindex(self.sums.shape):
            yield (
                *cell, float(means[cell]), int(self.n_parents[cell]),
                int(self.n_expansions[cell])
            )


def expansion_degradation(
    env: Environment,
    policy_source: ArchiveStore,
    cell_grid: ExpansionGrid,
    mutation: MutationSpec,
    rng: Rng,
    n_policies_per_cell: int = 200,
    n_expansions_per_policy: int = 100
) -> DegradationResult:
    """Measure how far mutants land from their parent, per grid cell.

    For every cell, up to ``n_policies_per_cell`` archived policies whose
    outcome lies in the cell are drawn without replacement and mutated
    ``n_expansions_per_policy`` times each; the distance between a
    mutant's outcome and the archived outcome of its parent is recorded.
    Mutation keys of a cell are drawn before any rollout, so the result
    does not depend on how rollouts are batched.

    Parameters
    ----------
    env: :class:`~dslab.envs.base.Environment`
        Evaluates the mutants.
    policy_source: :class:`~dslab.core.archive.ArchiveStore`
        Archive of evaluated policies.
    cell_grid: :class:`~dslab.metrics.expansion.ExpansionGrid`
        Defines the cells; it is not modified.
    mutation: :class:`~dslab.policies.mutation.MutationSpec`
        The expansion operator.
    rng: :class:`numpy.random.Generator`
        Random source.
    n_policies_per_cell: :class:`int`
        |default| ``200``
    n_expansions_per_policy: :class:`int`
        |default| ``100``

    Raises
    ------
    EmptyCollectionError
        ``policy_source`` is empty.
    """
    if not policy_source:
        raise EmptyCollectionError("The policy source is empty.")

    if n_policies_per_cell < 1 or n_expansions_per_policy < 1:
        raise InvalidInputError("Sample counts must be positive.")

    shape = cell_grid.filled.shape
    result = DegradationResult(
        np.zeros(shape), np.zeros(shape, dtype=np.int64),
        np.zeros(shape, dtype=np.int64)
    )

    outcomes = policy_source.outcomes
    cells, inside = cell_grid.cells(outcomes)
    flat = np.ravel_multi_index(tuple(cells.T), shape)
    flat[~inside] = -1

    per_group = max(1, EVAL_ROWS // n_expansions_per_policy)

    for cell in np.ndindex(shape):
        members = np.flatnonzero(flat == np.ravel_multi_index(cell, shape))

        if len(members) < n_policies_per_cell:
            _log.warning(
                "Cell %s holds %i policies, fewer than the %i requested",
                cell, len(members), n_policies_per_cell
            )

        if not len(members):
            continue

        n = min(n_policies_per_cell, len(members))
        chosen = rng.choice(members, n, replace=False)
        keys = draw_keys(rng, n * n_expansions_per_policy).reshape(n, -1)
        total = 0.0

        for at in range(0, n, per_group):
            group = chosen[at:at + per_group]
            parents = np.repeat(
                policy_source.params_of(group), n_expansions_per_policy, 0
            )
            children = expand_rows(
                parents, keys[at:at + per_group].reshape(-1), mutation
            )
            child_outcomes = env.evaluate(children)
            parent_outcomes = np.repeat(
                outcomes[group], n_expansions_per_policy, 0
            )
            total += float(np.sum(euclidean(child_outcomes, parent_outcomes)))

        result.sums[cell] = total
        result.n_parents[cell] = n
        result.n_expansions[cell] = n * n_expansions_per_policy

    return result


def pool_degradation(results: Sequence[DegradationResult]) -> DegradationResult:
    """Merge results of several archives, each cell weighted by its
    expansion count.
    """
    if not results:
        raise EmptyCollectionError("Nothing to pool.")

    return DegradationResult(
        np.sum([r.sums for r in results], axis=0),
        np.sum([r.n_parents for r in results], axis=0),
        np.sum([r.n_expansions for r in results], axis=0)
    )
