# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from typing import TYPE_CHECKING, Optional, Tuple, Union

import numpy as np

from .archive import ArchiveStore
from .index import KdIndex
from ..exceptions import (
    DimensionMismatchError, EmptyCollectionError, InvalidInputError
)

if TYPE_CHECKING:
    from .archive import OutcomeBounds, SamplePair
    from ..utils.types import FloatArray, IntArray, Rng

Reference = Union[ArchiveStore, KdIndex]


def _index_of(reference: Reference) -> KdIndex:
    return reference.index if isinstance(reference, ArchiveStore) \
        else reference


def novelty_scores(
    points: FloatArray,
    reference: Reference,
    k: int,
    point_ids: Optional[IntArray] = None
) -> FloatArray:
    """Mean distance of each point to its k nearest neighbours in a
    reference set.

    A point whose id is a member of the reference set is left out of its
    own neighbour list. When fewer than ``k`` neighbours are available the
    mean runs over all of them; a point without any neighbour scores 0.

    Parameters
    ----------
    points: :class:`numpy.ndarray`
        ``(n, d)`` outcome points.
    reference: Union[:class:`ArchiveStore`, :class:`KdIndex`]
        The reference set.
    k: :class:`int`
        Number of neighbours.
    point_ids: Optional[:class:`numpy.ndarray`]
        Sample ids of ``points``, used to detect self membership.

    Raises
    ------
    EmptyCollectionError
        The reference set is empty.
    """
    index = _index_of(reference)

    if not len(index):
        raise EmptyCollectionError("The reference set is empty.")

    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = len(points)

    if n == 0:
        return np.empty(0)

    kq = min(k + 1, len(index))
    ids, dist = index.knn_batch(points, kq)

    if point_ids is None:
        member = np.zeros(n, dtype=bool)
        own = np.zeros_like(ids, dtype=bool)
    else:
        point_ids = np.asarray(point_ids, dtype=np.int64)
        member = np.isin(point_ids, index.ids)
        own = (ids == point_ids[:, None]) & member[:, None]

    keep = np.zeros_like(dist, dtype=bool)
    keep[:, :min(k, len(index))] = True

    hit = own.any(axis=1)
    keep[hit] = ~own[hit]

    # Self hidden behind equal zero-distance points: any of them will do.
    blind = member & ~hit
    keep[blind] = True
    keep[blind, -1] = False

    counts = keep.sum(axis=1)
    scores = np.zeros(n)

    for c in np.unique(counts):
        if c == 0:
            continue

        rows = np.flatnonzero(counts == c)
        kept = dist[rows][keep[rows]].reshape(len(rows), c)
        scores[rows] = np.mean(kept, axis=1)

    return scores


def proportionate_probabilities(weights: FloatArray) -> FloatArray:
    """Selection probabilities proportional to ``weights``; uniform when
    the weights sum to zero.
    """
    weights = np.asarray(weights, dtype=np.float64)

    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise InvalidInputError("Weights must be finite and non-negative.")

    total = weights.sum()

    if total <= 0:
        return np.full(len(weights), 1 / len(weights))

    return weights / total


def proportionate_draw(weights: FloatArray, rng: Rng) -> int:
    """Draw one index with probability proportional to its weight."""
    if not len(weights):
        raise EmptyCollectionError("Cannot select among zero candidates.")

    cdf = np.cumsum(proportionate_probabilities(weights))
    i = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return min(i, len(cdf) - 1)


def proportionate_sample(
    weights: FloatArray, m: int, rng: Rng
) -> IntArray:
    """Draw ``m`` distinct indices, each draw proportional to the weights
    of the indices not drawn yet.

    Zero-weight indices are only drawn, uniformly, once every positive
    weight is exhausted.
    """
    weights = np.array(weights, dtype=np.float64)

    if m > len(weights):
        raise InvalidInputError(
            f"Cannot draw {m} distinct indices out of {len(weights)}."
        )

    free = np.ones(len(weights), dtype=bool)
    chosen = np.empty(m, dtype=np.int64)

    for j in range(m):
        if weights.sum() > 0:
            i = proportionate_draw(weights, rng)
        else:
            i = int(np.flatnonzero(free)[rng.integers(free.sum())])

        chosen[j] = i
        weights[i] = 0.0
        free[i] = False

    return chosen


def select_density_proportionate(
    candidates: FloatArray,
    reference_set: Reference,
    k: int,
    rng: Rng,
    candidate_ids: Optional[IntArray] = None
) -> int:
    """Pick a candidate with probability proportional to its novelty
    score against ``reference_set``.

    Parameters
    ----------
    candidates: :class:`numpy.ndarray`
        ``(n, d)`` outcome points.
    reference_set: Union[:class:`ArchiveStore`, :class:`KdIndex`]
        Neighbourhood reference.
    k: :class:`int`
        Number of nearest neighbours.
    rng: :class:`numpy.random.Generator`
        The run's random stream.
    candidate_ids: Optional[:class:`numpy.ndarray`]
        Ids of the candidates, for self exclusion.

    Returns
    -------
    :class:`int`
        Index into ``candidates``.

    Raises
    ------
    EmptyCollectionError
        No candidate or an empty reference set.
    """
    candidates = np.asarray(candidates, dtype=np.float64)

    if candidates.size == 0:
        raise EmptyCollectionError("Cannot select among zero candidates.")

    if k < 1:
        raise InvalidInputError(f"k must be positive (got {k}).")

    scores = novelty_scores(candidates, reference_set, k, candidate_ids)
    return proportionate_draw(scores, rng)


def select_goal_nearest_batch(
    store: ArchiveStore, bounds: OutcomeBounds, rng: Rng, n: int
) -> Tuple[FloatArray, IntArray]:
    """Draw ``n`` goals uniformly in ``bounds`` and return them with the
    insertion positions of the stored samples nearest to each.
    """
    if not store:
        raise EmptyCollectionError("Cannot select from an empty store.")

    if bounds.dim != store.outcome_dim:
        raise DimensionMismatchError.from_sizes(
            "Goal bounds", store.outcome_dim, bounds.dim
        )

    goals = bounds.sample(rng, n)
    return goals, store.nearest(goals)


def select_goal_nearest(
    store: ArchiveStore, bounds: OutcomeBounds, rng: Rng
) -> Tuple[FloatArray, SamplePair]:
    """Draw a goal uniformly in ``bounds`` and pick the stored sample whose
    outcome is closest to it, ties going to the lowest id.

    Raises
    ------
    EmptyCollectionError
        The store is empty.
    """
    goals, positions = select_goal_nearest_batch(store, bounds, rng, 1)
    return goals[0], store[int(positions[0])]
