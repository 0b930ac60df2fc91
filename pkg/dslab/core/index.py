# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy.spatial import cKDTree

from . import __package__
from ..exceptions import (
    DimensionMismatchError, EmptyCollectionError, InvalidInputError
)

if TYPE_CHECKING:
    from typing import List, Tuple

    from ..utils.types import FloatArray, IntArray


_log = logging.getLogger(__package__)

# Below this many points the recent buffer is scanned linearly.
BUFFER_SCAN_LIMIT = 512


def euclidean(points: FloatArray, query: FloatArray) -> FloatArray:
    """Euclidean distances between ``points`` and ``query``.

    Both arguments broadcast; the reduction runs over the last axis. Every
    distance in the library goes through this function so that tree
    queries and linear scans agree bit for bit.
    """
    diff = points - query
    return np.sqrt(np.sum(diff * diff, axis=-1))


class KdIndex:
    """Exact k-nearest-neighbour index over outcome points.

    Points live in a backing array with stable insertion indices. The
    first ``main_size`` points are covered by a balanced k-d tree that is
    only rebuilt every ``n_update`` generations; every point inserted after
    that sits in a recent buffer which is scanned linearly, or covered by
    a small tree once it grows past :data:`BUFFER_SCAN_LIMIT` points.

    Queries merge the candidates of every part and rank them by exact
    distance, ties going to the lowest payload id, so results are equal to
    a linear scan over all points.

    Parameters
    ----------
    dim: :class:`int`
        Dimension of the indexed points.
    n_update: :class:`int`
        Number of generations between two main tree rebuilds.
        |default| ``10``
    """

    def __init__(self, dim: int, n_update: int = 10):
        if dim < 1:
            raise InvalidInputError("Index dimension must be positive.")

        if n_update < 1:
            raise InvalidInputError("n_update must be a positive integer.")

        self.dim = dim
        self.n_update = n_update

        self._points = np.empty((16, dim), dtype=np.float64)
        self._ids = np.empty(16, dtype=np.int64)
        self._size = 0

        self._main: Optional[cKDTree] = None
        self._main_size = 0
        self._small: Optional[cKDTree] = None
        self._small_size = 0

        self.generation = 0
        self.rebuild_count = 0

    @classmethod
    def from_points(
        cls,
        points: FloatArray,
        ids: Optional[IntArray] = None,
        n_update: int = 10
    ) -> KdIndex:
        """Build an index whose main tree already covers ``points``.

        Parameters
        ----------
        points: :class:`numpy.ndarray`
            ``(n, dim)`` array of points.
        ids: Optional[:class:`numpy.ndarray`]
            Payload ids, defaults to ``0..n-1``.
        n_update: :class:`int`
            Rebuild period for later inserts.
        """
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        index = cls(points.shape[1], n_update)
        index.insert_many(
            points,
            np.arange(len(points)) if ids is None else ids
        )
        index.flush()
        return index

    def __len__(self) -> int:
        return self._size

    @property
    def main_size(self) -> int:
        """:class:`int`: Number of points covered by the main tree."""
        return self._main_size

    @property
    def recent_size(self) -> int:
        """:class:`int`: Number of points in the recent buffer."""
        return self._size - self._main_size

    @property
    def points(self) -> FloatArray:
        """:class:`numpy.ndarray`: Read-only view on the indexed points."""
        view = self._points[:self._size]
        view.flags.writeable = False
        return view

    @property
    def ids(self) -> IntArray:
        """:class:`numpy.ndarray`: Read-only view on the payload ids."""
        view = self._ids[:self._size]
        view.flags.writeable = False
        return view

    def _reserve(self, extra: int):
        needed = self._size + extra
        capacity = len(self._ids)

        if needed <= capacity:
            return

        while capacity < needed:
            capacity *= 2

        points = np.empty((capacity, self.dim), dtype=np.float64)
        points[:self._size] = self._points[:self._size]
        ids = np.empty(capacity, dtype=np.int64)
        ids[:self._size] = self._ids[:self._size]
        self._points, self._ids = points, ids

    def _check_points(self, points: FloatArray) -> FloatArray:
        points = np.asarray(points, dtype=np.float64)

        if points.shape[-1] != self.dim:
            raise DimensionMismatchError.from_sizes(
                "Indexed point", self.dim, points.shape[-1]
            )

        return points

    def insert(self, point: FloatArray, payload_id: int):
        """Insert a point; it is queryable immediately.

        Parameters
        ----------
        point: :class:`numpy.ndarray`
            The point, of the index dimension.
        payload_id: :class:`int`
            The id returned by queries for this point.

        Raises
        ------
        DimensionMismatchError
            The point does not have the index dimension.
        """
        point = self._check_points(point)

        if point.ndim != 1:
            raise DimensionMismatchError(
                "insert expects a single point; use insert_many for batches."
            )

        self.insert_many(point[None, :], np.asarray([payload_id]))

    def insert_many(self, points: FloatArray, payload_ids: IntArray):
        """Insert a batch of points in row order."""
        points = self._check_points(np.atleast_2d(points))
        payload_ids = np.asarray(payload_ids, dtype=np.int64).reshape(-1)

        if len(points) != len(payload_ids):
            raise InvalidInputError(
                f"Got {len(points)} points but {len(payload_ids)} ids."
            )

        self._reserve(len(points))
        self._points[self._size:self._size + len(points)] = points
        self._ids[self._size:self._size + len(points)] = payload_ids
        self._size += len(points)

    def with_buffer(self, points: FloatArray, payload_ids: IntArray) -> KdIndex:
        """Query-only copy holding ``points`` after the indexed ones.

        The trees are shared and the extra points are scanned linearly, so
        no tree is built. The copy must not outlive the next insert into
        this index.
        """
        points = self._check_points(np.atleast_2d(points))
        payload_ids = np.asarray(payload_ids, dtype=np.int64).reshape(-1)

        if len(points) != len(payload_ids):
            raise InvalidInputError(
                f"Got {len(points)} points but {len(payload_ids)} ids."
            )

        if not len(points):
            return self

        view = object.__new__(KdIndex)
        view.__dict__.update(self.__dict__)
        view._points = np.concatenate([self._points[:self._size], points])
        view._ids = np.concatenate([self._ids[:self._size], payload_ids])
        view._size = self._size + len(points)
        return view

    def flush(self):
        """Rebuild the main tree over every point and empty the recent
        buffer.
        """
        self._main_size = self._size
        self._main = (
            cKDTree(self._points[:self._size]) if self._size else None
        )
        self._small, self._small_size = None, 0
        self.rebuild_count += 1
        _log.debug("Main tree rebuilt over %i points", self._main_size)

    def end_generation(self):
        """Close a generation.

        The main tree absorbs the recent buffer every ``n_update`` calls;
        the recent buffer is rebuilt on every call.
        """
        self.generation += 1

        if self.generation % self.n_update == 0:
            self.flush()
            return

        recent = self._size - self._main_size

        if recent > BUFFER_SCAN_LIMIT:
            self._small = cKDTree(self._points[self._main_size:self._size])
            self._small_size = recent
        else:
            self._small, self._small_size = None, 0

    def _tree_candidates(
        self,
        tree: Optional[cKDTree],
        offset: int,
        n: int,
        queries: FloatArray,
        k: int
    ) -> Optional[IntArray]:
        if tree is None or n == 0:
            return None

        kk = min(k + 1, n)
        _, idx = tree.query(queries, k=kk)
        return np.asarray(idx, dtype=np.int64).reshape(len(queries), kk) \
            + offset

    def _exact_row(self, query: FloatArray, radius: float, m: int):
        """Slow path for one query whose k-th distance is tied."""
        parts: List[IntArray] = []
        r = np.nextafter(radius, np.inf) * (1 + 1e-12)

        if self._main is not None:
            parts.append(np.asarray(
                self._main.query_ball_point(query, r), dtype=np.int64
            ))

        if self._small is not None:
            parts.append(np.asarray(
                self._small.query_ball_point(query, r), dtype=np.int64
            ) + self._main_size)

        tail_start = self._main_size + self._small_size
        parts.append(np.arange(tail_start, self._size, dtype=np.int64))

        idx = np.concatenate(parts)
        dist = euclidean(self._points[idx], query)
        keep = dist <= radius
        idx, dist = idx[keep], dist[keep]
        order = np.lexsort((self._ids[idx], dist))[:m]
        return idx[order], dist[order]

    def knn_batch(
        self, queries: FloatArray, k: int
    ) -> Tuple[IntArray, FloatArray]:
        """Exact k nearest neighbours of many queries.

        Parameters
        ----------
        queries: :class:`numpy.ndarray`
            ``(q, dim)`` array of query points.
        k: :class:`int`
            Number of neighbours.

        Returns
        -------
        Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`]
            ``(q, m)`` arrays of payload ids and distances, ``m = min(k,
            size)``, each row ascending by distance then id.

        Raises
        ------
        EmptyCollectionError
            The index holds no point.
        InvalidInputError
            ``k`` is not positive.
        """
        if self._size == 0:
            raise EmptyCollectionError("Cannot query an empty index.")

        if k < 1:
            raise InvalidInputError(f"k must be positive (got {k}).")

        queries = self._check_points(np.atleast_2d(queries))
        m = min(k, self._size)
        n_q = len(queries)

        sources = [
            self._tree_candidates(self._main, 0, self._main_size, queries, m),
            self._tree_candidates(
                self._small, self._main_size, self._small_size, queries, m
            )
        ]
        tail_start = self._main_size + self._small_size

        if tail_start < self._size:
            sources.append(np.broadcast_to(
                np.arange(tail_start, self._size, dtype=np.int64),
                (n_q, self._size - tail_start)
            ))

        candidates = np.concatenate(
            [s for s in sources if s is not None], axis=1
        )
        dist = euclidean(self._points[candidates], queries[:, None, :])
        order = np.lexsort((self._ids[candidates], dist), axis=-1)
        candidates = np.take_along_axis(candidates, order, axis=-1)
        dist = np.take_along_axis(dist, order, axis=-1)

        idx, best = candidates[:, :m].copy(), dist[:, :m].copy()
        kth = best[:, -1]

        # A tree returning as many candidates as it holds cannot have
        # hidden a tied point; otherwise its last candidate bounds the rest.
        suspect = np.zeros(n_q, dtype=bool)
        for source, size in zip(
            sources[:2], (self._main_size, self._small_size)
        ):
            if source is None or source.shape[1] >= size:
                continue

            last = euclidean(
                self._points[source[:, -1]], queries
            )
            suspect |= last <= kth

        for row in np.flatnonzero(suspect):
            idx[row], best[row] = self._exact_row(queries[row], kth[row], m)

        return self._ids[idx], best

    def knn(self, query: FloatArray, k: int) -> List[Tuple[int, float]]:
        """Exact k nearest neighbours of a single point.

        Returns
        -------
        List[Tuple[:class:`int`, :class:`float`]]
            ``min(k, size)`` pairs of ``(payload id, distance)``, ascending
            by distance, ties broken by lowest id.
        """
        query = self._check_points(query)
        ids, dist = self.knn_batch(query[None, :], k)
        return list(zip(ids[0].tolist(), dist[0].tolist()))

    def count_within(self, queries: FloatArray, radius: float) -> IntArray:
        """Number of indexed points within ``radius`` of each query."""
        queries = self._check_points(np.atleast_2d(queries))
        counts = np.zeros(len(queries), dtype=np.int64)

        for tree in (self._main, self._small):
            if tree is not None:
                counts += np.asarray(
                    tree.query_ball_point(queries, radius, return_length=True),
                    dtype=np.int64
                )

        tail_start = self._main_size + self._small_size
        if tail_start < self._size:
            tail = self._points[tail_start:self._size]
            counts += np.sum(
                euclidean(tail[None, :, :], queries[:, None, :]) <= radius,
                axis=1
            )

        return counts
