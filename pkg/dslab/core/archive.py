# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Iterator, Optional, Sequence, Tuple

import numpy as np

from . import __package__
from .index import KdIndex
from ..exceptions import (
    DimensionMismatchError, EmptyCollectionError, InvalidInputError
)

if TYPE_CHECKING:
    from typing import Dict, List

    from ..utils.types import FloatArray, IntArray, Rng


_log = logging.getLogger(__package__)

NO_PARENT = -1

# Rebuilds a child parameter vector from its parent and expansion key.
Replay = Callable[["FloatArray", int], "FloatArray"]


@dataclass(frozen=True, eq=False)
class SamplePair:
    """A policy parameter vector paired with the outcome it produced.

    Attributes
    ----------
    params: :class:`numpy.ndarray`
        The parameters in Θ. For motion planners this holds the control
        which created the node.
    outcome: :class:`numpy.ndarray`
        The evaluated outcome point in O.
    id: :class:`int`
        Unique id within a run.
    parent_id: Optional[:class:`int`]
        Id of the sample this one was expanded from.
    generation: :class:`int`
        Generation (or iteration) that created the sample.
    key: :class:`int`
        Seed of the expansion draw that created the sample, ``0`` for
        samples which were not expanded from a parent.
    """
    params: FloatArray
    outcome: FloatArray
    id: int
    parent_id: Optional[int] = None
    generation: int = 0
    key: int = 0

    def __post_init__(self):
        if self.generation < 0:
            raise InvalidInputError(
                f"Generation must be non-negative (got {self.generation})."
            )

    def __repr__(self) -> str:
        return (
            f"SamplePair(id={self.id}, parent_id={self.parent_id}, "
            f"generation={self.generation}, outcome={self.outcome.tolist()})"
        )


@dataclass(frozen=True)
class OutcomeBounds:
    """Axis aligned box of the outcome space.

    Attributes
    ----------
    lower: Tuple[:class:`float`, ...]
        Per dimension lower bound.
    upper: Tuple[:class:`float`, ...]
        Per dimension upper bound.
    """
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(map(float, self.lower)))
        object.__setattr__(self, "upper", tuple(map(float, self.upper)))

        if len(self.lower) != len(self.upper):
            raise DimensionMismatchError.from_sizes(
                "Upper bound", len(self.lower), len(self.upper)
            )

        for d, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if not lo < hi:
                raise InvalidInputError(
                    f"Bounds must satisfy lower < upper "
                    f"(dimension {d}: {lo} >= {hi})."
                )

    @classmethod
    def square(cls, half_width: float, dim: int = 2) -> OutcomeBounds:
        """Symmetric box ``[-half_width, half_width]^dim``."""
        return cls((-half_width,) * dim, (half_width,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def low(self) -> FloatArray:
        return np.asarray(self.lower)

    @property
    def high(self) -> FloatArray:
        return np.asarray(self.upper)

    @property
    def span(self) -> FloatArray:
        return self.high - self.low

    def sample(self, rng: Rng, n: Optional[int] = None) -> FloatArray:
        """Draw uniform points, one per-dimension draw each, in row order."""
        size = (self.dim,) if n is None else (n, self.dim)
        return rng.uniform(self.low, self.high, size=size)

    def contains(self, points: FloatArray) -> np.ndarray:
        """Closed-box membership of each point."""
        points = np.asarray(points)
        return np.all((points >= self.low) & (points <= self.high), axis=-1)


class DenseParams:
    """Parameter rows kept in a growable matrix."""

    def __init__(self, width: int):
        self.width = width
        self._rows = np.empty((16, width), dtype=np.float64)
        self._size = 0

    def append(self, params: Optional[FloatArray], **_):
        if params is None:
            raise InvalidInputError("Dense parameter storage needs every row.")

        if self._size == len(self._rows):
            rows = np.empty((2 * len(self._rows), self.width))
            rows[:self._size] = self._rows[:self._size]
            self._rows = rows

        self._rows[self._size] = params
        self._size += 1

    def get(self, pos: int, _store: ArchiveStore) -> FloatArray:
        return self._rows[pos].copy()

    def matrix(self, positions: Sequence[int], _store) -> FloatArray:
        return self._rows[np.asarray(positions, dtype=np.int64)].copy()

    def stored(self) -> Tuple[IntArray, FloatArray]:
        return np.arange(self._size), self._rows[:self._size].copy()


class LineageParams:
    """Parameter rows rebuilt from lineage.

    Only samples without parent and samples at a depth multiple of
    ``checkpoint_every`` keep their row. Every other row is rebuilt by
    replaying the expansion keys from the closest stored ancestor, so an
    archive of millions of expanded policies stays small in memory.

    Parameters
    ----------
    width: :class:`int`
        Parameter vector length.
    replay: Callable[[:class:`numpy.ndarray`, :class:`int`], :class:`numpy.ndarray`]
        Rebuilds a child row from its parent row and expansion key; must be
        the operator that created the child.
    checkpoint_every: :class:`int`
        Depth period of stored rows.
        |default| ``32``
    cache_size: :class:`int`
        Number of recently rebuilt rows kept around.
        |default| ``2048``
    """  # noqa: E501

    def __init__(
        self,
        width: int,
        replay: Replay,
        checkpoint_every: int = 32,
        cache_size: int = 2048
    ):
        self.width = width
        self.replay = replay
        self.checkpoint_every = checkpoint_every
        self.cache_size = cache_size

        self._depth: List[int] = []
        self._stored: Dict[int, FloatArray] = {}
        self._cache: OrderedDict[int, FloatArray] = OrderedDict()

    def append(
        self, params: Optional[FloatArray], *, parent_pos: int = NO_PARENT
    ):
        # ``params`` may be omitted for rows rebuilt by replay on reload.
        pos = len(self._depth)
        depth = 0 if parent_pos == NO_PARENT else self._depth[parent_pos] + 1

        if depth % self.checkpoint_every == 0:
            if params is None:
                raise InvalidInputError(
                    f"Row {pos} is a lineage checkpoint and must be given."
                )

            self._stored[pos] = np.array(params, dtype=np.float64)
        elif params is not None:
            self._remember(pos, np.array(params, dtype=np.float64))

        self._depth.append(depth)

    def stored(self) -> Tuple[IntArray, FloatArray]:
        """Positions and rows kept in memory for good."""
        positions = np.asarray(sorted(self._stored), dtype=np.int64)

        if not len(positions):
            return positions, np.empty((0, self.width))

        return positions, np.stack([self._stored[p] for p in positions])

    def _remember(self, pos: int, row: FloatArray):
        self._cache[pos] = row
        self._cache.move_to_end(pos)

        while len(self._cache) > self.cache_size:
            self._cache.popitem(last=False)

    def _known(self, pos: int) -> Optional[FloatArray]:
        if pos in self._stored:
            return self._stored[pos]

        row = self._cache.get(pos)
        if row is not None:
            self._cache.move_to_end(pos)

        return row

    def get(self, pos: int, store: ArchiveStore) -> FloatArray:
        chain: List[int] = []
        row = self._known(pos)

        while row is None:
            chain.append(pos)
            pos = store.parent_position(pos)
            row = self._known(pos)

        for child in reversed(chain):
            row = self.replay(row, store.key_at(child))
            self._remember(child, row)

        return row.copy()

    def matrix(self, positions: Sequence[int], store) -> FloatArray:
        if not len(positions):
            return np.empty((0, self.width))

        return np.stack([self.get(int(p), store) for p in positions])


@dataclass
class _Columns:
    ids: List[int] = field(default_factory=list)
    parents: List[int] = field(default_factory=list)
    generations: List[int] = field(default_factory=list)
    keys: List[int] = field(default_factory=list)


class ArchiveStore:
    """Append-mostly collection of :class:`SamplePair` with an exact
    spatial index over their outcomes.

    Samples are stored column-wise; :class:`SamplePair` objects are
    materialised on access. Ids are unique and strictly increasing in
    insertion order.

    Parameters
    ----------
    outcome_dim: :class:`int`
        Dimension of the outcome space.
    n_update: :class:`int`
        Main tree rebuild period of the outcome index, in generations.
        |default| ``10``
    check_lineage: :class:`bool`
        Reject samples whose parent is not in the store.
        |default| ``True``
    replay: Optional[Replay]
        When given, parameters are kept as lineage
        (:class:`LineageParams`) instead of a dense matrix.
    """

    def __init__(
        self,
        outcome_dim: int,
        *,
        n_update: int = 10,
        check_lineage: bool = True,
        replay: Optional[Replay] = None
    ):
        self.outcome_dim = outcome_dim
        self.check_lineage = check_lineage
        self.index = KdIndex(outcome_dim, n_update)

        self._replay = replay
        self._params = None
        self._cols = _Columns()

    def __len__(self) -> int:
        return len(self._cols.ids)

    def __bool__(self) -> bool:
        return len(self) > 0

    def __iter__(self) -> Iterator[SamplePair]:
        return (self[pos] for pos in range(len(self)))

    def __getitem__(self, pos: int) -> SamplePair:
        if pos < 0:
            pos += len(self)

        cols = self._cols
        parent = cols.parents[pos]

        return SamplePair(
            params=self._params.get(pos, self),
            outcome=self.index.points[pos].copy(),
            id=cols.ids[pos],
            parent_id=None if parent == NO_PARENT else parent,
            generation=cols.generations[pos],
            key=cols.keys[pos]
        )

    def __contains__(self, sample_id: int) -> bool:
        return self.position(sample_id) is not None

    @property
    def entries(self) -> List[SamplePair]:
        """List[:class:`SamplePair`]: Every sample in insertion order."""
        return list(self)

    @property
    def ids(self) -> IntArray:
        return self.index.ids

    @property
    def outcomes(self) -> FloatArray:
        return self.index.points

    @property
    def generations(self) -> IntArray:
        return np.asarray(self._cols.generations, dtype=np.int64)

    @property
    def next_id(self) -> int:
        return self._cols.ids[-1] + 1 if self._cols.ids else 0

    def position(self, sample_id: int) -> Optional[int]:
        """Insertion position of ``sample_id`` or ``None``."""
        ids = self._cols.ids
        pos = int(np.searchsorted(self.ids, sample_id)) if ids else 0

        if pos < len(ids) and ids[pos] == sample_id:
            return pos

        return None

    def parent_position(self, pos: int) -> int:
        parent = self._cols.parents[pos]

        if parent == NO_PARENT:
            raise InvalidInputError(f"Sample at {pos} has no parent.")

        return self.position(parent)

    def key_at(self, pos: int) -> int:
        return self._cols.keys[pos]

    def get(self, sample_id: int) -> SamplePair:
        """The sample with id ``sample_id``.

        Raises
        ------
        KeyError
            No such sample.
        """
        pos = self.position(sample_id)

        if pos is None:
            raise KeyError(sample_id)

        return self[pos]

    def params_of(self, positions: Sequence[int]) -> FloatArray:
        """Stacked parameter rows of the samples at ``positions``."""
        return self._params.matrix(positions, self)

    def _ensure_params(self, width: int):
        if self._params is None:
            self._params = (
                DenseParams(width) if self._replay is None
                else LineageParams(width, self._replay)
            )
        elif self._params.width != width:
            raise DimensionMismatchError.from_sizes(
                "Parameter vector", self._params.width, width
            )

    def insert(self, pair: SamplePair) -> SamplePair:
        """Insert an existing sample, keeping its id.

        Raises
        ------
        InvalidInputError
            The id is not larger than every stored id, the outcome has the
            wrong dimension or the parent is unknown.
        """
        self._add(
            pair.id, np.asarray(pair.params, dtype=np.float64).reshape(-1),
            pair.outcome, pair.parent_id, pair.generation, pair.key
        )
        return pair

    def _add(
        self,
        sample_id: int,
        params: Optional[FloatArray],
        outcome: FloatArray,
        parent_id: Optional[int],
        generation: int,
        key: int
    ):
        outcome = np.asarray(outcome, dtype=np.float64)

        if outcome.shape != (self.outcome_dim,):
            raise DimensionMismatchError.from_sizes(
                "Outcome", self.outcome_dim, outcome.size
            )

        if self._cols.ids and sample_id <= self._cols.ids[-1]:
            raise InvalidInputError(
                f"Sample ids must increase (got {sample_id} after "
                f"{self._cols.ids[-1]})."
            )

        parent_pos = NO_PARENT
        if parent_id is not None and (
            self.check_lineage or self._replay is not None
        ):
            found = self.position(parent_id)

            if found is None:
                raise InvalidInputError(
                    f"Parent {parent_id} of sample {sample_id} "
                    "is not in the store."
                )

            parent_pos = found

        if params is not None:
            self._ensure_params(params.size)

        self._params.append(params, parent_pos=parent_pos)

        cols = self._cols
        cols.ids.append(int(sample_id))
        cols.parents.append(NO_PARENT if parent_id is None else int(parent_id))
        cols.generations.append(int(generation))
        cols.keys.append(int(key))
        self.index.insert(outcome, sample_id)

    @classmethod
    def restore(
        cls,
        width: int,
        ids: IntArray,
        parents: IntArray,
        generations: IntArray,
        keys: IntArray,
        outcomes: FloatArray,
        rows: Dict[int, FloatArray],
        *,
        n_update: int = 10,
        replay: Optional[Replay] = None
    ) -> ArchiveStore:
        """Rebuild a store from its columns.

        ``rows`` maps insertion positions to parameter rows. A dense store
        needs every row; a lineage store only its checkpoints.
        """
        outcomes = np.atleast_2d(outcomes)
        store = cls(
            outcomes.shape[1], n_update=n_update,
            check_lineage=False, replay=replay
        )
        store._ensure_params(width)

        for pos, sample_id in enumerate(ids):
            parent = int(parents[pos])
            store._add(
                int(sample_id), rows.get(pos), outcomes[pos],
                None if parent == NO_PARENT else parent,
                int(generations[pos]), int(keys[pos])
            )

        store.check_lineage = True
        store.index.flush()
        return store

    @property
    def replay(self) -> Optional[Replay]:
        return self._replay

    @property
    def param_width(self) -> Optional[int]:
        return None if self._params is None else self._params.width

    @property
    def parents(self) -> IntArray:
        """:class:`numpy.ndarray`: Parent ids, :data:`NO_PARENT` for roots."""
        return np.asarray(self._cols.parents, dtype=np.int64)

    @property
    def keys(self) -> IntArray:
        return np.asarray(self._cols.keys, dtype=np.int64)

    def stored_rows(self) -> Tuple[IntArray, FloatArray]:
        """Positions and parameter rows that cannot be rebuilt by replay."""
        if self._params is None:
            return np.empty(0, dtype=np.int64), np.empty((0, 0))

        return self._params.stored()

    def append(
        self,
        params: FloatArray,
        outcome: FloatArray,
        parent_id: Optional[int] = None,
        generation: int = 0,
        key: int = 0
    ) -> SamplePair:
        """Create and insert a sample with the next free id."""
        return self.insert(SamplePair(
            params=np.asarray(params, dtype=np.float64),
            outcome=np.asarray(outcome, dtype=np.float64),
            id=self.next_id,
            parent_id=parent_id,
            generation=generation,
            key=key
        ))

    def extend(self, pairs: Sequence[SamplePair]):
        for pair in pairs:
            self.insert(pair)

    def end_generation(self):
        """Forward the generation boundary to the outcome index."""
        self.index.end_generation()

    def nearest(self, points: FloatArray) -> IntArray:
        """Insertion positions of the stored outcomes nearest to each of
        ``points``, ties broken by lowest id.

        Raises
        ------
        EmptyCollectionError
            The store is empty.
        """
        if not self:
            raise EmptyCollectionError("Cannot search an empty store.")

        ids, _ = self.index.knn_batch(np.atleast_2d(points), 1)
        return np.searchsorted(self.ids, ids[:, 0])
