# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

"""Binary formats for policies and archives.

All integers are little-endian; counts and sizes are 32-bit unsigned,
ids and keys 64-bit signed, reals 64-bit floats.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, NamedTuple, Optional, Tuple

import numpy as np

from . import __package__
from .mlp import Topology
from .mutation import KeyedReplay, MutationSpec
from ..core.archive import ArchiveStore
from ..exceptions import ArtifactError, InvalidInputError

if TYPE_CHECKING:
    from typing import List, Union

    from ..utils.types import FloatArray


_log = logging.getLogger(__package__)

ARCHIVE_MAGIC = b"DSLA"
ARCHIVE_VERSION = 1

_U4, _U8, _I8, _F8 = (
    np.dtype("<u4"), np.dtype("<u8"), np.dtype("<i8"), np.dtype("<f8")
)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.at = 0

    def take(self, dtype: np.dtype, count: int = 1) -> np.ndarray:
        end = self.at + dtype.itemsize * count

        if end > len(self.data):
            raise InvalidInputError(
                f"Truncated data: needed {end} bytes, got {len(self.data)}."
            )

        out = np.frombuffer(self.data, dtype, count, self.at)
        self.at = end
        return out

    def scalar(self, dtype: np.dtype) -> int:
        return self.take(dtype)[0].item()


def encode_topology(topology: Optional[Topology]) -> bytes:
    """Layer count followed by every layer size; ``None`` encodes as an
    empty header.
    """
    sizes = () if topology is None else topology.sizes
    return np.asarray((len(sizes), *sizes), dtype=_U4).tobytes()


def _read_topology(reader: _Reader) -> Optional[Topology]:
    count = reader.scalar(_U4)

    if count == 0:
        return None

    if count < 2:
        raise InvalidInputError(f"A topology needs two layers (got {count}).")

    sizes = reader.take(_U4, count).tolist()
    return Topology(sizes[0], tuple(sizes[1:-1]), sizes[-1])


def encode_policy(topology: Topology, params: FloatArray) -> bytes:
    """Topology header followed by the flat parameter vector."""
    params = np.asarray(params, dtype=np.float64).reshape(-1)

    if params.size != topology.n_params:
        raise InvalidInputError(
            f"Topology expects {topology.n_params} parameters, "
            f"got {params.size}."
        )

    return encode_topology(topology) + params.astype(_F8).tobytes()


def decode_policy(data: bytes) -> Tuple[Topology, FloatArray]:
    """Inverse of :func:`encode_policy`."""
    reader = _Reader(data)
    topology = _read_topology(reader)

    if topology is None:
        raise InvalidInputError("A policy needs a topology header.")

    return topology, reader.take(_F8, topology.n_params).astype(np.float64)


class LoadedArchive(NamedTuple):
    """An archive read back from disk.

    Attributes
    ----------
    store: :class:`~dslab.core.archive.ArchiveStore`
        The restored samples.
    topology: Optional[:class:`~dslab.policies.mlp.Topology`]
        Policy topology, ``None`` for motion planning trees.
    mutation: Optional[:class:`~dslab.policies.mutation.MutationSpec`]
        Expansion operator of a lineage archive.
    """
    store: ArchiveStore
    topology: Optional[Topology]
    mutation: Optional[MutationSpec]


def dump_archive(
    store: ArchiveStore, topology: Optional[Topology] = None
) -> bytes:
    """Serialise a store.

    Lineage stores only write their checkpoint rows together with the
    mutation settings needed to replay every other row.
    """
    width = store.param_width or 0
    replay = store.replay

    if replay is not None and not isinstance(replay, KeyedReplay):
        raise InvalidInputError(
            "Only keyed mutation lineages can be serialised."
        )

    spec = replay.spec if replay is not None else MutationSpec(1.0, 0.0)
    positions, rows = store.stored_rows()

    parts: List[bytes] = [
        ARCHIVE_MAGIC,
        np.asarray([ARCHIVE_VERSION], dtype=_U4).tobytes(),
        encode_topology(topology),
        np.asarray([width, store.outcome_dim], dtype=_U4).tobytes(),
        np.asarray([len(store)], dtype=_U8).tobytes(),
        np.asarray([replay is not None], dtype=_U4).tobytes(),
        np.asarray(
            [spec.eta, spec.p_mutation, spec.lower, spec.upper], dtype=_F8
        ).tobytes(),
        store.ids.astype(_I8).tobytes(),
        store.parents.astype(_I8).tobytes(),
        store.generations.astype(_I8).tobytes(),
        store.keys.astype(_I8).tobytes(),
        store.outcomes.astype(_F8).tobytes(),
        np.asarray([len(positions)], dtype=_U8).tobytes(),
        positions.astype(_I8).tobytes(),
        rows.astype(_F8).tobytes()
    ]
    return b"".join(parts)


def load_archive(data: bytes, n_update: int = 10) -> LoadedArchive:
    """Inverse of :func:`dump_archive`.

    Raises
    ------
    InvalidInputError
        The data is not an archive or is truncated.
    """
    if data[:4] != ARCHIVE_MAGIC:
        raise InvalidInputError("Not an archive file.")

    reader = _Reader(data)
    reader.at = 4
    version = reader.scalar(_U4)

    if version != ARCHIVE_VERSION:
        raise InvalidInputError(f"Unsupported archive version {version}.")

    topology = _read_topology(reader)
    width, outcome_dim = reader.take(_U4, 2).tolist()
    n = reader.scalar(_U8)
    lineage = bool(reader.scalar(_U4))
    eta, p_mutation, lower, upper = reader.take(_F8, 4).tolist()

    ids = reader.take(_I8, n)
    parents = reader.take(_I8, n)
    generations = reader.take(_I8, n)
    keys = reader.take(_I8, n)
    outcomes = reader.take(_F8, n * outcome_dim).reshape(n, outcome_dim)

    n_rows = reader.scalar(_U8)
    positions = reader.take(_I8, n_rows)
    rows = reader.take(_F8, n_rows * width).reshape(n_rows, width)

    mutation = MutationSpec(eta, p_mutation, lower, upper) if lineage \
        else None
    store = ArchiveStore.restore(
        width, ids, parents, generations, keys, outcomes,
        {int(p): rows[i].astype(np.float64) for i, p in enumerate(positions)},
        n_update=n_update,
        replay=KeyedReplay(mutation) if mutation else None
    )
    return LoadedArchive(store, topology, mutation)


def write_archive(
    path: Union[str, Path],
    store: ArchiveStore,
    topology: Optional[Topology] = None
):
    """Write :func:`dump_archive` output to ``path``.

    Raises
    ------
    ArtifactError
        The file could not be written.
    """
    try:
        Path(path).write_bytes(dump_archive(store, topology))
    except OSError as e:
        raise ArtifactError(f"Could not write archive `{path}`: {e}") from e

    _log.debug("Archive of %i samples written to %s", len(store), path)


def read_archive(path: Union[str, Path], n_update: int = 10) -> LoadedArchive:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise ArtifactError(f"Could not read archive `{path}`: {e}") from e

    return load_archive(data, n_update)
