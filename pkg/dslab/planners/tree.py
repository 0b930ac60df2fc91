# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from typing import TYPE_CHECKING, List, NamedTuple, Optional, Tuple

import numpy as np

from ..core.archive import NO_PARENT, ArchiveStore
from ..envs.maze import maze_step_checked
from ..exceptions import InvalidInputError, LayoutFileError

if TYPE_CHECKING:
    from ..envs.maze import MazeSpec
    from ..utils.types import FloatArray, IntArray


def propagate(
    spec: MazeSpec, config: FloatArray, control: FloatArray, steps: int = 1
) -> Optional[FloatArray]:
    """Apply ``control`` for ``steps`` maze steps; ``None`` as soon as a
    step is blocked.
    """
    for _ in range(steps):
        config, blocked = maze_step_checked(spec, config, control)

        if blocked:
            return None

    return config


class Node(NamedTuple):
    config: FloatArray
    parent: int
    control: FloatArray


class MpTree:
    """Exploration tree in the maze configuration space.

    Nodes are kept in an :class:`~dslab.core.archive.ArchiveStore` whose
    outcomes are configurations and whose parameters are the controls that
    created them; node ids equal insertion indices.

    Parameters
    ----------
    root: :class:`numpy.ndarray`
        Start configuration.
    n_update: :class:`int`
        Rebuild period of the nearest neighbour index.
        |default| ``10``
    """

    def __init__(self, root: FloatArray, n_update: int = 10):
        self.store = ArchiveStore(2, n_update=n_update)
        self.store.append(np.zeros(2), np.asarray(root, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.store)

    @property
    def root(self) -> FloatArray:
        return self.store.outcomes[0].copy()

    @property
    def configs(self) -> FloatArray:
        return self.store.outcomes

    @property
    def parents(self) -> IntArray:
        return self.store.parents

    @property
    def controls(self) -> FloatArray:
        return self.store.params_of(range(len(self)))

    @property
    def nodes(self) -> List[Node]:
        return [
            Node(config.copy(), int(parent), control)
            for config, parent, control in zip(
                self.configs, self.parents, self.controls
            )
        ]

    def dump(self) -> str:
        """One ``id parent x y cx cy`` line per node, ``-1`` parent for the
        root.
        """
        lines = [
            " ".join([str(i), str(parent)] + [
                format(v, ".17g") for v in (*config, *control)
            ])
            for i, (config, parent, control) in enumerate(self.nodes)
        ]
        return "".join(line + "\n" for line in lines)


def parse_tree_dump(
    text: str
) -> Tuple[IntArray, IntArray, FloatArray, FloatArray]:
    """Read :meth:`MpTree.dump` output back as ``ids, parents, configs,
    controls`` arrays. Empty input gives empty arrays.
    """
    rows = []

    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue

        parts = line.split()
        if len(parts) != 6:
            raise LayoutFileError(f"expected 6 fields, got {len(parts)}", n)

        try:
            rows.append([float(v) for v in parts])
        except ValueError as e:
            raise LayoutFileError(f"non-numeric field in `{line}`", n) from e

    data = np.asarray(rows, dtype=np.float64).reshape(-1, 6)
    ids, parents = data[:, 0].astype(np.int64), data[:, 1].astype(np.int64)

    if np.any((parents != NO_PARENT) & ~np.isin(parents, ids)):
        raise InvalidInputError("A node refers to an unknown parent.")

    return ids, parents, data[:, 2:4], data[:, 4:6]
