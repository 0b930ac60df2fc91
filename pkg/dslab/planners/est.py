# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

import numpy as np

from .tree import MpTree, propagate
from ..core.loop import Expansion, run_loop
from ..core.selection import novelty_scores, proportionate_draw
from ..exceptions import InvalidInputError

if TYPE_CHECKING:
    from typing import Sequence

    from ..core.archive import ArchiveStore, SamplePair
    from ..envs.maze import MazeSpec
    from ..utils.types import FloatArray, Rng

WEIGHT_MODES = ("knn", "radius")


class EstPlanner:
    """Expansive space tree.

    Nodes are selected with probability proportional to a sparsity weight
    and expanded with a uniform random control. Two weights are supported:

    * ``knn``: mean distance to the ``k`` nearest other nodes.
    * ``radius``: ``1 / (1 + n)`` with ``n`` other nodes within
      ``r_neigh``; the expansion then tries ``n_samples`` controls and keeps
      the one landing in the sparsest neighbourhood.

    Parameters
    ----------
    spec: :class:`~dslab.envs.maze.MazeSpec`
        The maze.
    rng: :class:`numpy.random.Generator`
        The run's random stream.
    k: :class:`int`
        Neighbour count of the ``knn`` weight.
        |default| ``15``
    weight_mode: :class:`str`
        ``"knn"`` or ``"radius"``.
        |default| ``"knn"``
    r_neigh: :class:`float`
        Neighbourhood radius of the ``radius`` weight.
        |default| ``0.2``
    n_samples: :class:`int`
        Controls tried per expansion in ``radius`` mode.
        |default| ``10``
    control_steps: :class:`int`
        Maze steps per control.
        |default| ``1``
    """

    def __init__(
        self,
        spec: MazeSpec,
        rng: Rng,
        k: int = 15,
        weight_mode: str = "knn",
        r_neigh: float = 0.2,
        n_samples: int = 10,
        control_steps: int = 1
    ):
        if weight_mode not in WEIGHT_MODES:
            raise InvalidInputError(
                f"Unknown weight mode `{weight_mode}`, "
                f"expected one of {WEIGHT_MODES}."
            )

        if k < 1 or n_samples < 1:
            raise InvalidInputError("k and n_samples must be positive.")

        self.spec = spec
        self.rng = rng
        self.k = k
        self.weight_mode = weight_mode
        self.r_neigh = r_neigh
        self.n_samples = n_samples
        self.control_steps = control_steps
        self._store: Optional[ArchiveStore] = None

    def weights(self, store: ArchiveStore) -> FloatArray:
        """Selection weight of every node, in insertion order."""
        if self.weight_mode == "knn":
            return novelty_scores(store.outcomes, store, self.k, store.ids)

        others = self._neighbours(store, store.outcomes) - 1
        return 1.0 / (1.0 + others)

    def _neighbours(self, store: ArchiveStore, points: FloatArray):
        return store.index.count_within(points, self.r_neigh)

    def select(self, store: ArchiveStore) -> SamplePair:
        self._store = store
        return store[proportionate_draw(self.weights(store), self.rng)]

    def _control(self, n: Optional[int] = None) -> FloatArray:
        bound = self.spec.action_bound
        size = 2 if n is None else (n, 2)
        return self.rng.uniform(-bound, bound, size=size)

    def expand(self, parent: SamplePair) -> Expansion:
        if self.weight_mode == "knn":
            return Expansion(self._control(), parent)

        controls = self._control(self.n_samples)
        best, best_count = controls[0], None

        for control in controls:
            landing = propagate(
                self.spec, parent.outcome, control, self.control_steps
            )
            if landing is None:
                continue

            count = int(self._neighbours(self._store, landing)[0])
            if best_count is None or count < best_count:
                best, best_count = control, count

        return Expansion(best, parent)

    def evaluate(self, candidate: Expansion) -> Optional[FloatArray]:
        return propagate(
            self.spec, candidate.parent.outcome, candidate.params,
            self.control_steps
        )

    def run(
        self, tree: MpTree, iterations: int, hooks: Sequence = (),
        **options
    ) -> MpTree:
        """Run ``iterations`` iterations on ``tree``; ``options`` go to
        :func:`~dslab.core.loop.run_loop`.
        """
        run_loop(
            self.select, self.expand, self.evaluate, tree.store,
            iterations, hooks, **options
        )
        return tree


def est_iteration(
    tree: MpTree,
    spec: MazeSpec,
    k: int,
    rng: Rng,
    **options
) -> Optional[SamplePair]:
    """One EST iteration; returns the new node or ``None`` when the move
    was blocked. ``options`` are forwarded to :class:`EstPlanner`.
    """
    size = len(tree)
    EstPlanner(spec, rng, k, **options).run(tree, 1)
    return tree.store[-1] if len(tree) > size else None


def run_est(
    spec: MazeSpec,
    rng: Rng,
    iterations: int,
    hooks: Sequence = (),
    n_update: int = 10,
    **options
) -> MpTree:
    tree = MpTree(spec.start_point, n_update)
    return EstPlanner(spec, rng, **options).run(tree, iterations, hooks)
