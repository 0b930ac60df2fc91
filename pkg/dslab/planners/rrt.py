# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from typing import TYPE_CHECKING, Callable, Optional

import numpy as np

from .tree import MpTree, propagate
from ..core.loop import Expansion, run_loop

if TYPE_CHECKING:
    from typing import Sequence

    from ..core.archive import ArchiveStore, SamplePair
    from ..envs.maze import MazeSpec
    from ..utils.types import FloatArray, Rng

    Sampler = Callable[[Rng], FloatArray]


class RrtPlanner:
    """Rapidly exploring random tree with random one-step controls.

    Each iteration draws a configuration uniformly in the maze bounds,
    picks the nearest tree node and applies a uniform random control to
    it. Blocked expansions add no node.

    Parameters
    ----------
    spec: :class:`~dslab.envs.maze.MazeSpec`
        The maze.
    rng: :class:`numpy.random.Generator`
        The run's random stream.
    control_steps: :class:`int`
        Maze steps per control.
        |default| ``1``
    sampler: Optional[Callable[[:class:`numpy.random.Generator`], :class:`numpy.ndarray`]]
        Replaces the uniform configuration draw.
    """  # noqa: E501

    def __init__(
        self,
        spec: MazeSpec,
        rng: Rng,
        control_steps: int = 1,
        sampler: Optional[Sampler] = None
    ):
        self.spec = spec
        self.rng = rng
        self.control_steps = control_steps
        self.sampler = sampler or spec.bounds.sample

    def select(self, store: ArchiveStore) -> SamplePair:
        target = self.sampler(self.rng)
        return store[int(store.nearest(target)[0])]

    def expand(self, parent: SamplePair) -> Expansion:
        bound = self.spec.action_bound
        return Expansion(self.rng.uniform(-bound, bound, size=2), parent)

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


def rrt_iteration(
    tree: MpTree,
    spec: MazeSpec,
    rng: Rng,
    *,
    sample: Optional[FloatArray] = None,
    control_steps: int = 1
) -> Optional[SamplePair]:
    """One RRT iteration; returns the new node or ``None`` when the move
    was blocked. ``sample`` forces the drawn configuration.
    """
    size = len(tree)
    sampler = None if sample is None else (lambda _: np.asarray(sample))

    RrtPlanner(spec, rng, control_steps, sampler).run(tree, 1)
    return tree.store[-1] if len(tree) > size else None


def run_rrt(
    spec: MazeSpec,
    rng: Rng,
    iterations: int,
    hooks: Sequence = (),
    control_steps: int = 1,
    n_update: int = 10
) -> MpTree:
    tree = MpTree(spec.start_point, n_update)
    return RrtPlanner(spec, rng, control_steps).run(tree, iterations, hooks)
