# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, ClassVar

import numpy as np

from ..exceptions import DimensionMismatchError
from ..policies.mlp import MlpBatch, MlpPolicy, Topology

if TYPE_CHECKING:
    from ..core.archive import OutcomeBounds
    from ..utils.types import FloatArray

# Rows rolled out together by :meth:`Environment.evaluate`.
EVAL_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States visited by one rollout and the resulting outcome.

    Attributes
    ----------
    states: :class:`numpy.ndarray`
        ``(T, state_dim)`` states in visiting order.
    outcome: :class:`numpy.ndarray`
        The outcome point, a function of ``states``.
    """
    states: FloatArray
    outcome: FloatArray


class Environment(ABC):
    """A deterministic rollout from policy parameters to an outcome.

    Subclasses declare the policy input/output sizes and implement the
    observation and action adapters; the perceptron topology is built from
    them.

    Parameters
    ----------
    n_layers: :class:`int`
        Hidden layer count of the policies.
        |default| ``2``
    n_neurons: :class:`int`
        Units per hidden layer.
        |default| ``50``
    """
    name: ClassVar[str]
    outcome_dim: ClassVar[int] = 2
    n_inputs: ClassVar[int]
    n_outputs: ClassVar[int]

    def __init__(self, n_layers: int = 2, n_neurons: int = 50):
        self.topology = Topology.mlp(
            self.n_inputs, self.n_outputs, n_layers, n_neurons
        )

    @property
    @abstractmethod
    def output_scale(self) -> float:
        """Action bound applied to the ``tanh`` outputs."""

    @abstractmethod
    def reachable_bounds(self) -> OutcomeBounds:
        """Bounding box of every outcome the environment can produce."""

    @abstractmethod
    def rollout(self, policy: MlpPolicy) -> Trajectory:
        """Full trajectory of a single policy."""

    @abstractmethod
    def _evaluate_batch(self, batch: MlpBatch) -> FloatArray:
        ...

    def policy(self, params: FloatArray) -> MlpPolicy:
        return MlpPolicy(self.topology, params, self.output_scale)

    @classmethod
    def check_policy(cls, policy):
        """Reject a policy whose sizes do not match the environment.

        Policies without a ``topology`` attribute are taken as they are.
        """
        topology = getattr(policy, "topology", None)

        if topology is None:
            return

        if topology.n_inputs != cls.n_inputs:
            raise DimensionMismatchError.from_sizes(
                "Policy input", cls.n_inputs, topology.n_inputs
            )

        if topology.n_outputs != cls.n_outputs:
            raise DimensionMismatchError.from_sizes(
                "Policy output", cls.n_outputs, topology.n_outputs
            )

    def evaluate(self, params: FloatArray) -> FloatArray:
        """Outcomes of a ``(B, P)`` parameter matrix, one row per policy.

        Rows are rolled out together, in chunks, and returned in order.
        """
        params = np.atleast_2d(np.asarray(params, dtype=np.float64))

        if params.shape[1] != self.topology.n_params:
            raise DimensionMismatchError.from_sizes(
                "Parameter vector", self.topology.n_params, params.shape[1]
            )

        if not len(params):
            return np.empty((0, self.outcome_dim))

        return np.concatenate([
            self._evaluate_batch(MlpBatch(
                self.topology, params[i:i + EVAL_CHUNK], self.output_scale
            ))
            for i in range(0, len(params), EVAL_CHUNK)
        ])
