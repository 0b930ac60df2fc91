# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Tuple, Union

import numpy as np

from ..exceptions import DimensionMismatchError, InvalidInputError

if TYPE_CHECKING:
    from typing import Optional

    from ..utils.types import FloatArray, Rng

Layer = Tuple["FloatArray", "FloatArray"]
Scale = Union[float, "FloatArray"]


@dataclass(frozen=True)
class Topology:
    """Layer sizes of a fully connected perceptron.

    Attributes
    ----------
    n_inputs: :class:`int`
        Observation length.
    hidden: Tuple[:class:`int`, ...]
        Width of each hidden layer.
    n_outputs: :class:`int`
        Action length.
    """
    n_inputs: int
    hidden: Tuple[int, ...]
    n_outputs: int

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(map(int, self.hidden)))

        if min(self.sizes) < 1:
            raise InvalidInputError(
                f"Every layer needs at least one unit (got {self.sizes})."
            )

    @classmethod
    def mlp(
        cls, n_inputs: int, n_outputs: int, n_layers: int = 2,
        n_neurons: int = 50
    ) -> Topology:
        """``n_layers`` hidden layers of ``n_neurons`` units each."""
        return cls(n_inputs, (n_neurons,) * n_layers, n_outputs)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return (self.n_inputs, *self.hidden, self.n_outputs)

    @property
    def shapes(self) -> List[Tuple[int, int]]:
        """``(n_in, n_out)`` weight shape of every layer."""
        sizes = self.sizes
        return list(zip(sizes[:-1], sizes[1:]))

    @property
    def n_params(self) -> int:
        return sum(n_in * n_out + n_out for n_in, n_out in self.shapes)


def unflatten(topology: Topology, params: FloatArray) -> List[Layer]:
    """Split a flat vector, or a ``(B, P)`` batch of them, into per-layer
    weight matrices and bias vectors.

    Layers are laid out one after another, weights (row-major, shape
    ``(n_in, n_out)``) before biases. The returned arrays are views.
    """
    params = np.asarray(params, dtype=np.float64)

    if params.shape[-1] != topology.n_params:
        raise DimensionMismatchError.from_sizes(
            "Parameter vector", topology.n_params, params.shape[-1]
        )

    lead = params.shape[:-1]
    layers: List[Layer] = []
    at = 0

    for n_in, n_out in topology.shapes:
        w = params[..., at:at + n_in * n_out].reshape(*lead, n_in, n_out)
        at += n_in * n_out
        b = params[..., at:at + n_out]
        at += n_out
        layers.append((w, b))

    return layers


def flatten(layers: List[Layer]) -> FloatArray:
    """Inverse of :func:`unflatten` for a single parameter vector."""
    return np.concatenate([
        part for w, b in layers for part in (np.ravel(w), np.ravel(b))
    ])


def random_init(
    topology: Topology,
    rng: Rng,
    n: Optional[int] = None,
    lower: float = -1.0,
    upper: float = 1.0
) -> FloatArray:
    """Draw parameters uniformly in ``[lower, upper]``.

    Returns a single vector, or an ``(n, P)`` matrix when ``n`` is given.
    """
    size = topology.n_params if n is None else (n, topology.n_params)
    return rng.uniform(lower, upper, size=size)


def _check_obs(topology: Topology, obs: FloatArray) -> FloatArray:
    obs = np.asarray(obs, dtype=np.float64)

    if obs.shape[-1] != topology.n_inputs:
        raise DimensionMismatchError.from_sizes(
            "Observation", topology.n_inputs, obs.shape[-1]
        )

    return obs


@dataclass(frozen=True, eq=False)
class MlpPolicy:
    """A perceptron with fixed parameters.

    Hidden and output layers use ``tanh``; outputs are multiplied by
    ``output_scale`` so they stay within the environment's action bounds.

    Attributes
    ----------
    topology: :class:`Topology`
        The layer sizes.
    params: :class:`numpy.ndarray`
        Flat parameter vector.
    output_scale: Union[:class:`float`, :class:`numpy.ndarray`]
        Scalar or per-output action bound.
        |default| ``1.0``
    """
    topology: Topology
    params: FloatArray
    output_scale: Scale = 1.0

    def __post_init__(self):
        params = np.array(self.params, dtype=np.float64)
        params.flags.writeable = False

        if params.shape != (self.topology.n_params,):
            raise DimensionMismatchError.from_sizes(
                "Parameter vector", self.topology.n_params, params.size
            )

        object.__setattr__(self, "params", params)
        object.__setattr__(
            self, "_layers", unflatten(self.topology, params)
        )

    @property
    def n_inputs(self) -> int:
        return self.topology.n_inputs

    @property
    def n_outputs(self) -> int:
        return self.topology.n_outputs

    def forward(self, obs: FloatArray) -> FloatArray:
        """Map one observation, or a ``(B, n_inputs)`` batch, to actions.

        Raises
        ------
        DimensionMismatchError
            The observation length is not ``n_inputs``.
        """
        x = _check_obs(self.topology, obs)

        for w, b in self._layers:
            x = np.tanh(x @ w + b)

        return x * self.output_scale


class MlpBatch:
    """Many perceptrons of one topology evaluated side by side.

    Parameters
    ----------
    topology: :class:`Topology`
        Shared layer sizes.
    params: :class:`numpy.ndarray`
        ``(B, P)`` parameter matrix, one policy per row.
    output_scale: Union[:class:`float`, :class:`numpy.ndarray`]
        Scalar or per-output action bound.
    """

    def __init__(
        self, topology: Topology, params: FloatArray, output_scale: Scale = 1.0
    ):
        params = np.atleast_2d(np.asarray(params, dtype=np.float64))

        self.topology = topology
        self.output_scale = output_scale
        self._layers = unflatten(topology, params)
        self.size = len(params)

    def __len__(self) -> int:
        return self.size

    def forward(self, obs: FloatArray) -> FloatArray:
        """Row ``i`` of ``obs`` is fed to policy ``i``; a single
        observation is broadcast to every policy.
        """
        x = _check_obs(self.topology, obs)
        x = np.broadcast_to(x, (self.size, self.topology.n_inputs))

        for w, b in self._layers:
            x = np.tanh(np.matmul(x[:, None, :], w)[:, 0, :] + b)

        return x * self.output_scale
