# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import TYPE_CHECKING, NamedTuple, Tuple

import numpy as np

from . import __package__
from .base import Environment, Trajectory
from ..core.archive import OutcomeBounds
from ..exceptions import InvalidInputError

if TYPE_CHECKING:
    from ..policies.mlp import MlpBatch, MlpPolicy
    from ..utils.types import FloatArray


_log = logging.getLogger(__package__)

N_JOINTS = 4

# Velocity levels per joint when sweeping for the outcome bounds.
_SWEEP_LEVELS = 11
_BOUNDS_MARGIN = 1.05
_MIN_HALF_WIDTH = 1e-6


@dataclass(frozen=True)
class ArmSpec:
    """A four joint throwing arm.

    Joint 0 yaws the arm about the vertical axis. Segment 0 is horizontal;
    joints 1 to 3 pitch the following segments in the vertical arm plane,
    angles accumulating along the chain. With every angle at zero the arm
    lies along the x axis.

    Attributes
    ----------
    segment_lengths: Tuple[:class:`float`, ...]
        Segment lengths in meters. Zero is accepted so that a degenerate
        arm, which releases every throw from the base, can be built.
        |default| ``(0.25, 0.25, 0.25, 0.25)``
    joint_velocity_bound: :class:`float`
        Commanded joint velocities are clamped to ``±`` this, in rad/s.
        |default| ``1.0``
    gravity: :class:`float`
        Downward acceleration in m/s².
        |default| ``9.81``
    control_dt: :class:`float`
        Duration of the acceleration step in seconds.
        |default| ``0.1``
    initial_angles: Tuple[:class:`float`, ...]
        Joint angles before the throw, in radians.
        |default| ``(0, π/4, -π/4, 0)``
    """
    segment_lengths: Tuple[float, ...] = (0.25, 0.25, 0.25, 0.25)
    joint_velocity_bound: float = 1.0
    gravity: float = 9.81
    control_dt: float = 0.1
    initial_angles: Tuple[float, ...] = (0.0, np.pi / 4, -np.pi / 4, 0.0)

    def __post_init__(self):
        for name in ("segment_lengths", "initial_angles"):
            value = tuple(map(float, getattr(self, name)))
            object.__setattr__(self, name, value)

            if len(value) != N_JOINTS:
                raise InvalidInputError(
                    f"{name} needs {N_JOINTS} values (got {len(value)})."
                )

        if min(self.segment_lengths) < 0:
            raise InvalidInputError("Segment lengths must not be negative.")

        if not self.gravity > 0:
            raise InvalidInputError("Gravity must be positive.")

        if not self.joint_velocity_bound > 0:
            raise InvalidInputError(
                "The joint velocity bound must be positive."
            )

        if self.control_dt < 0:
            raise InvalidInputError("control_dt must not be negative.")


def _chain(spec: ArmSpec, angles: FloatArray):
    angles = np.asarray(angles, dtype=np.float64)
    lengths = np.asarray(spec.segment_lengths)
    yaw = angles[..., 0]
    pitch = np.cumsum(angles[..., 1:], axis=-1)
    return lengths, yaw, pitch


def forward_kinematics(spec: ArmSpec, angles: FloatArray) -> FloatArray:
    """End effector position for joint angles ``(..., 4)``."""
    lengths, yaw, pitch = _chain(spec, angles)

    radial = lengths[0] + np.sum(lengths[1:] * np.cos(pitch), axis=-1)
    height = np.sum(lengths[1:] * np.sin(pitch), axis=-1)

    return np.stack(
        [radial * np.cos(yaw), radial * np.sin(yaw), height], axis=-1
    )


def jacobian(spec: ArmSpec, angles: FloatArray) -> FloatArray:
    """``(..., 3, 4)`` derivative of :func:`forward_kinematics`."""
    lengths, yaw, pitch = _chain(spec, angles)

    # joint j moves every segment after it: reversed cumulative sums
    d_radial = -np.flip(np.cumsum(
        np.flip(lengths[1:] * np.sin(pitch), -1), axis=-1
    ), -1)
    d_height = np.flip(np.cumsum(
        np.flip(lengths[1:] * np.cos(pitch), -1), axis=-1
    ), -1)
    radial = lengths[0] + np.sum(lengths[1:] * np.cos(pitch), axis=-1)

    cos, sin = np.cos(yaw), np.sin(yaw)
    jac = np.zeros(np.shape(yaw) + (3, N_JOINTS))

    jac[..., 0, 0] = -radial * sin
    jac[..., 1, 0] = radial * cos
    jac[..., 0, 1:] = d_radial * cos[..., None]
    jac[..., 1, 1:] = d_radial * sin[..., None]
    jac[..., 2, 1:] = d_height
    return jac


class Throw(NamedTuple):
    """Closed form flight of a batch of throws."""
    release: FloatArray
    velocity: FloatArray
    impact: FloatArray
    flight_time: FloatArray


def throw(spec: ArmSpec, joint_velocities: FloatArray) -> Throw:
    """Release the projectile after one control step at the given joint
    velocities and fly it to the ``z = 0`` plane.

    Velocities are clamped to the joint bound. A release point below the
    plane is its own impact point.
    """
    omega = np.clip(
        np.asarray(joint_velocities, dtype=np.float64),
        -spec.joint_velocity_bound, spec.joint_velocity_bound
    )
    angles = np.asarray(spec.initial_angles) + omega * spec.control_dt

    release = forward_kinematics(spec, angles)
    velocity = np.einsum("...ij,...j->...i", jacobian(spec, angles), omega)

    z0, vz = release[..., 2], velocity[..., 2]
    g = spec.gravity
    t = np.where(
        z0 < 0, 0.0, (vz + np.sqrt(vz * vz + 2 * g * np.maximum(z0, 0))) / g
    )

    impact = release + velocity * t[..., None]
    impact[..., 2] = np.where(z0 < 0, z0, 0.0)
    return Throw(release, velocity, impact, t)


def ballistic_rollout(spec: ArmSpec, policy: MlpPolicy) -> Trajectory:
    """Throw with the joint velocities commanded by ``policy``.

    The states are the end effector before the throw, the release point
    and the impact point; the outcome is the impact ``(x, y)``.

    Raises
    ------
    DimensionMismatchError
        The policy does not map 5 inputs to 5 outputs.
    """
    Ballistic3D.check_policy(policy)
    command = Ballistic3D.act(spec, policy.forward(Ballistic3D.observe(spec)))
    flight = throw(spec, command)

    states = np.stack([
        forward_kinematics(spec, spec.initial_angles),
        flight.release,
        flight.impact
    ])
    return Trajectory(states, flight.impact[:2].copy())


def reachable_bounds(spec: ArmSpec) -> OutcomeBounds:
    """Symmetric square holding every impact point.

    The half width is the largest impact coordinate over a grid sweep of
    the joint velocity box, widened by a margin.
    """
    bound = spec.joint_velocity_bound
    levels = np.linspace(-bound, bound, _SWEEP_LEVELS)
    grid = np.asarray(list(product(levels, repeat=N_JOINTS)))

    impact = throw(spec, grid).impact[:, :2]
    half = float(np.max(np.abs(impact))) * _BOUNDS_MARGIN

    return OutcomeBounds.square(max(half, _MIN_HALF_WIDTH))


class Ballistic3D(Environment):
    """Projectile throw: the outcome is the impact point on the ground.

    Policies see the initial joint angles and a constant ``1.0``. The
    first four outputs are joint velocities; the fifth is unused.

    Parameters
    ----------
    spec: Optional[:class:`ArmSpec`]
        Arm geometry, defaults to :class:`ArmSpec()`.
    """
    name = "ballistic3d"
    n_inputs = 5
    n_outputs = 5

    def __init__(
        self, spec: ArmSpec = None, n_layers: int = 2, n_neurons: int = 50
    ):
        super().__init__(n_layers, n_neurons)
        self.spec = spec or ArmSpec()

    @property
    def output_scale(self) -> float:
        return self.spec.joint_velocity_bound

    @staticmethod
    def observe(spec: ArmSpec) -> FloatArray:
        return np.append(np.asarray(spec.initial_angles), 1.0)

    @staticmethod
    def act(spec: ArmSpec, output: FloatArray) -> FloatArray:
        return np.asarray(output)[..., :N_JOINTS]

    @cached_property
    def _bounds(self) -> OutcomeBounds:
        bounds = reachable_bounds(self.spec)
        _log.debug("Ballistic outcome bounds: %s", bounds)
        return bounds

    def reachable_bounds(self) -> OutcomeBounds:
        return self._bounds

    def rollout(self, policy: MlpPolicy) -> Trajectory:
        return ballistic_rollout(self.spec, policy)

    def _evaluate_batch(self, batch: MlpBatch) -> FloatArray:
        command = self.act(self.spec, batch.forward(self.observe(self.spec)))
        return throw(self.spec, command).impact[:, :2]
