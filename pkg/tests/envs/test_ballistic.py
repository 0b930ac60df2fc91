# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import numpy as np
import pytest

from dslab.envs import (
    ArmSpec, Ballistic3D, ballistic_rollout, forward_kinematics, jacobian,
    reachable_bounds, throw
)
from dslab.exceptions import InvalidInputError
from dslab.policies import random_init


def rot_z(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0, 0], [s, c, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def rot_y(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0, s, 0], [0, 1, 0, 0], [-s, 0, c, 0], [0, 0, 0, 1]])


def shift_x(d):
    t = np.eye(4)
    t[0, 3] = d
    return t


def transform_chain(spec, angles):
    """Homogeneous transform oracle of the end effector."""
    lengths = spec.segment_lengths
    t = rot_z(angles[0]) @ shift_x(lengths[0])

    for angle, length in zip(angles[1:], lengths[1:]):
        # positive pitch raises the arm
        t = t @ rot_y(-angle) @ shift_x(length)

    return (t @ np.array([0, 0, 0, 1.0]))[:3]


def stepped_flight(release, velocity, g, dt=1e-5):
    """Fly with exact constant-gravity steps, interpolating the crossing."""
    p, v = np.array(release), np.array(velocity)

    while True:
        q = p + v * dt
        q[2] -= 0.5 * g * dt * dt
        v = v.copy()
        v[2] -= g * dt

        if q[2] <= 0:
            frac = p[2] / (p[2] - q[2])
            return p[:2] + frac * (q[:2] - p[:2])

        p = q


class TestKinematics:

    def test_zero_pose(self):
        spec = ArmSpec()
        np.testing.assert_allclose(
            forward_kinematics(spec, np.zeros(4)), [1.0, 0.0, 0.0]
        )

    def test_base_rotation_mirrors(self, rng):
        spec = ArmSpec()
        angles = rng.uniform(-1, 1, 4)
        turned = angles + np.array([np.pi, 0, 0, 0])

        a = forward_kinematics(spec, angles)
        b = forward_kinematics(spec, turned)
        np.testing.assert_allclose(b[:2], -a[:2], atol=1e-12)
        assert b[2] == pytest.approx(a[2])

    def test_transform_oracle(self, rng):
        spec = ArmSpec(segment_lengths=(0.3, 0.2, 0.25, 0.1))

        for angles in rng.uniform(-np.pi, np.pi, (20, 4)):
            np.testing.assert_allclose(
                forward_kinematics(spec, angles),
                transform_chain(spec, angles), atol=1e-10
            )

    def test_jacobian_finite_differences(self, rng):
        spec = ArmSpec()
        angles = rng.uniform(-1, 1, 4)
        h = 1e-6

        numeric = np.stack([
            (forward_kinematics(spec, angles + h * e)
             - forward_kinematics(spec, angles - h * e)) / (2 * h)
            for e in np.eye(4)
        ], axis=1)
        np.testing.assert_allclose(jacobian(spec, angles), numeric, atol=1e-8)

    @pytest.mark.parametrize("values", [
        dict(segment_lengths=(0.1, 0.1, 0.1)),
        dict(segment_lengths=(0.1, -0.1, 0.1, 0.1)),
        dict(gravity=0.0),
        dict(joint_velocity_bound=0.0),
    ])
    def test_invalid_spec(self, values):
        with pytest.raises(InvalidInputError):
            ArmSpec(**values)


class TestThrow:

    def test_no_throw_drops_in_place(self):
        env = Ballistic3D()
        spec = env.spec
        trajectory = ballistic_rollout(
            spec, env.policy(np.zeros(env.topology.n_params))
        )

        expected = forward_kinematics(spec, spec.initial_angles)[:2]
        np.testing.assert_allclose(trajectory.outcome, expected, atol=1e-15)
        assert trajectory.states.shape == (3, 3)
        assert trajectory.states[-1, 2] == 0.0

    def test_vertical_release(self):
        # the last joint moves the tip straight up in the initial pose
        spec = ArmSpec(control_dt=0.0)
        flight = throw(spec, np.array([0.0, 0.0, 0.0, 1.0]))

        np.testing.assert_allclose(flight.velocity[:2], 0.0, atol=1e-15)
        np.testing.assert_allclose(
            flight.impact[:2], flight.release[:2], atol=1e-15
        )

    def test_velocities_are_clamped(self):
        spec = ArmSpec()
        a = throw(spec, np.array([5.0, -5.0, 5.0, -5.0]))
        b = throw(spec, np.array([1.0, -1.0, 1.0, -1.0]))
        np.testing.assert_array_equal(a.impact, b.impact)

    def test_matches_stepped_flight(self, rng):
        env = Ballistic3D()

        for params in random_init(env.topology, rng, n=3):
            policy = env.policy(params)
            command = env.act(env.spec, policy.forward(env.observe(env.spec)))
            flight = throw(env.spec, command)

            np.testing.assert_allclose(
                env.rollout(policy).outcome,
                stepped_flight(
                    flight.release, flight.velocity, env.spec.gravity
                ),
                atol=1e-6
            )

    def test_batch_matches_rollouts(self, rng):
        env = Ballistic3D()
        params = random_init(env.topology, rng, n=10)

        for row, outcome in zip(params, env.evaluate(params)):
            np.testing.assert_allclose(
                env.rollout(env.policy(row)).outcome, outcome, atol=1e-12
            )


class TestReachableBounds:

    def test_degenerate_arm(self):
        bounds = reachable_bounds(ArmSpec(segment_lengths=(0, 0, 0, 0)))
        assert bounds.upper == (1e-6, 1e-6)
        assert bounds.lower == (-1e-6, -1e-6)

    def test_symmetric(self):
        bounds = Ballistic3D().reachable_bounds()
        assert bounds.lower == tuple(-u for u in bounds.upper)

    def test_covers_random_throws(self, rng):
        env = Ballistic3D()
        bounds = env.reachable_bounds()

        impacts = throw(env.spec, rng.uniform(-1, 1, (100_000, 4))).impact
        assert np.all(bounds.contains(impacts[:, :2]))

        outcomes = env.evaluate(random_init(env.topology, rng, n=2000))
        assert np.all(bounds.contains(outcomes))
