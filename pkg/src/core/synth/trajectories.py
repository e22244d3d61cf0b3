"""
Target Trajectories
Position and velocity of a synthetic target in the radar frame over time.
"""

import numpy as np

from shared.models import TrajectoryKind, TrajectorySpec

# Central-difference step for velocities (seconds)
VELOCITY_STEP = 1e-3


def position_at(spec: TrajectorySpec, t: float) -> np.ndarray:
    """Radar-frame position (m) of the target at time t (s)."""
    if spec.kind is TrajectoryKind.LINEAR:
        return np.asarray(spec.start, dtype=float) + np.asarray(spec.velocity, dtype=float) * t
    if spec.kind is TrajectoryKind.CIRCULAR:
        angle = spec.phase + spec.angular_rate * t
        offset = spec.radius * np.array([np.cos(angle), np.sin(angle), 0.0])
        return np.asarray(spec.center, dtype=float) + offset

    samples = np.asarray(spec.waypoints, dtype=float)
    # np.interp holds the end values outside the sampled span
    return np.array([np.interp(t, samples[:, 0], samples[:, axis]) for axis in (1, 2, 3)])


def velocity_at(spec: TrajectorySpec, t: float) -> np.ndarray:
    """Radar-frame velocity (m/s) at time t."""
    if spec.kind is TrajectoryKind.LINEAR:
        return np.asarray(spec.velocity, dtype=float)
    ahead = position_at(spec, t + VELOCITY_STEP)
    behind = position_at(spec, t - VELOCITY_STEP)
    return (ahead - behind) / (2.0 * VELOCITY_STEP)


def radial_velocity(position: np.ndarray, velocity: np.ndarray) -> float:
    """Range rate seen by a radar at the origin; 0 for a target at the origin."""
    distance = float(np.linalg.norm(position))
    if distance == 0.0:
        return 0.0
    return float(position @ velocity) / distance
