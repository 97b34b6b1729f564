"""Configuration-space model of a 5-DOF floating-base manipulator.

The robot is a 4-revolute-joint arm mounted on a 1-DOF prismatic base that
heaves along +z.  A configuration is five reals: base heave in metres
followed by four joint angles in radians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels

N_DOF = 5

DEFAULT_WEIGHTS = np.ones(N_DOF)


def _as_vector(values, size: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != (size,):
        raise ValueError(f"{name} must have shape ({size},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class Configuration:
    """One point in configuration space: [heave_m, q1, q2, q3, q4]."""

    values: np.ndarray

    def __post_init__(self):
        arr = _as_vector(self.values, N_DOF, "configuration")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def clamped(cls, values, limits: JointLimits) -> Configuration:
        """Build a configuration, clamping each entry into its limit interval."""
        arr = _as_vector(values, N_DOF, "configuration")
        return cls(np.clip(arr, limits.lower, limits.upper))

    @classmethod
    def validated(cls, values, limits: JointLimits) -> Configuration:
        """Build a configuration, rejecting entries outside the limits."""
        arr = _as_vector(values, N_DOF, "configuration")
        if np.any(arr < limits.lower) or np.any(arr > limits.upper):
            raise ValueError("configuration outside joint limits")
        return cls(arr)


@dataclass(frozen=True)
class JointLimits:
    """Per-DOF closed intervals [lower_k, upper_k]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = _as_vector(self.lower, N_DOF, "lower limits")
        hi = _as_vector(self.upper, N_DOF, "upper limits")
        if np.any(lo > hi):
            raise ValueError("lower limit exceeds upper limit")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def contains(self, q: Configuration) -> bool:
        return bool(np.all(q.values >= self.lower) and np.all(q.values <= self.upper))


@dataclass(frozen=True)
class Pose3:
    """A workspace position target for the end-effector."""

    position: np.ndarray

    def __post_init__(self):
        pos = _as_vector(self.position, 3, "position")
        pos.setflags(write=False)
        object.__setattr__(self, "position", pos)


def _unit(v, name: str) -> np.ndarray:
    arr = _as_vector(v, 3, name)
    n = float(np.linalg.norm(arr))
    if n == 0.0:
        raise ValueError(f"{name} must be nonzero")
    return arr / n


# Default joint axes: yaw about z, then three pitch joints about y.  This
# gives the arm a nonplanar reachable volume inside the tank.
DEFAULT_JOINT_AXES = np.array(
    [
        [0.0, 0.0, 1.0],
        [0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class KinematicChain:
    """Prismatic base plus a 4-link serial arm.

    Each link extends along the local +x axis of its joint frame; joint k
    rotates about the fixed local axis ``joint_axes[k]``.  The prismatic base
    translates the whole arm along ``base_axis`` (default +z).
    """

    link_lengths: np.ndarray
    joint_axes: np.ndarray = field(default_factory=lambda: DEFAULT_JOINT_AXES.copy())
    base_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    mount_offset: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        lengths = _as_vector(self.link_lengths, 4, "link_lengths")
        if np.any(lengths <= 0.0):
            raise ValueError("link lengths must be positive")
        axes = np.asarray(self.joint_axes, dtype=np.float64)
        if axes.shape != (4, 3):
            raise ValueError("joint_axes must have shape (4, 3)")
        axes = np.stack([_unit(axes[i], f"joint axis {i}") for i in range(4)])
        base = _unit(self.base_axis, "base_axis")
        mount = _as_vector(self.mount_offset, 3, "mount_offset")
        for arr, nm in ((lengths, "link_lengths"), (axes, "joint_axes"),
                        (base, "base_axis"), (mount, "mount_offset")):
            arr.setflags(write=False)
            object.__setattr__(self, nm, arr)


def forward_kinematics(chain: KinematicChain, q: Configuration) -> np.ndarray:
    """Frame origins for a configuration: shape (5, 3), last row = end-effector.

    Row 0 is the arm mount after base heave; row k is the tip of link k.
    """
    frames = _kernels.fk_frames(
        q.values[None, :], chain.base_axis, chain.joint_axes,
        chain.link_lengths, chain.mount_offset,
    )
    return frames[0]


def fk_batch(chain: KinematicChain, qs: np.ndarray) -> np.ndarray:
    """Frame origins for a (m, 5) batch of raw configurations: shape (m, 5, 3)."""
    qs = np.ascontiguousarray(qs, dtype=np.float64)
    return _kernels.fk_frames(
        qs, chain.base_axis, chain.joint_axes, chain.link_lengths, chain.mount_offset
    )


def config_distance(a: Configuration, b: Configuration, weights=None) -> float:
    """Weighted Euclidean metric sqrt(sum_k w_k^2 (a_k - b_k)^2)."""
    w = DEFAULT_WEIGHTS if weights is None else _as_vector(weights, N_DOF, "weights")
    if np.any(w <= 0.0):
        raise ValueError("metric weights must be positive")
    acc = 0.0
    for k in range(N_DOF):
        d = w[k] * (a.values[k] - b.values[k])
        acc += d * d
    return math.sqrt(acc)


def interpolate(a: Configuration, b: Configuration, t: float) -> Configuration:
    """Straight-line interpolation in configuration space, t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"interpolation parameter {t} outside [0, 1]")
    return Configuration(a.values + t * (b.values - a.values))


def sample_uniform(limits: JointLimits, rng: np.random.Generator) -> Configuration:
    """Draw one configuration uniformly inside the joint-limit box."""
    u = rng.random(N_DOF)
    return Configuration(limits.lower + u * (limits.upper - limits.lower))


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Seeded PCG64 generator; extra ints derive independent named streams."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, stream)])))
