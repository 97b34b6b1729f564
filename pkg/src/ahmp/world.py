"""Tank environment: bounds box, sphere/box obstacles, collision queries.

Collision checking is a probe-point model: the five frame origins of the arm
plus the four midpoints between consecutive frames must lie inside the tank
bounds and outside every obstacle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .model import Configuration, KinematicChain, _as_vector

DEFAULT_BOUNDS_MIN = np.zeros(3)
DEFAULT_BOUNDS_MAX = np.array([3.5, 3.0, 2.5])
DEFAULT_CHECK_RESOLUTION = 0.05


class CollisionError(ValueError):
    """Raised when a query requires a collision-free configuration."""


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = _as_vector(self.center, 3, "sphere center")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        if not self.radius > 0.0:
            raise ValueError("sphere radius must be positive")


@dataclass(frozen=True)
class Box:
    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        lo = _as_vector(self.min_corner, 3, "box min corner")
        hi = _as_vector(self.max_corner, 3, "box max corner")
        if np.any(lo >= hi):
            raise ValueError("box min corner must be strictly below max corner")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "min_corner", lo)
        object.__setattr__(self, "max_corner", hi)


Obstacle = Sphere | Box


def _pack_obstacles(obstacles) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    k = len(obstacles)
    kind = np.zeros(k, dtype=np.int8)
    a = np.zeros((k, 3))
    b = np.zeros((k, 3))
    for i, obs in enumerate(obstacles):
        if isinstance(obs, Sphere):
            kind[i] = 0
            a[i] = obs.center
            b[i, 0] = obs.radius
        elif isinstance(obs, Box):
            kind[i] = 1
            a[i] = obs.min_corner
            b[i] = obs.max_corner
        else:
            raise TypeError(f"unsupported obstacle type {type(obs).__name__}")
    return kind, a, b


@dataclass(frozen=True)
class Environment:
    """Immutable tank description; build a new one to change obstacles."""

    bounds_min: np.ndarray = field(default_factory=lambda: DEFAULT_BOUNDS_MIN.copy())
    bounds_max: np.ndarray = field(default_factory=lambda: DEFAULT_BOUNDS_MAX.copy())
    obstacles: tuple = ()
    check_resolution: float = DEFAULT_CHECK_RESOLUTION

    def __post_init__(self):
        lo = _as_vector(self.bounds_min, 3, "bounds_min")
        hi = _as_vector(self.bounds_max, 3, "bounds_max")
        if np.any(lo >= hi):
            raise ValueError("bounds_min must be strictly below bounds_max")
        if not self.check_resolution > 0.0:
            raise ValueError("check_resolution must be positive")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "bounds_min", lo)
        object.__setattr__(self, "bounds_max", hi)
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        kind, a, b = _pack_obstacles(self.obstacles)
        object.__setattr__(self, "_obs_kind", kind)
        object.__setattr__(self, "_obs_a", a)
        object.__setattr__(self, "_obs_b", b)

    def with_obstacles(self, obstacles) -> Environment:
        return Environment(self.bounds_min, self.bounds_max, tuple(obstacles),
                           self.check_resolution)

    def packed(self):
        return self._obs_kind, self._obs_a, self._obs_b


def probe_points(chain: KinematicChain, q: Configuration) -> np.ndarray:
    """The 9 collision probe points for one configuration, shape (9, 3)."""
    from .model import fk_batch

    return _kernels.probe_points(fk_batch(chain, q.values[None, :]))[0]


def is_config_free(env: Environment, chain: KinematicChain, q: Configuration) -> bool:
    return bool(configs_free_batch(env, chain, q.values[None, :])[0])


def configs_free_batch(env: Environment, chain: KinematicChain, qs: np.ndarray) -> np.ndarray:
    """Vector of free/colliding verdicts for a (m, 5) batch of raw configs."""
    from .model import fk_batch

    kind, a, b = env.packed()
    probes = _kernels.probe_points(fk_batch(chain, qs))
    return _kernels.configs_free(probes, env.bounds_min, env.bounds_max, kind, a, b)


def is_segment_free(env: Environment, chain: KinematicChain,
                    a: Configuration, b: Configuration, weights=None) -> bool:
    """Check the straight segment a->b at spacing <= check_resolution.

    Checks interpolated configurations on an evenly spaced grid that always
    includes both endpoints; a == b degenerates to a single check.
    """
    from .model import DEFAULT_WEIGHTS

    w = DEFAULT_WEIGHTS if weights is None else np.asarray(weights, dtype=np.float64)
    kind, oa, ob = env.packed()
    return bool(_kernels.segment_free(
        a.values, b.values, w, env.check_resolution,
        chain.base_axis, chain.joint_axes, chain.link_lengths, chain.mount_offset,
        env.bounds_min, env.bounds_max, kind, oa, ob,
    ))


def segments_free_batch(env: Environment, chain: KinematicChain,
                        A: np.ndarray, B: np.ndarray, weights) -> np.ndarray:
    """Per-edge free verdicts for raw endpoint arrays A, B of shape (m, 5)."""
    kind, oa, ob = env.packed()
    return _kernels.segments_free(
        np.ascontiguousarray(A), np.ascontiguousarray(B),
        np.asarray(weights, dtype=np.float64), env.check_resolution,
        chain.base_axis, chain.joint_axes, chain.link_lengths, chain.mount_offset,
        env.bounds_min, env.bounds_max, kind, oa, ob,
    )


def signed_clearance(env: Environment, chain: KinematicChain, q: Configuration) -> float:
    """Min signed distance over probes; negative when colliding. No precondition."""
    from .model import fk_batch

    kind, a, b = env.packed()
    probes = _kernels.probe_points(fk_batch(chain, q.values[None, :]))
    return float(_kernels.signed_clearances(probes, env.bounds_min, env.bounds_max,
                                            kind, a, b)[0])


def min_clearance(env: Environment, chain: KinematicChain, q: Configuration) -> float:
    """Distance from the nearest probe point to the nearest obstacle or wall.

    Raises CollisionError when q is not collision-free.
    """
    if not is_config_free(env, chain, q):
        raise CollisionError("configuration is in collision")
    return signed_clearance(env, chain, q)
