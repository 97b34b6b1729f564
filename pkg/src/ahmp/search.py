"""Graph search and the sampling-tree baseline.

A* uses the weighted configuration distance to the goal as its heuristic;
edge weights are the same metric, so the heuristic is admissible and
consistent.  Expansion counts, not wall time, are the comparison currency.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import (Configuration, JointLimits, KinematicChain, config_distance,
                    make_rng)
from .roadmap import Roadmap
from .world import Environment, configs_free_batch, is_segment_free

_STREAM_RRT = 2


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    nodes_generated: int = 0
    wall_time: float = 0.0

    def merge(self, other: SearchStats) -> SearchStats:
        return SearchStats(self.nodes_expanded + other.nodes_expanded,
                           self.nodes_generated + other.nodes_generated,
                           self.wall_time + other.wall_time)


@dataclass
class SearchResult:
    path: list[int]
    cost: float
    stats: SearchStats

    @property
    def found(self) -> bool:
        return bool(self.path)


def astar(rm: Roadmap, start: int, goal: int,
          exclude_edges: frozenset | None = None) -> SearchResult:
    """Optimal path between roadmap nodes; empty path on failure.

    Deterministic: ties on f broken by lower h, then lower node index.
    """
    n = rm.n_nodes
    if not (0 <= start < n) or not (0 <= goal < n):
        raise IndexError(f"node index out of range (n={n})")
    t0 = time.perf_counter()
    indptr, nbrs, wts = rm.csr(exclude_edges)
    h = _kernels.weighted_dists(rm.coords(), rm.coords()[goal], rm.weights)
    path, cost, expanded, generated = _kernels.astar_csr(
        indptr, nbrs, wts, h, np.int64(start), np.int64(goal))
    wall = time.perf_counter() - t0
    return SearchResult([int(i) for i in path], float(cost),
                        SearchStats(int(expanded), int(generated), wall))


@dataclass(frozen=True)
class RrtParams:
    seed: int
    max_iter: int = 5000
    step_size: float = 0.3
    goal_bias: float = 0.05
    goal_tolerance: float = 0.1

    def __post_init__(self):
        if self.max_iter <= 0:
            raise ValueError("max_iter must be positive")
        if self.step_size <= 0.0:
            raise ValueError("step_size must be positive")
        if not 0.0 <= self.goal_bias <= 1.0:
            raise ValueError("goal_bias must lie in [0, 1]")
        if self.goal_tolerance < 0.0:
            raise ValueError("goal_tolerance must be nonnegative")


def rrt_plan(env: Environment, chain: KinematicChain, limits: JointLimits,
             start: Configuration, goal: Configuration, params: RrtParams,
             weights=None) -> tuple[list[Configuration], SearchStats]:
    """Grow a tree from start toward seeded samples until within goal_tolerance.

    Returns the start-to-goal polyline (empty on failure).  nodes_expanded
    counts successful tree extensions, nodes_generated sampled targets.
    """
    from .model import DEFAULT_WEIGHTS

    w = DEFAULT_WEIGHTS if weights is None else np.asarray(weights, dtype=np.float64)
    if not configs_free_batch(env, chain, start.values[None, :])[0]:
        raise ValueError("start configuration is in collision")
    t0 = time.perf_counter()
    rng = make_rng(params.seed, _STREAM_RRT)
    span = limits.upper - limits.lower
    buf = np.empty((params.max_iter + 1, 5))
    buf[0] = start.values
    parent = np.full(params.max_iter + 1, -1, dtype=np.int64)
    n = 1
    expanded = 0
    generated = 0
    reached = -1
    if config_distance(start, goal, w) <= params.goal_tolerance:
        reached = 0
    it = 0
    while reached < 0 and it < params.max_iter:
        it += 1
        generated += 1
        if rng.random() < params.goal_bias:
            target = goal.values
        else:
            target = limits.lower + rng.random(5) * span
        dists = _kernels.weighted_dists(buf[:n], target, w)
        near = int(np.argmin(dists))
        d = float(dists[near])
        if d == 0.0:
            continue
        if d <= params.step_size:
            new = target
        else:
            new = buf[near] + (params.step_size / d) * (target - buf[near])
        if not is_segment_free(env, chain, Configuration(buf[near]),
                               Configuration(new), w):
            continue
        buf[n] = new
        parent[n] = near
        expanded += 1
        if config_distance(Configuration(new), goal, w) <= params.goal_tolerance:
            reached = n
        n += 1
    wall = time.perf_counter() - t0
    stats = SearchStats(expanded, generated, wall)
    if reached < 0:
        return [], stats
    rev = []
    i = reached
    while i >= 0:
        rev.append(Configuration(buf[i]))
        i = int(parent[i])
    return rev[::-1], stats


def polyline_cost(path: list[Configuration], weights=None) -> float:
    total = 0.0
    for a, b in zip(path, path[1:]):
        total += config_distance(a, b, weights)
    return total
