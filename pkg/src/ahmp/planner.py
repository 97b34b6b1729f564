"""Multi-goal planner that reuses cached highway paths between queries.

For every goal in sequence: refresh primitive uncertainties from the
network, try to reuse a cached path whose terminal lies near the goal, and
otherwise fall back to a full A* query.  Successful paths are cached so
later goals in the same region become cheap.

When ``revalidate_cached`` is on, cached paths and every candidate result
are re-checked against the current environment before being returned;
edges that fail are deactivated for the rest of the call and the search
retries without them, so a changed environment can force the full-A*
fallback but never a colliding path.
"""
from __future__ import annotations

import numpy as np
from dataclasses import dataclass, field

from .bayesnet import BayesNet, Evidence
from .hms import (HmsStore, MotionPrimitive, cache_path, select_approach_node,
                  update_uncertainty)
from .model import Configuration, KinematicChain, Pose3, config_distance, fk_batch
from .roadmap import Roadmap, connect_query_node
from .search import SearchResult, SearchStats, astar
from .world import CollisionError, Environment, segments_free_batch

MODE_STITCHED = "hms_stitched"
MODE_FULL = "full_astar"
MODE_FAILED = "failed"


@dataclass(frozen=True)
class CostWeights:
    distance: float = 1.0
    uncertainty: float = 1.0
    energy: float = 0.0
    time: float = 0.0

    def __post_init__(self):
        vals = (self.distance, self.uncertainty, self.energy, self.time)
        if any(v < 0.0 for v in vals):
            raise ValueError("cost weights must be nonnegative")
        if not any(v > 0.0 for v in vals):
            raise ValueError("at least one cost weight must be positive")


@dataclass(frozen=True)
class PlannerConfig:
    tau: float = 1.0
    lambda_: float = 1.0
    alpha: float = 0.1
    clearance_threshold: float = 0.15
    cost_weights: CostWeights = field(default_factory=CostWeights)
    revalidate_cached: bool = True
    max_reroute_attempts: int = 25


def make_store(cfg: PlannerConfig) -> HmsStore:
    return HmsStore(cfg.tau, cfg.lambda_, cfg.alpha, cfg.clearance_threshold)


@dataclass(frozen=True)
class PlanRequest:
    start: Configuration | int
    goals: tuple
    evidence_schedule: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "goals", tuple(self.goals))
        object.__setattr__(self, "evidence_schedule", tuple(self.evidence_schedule))

    def evidence_for(self, i: int) -> Evidence:
        if i < len(self.evidence_schedule):
            return dict(self.evidence_schedule[i] or {})
        return {}


@dataclass
class GoalPlan:
    goal_index: int
    node: int
    path: list[int]
    cost: float
    composite: float
    mode: str
    stats: SearchStats
    cache_hit: bool


@dataclass
class PlanResult:
    goals: list[GoalPlan]
    start_node: int
    current_node: int

    def total_expanded(self) -> int:
        return sum(g.stats.nodes_expanded for g in self.goals)

    def total_cost(self) -> float:
        return sum(g.cost for g in self.goals if g.mode != MODE_FAILED)

    def modes(self) -> list[str]:
        return [g.mode for g in self.goals]


def resolve_goal(goal, rm: Roadmap, env: Environment,
                 chain: KinematicChain) -> int:
    """Map a goal to a roadmap node index.

    Configurations reuse an exact-duplicate node when one exists, otherwise
    they are connected as a new query node; Pose3 goals pick the node whose
    end-effector sits closest (ties to the lower index).
    """
    if isinstance(goal, Pose3):
        if rm.n_nodes == 0:
            raise ValueError("cannot resolve a pose goal on an empty roadmap")
        ee = fk_batch(chain, rm.coords())[:, -1, :]
        d = ee - goal.position
        return int(np.argmin(d[:, 0] ** 2 + d[:, 1] ** 2 + d[:, 2] ** 2))
    if isinstance(goal, Configuration):
        coords = rm.coords()
        if coords.shape[0]:
            exact = np.nonzero(np.all(coords == goal.values, axis=1))[0]
            if exact.size:
                from .world import configs_free_batch

                if not configs_free_batch(env, chain, goal.values[None, :])[0]:
                    raise CollisionError("goal configuration is in collision")
                return int(exact[0])
        return connect_query_node(rm, env, chain, goal)
    raise TypeError(f"goal must be Configuration or Pose3, got {type(goal).__name__}")


def stitch(partial_a: list[int], hms_path, partial_b: list[int]) -> list[int]:
    """Concatenate approach, cached highway, and departure, checking junctions."""
    hms_path = list(hms_path)
    if not partial_a or not hms_path or not partial_b:
        raise ValueError("stitch requires three nonempty segments")
    if partial_a[-1] != hms_path[0]:
        raise ValueError("approach segment does not end at the highway entry")
    if hms_path[-1] != partial_b[0]:
        raise ValueError("highway does not end where the departure starts")
    return list(partial_a) + hms_path[1:] + list(partial_b)[1:]


def path_cost(rm: Roadmap, path: list[int]) -> float:
    total = 0.0
    for u, v in zip(path, path[1:]):
        total += rm.edge_weight(u, v)
    return total


def composite_cost(path: list[int], store: HmsStore, cfg: PlannerConfig,
                   rm: Roadmap) -> float:
    """Report-only blended cost; never feeds back into edge weights.

    distance and energy terms use path length, the time term uses node
    count, and the uncertainty term averages the uncertainty of primitives
    sharing at least one node with the path (0 when none do).
    """
    length = path_cost(rm, path)
    nodes = set(path)
    shared = [p.uncertainty for p in store.primitives if nodes & set(p.path)]
    unc = sum(shared) / len(shared) if shared else 0.0
    w = cfg.cost_weights
    return (w.distance * length + w.uncertainty * unc
            + w.energy * length + w.time * len(path))


def _trivial(node: int) -> SearchResult:
    return SearchResult([node], 0.0, SearchStats(0, 0, 0.0))


def _search(rm: Roadmap, u: int, v: int, blocked: set) -> SearchResult:
    if u == v:
        return _trivial(u)
    return astar(rm, u, v, frozenset(blocked) if blocked else None)


def _absorb(stats: SearchStats, extra: SearchStats):
    stats.nodes_expanded += extra.nodes_expanded
    stats.nodes_generated += extra.nodes_generated
    stats.wall_time += extra.wall_time


def _bad_edges(rm: Roadmap, env: Environment, chain: KinematicChain,
               path) -> list[tuple[int, int]]:
    pairs = list(zip(path, path[1:]))
    if not pairs:
        return []
    coords = rm.coords()
    A = coords[[u for u, _ in pairs]]
    B = coords[[v for _, v in pairs]]
    ok = segments_free_batch(env, chain, A, B, rm.weights)
    return [pair for pair, free in zip(pairs, ok) if not free]


def plan_multi_goal(env: Environment, chain: KinematicChain, rm: Roadmap,
                    store: HmsStore, bn: BayesNet, request: PlanRequest,
                    cfg: PlannerConfig) -> PlanResult:
    """Plan the goal sequence, reusing and growing the primitive cache.

    The store persists across calls, so a later call (possibly with an
    edited environment) can reuse primitives cached by an earlier one.
    """
    if isinstance(request.start, (int, np.integer)):
        start_node = int(request.start)
        if not 0 <= start_node < rm.n_nodes:
            raise IndexError("start node out of range")
    else:
        start_node = resolve_goal(request.start, rm, env, chain)
    current = start_node
    blocked: set[tuple[int, int]] = set()
    plans: list[GoalPlan] = []

    for i, goal in enumerate(request.goals):
        evidence = request.evidence_for(i)
        update_uncertainty(store, bn, evidence, rm, env, chain)
        try:
            goal_node = resolve_goal(goal, rm, env, chain)
        except CollisionError:
            plans.append(GoalPlan(i, -1, [], 0.0, 0.0, MODE_FAILED,
                                  SearchStats(), False))
            continue
        goal_cfg = rm.config(goal_node)

        stats = SearchStats()
        result_path: list[int] = []
        mode = MODE_FAILED

        prim = select_approach_node(store, goal_cfg, bn, evidence, rm)
        if prim is not None and cfg.revalidate_cached:
            bad = _bad_edges(rm, env, chain, prim.path)
            if bad:
                blocked.update(bad)
                prim = None
        if prim is not None:
            stitched = _try_stitch(rm, env, chain, current, goal_node, prim,
                                   blocked, stats, cfg)
            if stitched is not None:
                result_path = stitched
                mode = MODE_STITCHED

        if mode != MODE_STITCHED:
            full = _full_query(rm, env, chain, current, goal_node, blocked,
                               stats, cfg)
            if full is not None:
                result_path = full
                mode = MODE_FULL

        if mode == MODE_FAILED:
            plans.append(GoalPlan(i, goal_node, [], 0.0, 0.0, MODE_FAILED,
                                  stats, False))
            continue

        cost = path_cost(rm, result_path)
        comp = composite_cost(result_path, store, cfg, rm)
        cache_path(store, goal_node, result_path, rm)
        update_uncertainty(store, bn, evidence, rm, env, chain)
        plans.append(GoalPlan(i, goal_node, result_path, cost, comp, mode,
                              stats, mode == MODE_STITCHED))
        current = goal_node

    return PlanResult(plans, start_node, current)


def _try_stitch(rm, env, chain, current, goal_node, prim, blocked, stats, cfg):
    """Stitch through the selected primitive; None when a segment fails.

    Rides the cached path from its entry only when the hop onto the entry
    is well under half the straight-line distance to the terminal, so the
    approach search stays short; otherwise heads straight for the
    terminal.  Trivial zero-length segments skip the search entirely.
    """
    entry, terminal = prim.path[0], prim.terminal
    cur_cfg = rm.config(current)
    d_entry = config_distance(cur_cfg, rm.config(entry), rm.weights)
    d_term = config_distance(cur_cfg, rm.config(terminal), rm.weights)
    if 2.0 * d_entry < d_term:
        highway = list(prim.path)
    else:
        highway = [terminal]
        entry = terminal
    part_a = _search(rm, current, entry, blocked)
    _absorb(stats, part_a.stats)
    if not part_a.found:
        return None
    part_b = _search(rm, terminal, goal_node, blocked)
    _absorb(stats, part_b.stats)
    if not part_b.found:
        return None
    path = stitch(part_a.path, highway, part_b.path)
    if cfg.revalidate_cached:
        bad = _bad_edges(rm, env, chain, path)
        if bad:
            blocked.update(bad)
            return None
    return path


def _full_query(rm, env, chain, current, goal_node, blocked, stats, cfg):
    """Full A* with a bounded retry loop that prunes freshly colliding edges."""
    for _ in range(max(cfg.max_reroute_attempts, 1)):
        res = _search(rm, current, goal_node, blocked)
        _absorb(stats, res.stats)
        if not res.found:
            return None
        if not cfg.revalidate_cached:
            return res.path
        bad = _bad_edges(rm, env, chain, res.path)
        if not bad:
            return res.path
        blocked.update(bad)
    return None
