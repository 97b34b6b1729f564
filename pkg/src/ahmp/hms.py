"""Heuristic motion space: a weighted cache of previously planned paths.

Each cached path ("primitive") remembers its terminal roadmap node.  When a
new goal lands near a cached terminal, the planner can reuse that path as a
highway instead of searching the whole roadmap again.  Primitives carry a
normalized weight (recent paths weigh more), an uncertainty derived from the
Bayesian network, and a score that prefers confident paths ending close to
the goal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .bayesnet import BayesNet, Evidence, success_probability
from .model import Configuration, KinematicChain, config_distance, fk_batch
from .roadmap import Roadmap
from .world import Environment

CLEARANCE_NODE = "Clearance"
CLEARANCE_LOW = "low"
CLEARANCE_HIGH = "high"
DEFAULT_CLEARANCE_THRESHOLD = 0.15


@dataclass(frozen=True)
class MotionPrimitive:
    id: int
    path: tuple
    terminal: int
    length: float
    uncertainty: float
    weight: float
    time_estimate: float
    clearance_state: str | None = None


class HmsStore:
    """Mutable cache of motion primitives plus the reuse hyperparameters.

    tau: max terminal-to-goal distance for a primitive to be a candidate.
    lambda_: how sharply uncertainty discounts the score.
    alpha: weight decay rate applied per cached-path length.
    """

    def __init__(self, tau: float = 1.0, lambda_: float = 1.0, alpha: float = 0.1,
                 clearance_threshold: float = DEFAULT_CLEARANCE_THRESHOLD):
        if tau <= 0.0 or lambda_ <= 0.0 or alpha <= 0.0:
            raise ValueError("tau, lambda_, and alpha must be positive")
        self.tau = float(tau)
        self.lambda_ = float(lambda_)
        self.alpha = float(alpha)
        self.clearance_threshold = float(clearance_threshold)
        self.primitives: list[MotionPrimitive] = []
        self._next_id = 0

    def __len__(self) -> int:
        return len(self.primitives)

    def weight_sum(self) -> float:
        return sum(p.weight for p in self.primitives)


def score(prim: MotionPrimitive, goal: Configuration, rm: Roadmap,
          lambda_: float) -> float:
    """exp(-lambda * uncertainty) / (1 + distance(terminal, goal))."""
    d = config_distance(rm.config(prim.terminal), goal, rm.weights)
    return math.exp(-lambda_ * prim.uncertainty) / (1.0 + d)


def select_approach_node(store: HmsStore, goal: Configuration, bn: BayesNet,
                         evidence: Evidence, rm: Roadmap) -> MotionPrimitive | None:
    """Best primitive whose terminal lies within tau of the goal, or None.

    Ranks candidates by score * weight * P(success | evidence + the
    primitive's clearance state); ties resolve to the lowest primitive id.
    """
    best = None
    best_value = -1.0
    for prim in store.primitives:
        d = config_distance(rm.config(prim.terminal), goal, rm.weights)
        if d > store.tau:
            continue
        ev = dict(evidence or {})
        if prim.clearance_state is not None and CLEARANCE_NODE in bn.nodes:
            ev[CLEARANCE_NODE] = prim.clearance_state
        value = score(prim, goal, rm, store.lambda_) * prim.weight \
            * success_probability(bn, ev)
        if value > best_value:
            best_value = value
            best = prim
    return best


def cache_path(store: HmsStore, goal_node: int, path, rm: Roadmap) -> MotionPrimitive:
    """Store a successful path as a primitive and rebalance all weights.

    The new primitive enters with provisional weight 1.0; reweight then
    decays every weight by exp(-alpha * new_length) and renormalizes.
    """
    path = tuple(int(p) for p in path)
    if not path:
        raise ValueError("cannot cache an empty path")
    if path[-1] != goal_node:
        raise ValueError("goal_node must equal the last path node")
    length = 0.0
    for u, v in zip(path, path[1:]):
        length += rm.edge_weight(u, v)  # raises KeyError on non-adjacent nodes
    prim = MotionPrimitive(
        id=store._next_id, path=path, terminal=path[-1], length=length,
        uncertainty=0.0, weight=1.0, time_estimate=length,
    )
    store._next_id += 1
    store.primitives.append(prim)
    reweight(store, length)
    return store.primitives[-1]


def reweight(store: HmsStore, new_path_length: float):
    """Decay every weight by exp(-alpha * new_path_length), then normalize.

    The uniform factor cancels under normalization, so the net effect is to
    fold the newest provisional weight into the distribution.  A fully
    underflowed distribution resets to uniform.
    """
    factor = math.exp(-store.alpha * new_path_length)
    decayed = [p.weight * factor for p in store.primitives]
    total = sum(decayed)
    if total <= 0.0:
        n = len(store.primitives)
        decayed = [1.0 / n] * n
        total = 1.0
    store.primitives = [replace(p, weight=w / total)
                        for p, w in zip(store.primitives, decayed)]


def path_min_clearance(rm: Roadmap, env: Environment, chain: KinematicChain,
                       path) -> float:
    """Min signed clearance over the path's node configurations.

    Negative when an obstacle change has swallowed a cached node.
    """
    coords = rm.coords()[list(path)]
    kind, a, b = env.packed()
    probes = _kernels.probe_points(fk_batch(chain, coords))
    vals = _kernels.signed_clearances(probes, env.bounds_min, env.bounds_max, kind, a, b)
    return float(vals.min())


def update_uncertainty(store: HmsStore, bn: BayesNet, evidence: Evidence,
                       rm: Roadmap, env: Environment, chain: KinematicChain):
    """Refresh every primitive's uncertainty from the network.

    Each primitive's clearance bucket (low/high against the threshold) joins
    the evidence; uncertainty = 1 - P(success | evidence + clearance).
    """
    has_clearance = CLEARANCE_NODE in bn.nodes
    updated = []
    for prim in store.primitives:
        ev = dict(evidence or {})
        state = prim.clearance_state
        if has_clearance:
            clearance = path_min_clearance(rm, env, chain, prim.path)
            state = CLEARANCE_HIGH if clearance >= store.clearance_threshold else CLEARANCE_LOW
            ev[CLEARANCE_NODE] = state
        u = 1.0 - success_probability(bn, ev)
        updated.append(replace(prim, uncertainty=u, clearance_state=state))
    store.primitives = updated


def dump_store(store: HmsStore) -> str:
    """One line per primitive: id, terminal, length, uncertainty, weight."""
    lines = ["id terminal length uncertainty weight"]
    for p in store.primitives:
        lines.append(f"{p.id} {p.terminal} {p.length:.6f} {p.uncertainty:.6f} {p.weight:.6f}")
    return "\n".join(lines) + "\n"
