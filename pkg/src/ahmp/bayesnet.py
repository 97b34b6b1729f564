"""Small discrete Bayesian network with exact inference by enumeration.

Networks here stay tiny (a handful of nodes), so the exponential cost of
enumeration is irrelevant; a guard rejects networks whose joint table would
exceed 2**16 states.

Evidence is a plain dict mapping variable name -> state label.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROB_TOL = 1e-9
MAX_JOINT_STATES = 2 ** 16

Evidence = dict


class ImpossibleEvidenceError(ValueError):
    """Raised when evidence has zero probability under the network."""


@dataclass(frozen=True)
class NodeSpec:
    """One variable: its states, parent names, and conditional table.

    ``cpt`` maps a tuple of parent states (ordered like ``parents``) to the
    distribution over this node's states; root nodes use the empty tuple key.
    """

    name: str
    states: tuple
    parents: tuple = ()
    cpt: dict = None

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "parents", tuple(self.parents))
        cpt = {tuple(k): np.asarray(v, dtype=np.float64)
               for k, v in (self.cpt or {}).items()}
        object.__setattr__(self, "cpt", cpt)


class BayesNet:
    """Directed acyclic network over NodeSpecs; validated on construction."""

    def __init__(self, nodes):
        self.nodes = {n.name: n for n in nodes}
        if len(self.nodes) != len(nodes):
            raise ValueError("duplicate node names")
        self.order = self._topological_order(nodes)
        validate_net(self)

    def _topological_order(self, nodes) -> list[NodeSpec]:
        placed: list[NodeSpec] = []
        done: set[str] = set()
        pending = list(nodes)
        while pending:
            progressed = False
            for node in list(pending):
                missing = [p for p in node.parents if p not in self.nodes]
                if missing:
                    raise ValueError(f"node {node.name!r} has unknown parent {missing[0]!r}")
                if all(p in done for p in node.parents):
                    placed.append(node)
                    done.add(node.name)
                    pending.remove(node)
                    progressed = True
            if not progressed:
                raise ValueError("network contains a cycle")
        return placed

    def node(self, name: str) -> NodeSpec:
        return self.nodes[name]


def validate_net(net: BayesNet):
    """Check state sets, CPT coverage, row normalization, and joint size."""
    joint = 1
    for node in net.order:
        if len(node.states) < 2:
            raise ValueError(f"node {node.name!r} needs at least two states")
        if len(set(node.states)) != len(node.states):
            raise ValueError(f"node {node.name!r} has duplicate states")
        joint *= len(node.states)
        expected = 1
        for p in node.parents:
            expected *= len(net.node(p).states)
        if len(node.cpt) != expected:
            raise ValueError(
                f"node {node.name!r}: {len(node.cpt)} CPT rows, expected {expected}")
        for combo, row in node.cpt.items():
            if len(combo) != len(node.parents):
                raise ValueError(f"node {node.name!r}: bad CPT key {combo}")
            for p, st in zip(node.parents, combo):
                if st not in net.node(p).states:
                    raise ValueError(
                        f"node {node.name!r}: {st!r} is not a state of parent {p!r}")
            if row.shape != (len(node.states),):
                raise ValueError(f"node {node.name!r}: CPT row length mismatch")
            if np.any(row < 0.0):
                raise ValueError(f"node {node.name!r}: negative probability")
            if abs(float(row.sum()) - 1.0) > PROB_TOL:
                raise ValueError(
                    f"node {node.name!r}: CPT row sums to {row.sum()}, not 1")
    if joint > MAX_JOINT_STATES:
        raise ValueError(f"joint table has {joint} states, exceeding {MAX_JOINT_STATES}")


def _check_assignment(net: BayesNet, assignment: Evidence):
    for name, state in assignment.items():
        if name not in net.nodes:
            raise KeyError(f"unknown variable {name!r}")
        if state not in net.node(name).states:
            raise ValueError(f"{state!r} is not a state of {name!r}")


def _cpt_prob(net: BayesNet, node: NodeSpec, assignment: dict) -> float:
    key = tuple(assignment[p] for p in node.parents)
    row = node.cpt[key]
    return float(row[node.states.index(assignment[node.name])])


def joint_probability(net: BayesNet, assignment: Evidence) -> float:
    """Probability of one full assignment: product of CPT entries."""
    _check_assignment(net, assignment)
    if set(assignment) != set(net.nodes):
        raise ValueError("assignment must cover every variable")
    p = 1.0
    for node in net.order:
        p *= _cpt_prob(net, node, assignment)
    return p


def _enumerate_all(net: BayesNet, depth: int, assignment: dict) -> float:
    if depth == len(net.order):
        return 1.0
    node = net.order[depth]
    if node.name in assignment:
        return _cpt_prob(net, node, assignment) * _enumerate_all(net, depth + 1, assignment)
    total = 0.0
    for state in node.states:
        assignment[node.name] = state
        total += _cpt_prob(net, node, assignment) * _enumerate_all(net, depth + 1, assignment)
    del assignment[node.name]
    return total


def posterior(net: BayesNet, query: str, evidence: Evidence | None = None) -> dict:
    """P(query | evidence) by full enumeration, normalized over query states."""
    evidence = dict(evidence or {})
    _check_assignment(net, evidence)
    if query not in net.nodes:
        raise KeyError(f"unknown variable {query!r}")
    node = net.node(query)
    raw = []
    for state in node.states:
        if query in evidence and evidence[query] != state:
            raw.append(0.0)
            continue
        assignment = dict(evidence)
        assignment[query] = state
        raw.append(_enumerate_all(net, 0, assignment))
    norm = sum(raw)
    if norm <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {evidence} has zero probability")
    return {state: p / norm for state, p in zip(node.states, raw)}


SUCCESS_NODE = "PathSuccess"
SUCCESS_STATE = "true"


def success_probability(net: BayesNet, evidence: Evidence | None = None) -> float:
    """Posterior probability that PathSuccess is true."""
    return posterior(net, SUCCESS_NODE, evidence)[SUCCESS_STATE]


def default_network() -> BayesNet:
    """The shipped 4-node network conditioning path success on three factors.

    Priors: disturbance low 0.7, sensor noise low 0.8, clearance low 0.4.
    With no evidence the success prior works out to 0.7632.
    """
    return BayesNet([
        NodeSpec("Disturbance", ("low", "high"), (), {(): [0.7, 0.3]}),
        NodeSpec("SensorNoise", ("low", "high"), (), {(): [0.8, 0.2]}),
        NodeSpec("Clearance", ("low", "high"), (), {(): [0.4, 0.6]}),
        NodeSpec("PathSuccess", ("true", "false"),
                 ("Disturbance", "SensorNoise", "Clearance"),
                 {
                     ("low", "low", "low"): [0.75, 0.25],
                     ("low", "low", "high"): [0.95, 0.05],
                     ("low", "high", "low"): [0.60, 0.40],
                     ("low", "high", "high"): [0.85, 0.15],
                     ("high", "low", "low"): [0.45, 0.55],
                     ("high", "low", "high"): [0.70, 0.30],
                     ("high", "high", "low"): [0.30, 0.70],
                     ("high", "high", "high"): [0.55, 0.45],
                 }),
    ])
