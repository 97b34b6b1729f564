"""Dense PRM roadmap: seeded sampling, k-nearest connection, text fixtures.

Construction is deterministic for a fixed seed: samples are drawn in a fixed
order from a PCG64 stream, neighbors are ranked by (distance, index), and
edges are committed in scan order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import (Configuration, JointLimits, KinematicChain, DEFAULT_WEIGHTS,
                    N_DOF, config_distance, make_rng)
from .world import CollisionError, Environment, configs_free_batch, segments_free_batch

_STREAM_BUILD = 0


class InfeasibleEnvironmentError(RuntimeError):
    """Raised when sampling finds no free configuration within the budget."""


@dataclass(frozen=True)
class BuildParams:
    max_samples: int
    seed: int
    k_neighbors: int = 10
    max_rejection_factor: int = 50

    def __post_init__(self):
        if self.max_samples <= 0:
            raise ValueError("max_samples must be positive")
        if self.k_neighbors <= 0:
            raise ValueError("k_neighbors must be positive")
        if self.max_rejection_factor <= 0:
            raise ValueError("max_rejection_factor must be positive")


class Roadmap:
    """Undirected weighted graph over collision-free configurations."""

    def __init__(self, weights=None, build_meta: dict | None = None):
        w = DEFAULT_WEIGHTS if weights is None else np.asarray(weights, dtype=np.float64)
        if w.shape != (N_DOF,) or np.any(w <= 0.0):
            raise ValueError("metric weights must be 5 positive reals")
        self.weights = w.copy()
        self.build_meta = dict(build_meta or {})
        self.adjacency: list[list[tuple[int, float]]] = []
        self.isolated: set[int] = set()
        self._configs: list[np.ndarray] = []
        self._coords_cache: np.ndarray | None = None
        self._csr_cache = None
        self.n_edges = 0

    @property
    def n_nodes(self) -> int:
        return len(self._configs)

    def coords(self) -> np.ndarray:
        if self._coords_cache is None:
            if self._configs:
                self._coords_cache = np.vstack(self._configs)
            else:
                self._coords_cache = np.empty((0, N_DOF))
        return self._coords_cache

    def config(self, i: int) -> Configuration:
        return Configuration(self._configs[i])

    def add_node(self, values) -> int:
        if isinstance(values, Configuration):
            values = values.values
        arr = np.asarray(values, dtype=np.float64).copy()
        if arr.shape != (N_DOF,):
            raise ValueError("node must be a 5-vector")
        self._configs.append(arr)
        self.adjacency.append([])
        self.isolated.add(len(self._configs) - 1)
        self._coords_cache = None
        self._csr_cache = None
        return len(self._configs) - 1

    def add_edge(self, u: int, v: int, weight: float):
        if u == v:
            raise ValueError("self-loops are not allowed")
        if weight < 0.0:
            raise ValueError("edge weight must be nonnegative")
        if self.has_edge(u, v):
            raise ValueError(f"duplicate edge ({u}, {v})")
        self.adjacency[u].append((v, weight))
        self.adjacency[v].append((u, weight))
        self.isolated.discard(u)
        self.isolated.discard(v)
        self.n_edges += 1
        self._csr_cache = None

    def has_edge(self, u: int, v: int) -> bool:
        return any(n == v for n, _ in self.adjacency[u])

    def edge_weight(self, u: int, v: int) -> float:
        for n, w in self.adjacency[u]:
            if n == v:
                return w
        raise KeyError(f"no edge ({u}, {v})")

    def neighbors(self, u: int) -> list[tuple[int, float]]:
        return list(self.adjacency[u])

    def edges(self) -> list[tuple[int, int, float]]:
        """All undirected edges as (u, v, weight) with u < v."""
        out = []
        for u, row in enumerate(self.adjacency):
            for v, w in row:
                if u < v:
                    out.append((u, v, w))
        return out

    def csr(self, exclude: frozenset | None = None):
        """CSR view (indptr, neighbor indices, weights); optionally drop
        the undirected edges named in ``exclude`` as (u, v) pairs."""
        if exclude:
            return self._build_csr(exclude)
        if self._csr_cache is None:
            self._csr_cache = self._build_csr(None)
        return self._csr_cache

    def _build_csr(self, exclude):
        n = self.n_nodes
        indptr = np.zeros(n + 1, dtype=np.int64)
        nbrs = []
        wts = []
        for u in range(n):
            for v, w in self.adjacency[u]:
                if exclude and ((u, v) in exclude or (v, u) in exclude):
                    continue
                nbrs.append(v)
                wts.append(w)
            indptr[u + 1] = len(nbrs)
        return (indptr, np.array(nbrs, dtype=np.int64),
                np.array(wts, dtype=np.float64))

    def copy(self) -> Roadmap:
        dup = Roadmap(self.weights, self.build_meta)
        dup.adjacency = [list(row) for row in self.adjacency]
        dup.isolated = set(self.isolated)
        dup._configs = [c.copy() for c in self._configs]
        dup.n_edges = self.n_edges
        return dup


def _sample_free(env: Environment, chain: KinematicChain, limits: JointLimits,
                 rng: np.random.Generator, want: int, budget: int) -> tuple[np.ndarray, int]:
    accepted: list[np.ndarray] = []
    attempts = 0
    span = limits.upper - limits.lower
    while len(accepted) < want and attempts < budget:
        batch = min(want * 2, budget - attempts)
        u = rng.random((batch, N_DOF))
        qs = limits.lower + u * span
        free = configs_free_batch(env, chain, qs)
        attempts += batch
        for i in range(batch):
            if free[i]:
                accepted.append(qs[i])
                if len(accepted) == want:
                    break
    if not accepted:
        raise InfeasibleEnvironmentError(
            f"no free sample in {attempts} attempts; environment looks fully blocked")
    return np.array(accepted[:want]), attempts


def build_prm(env: Environment, chain: KinematicChain, limits: JointLimits,
              params: BuildParams, weights=None) -> Roadmap:
    """Sample up to max_samples free configurations and connect k nearest."""
    rng = make_rng(params.seed, _STREAM_BUILD)
    budget = params.max_samples * params.max_rejection_factor
    samples, attempts = _sample_free(env, chain, limits, rng, params.max_samples, budget)
    rm = Roadmap(weights, {
        "max_samples": params.max_samples,
        "k_neighbors": params.k_neighbors,
        "seed": params.seed,
        "max_rejection_factor": params.max_rejection_factor,
        "attempts": attempts,
        "accepted": int(samples.shape[0]),
    })
    for row in samples:
        rm.add_node(row)

    coords = rm.coords()
    n = rm.n_nodes
    pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for i in range(n):
        nbrs = _kernels.k_nearest(coords, coords[i], rm.weights,
                                  params.k_neighbors, i)
        for j in nbrs:
            key = (min(i, int(j)), max(i, int(j)))
            if key not in seen:
                seen.add(key)
                pairs.append(key)
    if pairs:
        A = coords[[p[0] for p in pairs]]
        B = coords[[p[1] for p in pairs]]
        ok = segments_free_batch(env, chain, A, B, rm.weights)
        for (u, v), free in zip(pairs, ok):
            if free:
                rm.add_edge(u, v, config_distance(rm.config(u), rm.config(v), rm.weights))
    return rm


def connect_query_node(rm: Roadmap, env: Environment, chain: KinematicChain,
                       q: Configuration) -> int:
    """Append q as a roadmap node and link it to its nearest free neighbors.

    Raises CollisionError for a colliding q; a node that fails to connect to
    anything is recorded in ``rm.isolated``.
    """
    if not configs_free_batch(env, chain, q.values[None, :])[0]:
        raise CollisionError("query configuration is in collision")
    k = int(rm.build_meta.get("k_neighbors", 10))
    coords = rm.coords()
    idx = rm.add_node(q.values)
    if coords.shape[0] == 0:
        return idx
    nbrs = _kernels.k_nearest(coords, q.values, rm.weights, k, -1)
    A = np.repeat(q.values[None, :], len(nbrs), axis=0)
    B = coords[nbrs]
    ok = segments_free_batch(env, chain, A, B, rm.weights)
    for j, free in zip(nbrs, ok):
        if free:
            rm.add_edge(idx, int(j), config_distance(q, rm.config(int(j)), rm.weights))
    return idx


def export_text(rm: Roadmap) -> str:
    """Flat text fixture format: meta lines, then node lines, then edge lines."""
    lines = ["meta weights " + " ".join(repr(float(x)) for x in rm.weights)]
    if rm.isolated:
        lines.append("meta isolated " + " ".join(str(i) for i in sorted(rm.isolated)))
    for i in range(rm.n_nodes):
        vals = " ".join(repr(float(x)) for x in rm.coords()[i])
        lines.append(f"node {i} {vals}")
    for u in range(rm.n_nodes):
        for v, w in rm.adjacency[u]:
            if u < v:
                lines.append(f"edge {u} {v} {repr(float(w))}")
    return "\n".join(lines) + "\n"


def import_text(text: str) -> Roadmap:
    weights = None
    isolated: set[int] = set()
    nodes: list[tuple[int, np.ndarray]] = []
    edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "meta" and parts[1] == "weights":
            weights = np.array([float(x) for x in parts[2:]])
        elif parts[0] == "meta" and parts[1] == "isolated":
            isolated = {int(x) for x in parts[2:]}
        elif parts[0] == "node":
            nodes.append((int(parts[1]), np.array([float(x) for x in parts[2:]])))
        elif parts[0] == "edge":
            edges.append((int(parts[1]), int(parts[2]), float(parts[3])))
        else:
            raise ValueError(f"line {lineno}: unrecognized record {parts[0]!r}")
    rm = Roadmap(weights)
    for i, (idx, vals) in enumerate(nodes):
        if idx != i:
            raise ValueError(f"node indices must be consecutive, got {idx} at position {i}")
        rm.add_node(vals)
    for u, v, w in edges:
        rm.add_edge(u, v, w)
    if isolated and isolated != rm.isolated:
        raise ValueError("recorded isolated nodes disagree with the edge list")
    return rm
