"""Independent reference implementations used only by the test suite.

Everything here is written against well-known library primitives
(scipy rotations, scipy shortest paths, exhaustive enumeration) and
never calls into the package's own kernels, so agreement is meaningful.
"""
import itertools

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _scipy_dijkstra
from scipy.spatial.transform import Rotation


def fk_reference(chain, q):
    """Forward kinematics via scipy rotation composition."""
    q = np.asarray(q, dtype=np.float64)
    rot = np.eye(3)
    tip = chain.mount_offset + q[0] * chain.base_axis
    frames = [tip.copy()]
    for j in range(4):
        rot = rot @ Rotation.from_rotvec(q[j + 1] * chain.joint_axes[j]).as_matrix()
        tip = tip + chain.link_lengths[j] * rot[:, 0]
        frames.append(tip.copy())
    return np.array(frames)


def probes_reference(chain, q):
    frames = fk_reference(chain, q)
    mids = 0.5 * (frames[:-1] + frames[1:])
    return np.vstack([frames, mids])


def point_colliding(p, env):
    """Workspace-point collision verdict from first principles."""
    if np.any(p < env.bounds_min) or np.any(p > env.bounds_max):
        return True
    for obs in env.obstacles:
        if hasattr(obs, "radius"):
            if np.dot(p - obs.center, p - obs.center) < obs.radius ** 2:
                return True
        else:
            if np.all(p > obs.min_corner) and np.all(p < obs.max_corner):
                return True
    return False


def config_free_reference(env, chain, q):
    return not any(point_colliding(p, env) for p in probes_reference(chain, q))


def segment_free_reference(env, chain, a, b, weights=None):
    """Re-derive the evenly spaced grid check from the documented contract."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    w = np.ones(5) if weights is None else np.asarray(weights, dtype=np.float64)
    d = float(np.sqrt(np.sum((w * (a - b)) ** 2)))
    if d == 0.0:
        return config_free_reference(env, chain, a)
    n = int(np.ceil(d / env.check_resolution))
    for k in range(n + 1):
        t = k / n
        if not config_free_reference(env, chain, (1.0 - t) * a + t * b):
            return False
    return True


def dijkstra_cost(n_nodes, edges, start, goal):
    """Optimal cost via scipy's csgraph; inf when unreachable.

    ``edges`` is an iterable of (u, v, w) undirected weighted pairs.
    """
    rows, cols, data = [], [], []
    for u, v, w in edges:
        rows += [u, v]
        cols += [v, u]
        data += [w, w]
    mat = csr_matrix((data, (rows, cols)), shape=(n_nodes, n_nodes))
    dist = _scipy_dijkstra(mat, directed=False, indices=start)
    return float(dist[goal])


def joint_table(nodes):
    """Brute-force joint distribution of a discrete network.

    ``nodes`` is an ordered list of (name, states, parents, cpt) where cpt
    maps parent-state tuples to a probability list.  Returns a dict from
    full assignments (name -> state) to probability.
    """
    names = [n[0] for n in nodes]
    states = {n[0]: n[1] for n in nodes}
    table = {}
    for combo in itertools.product(*(states[n] for n in names)):
        assign = dict(zip(names, combo))
        p = 1.0
        for name, st, parents, cpt in nodes:
            key = tuple(assign[par] for par in parents)
            p *= cpt[key][st.index(assign[name])]
        table[tuple(combo)] = p
    return table


def posterior_reference(nodes, query, evidence):
    """P(query | evidence) by summing the brute-force joint table."""
    names = [n[0] for n in nodes]
    states = dict((n[0], n[1]) for n in nodes)
    table = joint_table(nodes)
    scores = np.zeros(len(states[query]))
    for combo, p in table.items():
        assign = dict(zip(names, combo))
        if any(assign[var] != val for var, val in evidence.items()):
            continue
        scores[states[query].index(assign[query])] += p
    total = scores.sum()
    if total == 0.0:
        return None
    return scores / total


def path_cost_reference(rm, path):
    return sum(rm.edge_weight(u, v) for u, v in zip(path[:-1], path[1:]))


def validate_path(rm, env, chain, path, start=None, goal=None):
    """Full validity audit of a node path; returns a list of violations."""
    problems = []
    if start is not None and path and path[0] != start:
        problems.append(f"starts at {path[0]}, expected {start}")
    if goal is not None and path and path[-1] != goal:
        problems.append(f"ends at {path[-1]}, expected {goal}")
    for u, v in zip(path[:-1], path[1:]):
        if not rm.has_edge(u, v):
            problems.append(f"nodes {u}->{v} are not adjacent")
        elif not segment_free_reference(env, chain, rm.config(u).values,
                                        rm.config(v).values, rm.weights):
            problems.append(f"segment {u}->{v} collides")
    for node in path:
        if not config_free_reference(env, chain, rm.config(node).values):
            problems.append(f"node {node} collides")
    return problems


def validate_polyline(env, chain, polyline, weights=None):
    """Violations for a list-of-configurations trajectory (tree planners)."""
    problems = []
    vals = [c.values for c in polyline]
    for i, (a, b) in enumerate(zip(vals[:-1], vals[1:])):
        if not segment_free_reference(env, chain, a, b, weights):
            problems.append(f"segment {i} collides")
    return problems
