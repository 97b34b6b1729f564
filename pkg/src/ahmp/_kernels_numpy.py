"""Vectorized numpy implementations of the hot kernels.

Mirrors ``_kernels_numba`` operation-for-operation so both backends produce
the same floats.  Obstacles arrive packed: kind 0 = sphere (a: center,
b[0]: radius), kind 1 = axis-aligned box (a: min corner, b: max corner).
"""
from __future__ import annotations

import heapq

import numpy as np

BACKEND_NAME = "numpy"

# Probe layout: 5 frame origins then the 4 midpoints of consecutive frames.
N_FRAMES = 5
N_PROBES = 9


def fk_frames(qs, base_axis, joint_axes, link_lengths, mount):
    m = qs.shape[0]
    frames = np.empty((m, N_FRAMES, 3))
    px = mount[0] + base_axis[0] * qs[:, 0]
    py = mount[1] + base_axis[1] * qs[:, 0]
    pz = mount[2] + base_axis[2] * qs[:, 0]
    a00 = np.ones(m); a01 = np.zeros(m); a02 = np.zeros(m)
    a10 = np.zeros(m); a11 = np.ones(m); a12 = np.zeros(m)
    a20 = np.zeros(m); a21 = np.zeros(m); a22 = np.ones(m)
    frames[:, 0, 0] = px
    frames[:, 0, 1] = py
    frames[:, 0, 2] = pz
    for j in range(4):
        kx = joint_axes[j, 0]; ky = joint_axes[j, 1]; kz = joint_axes[j, 2]
        th = qs[:, 1 + j]
        s = np.sin(th)
        c1 = 1.0 - np.cos(th)
        r00 = 1.0 + c1 * (-(ky * ky + kz * kz))
        r01 = -s * kz + c1 * (kx * ky)
        r02 = s * ky + c1 * (kx * kz)
        r10 = s * kz + c1 * (kx * ky)
        r11 = 1.0 + c1 * (-(kx * kx + kz * kz))
        r12 = -s * kx + c1 * (ky * kz)
        r20 = -s * ky + c1 * (kx * kz)
        r21 = s * kx + c1 * (ky * kz)
        r22 = 1.0 + c1 * (-(kx * kx + ky * ky))
        p00 = a00 * r00 + a01 * r10 + a02 * r20
        p01 = a00 * r01 + a01 * r11 + a02 * r21
        p02 = a00 * r02 + a01 * r12 + a02 * r22
        p10 = a10 * r00 + a11 * r10 + a12 * r20
        p11 = a10 * r01 + a11 * r11 + a12 * r21
        p12 = a10 * r02 + a11 * r12 + a12 * r22
        p20 = a20 * r00 + a21 * r10 + a22 * r20
        p21 = a20 * r01 + a21 * r11 + a22 * r21
        p22 = a20 * r02 + a21 * r12 + a22 * r22
        a00, a01, a02 = p00, p01, p02
        a10, a11, a12 = p10, p11, p12
        a20, a21, a22 = p20, p21, p22
        L = link_lengths[j]
        px = px + L * a00
        py = py + L * a10
        pz = pz + L * a20
        frames[:, j + 1, 0] = px
        frames[:, j + 1, 1] = py
        frames[:, j + 1, 2] = pz
    return frames


def probe_points(frames):
    m = frames.shape[0]
    probes = np.empty((m, N_PROBES, 3))
    probes[:, :N_FRAMES, :] = frames
    probes[:, N_FRAMES:, :] = 0.5 * (frames[:, :-1, :] + frames[:, 1:, :])
    return probes


def configs_free(probes, bmin, bmax, obs_kind, obs_a, obs_b):
    in_bounds = np.all((probes >= bmin) & (probes <= bmax), axis=(1, 2))
    hit = np.zeros(probes.shape[0], dtype=bool)
    for k in range(obs_kind.shape[0]):
        if obs_kind[k] == 0:
            d = probes - obs_a[k]
            d2 = d[:, :, 0] ** 2 + d[:, :, 1] ** 2 + d[:, :, 2] ** 2
            hit |= np.any(d2 < obs_b[k, 0] ** 2, axis=1)
        else:
            inside = np.all((probes > obs_a[k]) & (probes < obs_b[k]), axis=2)
            hit |= np.any(inside, axis=1)
    return in_bounds & ~hit


def signed_clearances(probes, bmin, bmax, obs_kind, obs_a, obs_b):
    """Min over probes of the signed distance to walls and obstacle surfaces.

    Negative inside an obstacle or outside the bounds box.
    """
    lo = probes - bmin
    hi = bmax - probes
    best = np.minimum(lo.min(axis=2), hi.min(axis=2)).min(axis=1)
    for k in range(obs_kind.shape[0]):
        if obs_kind[k] == 0:
            d = probes - obs_a[k]
            dist = np.sqrt(d[:, :, 0] ** 2 + d[:, :, 1] ** 2 + d[:, :, 2] ** 2) - obs_b[k, 0]
            best = np.minimum(best, dist.min(axis=1))
        else:
            in_lo = probes - obs_a[k]
            in_hi = obs_b[k] - probes
            margin = np.minimum(in_lo, in_hi).min(axis=2)
            ex = np.maximum(np.maximum(obs_a[k] - probes, 0.0), probes - obs_b[k])
            outside = np.sqrt(ex[:, :, 0] ** 2 + ex[:, :, 1] ** 2 + ex[:, :, 2] ** 2)
            dist = np.where(margin > 0.0, -margin, outside)
            best = np.minimum(best, dist.min(axis=1))
    return best


def weighted_dists(nodes, q, w):
    d = (nodes - q) * w
    return np.sqrt(d[:, 0] ** 2 + d[:, 1] ** 2 + d[:, 2] ** 2 + d[:, 3] ** 2 + d[:, 4] ** 2)


def k_nearest(nodes, q, w, k, skip):
    """Indices of the k nearest nodes, ordered by (distance, index); ties by index."""
    d = (nodes - q) * w
    dsq = d[:, 0] ** 2 + d[:, 1] ** 2 + d[:, 2] ** 2 + d[:, 3] ** 2 + d[:, 4] ** 2
    order = np.argsort(dsq, kind="stable")
    out = np.empty(min(k, nodes.shape[0]), dtype=np.int64)
    filled = 0
    for idx in order:
        if idx == skip:
            continue
        out[filled] = idx
        filled += 1
        if filled == k:
            break
    return out[:filled]


def _segment_steps(qa, qb, w, resolution):
    acc = 0.0
    for j in range(5):
        d = w[j] * (qa[j] - qb[j])
        acc += d * d
    dist = np.sqrt(acc)
    if dist == 0.0:
        return 0
    return int(np.ceil(dist / resolution))


_CHUNK = 200_000


def segments_free(A, B, w, resolution, base_axis, joint_axes, link_lengths, mount,
                  bmin, bmax, obs_kind, obs_a, obs_b):
    m = A.shape[0]
    out = np.zeros(m, dtype=bool)
    steps = np.array([_segment_steps(A[i], B[i], w, resolution) for i in range(m)],
                     dtype=np.int64)
    counts = steps + 1
    # chunk edges so the interpolated batch stays bounded in memory
    start = 0
    while start < m:
        end = start
        total = 0
        while end < m and (end == start or total + counts[end] <= _CHUNK):
            total += counts[end]
            end += 1
        eix = np.repeat(np.arange(start, end), counts[start:end])
        t = np.concatenate([np.arange(c) / max(c - 1, 1) for c in counts[start:end]])
        qs = A[eix] + t[:, None] * (B[eix] - A[eix])
        free = configs_free(probe_points(fk_frames(qs, base_axis, joint_axes,
                                                   link_lengths, mount)),
                            bmin, bmax, obs_kind, obs_a, obs_b)
        bad = np.add.reduceat(~free, np.concatenate(([0], np.cumsum(counts[start:end])[:-1])))
        out[start:end] = bad == 0
        start = end
    return out


def segment_free(qa, qb, w, resolution, base_axis, joint_axes, link_lengths, mount,
                 bmin, bmax, obs_kind, obs_a, obs_b):
    n = _segment_steps(qa, qb, w, resolution)
    t = np.arange(n + 1) / max(n, 1)
    qs = qa + t[:, None] * (qb - qa)
    free = configs_free(probe_points(fk_frames(qs, base_axis, joint_axes,
                                               link_lengths, mount)),
                        bmin, bmax, obs_kind, obs_a, obs_b)
    return bool(free.all())


def astar_csr(indptr, nbrs, wts, h, start, goal):
    """A* over a CSR adjacency with precomputed heuristic values.

    Ties in f broken by lower h, then lower node index; closed-set discipline.
    Returns (path_indices, cost, nodes_expanded, nodes_generated).
    """
    n = h.shape[0]
    g = np.full(n, np.inf)
    closed = np.zeros(n, dtype=bool)
    parent = np.full(n, -1, dtype=np.int64)
    g[start] = 0.0
    heap = [(h[start], h[start], start)]
    generated = 1
    expanded = 0
    found = False
    while heap:
        f, hh, u = heapq.heappop(heap)
        if closed[u]:
            continue
        closed[u] = True
        expanded += 1
        if u == goal:
            found = True
            break
        gu = g[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = nbrs[e]
            if closed[v]:
                continue
            tg = gu + wts[e]
            if tg < g[v]:
                g[v] = tg
                parent[v] = u
                heapq.heappush(heap, (tg + h[v], h[v], v))
                generated += 1
    if not found:
        return np.empty(0, dtype=np.int64), 0.0, expanded, generated
    rev = [goal]
    u = goal
    while u != start:
        u = parent[u]
        rev.append(u)
    return np.array(rev[::-1], dtype=np.int64), float(g[goal]), expanded, generated
