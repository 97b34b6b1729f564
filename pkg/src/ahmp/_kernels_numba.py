"""numba @njit implementations of the hot kernels.

Same contracts and operation order as ``_kernels_numpy``; see that module
for the packed obstacle encoding.
"""
from __future__ import annotations

import numpy as np
import numba as nb
from numba import njit

BACKEND_NAME = "numba"

N_FRAMES = 5
N_PROBES = 9


@njit(cache=True)
def _fk_one(q, base_axis, joint_axes, link_lengths, mount, frames):
    px = mount[0] + base_axis[0] * q[0]
    py = mount[1] + base_axis[1] * q[0]
    pz = mount[2] + base_axis[2] * q[0]
    a00 = 1.0; a01 = 0.0; a02 = 0.0
    a10 = 0.0; a11 = 1.0; a12 = 0.0
    a20 = 0.0; a21 = 0.0; a22 = 1.0
    frames[0, 0] = px
    frames[0, 1] = py
    frames[0, 2] = pz
    for j in range(4):
        kx = joint_axes[j, 0]; ky = joint_axes[j, 1]; kz = joint_axes[j, 2]
        th = q[1 + j]
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
        a00 = p00; a01 = p01; a02 = p02
        a10 = p10; a11 = p11; a12 = p12
        a20 = p20; a21 = p21; a22 = p22
        L = link_lengths[j]
        px = px + L * a00
        py = py + L * a10
        pz = pz + L * a20
        frames[j + 1, 0] = px
        frames[j + 1, 1] = py
        frames[j + 1, 2] = pz


@njit(cache=True)
def fk_frames(qs, base_axis, joint_axes, link_lengths, mount):
    m = qs.shape[0]
    frames = np.empty((m, N_FRAMES, 3))
    for i in range(m):
        _fk_one(qs[i], base_axis, joint_axes, link_lengths, mount, frames[i])
    return frames


@njit(cache=True)
def probe_points(frames):
    m = frames.shape[0]
    probes = np.empty((m, N_PROBES, 3))
    for i in range(m):
        for f in range(N_FRAMES):
            for c in range(3):
                probes[i, f, c] = frames[i, f, c]
        for f in range(N_FRAMES - 1):
            for c in range(3):
                probes[i, N_FRAMES + f, c] = 0.5 * (frames[i, f, c] + frames[i, f + 1, c])
    return probes


@njit(cache=True)
def _probes_free_one(probes, bmin, bmax, obs_kind, obs_a, obs_b):
    for p in range(probes.shape[0]):
        for c in range(3):
            if probes[p, c] < bmin[c] or probes[p, c] > bmax[c]:
                return False
    for k in range(obs_kind.shape[0]):
        if obs_kind[k] == 0:
            r2 = obs_b[k, 0] ** 2
            for p in range(probes.shape[0]):
                dx = probes[p, 0] - obs_a[k, 0]
                dy = probes[p, 1] - obs_a[k, 1]
                dz = probes[p, 2] - obs_a[k, 2]
                if dx * dx + dy * dy + dz * dz < r2:
                    return False
        else:
            for p in range(probes.shape[0]):
                inside = True
                for c in range(3):
                    if not (obs_a[k, c] < probes[p, c] < obs_b[k, c]):
                        inside = False
                        break
                if inside:
                    return False
    return True


@njit(cache=True)
def configs_free(probes, bmin, bmax, obs_kind, obs_a, obs_b):
    m = probes.shape[0]
    out = np.empty(m, dtype=np.bool_)
    for i in range(m):
        out[i] = _probes_free_one(probes[i], bmin, bmax, obs_kind, obs_a, obs_b)
    return out


@njit(cache=True)
def signed_clearances(probes, bmin, bmax, obs_kind, obs_a, obs_b):
    m = probes.shape[0]
    out = np.empty(m)
    for i in range(m):
        best = np.inf
        for p in range(N_PROBES):
            for c in range(3):
                lo = probes[i, p, c] - bmin[c]
                hi = bmax[c] - probes[i, p, c]
                if lo < best:
                    best = lo
                if hi < best:
                    best = hi
        for k in range(obs_kind.shape[0]):
            if obs_kind[k] == 0:
                for p in range(N_PROBES):
                    dx = probes[i, p, 0] - obs_a[k, 0]
                    dy = probes[i, p, 1] - obs_a[k, 1]
                    dz = probes[i, p, 2] - obs_a[k, 2]
                    d = np.sqrt(dx * dx + dy * dy + dz * dz) - obs_b[k, 0]
                    if d < best:
                        best = d
            else:
                for p in range(N_PROBES):
                    margin = np.inf
                    for c in range(3):
                        lo = probes[i, p, c] - obs_a[k, c]
                        hi = obs_b[k, c] - probes[i, p, c]
                        if lo < margin:
                            margin = lo
                        if hi < margin:
                            margin = hi
                    if margin > 0.0:
                        d = -margin
                    else:
                        ex = 0.0
                        ey = 0.0
                        ez = 0.0
                        if obs_a[k, 0] - probes[i, p, 0] > 0.0:
                            ex = obs_a[k, 0] - probes[i, p, 0]
                        if probes[i, p, 0] - obs_b[k, 0] > ex:
                            ex = probes[i, p, 0] - obs_b[k, 0]
                        if obs_a[k, 1] - probes[i, p, 1] > 0.0:
                            ey = obs_a[k, 1] - probes[i, p, 1]
                        if probes[i, p, 1] - obs_b[k, 1] > ey:
                            ey = probes[i, p, 1] - obs_b[k, 1]
                        if obs_a[k, 2] - probes[i, p, 2] > 0.0:
                            ez = obs_a[k, 2] - probes[i, p, 2]
                        if probes[i, p, 2] - obs_b[k, 2] > ez:
                            ez = probes[i, p, 2] - obs_b[k, 2]
                        d = np.sqrt(ex * ex + ey * ey + ez * ez)
                    if d < best:
                        best = d
        out[i] = best
    return out


@njit(cache=True)
def weighted_dists(nodes, q, w):
    n = nodes.shape[0]
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(5):
            d = w[j] * (nodes[i, j] - q[j])
            acc += d * d
        out[i] = np.sqrt(acc)
    return out


@njit(cache=True)
def k_nearest(nodes, q, w, k, skip):
    n = nodes.shape[0]
    dsq = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(5):
            d = w[j] * (nodes[i, j] - q[j])
            acc += d * d
        dsq[i] = acc
    avail = n - 1 if 0 <= skip < n else n
    kk = min(k, avail)
    out = np.empty(kk, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    for slot in range(kk):
        best = -1
        bd = np.inf
        for i in range(n):
            if i == skip or used[i]:
                continue
            if dsq[i] < bd:
                bd = dsq[i]
                best = i
        used[best] = True
        out[slot] = best
    return out


@njit(cache=True)
def _segment_free_one(qa, qb, w, resolution, base_axis, joint_axes, link_lengths,
                      mount, bmin, bmax, obs_kind, obs_a, obs_b, frames, probes, q):
    acc = 0.0
    for j in range(5):
        d = w[j] * (qa[j] - qb[j])
        acc += d * d
    dist = np.sqrt(acc)
    if dist == 0.0:
        n = 0
    else:
        n = int(np.ceil(dist / resolution))
    denom = max(n, 1)
    for kstep in range(n + 1):
        t = kstep / denom
        for j in range(5):
            q[j] = qa[j] + t * (qb[j] - qa[j])
        _fk_one(q, base_axis, joint_axes, link_lengths, mount, frames)
        for f in range(N_FRAMES):
            for c in range(3):
                probes[f, c] = frames[f, c]
        for f in range(N_FRAMES - 1):
            for c in range(3):
                probes[N_FRAMES + f, c] = 0.5 * (frames[f, c] + frames[f + 1, c])
        if not _probes_free_one(probes, bmin, bmax, obs_kind, obs_a, obs_b):
            return False
    return True


@njit(cache=True)
def segment_free(qa, qb, w, resolution, base_axis, joint_axes, link_lengths, mount,
                 bmin, bmax, obs_kind, obs_a, obs_b):
    frames = np.empty((N_FRAMES, 3))
    probes = np.empty((N_PROBES, 3))
    q = np.empty(5)
    return _segment_free_one(qa, qb, w, resolution, base_axis, joint_axes,
                             link_lengths, mount, bmin, bmax, obs_kind, obs_a,
                             obs_b, frames, probes, q)


@njit(cache=True)
def segments_free(A, B, w, resolution, base_axis, joint_axes, link_lengths, mount,
                  bmin, bmax, obs_kind, obs_a, obs_b):
    m = A.shape[0]
    out = np.empty(m, dtype=np.bool_)
    frames = np.empty((N_FRAMES, 3))
    probes = np.empty((N_PROBES, 3))
    q = np.empty(5)
    for i in range(m):
        out[i] = _segment_free_one(A[i], B[i], w, resolution, base_axis, joint_axes,
                                   link_lengths, mount, bmin, bmax, obs_kind,
                                   obs_a, obs_b, frames, probes, q)
    return out


@njit(cache=True)
def _heap_less(f1, h1, n1, f2, h2, n2):
    if f1 != f2:
        return f1 < f2
    if h1 != h2:
        return h1 < h2
    return n1 < n2


@njit(cache=True)
def _heap_push(hf, hh, hn, size, f, h, node):
    i = size
    hf[i] = f
    hh[i] = h
    hn[i] = node
    while i > 0:
        par = (i - 1) // 2
        if _heap_less(hf[i], hh[i], hn[i], hf[par], hh[par], hn[par]):
            hf[i], hf[par] = hf[par], hf[i]
            hh[i], hh[par] = hh[par], hh[i]
            hn[i], hn[par] = hn[par], hn[i]
            i = par
        else:
            break
    return size + 1


@njit(cache=True)
def _heap_pop(hf, hh, hn, size):
    f = hf[0]
    h = hh[0]
    node = hn[0]
    size -= 1
    if size > 0:
        hf[0] = hf[size]
        hh[0] = hh[size]
        hn[0] = hn[size]
        i = 0
        while True:
            left = 2 * i + 1
            right = left + 1
            smallest = i
            if left < size and _heap_less(hf[left], hh[left], hn[left],
                                          hf[smallest], hh[smallest], hn[smallest]):
                smallest = left
            if right < size and _heap_less(hf[right], hh[right], hn[right],
                                           hf[smallest], hh[smallest], hn[smallest]):
                smallest = right
            if smallest == i:
                break
            hf[i], hf[smallest] = hf[smallest], hf[i]
            hh[i], hh[smallest] = hh[smallest], hh[i]
            hn[i], hn[smallest] = hn[smallest], hn[i]
            i = smallest
    return f, h, node, size


@njit(cache=True)
def astar_csr(indptr, nbrs, wts, h, start, goal):
    n = h.shape[0]
    g = np.full(n, np.inf)
    closed = np.zeros(n, dtype=np.bool_)
    parent = np.full(n, -1, dtype=np.int64)
    cap = nbrs.shape[0] + 2
    hf = np.empty(cap)
    hh = np.empty(cap)
    hn = np.empty(cap, dtype=np.int64)
    g[start] = 0.0
    size = _heap_push(hf, hh, hn, 0, h[start], h[start], start)
    generated = 1
    expanded = 0
    found = False
    while size > 0:
        f, fh, u, size = _heap_pop(hf, hh, hn, size)
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
                size = _heap_push(hf, hh, hn, size, tg + h[v], h[v], v)
                generated += 1
    if not found:
        return np.empty(0, dtype=np.int64), 0.0, expanded, generated
    count = 1
    u = goal
    while u != start:
        u = parent[u]
        count += 1
    path = np.empty(count, dtype=np.int64)
    u = goal
    for i in range(count - 1, -1, -1):
        path[i] = u
        u = parent[u]
    return path, float(g[goal]), expanded, generated
