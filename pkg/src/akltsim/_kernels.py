"""Numba kernels: union-find labeling, Metropolis attempts, deletion trials.

All kernels are deterministic functions of their array arguments; random
numbers are drawn outside (numpy Generator) and passed in.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    # path compression
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def union_find_labels(n, edge_u, edge_v, active):
    """Root label per node after uniting every active edge."""
    parent = np.arange(n, dtype=np.int64)
    for i in range(edge_u.size):
        if active[i]:
            ru = _find(parent, edge_u[i])
            rv = _find(parent, edge_v[i])
            if ru != rv:
                if ru < rv:
                    parent[rv] = ru
                else:
                    parent[ru] = rv
    roots = np.empty(n, dtype=np.int64)
    for x in range(n):
        roots[x] = _find(parent, x)
    return roots


@njit(cache=True)
def mc_attempts(neighbors, outcomes, sites, proposals, uniforms,
                visited, queue, epoch0):
    """Run one batch of single-site Metropolis attempts in place.

    neighbors: (N, 3) int32, -1 padded, possibly repeating a neighbour.
    outcomes: (N,) int8 labels in {0, 1, 2}; mutated on acceptance.
    sites/proposals/uniforms: per-attempt site index, coin in {0, 1}
    selecting one of the two other labels, and accept uniform.
    visited/queue: int64 scratch of length N (visited must start below
    epoch0 everywhere on first use).

    The weight is 2**(|V| - |E|) with |E| the inter-domain edge count of
    the multigraph (multiplicities included), so the flip changes
    log2 w by (k - m) + (n_new - n_old):
      n_old/n_new  bonds from the site carrying the old/new label,
      k            components the old domain splits into without the site,
      m            distinct new-label domains merging with the site.

    Returns (accepted, total log2-weight change, next epoch).
    """
    accepted = 0
    dlog2w = 0
    epoch = epoch0
    for t in range(sites.size):
        s = sites[t]
        a = outcomes[s]
        b = proposals[t]
        if b >= a:
            b += 1  # uniform over the two labels != a

        n_old = 0
        n_new = 0
        for j in range(3):
            nb = neighbors[s, j]
            if nb >= 0:
                if outcomes[nb] == a:
                    n_old += 1
                elif outcomes[nb] == b:
                    n_new += 1

        # k: components of the current domain after removing s
        epoch += 1
        visited[s] = epoch  # s is excluded from its old domain
        k = 0
        for j in range(3):
            nb = neighbors[s, j]
            if nb < 0 or outcomes[nb] != a or visited[nb] == epoch:
                continue
            k += 1
            head = 0
            tail = 0
            queue[tail] = nb
            tail += 1
            visited[nb] = epoch
            while head < tail:
                x = queue[head]
                head += 1
                for jj in range(3):
                    y = neighbors[x, jj]
                    if y >= 0 and y != s and outcomes[y] == a and visited[y] != epoch:
                        visited[y] = epoch
                        queue[tail] = y
                        tail += 1

        # m: distinct neighbouring domains with the proposed label
        epoch += 1
        m = 0
        for j in range(3):
            nb = neighbors[s, j]
            if nb < 0 or outcomes[nb] != b or visited[nb] == epoch:
                continue
            m += 1
            head = 0
            tail = 0
            queue[tail] = nb
            tail += 1
            visited[nb] = epoch
            while head < tail:
                x = queue[head]
                head += 1
                for jj in range(3):
                    y = neighbors[x, jj]
                    if y >= 0 and outcomes[y] == b and visited[y] != epoch:
                        visited[y] = epoch
                        queue[tail] = y
                        tail += 1

        delta = (k - m) + (n_new - n_old)
        if delta >= 0 or uniforms[t] < 2.0 ** delta:
            outcomes[s] = b
            accepted += 1
            dlog2w += delta
    return accepted, dlog2w, epoch


@njit(cache=True)
def spanning_trials_vertex(n, edge_u, edge_v, boundary_masks, keep):
    """Count vertex-deletion trials where one component touches every set.

    boundary_masks: (k, n) bool boundary membership (k <= 8);
    keep: (trials, n) bool survival masks.  A trial succeeds when a
    single surviving component intersects all k boundary sets.
    """
    trials = keep.shape[0]
    k = boundary_masks.shape[0]
    target = np.uint8((1 << k) - 1)
    hits = 0
    parent = np.empty(n, dtype=np.int64)
    flags = np.empty(n, dtype=np.uint8)
    for t in range(trials):
        for x in range(n):
            parent[x] = x
        for i in range(edge_u.size):
            u = edge_u[i]
            v = edge_v[i]
            if keep[t, u] and keep[t, v]:
                ru = _find(parent, u)
                rv = _find(parent, v)
                if ru != rv:
                    parent[ru] = rv
        for x in range(n):
            flags[x] = 0
        for b in range(k):
            for x in range(n):
                if boundary_masks[b, x] and keep[t, x]:
                    flags[_find(parent, x)] |= np.uint8(1 << b)
        for x in range(n):
            if flags[x] == target:
                hits += 1
                break
    return hits


@njit(cache=True)
def spanning_trials_edge(n, edge_u, edge_v, boundary_masks, keep):
    """Count edge-deletion trials where one component touches every set.

    keep: (trials, n_edges) bool survival masks; vertices all survive.
    """
    trials = keep.shape[0]
    k = boundary_masks.shape[0]
    target = np.uint8((1 << k) - 1)
    hits = 0
    parent = np.empty(n, dtype=np.int64)
    flags = np.empty(n, dtype=np.uint8)
    for t in range(trials):
        for x in range(n):
            parent[x] = x
        for i in range(edge_u.size):
            if keep[t, i]:
                ru = _find(parent, edge_u[i])
                rv = _find(parent, edge_v[i])
                if ru != rv:
                    parent[ru] = rv
        for x in range(n):
            flags[x] = 0
        for b in range(k):
            for x in range(n):
                if boundary_masks[b, x]:
                    flags[_find(parent, x)] |= np.uint8(1 << b)
        for x in range(n):
            if flags[x] == target:
                hits += 1
                break
    return hits
