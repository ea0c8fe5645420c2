"""Reduction of an outcome-labelled lattice to its domain graph.

Rule R1 contracts every edge whose endpoints carry the same outcome;
the maximal contracted sets are the domains.  Rule R2 drops inter-domain
edges of even multiplicity and collapses odd multiplicities to simple
edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._kernels import union_find_labels


@dataclass(frozen=True)
class DomainPartition:
    """Domains indexed 0..n_domains-1, ordered by smallest member site."""

    n_sites: int
    domain_of: np.ndarray   # (N,) int32 dense domain id per site
    sizes: np.ndarray       # (D,) int64
    min_site: np.ndarray    # (D,) int64 canonical representative

    @property
    def n_domains(self) -> int:
        return self.sizes.size


@dataclass(frozen=True)
class DomainMultiGraph:
    """Inter-domain multigraph: parallel edges stored as multiplicities."""

    n_domains: int
    pair_u: np.ndarray       # (P,) int32, pair_u < pair_v
    pair_v: np.ndarray
    multiplicity: np.ndarray  # (P,) int64

    @property
    def n_edges_multi(self) -> int:
        return int(self.multiplicity.sum())

    @property
    def n_edges_simple(self) -> int:
        return int(np.count_nonzero(self.multiplicity % 2 == 1))


@dataclass(frozen=True)
class SimpleGraph:
    n_vertices: int
    edges: np.ndarray  # (E, 2) int32

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    def to_adjacency_json(self) -> str:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[int(u)].append(int(v))
            adj[int(v)].append(int(u))
        return json.dumps({"n_vertices": self.n_vertices,
                           "adjacency": [sorted(a) for a in adj]})

    def to_edge_list_text(self) -> str:
        return "".join(f"{int(u)} {int(v)}\n" for u, v in self.edges)


@dataclass(frozen=True)
class DomainSizeStats:
    histogram: dict[int, int]
    mean: float
    width: float
    max: int


def contract_domains(n_sites: int, edges: np.ndarray,
                     outcomes: np.ndarray) -> tuple[DomainPartition, DomainMultiGraph]:
    """Apply rule R1: merge endpoints of every monochromatic edge.

    ``edges`` may repeat pairs (multigraph); each repeat counts once in
    the resulting multiplicities.  Returns the partition and the
    inter-domain multigraph.
    """
    edges = np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2)
    outcomes = np.asarray(outcomes)
    if outcomes.shape[0] != n_sites:
        raise ValueError("outcomes must label every site")

    if edges.shape[0] > 0:
        same = outcomes[edges[:, 0]] == outcomes[edges[:, 1]]
        roots = union_find_labels(n_sites, edges[:, 0], edges[:, 1], same)
    else:
        roots = np.arange(n_sites, dtype=np.int64)

    uniq, inverse = np.unique(roots, return_inverse=True)
    mins = np.full(uniq.size, n_sites, dtype=np.int64)
    np.minimum.at(mins, inverse, np.arange(n_sites, dtype=np.int64))
    order = np.argsort(mins)
    rank = np.empty(uniq.size, dtype=np.int64)
    rank[order] = np.arange(uniq.size, dtype=np.int64)
    domain_of = rank[inverse].astype(np.int32)
    sizes = np.bincount(domain_of, minlength=uniq.size).astype(np.int64)
    part = DomainPartition(n_sites=n_sites, domain_of=domain_of,
                           sizes=sizes, min_site=mins[order])

    n_dom = uniq.size
    if edges.shape[0] > 0:
        du = domain_of[edges[:, 0]].astype(np.int64)
        dv = domain_of[edges[:, 1]].astype(np.int64)
        inter = du != dv
        du, dv = du[inter], dv[inter]
        lo = np.minimum(du, dv)
        hi = np.maximum(du, dv)
        keys, counts = np.unique(lo * n_dom + hi, return_counts=True)
        pair_u = (keys // n_dom).astype(np.int32)
        pair_v = (keys % n_dom).astype(np.int32)
        mult = counts.astype(np.int64)
    else:
        pair_u = np.empty(0, dtype=np.int32)
        pair_v = np.empty(0, dtype=np.int32)
        mult = np.empty(0, dtype=np.int64)

    mg = DomainMultiGraph(n_domains=n_dom, pair_u=pair_u, pair_v=pair_v,
                          multiplicity=mult)
    return part, mg


def mod2_reduce(mg: DomainMultiGraph) -> SimpleGraph:
    """Apply rule R2: keep inter-domain edges of odd multiplicity."""
    if np.any(mg.pair_u == mg.pair_v):
        raise ValueError("self-loop in domain multigraph: R1 contraction bug")
    odd = mg.multiplicity % 2 == 1
    edges = np.stack([mg.pair_u[odd], mg.pair_v[odd]], axis=1).astype(np.int32)
    return SimpleGraph(n_vertices=mg.n_domains, edges=edges)


def domain_size_histogram(part: DomainPartition) -> DomainSizeStats:
    sizes = part.sizes
    vals, counts = np.unique(sizes, return_counts=True)
    return DomainSizeStats(
        histogram={int(v): int(c) for v, c in zip(vals, counts)},
        mean=float(sizes.mean()),
        width=float(sizes.std()),
        max=int(sizes.max()),
    )
