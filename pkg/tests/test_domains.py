import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from akltsim.domains import (DomainMultiGraph, contract_domains,
                             domain_size_histogram, mod2_reduce)
from akltsim.lattice import build_honeycomb

HEX_EDGES = np.array([(i, (i + 1) % 6) for i in range(6)])


def brute_domains(n, edges, outcomes):
    """BFS reference for rule R1."""
    labels = [-1] * n
    d = 0
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if outcomes[u] == outcomes[v]:
            adj[u].append(v)
            adj[v].append(u)
    for s in range(n):
        if labels[s] >= 0:
            continue
        stack = [s]
        labels[s] = d
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if labels[y] < 0:
                    labels[y] = d
                    stack.append(y)
        d += 1
    return labels, d


def test_all_same_outcome_contracts_fully():
    lat = build_honeycomb(4, "periodic")
    outcomes = np.zeros(lat.n_sites, dtype=np.int8)
    part, mg = contract_domains(lat.n_sites, lat.edges, outcomes)
    assert part.n_domains == 1
    assert part.sizes.tolist() == [16]
    assert mg.n_edges_multi == 0


def test_all_distinct_neighbors_keeps_lattice():
    # proper 3-coloring of the hexagon ring: no two adjacent sites equal
    outcomes = np.array([0, 1, 2, 0, 1, 2], dtype=np.int8)
    part, mg = contract_domains(6, HEX_EDGES, outcomes)
    assert part.n_domains == 6
    assert mg.n_edges_multi == 6
    assert np.all(mg.multiplicity == 1)
    g = mod2_reduce(mg)
    assert g.n_edges == 6


def test_hexagon_three_domain_triangle():
    # (z,z,x,x,y,y) around the ring: three domains of two, a triangle
    outcomes = np.array([2, 2, 0, 0, 1, 1], dtype=np.int8)
    part, mg = contract_domains(6, HEX_EDGES, outcomes)
    assert part.n_domains == 3
    assert part.sizes.tolist() == [2, 2, 2]
    assert mg.n_edges_multi == 3
    g = mod2_reduce(mg)
    assert g.n_edges == 3
    assert g.n_vertices == 3


def test_hexagon_multiplicity_two_drops():
    # (x,z,z,z,z,z): the two bonds from the x-site merge to multiplicity 2
    outcomes = np.array([0, 2, 2, 2, 2, 2], dtype=np.int8)
    part, mg = contract_domains(6, HEX_EDGES, outcomes)
    assert part.n_domains == 2
    assert mg.n_edges_multi == 2
    assert mg.multiplicity.tolist() == [2]
    g = mod2_reduce(mg)
    assert g.n_vertices == 2
    assert g.n_edges == 0


def test_mod2_multiplicity_three_becomes_single():
    mg = DomainMultiGraph(2, np.array([0], dtype=np.int32),
                          np.array([1], dtype=np.int32),
                          np.array([3], dtype=np.int64))
    g = mod2_reduce(mg)
    assert g.n_edges == 1


def test_mod2_rejects_self_loop():
    mg = DomainMultiGraph(2, np.array([1], dtype=np.int32),
                          np.array([1], dtype=np.int32),
                          np.array([1], dtype=np.int64))
    with pytest.raises(ValueError):
        mod2_reduce(mg)


def test_mod2_idempotent_on_simple():
    outcomes = np.array([2, 2, 0, 0, 1, 1], dtype=np.int8)
    _, mg = contract_domains(6, HEX_EDGES, outcomes)
    g = mod2_reduce(mg)
    mg2 = DomainMultiGraph(g.n_vertices, g.edges[:, 0], g.edges[:, 1],
                           np.ones(g.n_edges, dtype=np.int64))
    g2 = mod2_reduce(mg2)
    assert np.array_equal(g.edges, g2.edges)


def test_histogram_trivial_cases():
    lat = build_honeycomb(4, "periodic")
    part, _ = contract_domains(lat.n_sites, lat.edges,
                               np.zeros(lat.n_sites, dtype=np.int8))
    h = domain_size_histogram(part)
    assert h.histogram == {16: 1}
    assert h.mean == 16 and h.max == 16

    out = np.array([0, 1, 2, 0, 1, 2], dtype=np.int8)
    part, _ = contract_domains(6, HEX_EDGES, out)
    h = domain_size_histogram(part)
    assert h.histogram == {1: 6}
    assert h.mean == 1 and h.width == 0


@st.composite
def lattice_and_outcomes(draw):
    L = draw(st.sampled_from([2, 4, 6]))
    boundary = draw(st.sampled_from(["open", "periodic"]))
    lat = build_honeycomb(L, boundary)
    outcomes = draw(st.lists(st.integers(0, 2), min_size=lat.n_sites,
                             max_size=lat.n_sites))
    return lat, np.array(outcomes, dtype=np.int8)


@settings(max_examples=60, deadline=None)
@given(lattice_and_outcomes())
def test_partition_properties(case):
    lat, outcomes = case
    part, mg = contract_domains(lat.n_sites, lat.edges, outcomes)
    # sizes account for every site
    assert part.sizes.sum() == lat.n_sites
    # reference BFS produces the same partition
    ref_labels, ref_count = brute_domains(lat.n_sites, lat.edges.tolist(),
                                          outcomes.tolist())
    assert part.n_domains == ref_count
    mapping = {}
    for site in range(lat.n_sites):
        key = ref_labels[site]
        val = part.domain_of[site]
        assert mapping.setdefault(key, val) == val
    # domains are outcome-homogeneous
    for d in range(part.n_domains):
        sites = np.flatnonzero(part.domain_of == d)
        assert np.unique(outcomes[sites]).size == 1
    # canonical ids ordered by smallest member
    assert np.all(np.diff(part.min_site) > 0)
    # |V| = N - successful unions: unions = contracted edges forming forest
    g = mod2_reduce(mg)
    # planarity necessary condition
    if g.n_vertices >= 3:
        assert g.n_edges <= 3 * g.n_vertices - 6


@settings(max_examples=30, deadline=None)
@given(lattice_and_outcomes(), st.permutations([0, 1, 2]))
def test_label_permutation_symmetry(case, perm):
    lat, outcomes = case
    part1, mg1 = contract_domains(lat.n_sites, lat.edges, outcomes)
    permuted = np.array(perm, dtype=np.int8)[outcomes]
    part2, mg2 = contract_domains(lat.n_sites, lat.edges, permuted)
    assert np.array_equal(part1.domain_of, part2.domain_of)
    assert np.array_equal(mg1.multiplicity, mg2.multiplicity)
    g1, g2 = mod2_reduce(mg1), mod2_reduce(mg2)
    assert np.array_equal(g1.edges, g2.edges)


def test_simple_graph_exports():
    outcomes = np.array([2, 2, 0, 0, 1, 1], dtype=np.int8)
    _, mg = contract_domains(6, HEX_EDGES, outcomes)
    g = mod2_reduce(mg)
    text = g.to_edge_list_text()
    assert len(text.strip().splitlines()) == 3
    import json
    doc = json.loads(g.to_adjacency_json())
    assert doc["n_vertices"] == 3
    assert all(len(a) == 2 for a in doc["adjacency"])
