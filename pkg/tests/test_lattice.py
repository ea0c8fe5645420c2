import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from akltsim.lattice import boundary_columns, build_honeycomb


def brute_force_edges(L, periodic):
    """Independent enumeration of the brick-wall rule."""
    edges = []
    for r in range(L):
        cols = range(L) if periodic else range(L - 1)
        for c in cols:
            edges.append(((r, c), (r, (c + 1) % L)))
        if r < L - 1 or periodic:
            for c in range(L):
                if (r + c) % 2 == 0:
                    edges.append(((r, c), ((r + 1) % L, c)))
    return edges


def test_l2_periodic_counts():
    lat = build_honeycomb(2, "periodic")
    assert lat.n_sites == 4
    assert lat.n_edges == 6
    assert np.all(lat.degrees() == 3)
    assert lat.sublattice_a.sum() == 2


def test_l4_open_enumeration():
    # the brick-wall rule gives 18 edges; two corners keep their vertical
    # bond (degree 2) and two do not (degree 1)
    lat = build_honeycomb(4, "open")
    assert lat.n_sites == 16
    assert lat.n_edges == len(brute_force_edges(4, False)) == 18
    deg = lat.degrees()
    corners = [lat.site(0, 0), lat.site(0, 3), lat.site(3, 0), lat.site(3, 3)]
    assert sorted(deg[c] for c in corners) == [1, 1, 2, 2]
    assert deg.max() == 3


def test_odd_and_small_L_rejected():
    with pytest.raises(ValueError):
        build_honeycomb(3, "periodic")
    with pytest.raises(ValueError):
        build_honeycomb(0, "open")
    with pytest.raises(ValueError):
        build_honeycomb(4, "twisted")


@pytest.mark.parametrize("L", [2, 4, 6, 10])
def test_periodic_edge_count_and_degree(L):
    lat = build_honeycomb(L, "periodic")
    assert lat.n_edges == 3 * lat.n_sites // 2
    assert np.all(lat.degrees() == 3)


@pytest.mark.parametrize("L,boundary", [(4, "open"), (6, "open"),
                                        (4, "periodic"), (6, "periodic")])
def test_matches_brute_force(L, boundary):
    lat = build_honeycomb(L, boundary)
    expect = {tuple(sorted((r1 * L + c1, r2 * L + c2)))
              for (r1, c1), (r2, c2) in brute_force_edges(L, boundary == "periodic")}
    got = {tuple(sorted(map(int, e))) for e in lat.edges}
    assert got == expect


@settings(max_examples=20, deadline=None)
@given(L=st.sampled_from([2, 4, 6, 8, 12]),
       boundary=st.sampled_from(["open", "periodic"]))
def test_bipartite_and_degree_sum(L, boundary):
    lat = build_honeycomb(L, boundary)
    # handshake
    assert lat.degrees().sum() == 2 * lat.n_edges
    # every edge joins A to B, matching the parity rule
    a = lat.sublattice_a
    assert all(a[u] != a[v] for u, v in lat.edges)
    # BFS two-coloring agrees with the parity labels
    color = -np.ones(lat.n_sites, dtype=int)
    color[0] = int(a[0])
    queue = [0]
    while queue:
        u = queue.pop()
        for v in lat.neighbors[u]:
            if v >= 0 and color[v] < 0:
                color[v] = 1 - color[u]
                queue.append(int(v))
    assert np.all(color == a.astype(int))


def test_boundary_columns():
    lat = build_honeycomb(4, "open")
    left = boundary_columns(lat, "left")
    right = boundary_columns(lat, "right")
    assert sorted(left) == [lat.site(r, 0) for r in range(4)]
    assert sorted(right) == [lat.site(r, 3) for r in range(4)]
    top = boundary_columns(lat, "top")
    assert sorted(top) == [lat.site(0, c) for c in range(4)]


def test_boundary_columns_periodic_errors():
    lat = build_honeycomb(2, "periodic")
    with pytest.raises(ValueError):
        boundary_columns(lat, "left")
    with pytest.raises(ValueError):
        boundary_columns(build_honeycomb(4, "open"), "middle")


def test_json_export():
    lat = build_honeycomb(4, "open")
    doc = lat.to_json_dict()
    assert doc["L"] == 4
    assert doc["boundary"] == "open"
    assert doc["n_sites"] == 16
    assert doc["n_edges"] == 18
    assert len(doc["edges"]) == 18
