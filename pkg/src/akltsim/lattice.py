"""Brick-wall honeycomb lattices with open or periodic boundaries.

Sites live on an L x L grid of (row, col) coordinates, indexed as
``site = row * L + col``.  Each site is bonded to its row neighbours and,
when (row + col) is even, to the site directly below.  This brick-wall
embedding is trivalent in the bulk and bipartite, with sublattice A on
(row + col) even.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOUNDARY_MODES = ("open", "periodic")
SIDES = ("left", "right", "top", "bottom")


@dataclass(frozen=True)
class Lattice:
    """Immutable honeycomb lattice in the brick-wall embedding.

    ``edges`` is an (E, 2) int32 array of unordered site pairs.  For
    L = 2 with periodic rows the two row bonds between a pair of sites
    are distinct edges, so the edge array may contain repeated pairs;
    every site then still has degree exactly 3.
    ``neighbors`` is an (N, 3) int32 array padded with -1 for missing
    bonds (open boundaries), repeating a neighbour for double bonds.
    """

    L: int
    boundary: str
    edges: np.ndarray
    neighbors: np.ndarray
    sublattice_a: np.ndarray

    @property
    def n_sites(self) -> int:
        return self.L * self.L

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    def site(self, row: int, col: int) -> int:
        return row * self.L + col

    def row_col(self, site: int) -> tuple[int, int]:
        return divmod(site, self.L)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n_sites)

    def to_json_dict(self) -> dict:
        return {
            "L": self.L,
            "boundary": self.boundary,
            "n_sites": self.n_sites,
            "n_edges": self.n_edges,
            "edges": self.edges.tolist(),
        }


def build_honeycomb(L: int, boundary: str = "periodic") -> Lattice:
    """Construct the L x L brick-wall honeycomb lattice.

    L must be even and >= 2: odd L breaks the bipartite closure of the
    periodic brick wall.  ``boundary`` selects open or periodic wrapping
    in both axes.
    """
    if boundary not in BOUNDARY_MODES:
        raise ValueError(f"boundary must be one of {BOUNDARY_MODES}, got {boundary!r}")
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    if L % 2 != 0:
        raise ValueError(f"L must be even for a consistent periodic closure, got {L}")

    periodic = boundary == "periodic"
    edges: list[tuple[int, int]] = []
    for r in range(L):
        # row bonds: each site to its right neighbour
        last_col = L if periodic else L - 1
        for c in range(last_col):
            edges.append((r * L + c, r * L + (c + 1) % L))
        # vertical bonds on the even sublattice
        if r < L - 1 or periodic:
            for c in range(L):
                if (r + c) % 2 == 0:
                    edges.append((r * L + c, ((r + 1) % L) * L + c))

    edge_arr = np.asarray(edges, dtype=np.int32)
    n = L * L
    neighbors = np.full((n, 3), -1, dtype=np.int32)
    fill = np.zeros(n, dtype=np.int64)
    for u, v in edge_arr:
        neighbors[u, fill[u]] = v
        fill[u] += 1
        neighbors[v, fill[v]] = u
        fill[v] += 1
    if fill.max() > 3:
        raise AssertionError("brick-wall construction produced degree > 3")

    rows = np.arange(n) // L
    cols = np.arange(n) % L
    sublattice_a = (rows + cols) % 2 == 0

    return Lattice(L=L, boundary=boundary, edges=edge_arr,
                   neighbors=neighbors, sublattice_a=sublattice_a)


def boundary_columns(lat: Lattice, side: str) -> np.ndarray:
    """Sites on one open boundary: col 0 / L-1 or row 0 / L-1.

    Raises on periodic lattices, where the queried boundary does not
    exist as a cut.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    if lat.boundary != "open":
        raise ValueError(f"boundary columns undefined on a {lat.boundary} lattice")
    idx = np.arange(lat.n_sites)
    rows, cols = idx // lat.L, idx % lat.L
    if side == "left":
        return idx[cols == 0]
    if side == "right":
        return idx[cols == lat.L - 1]
    if side == "top":
        return idx[rows == 0]
    return idx[rows == lat.L - 1]
