"""Spanning-cluster detection and robustness under random deletion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .domains import DomainPartition, SimpleGraph
from .lattice import Lattice, boundary_columns

AXES = ("horizontal", "vertical")
DELETE_MODES = ("vertex", "edge")


@dataclass(frozen=True)
class CrossingQuery:
    """Boundary domain sets for one crossing axis."""

    axis: str
    left: np.ndarray   # domain ids touching the first boundary
    right: np.ndarray  # domain ids touching the opposite boundary


@dataclass(frozen=True)
class SpanningQuery:
    """Boundary domain sets that one spanning cluster must all touch.

    The deletion study uses all four boundaries: a spanning cluster is a
    single component providing both a horizontal and a vertical
    traversing path.
    """

    boundary_sets: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class ThresholdCurve:
    mode: str
    p_delete: np.ndarray
    p_cluster: np.ndarray
    stderr: np.ndarray
    trials: np.ndarray


@dataclass(frozen=True)
class ThresholdEstimate:
    p_star: float
    uncertainty: float
    level: float


def make_crossing_query(lat: Lattice, part: DomainPartition,
                        axis: str = "horizontal") -> CrossingQuery:
    """Map open-boundary sites to domain ids for one crossing axis."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}")
    sides = ("left", "right") if axis == "horizontal" else ("top", "bottom")
    left = np.unique(part.domain_of[boundary_columns(lat, sides[0])])
    right = np.unique(part.domain_of[boundary_columns(lat, sides[1])])
    return CrossingQuery(axis=axis, left=left, right=right)


def make_spanning_query(lat: Lattice, part: DomainPartition) -> SpanningQuery:
    """Domain sets on all four open boundaries."""
    sets = tuple(np.unique(part.domain_of[boundary_columns(lat, side)])
                 for side in ("left", "right", "top", "bottom"))
    return SpanningQuery(boundary_sets=sets)


def components(g: SimpleGraph, alive: np.ndarray | None = None) -> np.ndarray:
    """Root label per vertex; deleted vertices keep singleton labels."""
    edges = g.edges
    if alive is not None:
        keep = alive[edges[:, 0]] & alive[edges[:, 1]]
        edges = edges[keep]
    if edges.shape[0] == 0:
        return np.arange(g.n_vertices, dtype=np.int64)
    active = np.ones(edges.shape[0], dtype=bool)
    return _kernels.union_find_labels(
        g.n_vertices, edges[:, 0].astype(np.int64), edges[:, 1].astype(np.int64),
        active)


def crossing_exists(g: SimpleGraph, q: CrossingQuery,
                    alive: np.ndarray | None = None) -> bool:
    """True iff one component holds a left and a right boundary domain.

    A single domain touching both boundaries counts.  ``alive`` masks
    deleted vertices (vertex-deletion trials).
    """
    left, right = q.left, q.right
    if alive is not None:
        left = left[alive[left]]
        right = right[alive[right]]
    if q.left.size == 0 or q.right.size == 0:
        raise ValueError("empty boundary set: crossing query was mis-built")
    if left.size == 0 or right.size == 0:
        return False
    if np.intersect1d(left, right, assume_unique=True).size > 0:
        return True
    roots = components(g, alive)
    return np.intersect1d(roots[left], roots[right]).size > 0


def random_delete(g: SimpleGraph, p: float, mode: str,
                  rng: np.random.Generator) -> tuple[SimpleGraph, np.ndarray]:
    """Delete vertices (with incident edges) or edges independently.

    Returns the surviving graph and the vertex alive-mask (all True in
    edge mode).  Vertex ids are preserved, so boundary membership of
    surviving domains carries over unchanged.
    """
    if mode not in DELETE_MODES:
        raise ValueError(f"mode must be one of {DELETE_MODES}")
    if not 0.0 <= p <= 1.0:
        raise ValueError("deletion probability must be in [0, 1]")
    alive = np.ones(g.n_vertices, dtype=bool)
    if p == 0.0:
        return SimpleGraph(g.n_vertices, g.edges), alive
    if mode == "vertex":
        alive = rng.random(g.n_vertices) >= p
        keep = alive[g.edges[:, 0]] & alive[g.edges[:, 1]]
    else:
        keep = rng.random(g.n_edges) >= p
    return SimpleGraph(g.n_vertices, g.edges[keep]), alive


def _boundary_masks(g: SimpleGraph, q: CrossingQuery | SpanningQuery) -> np.ndarray:
    sets = q.boundary_sets if isinstance(q, SpanningQuery) else (q.left, q.right)
    masks = np.zeros((len(sets), g.n_vertices), dtype=bool)
    for i, s in enumerate(sets):
        masks[i, s] = True
    return masks


def spanning_cluster_exists(g: SimpleGraph, q: SpanningQuery,
                            alive: np.ndarray | None = None) -> bool:
    """True iff one component touches every boundary set of the query."""
    if any(s.size == 0 for s in q.boundary_sets):
        raise ValueError("empty boundary set: spanning query was mis-built")
    roots = components(g, alive)
    live_roots = None
    for s in q.boundary_sets:
        if alive is not None:
            s = s[alive[s]]
        rs = set(roots[s].tolist())
        live_roots = rs if live_roots is None else (live_roots & rs)
        if not live_roots:
            return False
    return True


def threshold_scan(samples: list[tuple[SimpleGraph, CrossingQuery | SpanningQuery]],
                   p_grid: np.ndarray, mode: str, trials_per_point: int,
                   seed: int) -> ThresholdCurve:
    """Estimate p_cluster(p) over a deletion-probability grid.

    Each sampled graph carries its boundary query: a CrossingQuery asks
    for a component joining one boundary pair, a SpanningQuery for a
    single spanning cluster touching all four boundaries (the deletion
    study of the robustness figure).  For each grid point every graph is
    subjected to ``trials_per_point`` independent deletion masks;
    p_cluster is the success fraction over all (sample, trial) pairs
    with its binomial standard error.  Trial randomness is seeded per
    (sample, point) so results do not depend on evaluation order.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.size == 0:
        raise ValueError("p_grid must be non-empty")
    if np.any(np.diff(p_grid) <= 0):
        raise ValueError("p_grid must be strictly increasing")
    if np.any((p_grid < 0) | (p_grid > 1)):
        raise ValueError("p_grid values must lie in [0, 1]")
    if trials_per_point < 1:
        raise ValueError("trials_per_point must be >= 1")
    if not samples:
        raise ValueError("no graph samples given")
    if mode not in DELETE_MODES:
        raise ValueError(f"mode must be one of {DELETE_MODES}")

    hits = np.zeros(p_grid.size, dtype=np.int64)
    totals = np.zeros(p_grid.size, dtype=np.int64)
    for si, (g, q) in enumerate(samples):
        masks = _boundary_masks(g, q)
        eu = g.edges[:, 0].astype(np.int64)
        ev = g.edges[:, 1].astype(np.int64)
        for pi, p in enumerate(p_grid):
            rng = np.random.default_rng(np.random.SeedSequence((seed, si, pi)))
            if mode == "vertex":
                keep = rng.random((trials_per_point, g.n_vertices)) >= p
                hits[pi] += _kernels.spanning_trials_vertex(
                    g.n_vertices, eu, ev, masks, keep)
            else:
                keep = rng.random((trials_per_point, eu.size)) >= p
                hits[pi] += _kernels.spanning_trials_edge(
                    g.n_vertices, eu, ev, masks, keep)
            totals[pi] += trials_per_point

    frac = hits / totals
    stderr = np.sqrt(np.maximum(frac * (1 - frac), 0.0) / totals)
    return ThresholdCurve(mode=mode, p_delete=p_grid, p_cluster=frac,
                          stderr=stderr, trials=totals)


def estimate_threshold(curve: ThresholdCurve, level: float = 0.5) -> ThresholdEstimate:
    """Locate the p_cluster = level crossing by linear interpolation.

    Uses the first grid interval where the curve falls through the
    level.  The uncertainty combines, in quadrature, the propagated
    standard errors of the bracketing points and half the grid spacing.
    """
    p, c, se = curve.p_delete, curve.p_cluster, curve.stderr
    bracket = None
    for i in range(p.size - 1):
        if c[i] >= level > c[i + 1]:
            bracket = i
            break
    if bracket is None:
        raise ValueError("grid does not bracket threshold")
    i = bracket
    dp = p[i + 1] - p[i]
    dc = c[i] - c[i + 1]
    t = (c[i] - level) / dc
    p_star = p[i] + t * dp
    # propagate endpoint errors through the interpolation formula
    dds_i = (1 - t) * dp / dc
    dds_j = t * dp / dc
    err = float(np.sqrt((dds_i * se[i]) ** 2 + (dds_j * se[i + 1]) ** 2
                        + (dp / 2) ** 2))
    return ThresholdEstimate(p_star=float(p_star), uncertainty=err, level=level)
