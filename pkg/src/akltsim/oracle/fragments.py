"""Small trivalent fragments for exact dense verification.

A fragment is a set of sites, each owning three virtual-qubit slots,
plus internal edges pairing slots on distinct sites.  Slots left
unpaired are boundary slots.  For state-level checks every boundary
slot is terminated by an extra spin-1/2 joined through a singlet; for
norm-only scans the termination is traced out exactly, which reduces to
a smaller dense computation on the bonded slots.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import dense

QUBIT_BUDGET = 20


@dataclass(frozen=True)
class FragmentGraph:
    """Trivalent fragment: sites with 3 slots each, edges between slots."""

    n_sites: int
    edges: tuple[tuple[int, int, int, int], ...]  # (site_a, slot_a, site_b, slot_b)
    name: str = "fragment"

    def __post_init__(self):
        used = set()
        for sa, la, sb, lb in self.edges:
            if sa == sb:
                raise ValueError("edge must join distinct sites")
            for s, l in ((sa, la), (sb, lb)):
                if not (0 <= s < self.n_sites and 0 <= l < 3):
                    raise ValueError(f"invalid slot ({s}, {l})")
                if (s, l) in used:
                    raise ValueError(f"slot ({s}, {l}) used by two edges")
                used.add((s, l))

    @property
    def n_site_qubits(self) -> int:
        return 3 * self.n_sites

    def slot_qubit(self, site: int, slot: int) -> int:
        return 3 * site + slot

    def paired_slots(self) -> set[tuple[int, int]]:
        out = set()
        for sa, la, sb, lb in self.edges:
            out.add((sa, la))
            out.add((sb, lb))
        return out

    def boundary_slots(self) -> list[tuple[int, int]]:
        paired = self.paired_slots()
        return [(s, l) for s in range(self.n_sites) for l in range(3)
                if (s, l) not in paired]

    @property
    def n_terminated_qubits(self) -> int:
        return self.n_site_qubits + len(self.boundary_slots())

    def site_graph_edges(self) -> np.ndarray:
        """Edges as site pairs (multigraph), for the R1/R2 machinery."""
        if not self.edges:
            return np.empty((0, 2), dtype=np.int64)
        return np.array([(sa, sb) for sa, _, sb, _ in self.edges], dtype=np.int64)

    def sublattice_signs(self) -> np.ndarray:
        """+1/-1 per site from a two-coloring; fragments must be bipartite."""
        signs = np.zeros(self.n_sites, dtype=np.int64)
        adj: list[list[int]] = [[] for _ in range(self.n_sites)]
        for sa, _, sb, _ in self.edges:
            adj[sa].append(sb)
            adj[sb].append(sa)
        for start in range(self.n_sites):
            if signs[start] != 0:
                continue
            signs[start] = 1
            stack = [start]
            while stack:
                u = stack.pop()
                for v in adj[u]:
                    if signs[v] == 0:
                        signs[v] = -signs[u]
                        stack.append(v)
                    elif signs[v] == signs[u]:
                        raise ValueError("fragment is not bipartite")
        return signs

    def to_json_dict(self) -> dict:
        return {"sites": self.n_sites, "edges": [list(e) for e in self.edges],
                "name": self.name}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "FragmentGraph":
        return cls(n_sites=int(payload["sites"]),
                   edges=tuple(tuple(int(x) for x in e) for e in payload["edges"]),
                   name=str(payload.get("name", "fragment")))


def load_fragments(path: str) -> list[FragmentGraph]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if isinstance(payload, dict):
        payload = [payload]
    return [FragmentGraph.from_json_dict(p) for p in payload]


def builtin_fragments() -> dict[str, FragmentGraph]:
    """The fragments used throughout the verification suite.

    two_site_edge   the two-site encoding example (one bond)
    triple_edge     two sites joined by all three slots (closed)
    star            central site bonded to three leaves
    four_cycle      alternating ring of four sites
    hexagon         six-site ring, one free slot per site
    k33             closed bipartite double ring (18 qubits, no boundary)
    path3           three-site chain
    """
    ring6 = tuple((i, 1, (i + 1) % 6, 0) for i in range(6))
    return {
        "two_site_edge": FragmentGraph(2, ((0, 2, 1, 0),), name="two_site_edge"),
        "triple_edge": FragmentGraph(2, tuple((0, k, 1, k) for k in range(3)),
                                     name="triple_edge"),
        "star": FragmentGraph(4, ((0, 0, 1, 0), (0, 1, 2, 0), (0, 2, 3, 0)),
                              name="star"),
        "four_cycle": FragmentGraph(4, tuple((i, 1, (i + 1) % 4, 0) for i in range(4)),
                                    name="four_cycle"),
        "hexagon": FragmentGraph(6, ring6, name="hexagon"),
        "k33": FragmentGraph(6, ring6 + ((0, 2, 3, 2), (2, 2, 5, 2), (4, 2, 1, 2)),
                             name="k33"),
        "path3": FragmentGraph(3, ((0, 2, 1, 0), (1, 2, 2, 0)), name="path3"),
    }


@dataclass(frozen=True)
class FragmentLayout:
    """Qubit register of a terminated fragment state."""

    n_qubits: int
    n_site_qubits: int
    terminator_of: dict[tuple[int, int], int]  # boundary slot -> terminator qubit


def fragment_layout(fg: FragmentGraph) -> FragmentLayout:
    boundary = fg.boundary_slots()
    terminator_of = {bs: fg.n_site_qubits + j for j, bs in enumerate(boundary)}
    return FragmentLayout(n_qubits=fg.n_site_qubits + len(boundary),
                          n_site_qubits=fg.n_site_qubits,
                          terminator_of=terminator_of)


def build_aklt_fragment(fg: FragmentGraph) -> tuple[np.ndarray, FragmentLayout]:
    """Valence-bond state of the fragment, boundary slots terminated.

    Singlets are placed on every internal edge and between every
    boundary slot and its terminating spin-1/2; the symmetric projector
    is then applied at every site.  The returned state is unnormalized.
    """
    layout = fragment_layout(fg)
    if layout.n_qubits > QUBIT_BUDGET:
        raise ValueError(
            f"fragment {fg.name!r} needs {layout.n_qubits} qubits, "
            f"budget is {QUBIT_BUDGET}")
    pairs = [(fg.slot_qubit(sa, la), fg.slot_qubit(sb, lb))
             for sa, la, sb, lb in fg.edges]
    pairs += [(fg.slot_qubit(s, l), t) for (s, l), t in layout.terminator_of.items()]
    state = dense.product_of_singlets(pairs, layout.n_qubits)
    proj = dense.symmetric_projector()
    for s in range(fg.n_sites):
        qs = (3 * s, 3 * s + 1, 3 * s + 2)
        state = dense.apply_local(state, proj, qs, layout.n_qubits)
    return state, layout


def apply_povm_config(state: np.ndarray, fg: FragmentGraph, outcomes: str,
                      layout: FragmentLayout) -> np.ndarray:
    """Apply F_{a_v} on every site's three qubits; unnormalized result."""
    if len(outcomes) != fg.n_sites:
        raise ValueError("outcomes must cover every fragment site")
    for s, axis in enumerate(outcomes):
        op = dense.povm_element(axis)
        qs = (3 * s, 3 * s + 1, 3 * s + 2)
        state = dense.apply_local(state, op, qs, layout.n_qubits)
    return state


def _bonded_register(fg: FragmentGraph) -> tuple[dict[tuple[int, int], int], int]:
    """Compact qubit indices for the edge-paired slots only."""
    paired = sorted(fg.paired_slots())
    index = {sl: i for i, sl in enumerate(paired)}
    return index, len(paired)


def fragment_norm_sq(fg: FragmentGraph, outcomes: str) -> float:
    """Exact squared norm of the post-measurement fragment state.

    Boundary terminations are traced out analytically: each site
    contributes its Gram operator reduced to the bonded slots
    (dense.traced_gram), applied to the singlet product over internal
    edges.  For a closed fragment this is the plain dense norm; for a
    terminated fragment it equals 2**n_boundary times the norm of the
    terminated state (each traced termination contributes a factor 2).
    """
    if len(outcomes) != fg.n_sites:
        raise ValueError("outcomes must cover every fragment site")
    index, n_bonded = _bonded_register(fg)
    if n_bonded > QUBIT_BUDGET:
        raise ValueError(f"fragment {fg.name!r} exceeds the qubit budget")
    pairs = [(index[(sa, la)], index[(sb, lb)]) for sa, la, sb, lb in fg.edges]
    state = dense.product_of_singlets(pairs, n_bonded)
    scalar = 1.0
    for s in range(fg.n_sites):
        slots = sorted(l for (site, l) in index if site == s)
        qs = tuple(index[(s, l)] for l in slots)
        axis = outcomes[s]
        if not qs:
            scalar *= 4.0 / 3.0
            continue
        gram = dense.traced_gram(axis, len(qs))
        if len(qs) == 3:
            op = dense.povm_element(axis)  # F itself factorizes the full Gram
            state = dense.apply_local(state, op, qs, n_bonded)
        else:
            # traced grams are (2/3) * projector, so sqrt(2/3) * projector
            # is an exact factor G with G^dag G = gram
            op = np.sqrt(3.0 / 2.0) * gram
            state = dense.apply_local(state, op, qs, n_bonded)
    return scalar * float(np.vdot(state, state).real)


def fragment_norm_sq_boundary_sum(fg: FragmentGraph, outcomes: str) -> float:
    """Squared norm summed over all boundary-slot basis states.

    Direct dense computation on the full site-qubit register: boundary
    slots are initialized to every computational basis assignment and
    the squared norms are summed, which is the exact partial trace.
    Slow; used to cross-check fragment_norm_sq.
    """
    n = fg.n_site_qubits
    if n > QUBIT_BUDGET:
        raise ValueError(f"fragment {fg.name!r} exceeds the qubit budget")
    index, n_bonded = _bonded_register(fg)
    bonded_qubits = sorted(fg.slot_qubit(s, l) for s, l in index)
    bqubits = sorted(fg.slot_qubit(s, l) for s, l in fg.boundary_slots())
    pairs = [(index[(sa, la)], index[(sb, lb)]) for sa, la, sb, lb in fg.edges]
    base = (dense.product_of_singlets(pairs, n_bonded) if pairs
            else np.ones(1, dtype=complex))
    ops = [dense.povm_element(a) for a in outcomes]

    total = 0.0
    for bits in range(2 ** len(bqubits)):
        # grow the full register by inserting boundary axes in
        # increasing qubit order; axes always stay sorted by qubit index
        psi = base.reshape([2] * n_bonded) if n_bonded else base.reshape(())
        for rank, q in enumerate(bqubits):
            vec = np.zeros(2, dtype=complex)
            vec[(bits >> rank) & 1] = 1.0
            pos = sum(1 for b in bonded_qubits if b < q) + rank
            psi = np.tensordot(psi, vec, axes=0)
            psi = np.moveaxis(psi, -1, pos)
        state = np.ascontiguousarray(psi).reshape(-1)
        for s in range(fg.n_sites):
            qs = (3 * s, 3 * s + 1, 3 * s + 2)
            state = dense.apply_local(state, ops[s], qs, n)
        total += float(np.vdot(state, state).real)
    return total
