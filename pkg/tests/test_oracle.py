import itertools
import json

import numpy as np
import pytest

from akltsim.oracle import dense
from akltsim.oracle.checks import (check_antiferro_exclusion,
                                   check_completeness_over_outcomes,
                                   check_example_star, check_example_two_site,
                                   check_identities, check_graph_stabilizers,
                                   check_povm_completeness, run_oracle_suite,
                                   verify_weight_convention)
from akltsim.oracle.fragments import (FragmentGraph, apply_povm_config,
                                      build_aklt_fragment, builtin_fragments,
                                      fragment_norm_sq,
                                      fragment_norm_sq_boundary_sum,
                                      load_fragments)
from akltsim.oracle.pauli import PauliString, from_factors
from akltsim.oracle.stabilizers import expected_graph_stabilizers

FRAGS = builtin_fragments()


def test_symmetric_projector_axioms():
    p = dense.symmetric_projector()
    assert np.linalg.norm(p @ p - p) < 1e-12
    assert np.linalg.norm(p - p.conj().T) < 1e-12
    assert np.trace(p).real == pytest.approx(4.0)


def test_projector_keeps_000_and_w_component():
    p = dense.symmetric_projector()
    v000 = dense.axis_triple("z", +1)
    np.testing.assert_allclose(p @ v000, v000, atol=1e-12)
    e001 = np.zeros(8, dtype=complex)
    e001[1] = 1.0  # |001>
    np.testing.assert_allclose(p @ e001, dense.w_state() / np.sqrt(3),
                               atol=1e-12)


def test_povm_elements():
    fz = dense.povm_element("z")
    v = dense.axis_triple("z", -1)
    np.testing.assert_allclose(fz @ v, np.sqrt(2 / 3) * v, atol=1e-12)
    # completeness at operator-norm tolerance
    assert check_povm_completeness().passed
    with pytest.raises(ValueError):
        dense.povm_element("w")


def test_povm_completeness_negative_control():
    # corrupt the sqrt(2/3) prefactor of one element
    bad = {a: dense.povm_element(a) for a in "xyz"}
    bad["z"] = bad["z"] / np.sqrt(2 / 3)
    result = check_povm_completeness(bad)
    assert not result.passed
    assert result.details["deviation"] > 1e-3


def test_singlet_and_is_stabilized():
    singlet = dense.SINGLET
    assert dense.is_stabilized(singlet, PauliString("ZZ", phase=-1))
    assert not dense.is_stabilized(singlet, PauliString("ZZ", phase=1))
    with pytest.raises(ValueError):
        dense.is_stabilized(np.zeros(4, dtype=complex), PauliString("ZZ"))


def test_resolve_sign_unique():
    singlet = dense.SINGLET
    assert dense.resolve_sign(singlet, PauliString("XX")) == -1
    with pytest.raises(ValueError):
        dense.resolve_sign(singlet, PauliString("XZ"))


def test_fragment_validation():
    with pytest.raises(ValueError):
        FragmentGraph(2, ((0, 0, 0, 1),))    # same site
    with pytest.raises(ValueError):
        FragmentGraph(2, ((0, 0, 1, 0), (0, 0, 1, 1)))  # slot reuse
    with pytest.raises(ValueError):
        FragmentGraph(1, ((0, 0, 1, 0),))    # site out of range


def test_fragment_qubit_budget():
    big = FragmentGraph(7, tuple((i, 1, i + 1, 0) for i in range(6)))
    with pytest.raises(ValueError):
        build_aklt_fragment(big)


def test_fragment_json_roundtrip(tmp_path):
    fg = FRAGS["star"]
    path = tmp_path / "frag.json"
    path.write_text(json.dumps([fg.to_json_dict()]))
    loaded = load_fragments(str(path))
    assert loaded[0] == fg


def test_build_singlet_invariance_two_sites():
    fg = FRAGS["two_site_edge"]
    state, layout = build_aklt_fragment(fg)
    assert dense.norm(state) > 0
    # the bond singlet's -ZZ survives the measurement on both sites
    # (it commutes with F_z x F_z, the appendix argument)
    post = apply_povm_config(state, fg, "zz", layout)
    p = from_factors(layout.n_qubits, {2: "Z", 3: "Z"}, phase=-1)
    assert dense.is_stabilized(post, p)
    # on the pre-measurement state the same-sign local projections kill
    # the bond (the contraction rule's origin), so the state is nonzero
    # only through the antisymmetric component
    v = dense.axis_triple("z", +1)
    proj = np.outer(v, v.conj())
    cut = dense.apply_local(state, proj, (0, 1, 2), layout.n_qubits)
    cut = dense.apply_local(cut, proj, (3, 4, 5), layout.n_qubits)
    assert dense.norm(cut) <= 1e-12 * dense.norm(state)


def test_projector_absorbed_by_povm():
    # applying the measurement after the projector equals applying it
    # directly to the singlet product
    fg = FRAGS["triple_edge"]
    state, layout = build_aklt_fragment(fg)
    pairs = [(fg.slot_qubit(sa, la), fg.slot_qubit(sb, lb))
             for sa, la, sb, lb in fg.edges]
    raw = dense.product_of_singlets(pairs, layout.n_qubits)
    a = apply_povm_config(state, fg, "zx", layout)
    b = apply_povm_config(raw, fg, "zx", layout)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_hexagon_norm_positive():
    fg = FRAGS["hexagon"]
    value = fragment_norm_sq(fg, "zzzzzz")
    assert value > 0


def test_apply_povm_linearity_zero_state():
    fg = FRAGS["two_site_edge"]
    _, layout = build_aklt_fragment(fg)
    zero = np.zeros(2 ** layout.n_qubits, dtype=complex)
    out = apply_povm_config(zero, fg, "zz", layout)
    assert dense.norm(out) == 0.0


def test_traced_norm_matches_dense_boundary_sum():
    """The partial-trace fast path equals the explicit 18-qubit sum."""
    fg = FRAGS["hexagon"]
    rng = np.random.default_rng(3)
    configs = ["zzzzzz", "xzzzzz", "xyzxyz"]
    configs += ["".join(rng.choice(list("xyz"), size=6)) for _ in range(3)]
    for cfg in configs:
        fast = fragment_norm_sq(fg, cfg)
        full = fragment_norm_sq_boundary_sum(fg, cfg)
        assert fast == pytest.approx(full, rel=1e-10)


def test_traced_norm_matches_terminated_norm():
    """Tracing equals termination up to 2**n_boundary."""
    fg = FRAGS["path3"]
    state, layout = build_aklt_fragment(fg)
    n_b = len(fg.boundary_slots())
    for cfg in ("zzz", "xyz", "zyx", "xxy"):
        post = apply_povm_config(state, fg, cfg, layout)
        assert fragment_norm_sq(fg, cfg) == pytest.approx(
            2 ** n_b * dense.norm(post) ** 2, rel=1e-10)


def test_antiferro_exclusion_and_completeness():
    assert check_antiferro_exclusion().passed
    assert check_completeness_over_outcomes().passed


def test_example_two_site():
    r = check_example_two_site()
    assert r.passed
    assert r.details["code_dimension"] == pytest.approx(2.0, abs=1e-9)


def test_example_star_sign_is_minus():
    r = check_example_star()
    assert r.passed
    # the minus sign matches the signed six-X operator of the encoding
    assert r.details["resolved_sign"] == -1


def test_weight_convention_multigraph_wins():
    pool = builtin_fragments()
    r = verify_weight_convention([pool["two_site_edge"], pool["triple_edge"],
                                  pool["four_cycle"]])
    assert r.passed
    assert r.details["convention"] == "multigraph"
    assert r.details["four_cycle"]["spread_multigraph"] < 1e-9
    assert r.details["four_cycle"]["spread_simple"] > 1e-3


def test_weight_convention_requires_discriminating_fragment():
    with pytest.raises(ValueError, match="discriminate"):
        verify_weight_convention([FRAGS["two_site_edge"]])
    with pytest.raises(ValueError, match="empty"):
        verify_weight_convention([])


def test_weight_convention_closed_fragment_k33():
    """Pure-state discrimination with no boundary handling at all."""
    fg = FRAGS["k33"]
    assert not fg.boundary_slots()
    table = {}
    rng = np.random.default_rng(1)
    configs = ["zzzzzz", "xzzzzz", "zxzxzx"]
    configs += ["".join(rng.choice(list("xyz"), size=6)) for _ in range(12)]
    from akltsim.sampler import log2_weight_graph
    edges = fg.site_graph_edges()
    ratios_m, ratios_s = [], []
    simple_differs = False
    for cfg in dict.fromkeys(configs):
        codes = np.array([ord(c) for c in cfg])
        w_m = log2_weight_graph(6, edges, codes, "multigraph")
        w_s = log2_weight_graph(6, edges, codes, "simple")
        simple_differs = simple_differs or (w_m != w_s)
        norm = fragment_norm_sq(fg, cfg)
        ratios_m.append(norm / 2.0 ** w_m)
        ratios_s.append(norm / 2.0 ** w_s)
    assert simple_differs
    spread = (max(ratios_m) - min(ratios_m)) / np.median(ratios_m)
    assert spread < 1e-9
    spread_s = (max(ratios_s) - min(ratios_s)) / np.median(ratios_s)
    assert spread_s > 1e-3


def test_expected_stabilizers_structure():
    fg = FRAGS["star"]
    sts = expected_graph_stabilizers(fg, "zxxx")
    # four domains, three graph edges, one generator per domain
    assert sts.partition.n_domains == 4
    assert len(sts.generators) == 4
    # intra: two per site plus contracted-edge pairs (none here)
    assert len(sts.intra_domain) == 8
    # termination stabilizers for the six leaf boundary slots
    assert len(sts.termination) == 6
    # everything commutes pairwise
    ops = sts.intra_domain + sts.termination + sts.generators
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            assert ops[i].commutes_with(ops[j])


def test_expected_stabilizers_isolated_domain_is_bare_flip():
    # all-same outcomes on a closed fragment: single domain, no neighbours
    fg = FRAGS["triple_edge"]
    sts = expected_graph_stabilizers(fg, "zz")
    assert len(sts.generators) == 1
    assert sts.generators[0].letters == "XXXXXX"
    assert sts.predicted_signs[0] == -1  # three singlets touched


def test_graph_stabilizer_suite_default():
    assert check_graph_stabilizers().passed


def test_oracle_suite_report_shape():
    report = run_oracle_suite()
    assert report["all_passed"]
    assert report["resolved_weight_convention"] == "multigraph"
    assert report["resolved_star_sign"] == -1
    names = {c["name"] for c in report["checks"]}
    assert {"oracle_identities", "weight_convention",
            "graph_stabilizers"} <= names
