"""Verification suite for the exact fragment oracle.

Each check returns a CheckResult; run_oracle_suite bundles them into a
JSON-serializable report.  The weight-convention check is the
arbitration point for the Metropolis weight: exact squared norms over
all outcome configurations of small fragments are tested for
proportionality against 2**(|V| - |E|) under both edge-count
conventions, and exactly one must survive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..sampler import log2_weight_graph
from . import dense
from .fragments import (FragmentGraph, apply_povm_config, build_aklt_fragment,
                        builtin_fragments, fragment_norm_sq)
from .pauli import PauliString, from_factors
from .stabilizers import expected_graph_stabilizers, verify_stabilizer_set

TOL = 1e-12
SPREAD_TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


def _opnorm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2))


def _partial_trace_last(op: np.ndarray, keep: int) -> np.ndarray:
    """Trace an 8x8 site operator down to its first ``keep`` slots."""
    m = 3
    t = op.reshape([2] * 6)
    while m > keep:
        t = np.trace(t, axis1=m - 1, axis2=2 * m - 1)
        m -= 1
    return t.reshape(2 ** keep, 2 ** keep)


def check_povm_completeness(elements: dict[str, np.ndarray] | None = None) -> CheckResult:
    """Sum of Gram operators equals the symmetric projector.

    ``elements`` overrides the measurement operators (negative-control
    hook for tests).
    """
    if elements is None:
        elements = {a: dense.povm_element(a) for a in "xyz"}
    total = sum(f.conj().T @ f for f in elements.values())
    dev = _opnorm(total - dense.symmetric_projector())
    return CheckResult("povm_completeness", dev <= TOL, {"deviation": dev})


def check_identities() -> CheckResult:
    """Projector axioms, POVM structure, and traced-operator identities."""
    details: dict = {}
    ok = True
    proj = dense.symmetric_projector()
    checks = {
        "projector_idempotent": _opnorm(proj @ proj - proj),
        "projector_hermitian": _opnorm(proj - proj.conj().T),
        "projector_trace": abs(np.trace(proj).real - 4.0),
    }
    for axis in "xyz":
        f = dense.povm_element(axis)
        # F picks symmetric states only, so the projector is absorbed
        checks[f"f{axis}_absorbs_projector"] = _opnorm(f @ proj - f)
        for keep in range(4):
            tg = dense.traced_gram(axis, keep)
            checks[f"traced_gram_{axis}_{keep}_psd"] = float(
                max(0.0, -np.linalg.eigvalsh(tg).min()))
    # completeness survives every partial trace
    for keep in range(4):
        total = sum(dense.traced_gram(a, keep) for a in "xyz")
        target = _partial_trace_last(dense.symmetric_projector(), keep)
        checks[f"traced_completeness_{keep}"] = _opnorm(total - target)
    # singlet is fixed by the signed same-letter pairs
    for letter in "XYZ":
        p = from_factors(2, {0: letter, 1: letter}, phase=-1)
        checks[f"singlet_stabilizer_{letter}"] = dense.norm(
            p.apply(dense.SINGLET) - dense.SINGLET)
    # spot values of the elements
    fz = dense.povm_element("z")
    v111 = dense.axis_triple("z", -1)
    checks["fz_on_111"] = dense.norm(fz @ v111 - np.sqrt(2 / 3) * v111)
    fx = dense.povm_element("x")
    v000 = dense.axis_triple("z", +1)
    expect = np.sqrt(2 / 3) * (dense.axis_triple("x", +1)
                               + dense.axis_triple("x", -1)) * 2.0 ** -1.5
    checks["fx_on_000"] = dense.norm(fx @ v000 - expect)

    for key, dev in checks.items():
        details[key] = float(dev)
        ok = ok and dev <= TOL
    comp = check_povm_completeness()
    details["povm_completeness"] = comp.details["deviation"]
    ok = ok and comp.passed
    return CheckResult("oracle_identities", ok, details)


def check_antiferro_exclusion(fragments: list[FragmentGraph] | None = None) -> CheckResult:
    """Equal same-sign projections on a bond annihilate the state.

    For every internal edge and axis, projecting both endpoint sites
    onto the same-sign S_a = +-3/2 component of the pre-measurement
    state gives (numerically) zero: the antiferromagnetic origin of the
    contraction rule.
    """
    if fragments is None:
        pool = builtin_fragments()
        fragments = [pool["two_site_edge"], pool["triple_edge"], pool["path3"]]
    worst = 0.0
    for fg in fragments:
        state, layout = build_aklt_fragment(fg)
        ref = dense.norm(state)
        for sa, _, sb, _ in fg.edges:
            for axis in "xyz":
                for sign in (+1, -1):
                    v = dense.axis_triple(axis, sign)
                    proj = np.outer(v, v.conj())
                    cut = dense.apply_local(state, proj, (3 * sa, 3 * sa + 1, 3 * sa + 2),
                                            layout.n_qubits)
                    cut = dense.apply_local(cut, proj, (3 * sb, 3 * sb + 1, 3 * sb + 2),
                                            layout.n_qubits)
                    worst = max(worst, dense.norm(cut) / ref)
    return CheckResult("antiferromagnetic_exclusion", worst <= TOL,
                       {"worst_relative_norm": worst})


def check_example_two_site() -> CheckResult:
    """Two adjacent z-outcomes: explicit stabilizers and code dimension.

    The post-measurement state on sites u = {qubits 0,1,2} and
    v = {3,4,5} (bond between 2 and 3) is fixed by Z0Z1, Z1Z2, -Z2Z3,
    Z3Z4, Z4Z5, and inside the image of F_z x F_z those operators fix
    exactly a two-dimensional subspace.
    """
    fg = builtin_fragments()["two_site_edge"]
    state, layout = build_aklt_fragment(fg)
    post = apply_povm_config(state, fg, "zz", layout)
    n = layout.n_qubits
    stabs = [
        from_factors(n, {0: "Z", 1: "Z"}),
        from_factors(n, {1: "Z", 2: "Z"}),
        from_factors(n, {2: "Z", 3: "Z"}, phase=-1),
        from_factors(n, {3: "Z", 4: "Z"}),
        from_factors(n, {4: "Z", 5: "Z"}),
    ]
    all_fixed = all(dense.is_stabilized(post, p, TOL) for p in stabs)

    # code dimension inside the measurement image, on the 6 site qubits
    f = dense.povm_element("z")
    image = (1.5 ** 2) * np.kron(f.conj().T @ f, f.conj().T @ f)
    acc = image
    for p in stabs:
        mat = np.zeros((64, 64), dtype=complex)
        basis = np.eye(64, dtype=complex)
        six = [PauliString(p.letters[:6], p.phase)]
        for col in range(64):
            mat[:, col] = six[0].apply(basis[:, col])
        acc = acc @ (np.eye(64) + mat) / 2.0
    dim = float(np.trace(acc).real)
    return CheckResult(
        "example_two_site_encoding",
        all_fixed and abs(dim - 2.0) <= 1e-9 and dense.norm(post) > 1e-12,
        {"stabilizers_fixed": bool(all_fixed), "code_dimension": dim})


def check_example_star() -> CheckResult:
    """Central z with three x neighbours: the six-X operator's sign.

    Exactly one sign of X on the bond qubits {0,1,2,3,6,9} fixes the
    post-measurement state; the resolved sign is reported.
    """
    fg = builtin_fragments()["star"]
    state, layout = build_aklt_fragment(fg)
    post = apply_povm_config(state, fg, "zxxx", layout)
    letters = {q: "X" for q in (0, 1, 2, 3, 6, 9)}
    op = from_factors(layout.n_qubits, letters)
    try:
        sign = dense.resolve_sign(post, op, TOL)
    except ValueError as exc:
        return CheckResult("example_star_generator", False, {"error": str(exc)})
    return CheckResult("example_star_generator", True, {"resolved_sign": sign})


def check_completeness_over_outcomes() -> CheckResult:
    """Sum of squared norms over all outcomes returns the state's norm."""
    pool = builtin_fragments()
    details = {}
    ok = True
    for name in ("two_site_edge", "triple_edge"):
        fg = pool[name]
        state, layout = build_aklt_fragment(fg)
        total = 0.0
        for outcomes in itertools.product("xyz", repeat=fg.n_sites):
            post = apply_povm_config(state, fg, "".join(outcomes), layout)
            total += dense.norm(post) ** 2
        ref = dense.norm(state) ** 2
        rel = abs(total - ref) / ref
        details[name] = rel
        ok = ok and rel <= 1e-11
    return CheckResult("completeness_over_outcomes", ok, details)


def _fragment_weight_table(fg: FragmentGraph) -> dict:
    """Exact norms and both weight conventions over all configurations."""
    edges = fg.site_graph_edges()
    norms = []
    w_multi = []
    w_simple = []
    for outcomes in itertools.product("xyz", repeat=fg.n_sites):
        s = "".join(outcomes)
        codes = np.array([ord(c) for c in s])
        norms.append(fragment_norm_sq(fg, s))
        w_multi.append(log2_weight_graph(fg.n_sites, edges, codes, "multigraph"))
        w_simple.append(log2_weight_graph(fg.n_sites, edges, codes, "simple"))
    return {"norms": np.array(norms),
            "multigraph": np.array(w_multi, dtype=float),
            "simple": np.array(w_simple, dtype=float)}


def _relative_spread(ratios: np.ndarray) -> float:
    return float((ratios.max() - ratios.min()) / np.median(ratios))


def verify_weight_convention(fragments: list[FragmentGraph] | None = None) -> CheckResult:
    """Decide the edge-count convention of the sampling weight.

    For each fragment the exact squared norm over all 3**n outcome
    configurations is divided by 2**(|V| - |E|) under both conventions;
    a convention passes when the ratio is constant (relative spread
    below 1e-9).  Fragments on which the two conventions coincide are
    consistency checks; fragments that can discriminate must select
    exactly one convention, and all verdicts must agree.
    """
    if fragments is None:
        pool = builtin_fragments()
        fragments = [pool["two_site_edge"], pool["triple_edge"],
                     pool["four_cycle"], pool["hexagon"]]
    if not fragments:
        raise ValueError("empty fragment list")
    details: dict = {}
    verdicts = []
    ok = True
    for fg in fragments:
        table = _fragment_weight_table(fg)
        discriminates = bool(np.any(table["multigraph"] != table["simple"]))
        entry: dict = {"discriminates": discriminates}
        passing = []
        for conv in ("multigraph", "simple"):
            ratios = table["norms"] / 2.0 ** table[conv]
            spread = _relative_spread(ratios)
            entry[f"spread_{conv}"] = spread
            if spread < SPREAD_TOL:
                passing.append(conv)
        if discriminates:
            if len(passing) != 1:
                ok = False
                entry["error"] = f"conventions passing: {passing}"
            else:
                verdicts.append(passing[0])
                entry["verdict"] = passing[0]
        else:
            if len(passing) != 2:
                ok = False
                entry["error"] = "consistency fragment failed the weight law"
        details[fg.name] = entry
    if not verdicts:
        raise ValueError("fragment cannot discriminate between conventions")
    if len(set(verdicts)) != 1:
        ok = False
    convention = verdicts[0] if len(set(verdicts)) == 1 else None
    details["convention"] = convention
    return CheckResult("weight_convention", ok, details)


def check_graph_stabilizers(seed: int = 7, per_fragment: int = 12,
                            exhaustive: bool = False) -> CheckResult:
    """Emitted stabilizer sets hold on dense post-measurement states.

    Samples outcome configurations on the terminated fragments (plus the
    all-equal and all-distinct corner cases), builds the exact state,
    and requires exact intra-domain/termination stabilization, a unique
    sign per graph generator, and pairwise commutation.
    """
    rng = np.random.default_rng(seed)
    pool = builtin_fragments()
    fragments = [pool["triple_edge"], pool["star"], pool["path3"],
                 pool["four_cycle"]]
    details: dict = {}
    ok = True
    for fg in fragments:
        state, layout = build_aklt_fragment(fg)
        configs: list[str]
        if exhaustive or 3 ** fg.n_sites <= 9:
            configs = ["".join(c) for c in itertools.product("xyz", repeat=fg.n_sites)]
        else:
            configs = ["z" * fg.n_sites, "x" * fg.n_sites]
            if fg.name == "star":
                configs.append("zxxx")
            if fg.name == "four_cycle":
                configs.append("xzzz")  # even-multiplicity bond after reduction
            while len(configs) < per_fragment:
                configs.append("".join(rng.choice(list("xyz"), size=fg.n_sites)))
        checked = 0
        resolved: list[int] = []
        for cfg in dict.fromkeys(configs):
            post = apply_povm_config(state, fg, cfg, layout)
            if dense.norm(post) <= 1e-12:
                ok = False
                details[f"{fg.name}:{cfg}"] = "unexpected zero-probability state"
                continue
            sts = expected_graph_stabilizers(fg, cfg, layout)
            report = verify_stabilizer_set(post, sts, TOL)
            if not report["passed"]:
                ok = False
                details[f"{fg.name}:{cfg}"] = report["failed"]
            resolved.extend(report["signs"])
            checked += 1
        details[fg.name] = {"configs_checked": checked,
                            "signs_resolved": len(resolved)}
    return CheckResult("graph_stabilizers", ok, details)


def run_oracle_suite(seed: int = 7, fragments: list[FragmentGraph] | None = None,
                     exhaustive: bool = False) -> dict:
    """Run every oracle check; returns a JSON-serializable report."""
    checks = [
        check_identities(),
        check_antiferro_exclusion(),
        check_example_two_site(),
        check_example_star(),
        check_completeness_over_outcomes(),
        verify_weight_convention(fragments),
        check_graph_stabilizers(seed=seed, exhaustive=exhaustive),
    ]
    convention = None
    example_sign = None
    for c in checks:
        if c.name == "weight_convention":
            convention = c.details.get("convention")
        if c.name == "example_star_generator":
            example_sign = c.details.get("resolved_sign")
    return {
        "all_passed": all(c.passed for c in checks),
        "checks": [c.to_json_dict() for c in checks],
        "resolved_weight_convention": convention,
        "resolved_star_sign": example_sign,
    }
