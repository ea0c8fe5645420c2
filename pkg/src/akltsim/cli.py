"""Command-line front end: sample, percolate, stats, oracle-verify.

Configuration comes from an optional JSON file plus flag overrides
(flags win).  Each run writes into a fresh directory named by the hash
of its resolved configuration; existing run directories are never
overwritten.  AKLT_THREADS caps worker processes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import records
from .domains import contract_domains, mod2_reduce
from .lattice import build_honeycomb
from .oracle.checks import run_oracle_suite, verify_weight_convention
from .oracle.fragments import builtin_fragments, load_fragments
from .percolation import (estimate_threshold, make_spanning_query,
                          threshold_scan)
from .sampler import ChainParams, sample_chain
from .stats import (OBSERVABLES, accumulate, extrapolate_infinite,
                    fit_log_growth, make_sample_record)

DEFAULT_P_GRID = "0.0:0.6:0.02"


@dataclass
class RunConfig:
    command: str
    L: list[int] = field(default_factory=lambda: [20])
    boundary: str = "periodic"
    seed: int = 1
    samples: int = 500
    burn_in: int = 2000
    thinning: int = 10
    convention: str = "multigraph"
    mode: str = "both"
    p_grid: str = DEFAULT_P_GRID
    trials: int = 10
    out: str = "out"
    input: str | None = None
    fragments: str | None = None
    exhaustive: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _resolve_workers(n_jobs: int) -> int:
    cap = os.environ.get("AKLT_THREADS")
    workers = os.cpu_count() or 1
    if cap is not None:
        workers = min(workers, max(1, int(cap)))
    return max(1, min(workers, n_jobs))


def _parse_p_grid(spec: str) -> np.ndarray:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError as exc:
        raise ValueError(f"bad p-grid {spec!r}, expected start:stop:step") from exc
    if step <= 0:
        raise ValueError("p-grid step must be positive")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def _chain_seed(master: int, L: int, salt: int = 0) -> int:
    return int(np.random.SeedSequence((master, L, salt)).generate_state(1)[0])


def _make_run_dir(cfg: RunConfig) -> Path:
    digest = records.config_hash(cfg.to_dict())
    run_dir = Path(cfg.out) / f"{cfg.command}-{digest}"
    if run_dir.exists():
        raise FileExistsError(
            f"run directory {run_dir} already exists (outputs are append-only); "
            "change the seed/config or the output directory")
    run_dir.mkdir(parents=True)
    return run_dir


def _write_metadata(run_dir: Path, cfg: RunConfig, extra: dict | None = None) -> None:
    payload = {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())}
    if extra:
        payload.update(extra)
    records.write_json(run_dir / "metadata.json", "run_metadata", payload,
                       cfg.to_dict())


def _resolve_convention(cfg: RunConfig) -> str:
    if cfg.convention != "auto":
        return cfg.convention
    pool = builtin_fragments()
    result = verify_weight_convention([pool["two_site_edge"], pool["four_cycle"]])
    convention = result.details.get("convention")
    if not result.passed or convention is None:
        raise RuntimeError("weight-convention oracle was inconclusive")
    return convention


def _sample_one_L(args: tuple) -> tuple[int, list, list]:
    """Worker: run one chain, return chain-metric and sample rows."""
    L, boundary, seed, samples, burn_in, thinning, convention = args
    lat = build_honeycomb(L, boundary)
    params = ChainParams(seed=seed, n_samples=samples, burn_in=burn_in,
                         thinning=thinning, weight_convention=convention)
    metric_rows = []
    sample_rows = []
    for snap in sample_chain(lat, params):
        metric_rows.append((seed, snap.sweep, L, boundary, snap.n_domains,
                            snap.n_edges_multi, snap.n_edges_simple,
                            snap.log2_weight, snap.acceptance_rate))
        part, mg = contract_domains(lat.n_sites, lat.edges, snap.outcomes)
        rec = make_sample_record(L, boundary, part, mod2_reduce(mg))
        sample_rows.append(tuple(getattr(rec, c) for c in records.SAMPLE_COLUMNS))
    return L, metric_rows, sample_rows


def _run_jobs(jobs: list[tuple], worker) -> list:
    n_workers = _resolve_workers(len(jobs))
    if n_workers == 1 or len(jobs) == 1:
        return [worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(worker, jobs))


def _records_from_rows(rows: list[dict]):
    from .stats import SampleRecord
    out = []
    for r in rows:
        out.append(SampleRecord(
            L=int(r["L"]), boundary=r["boundary"], n_domains=int(r["n_domains"]),
            n_edges_simple=int(r["n_edges_simple"]),
            n_components=int(r["n_components"]), betti=int(r["betti"]),
            mean_degree=float(r["mean_degree"]),
            mean_domain_size=float(r["mean_domain_size"]),
            domain_size_width=float(r["domain_size_width"]),
            max_domain_size=int(float(r["max_domain_size"]))))
    return out


def _summarize(sample_rows: list[tuple], cfg: RunConfig, run_dir: Path) -> None:
    """Write summary.csv and extrapolation.json from sample rows."""
    as_dicts = [dict(zip(records.SAMPLE_COLUMNS, row)) for row in sample_rows]
    recs = _records_from_rows([{k: str(v) for k, v in d.items()} for d in as_dicts])
    by_L: dict[int, list] = {}
    for rec in recs:
        by_L.setdefault(rec.L, []).append(rec)

    summary_rows = []
    per_L_est: dict[str, list[tuple[float, float, float]]] = {}
    max_domain_points: list[tuple[float, float]] = []
    for L in sorted(by_L):
        grp = by_L[L]
        est = accumulate(grp)
        n_sites = L * L
        derived = {
            "domains_per_site": (est["n_domains"].mean / n_sites,
                                 est["n_domains"].stderr / n_sites),
            "edges_per_site": (est["n_edges_simple"].mean / n_sites,
                               est["n_edges_simple"].stderr / n_sites),
            "betti_per_site": (est["betti"].mean / n_sites,
                               est["betti"].stderr / n_sites),
        }
        for name in OBSERVABLES:
            e = est[name]
            summary_rows.append((L, grp[0].boundary, name, e.mean, e.stderr,
                                 e.n_samples))
            per_L_est.setdefault(name, []).append((L, e.mean, e.stderr))
        for name, (mean, err) in derived.items():
            summary_rows.append((L, grp[0].boundary, name, mean, err, len(grp)))
            per_L_est.setdefault(name, []).append((L, mean, err))
        max_domain_points.append((float(n_sites), est["max_domain_size"].mean))

    records.write_csv(run_dir / "summary.csv", "summary",
                      records.SUMMARY_COLUMNS, summary_rows, cfg.to_dict())

    extrapolated = {}
    fit_targets = ("mean_degree", "mean_domain_size", "domain_size_width",
                   "domains_per_site", "edges_per_site", "betti_per_site")
    if len(by_L) >= 3:
        for name in fit_targets:
            fit = extrapolate_infinite(per_L_est[name])
            extrapolated[name] = {
                "limit": fit.limit, "limit_err": fit.limit_err,
                "slope": fit.slope, "chi2_reduced": fit.chi2_reduced,
                "ansatz": fit.ansatz,
            }
        log_fit = fit_log_growth(max_domain_points)
        extrapolated["max_domain_log_fit"] = {
            "slope": log_fit.slope, "intercept": log_fit.intercept,
            "residual_norm": log_fit.residual_norm, "ansatz": "a*ln(N)+b",
        }
    records.write_json(run_dir / "extrapolation.json", "extrapolation",
                       {"results": extrapolated}, cfg.to_dict())


def cmd_sample(cfg: RunConfig) -> int:
    convention = _resolve_convention(cfg)
    cfg.convention = convention
    run_dir = _make_run_dir(cfg)
    jobs = [(L, cfg.boundary, _chain_seed(cfg.seed, L), cfg.samples,
             cfg.burn_in, cfg.thinning, convention) for L in cfg.L]
    results = _run_jobs(jobs, _sample_one_L)

    metric_rows = []
    sample_rows = []
    for _, mrows, srows in sorted(results, key=lambda t: t[0]):
        metric_rows.extend(mrows)
        sample_rows.extend(srows)
    records.write_csv(run_dir / "chain_metrics.csv", "chain_metrics",
                      records.CHAIN_METRICS_COLUMNS, metric_rows, cfg.to_dict())
    records.write_csv(run_dir / "samples.csv", "sample_records",
                      records.SAMPLE_COLUMNS, sample_rows, cfg.to_dict())
    _summarize(sample_rows, cfg, run_dir)
    _write_metadata(run_dir, cfg, {"weight_convention": convention})
    print(f"sample: wrote {len(sample_rows)} records to {run_dir}")
    return 0


def _percolate_one_L(args: tuple) -> tuple[int, list, dict]:
    (L, seed, samples, burn_in, thinning, convention, p_grid_spec, modes,
     trials) = args
    lat = build_honeycomb(L, "open")
    params = ChainParams(seed=seed, n_samples=samples, burn_in=burn_in,
                         thinning=thinning, weight_convention=convention)
    graphs = []
    for snap in sample_chain(lat, params):
        part, mg = contract_domains(lat.n_sites, lat.edges, snap.outcomes)
        g = mod2_reduce(mg)
        graphs.append((g, make_spanning_query(lat, part)))
    p_grid = _parse_p_grid(p_grid_spec)
    curve_rows = []
    thresholds = {}
    for mode in modes:
        curve = threshold_scan(graphs, p_grid, mode, trials, seed)
        for p, c, se, tr in zip(curve.p_delete, curve.p_cluster, curve.stderr,
                                curve.trials):
            curve_rows.append((mode, L, float(p), float(c), float(se), int(tr)))
        est = estimate_threshold(curve, level=0.5)
        thresholds[mode] = {"p_star": est.p_star, "uncertainty": est.uncertainty,
                            "level": est.level, "definition": "0.5-crossing"}
    return L, curve_rows, thresholds


def cmd_percolate(cfg: RunConfig) -> int:
    convention = _resolve_convention(cfg)
    cfg.convention = convention
    modes = ("vertex", "edge") if cfg.mode == "both" else (cfg.mode,)
    _parse_p_grid(cfg.p_grid)  # validate before spawning work
    run_dir = _make_run_dir(cfg)
    jobs = [(L, _chain_seed(cfg.seed, L, salt=1), cfg.samples, cfg.burn_in,
             cfg.thinning, convention, cfg.p_grid, modes, cfg.trials)
            for L in cfg.L]
    results = _run_jobs(jobs, _percolate_one_L)

    curve_rows = []
    thresholds: dict[str, dict] = {}
    for L, rows, thr in sorted(results, key=lambda t: t[0]):
        curve_rows.extend(rows)
        thresholds[str(L)] = thr
    records.write_csv(run_dir / "curves.csv", "threshold_curve",
                      records.CURVE_COLUMNS, curve_rows, cfg.to_dict())
    records.write_json(run_dir / "thresholds.json", "thresholds",
                       {"thresholds": thresholds}, cfg.to_dict())
    _write_metadata(run_dir, cfg, {"weight_convention": convention})
    print(f"percolate: wrote curves for L={cfg.L} to {run_dir}")
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    if not cfg.input:
        raise ValueError("stats requires --in pointing at a samples.csv")
    _, rows = records.read_csv(Path(cfg.input), expect_schema="sample_records")
    run_dir = _make_run_dir(cfg)
    recs = _records_from_rows(rows)
    sample_rows = [tuple(getattr(r, c) for c in records.SAMPLE_COLUMNS)
                   for r in recs]
    _summarize(sample_rows, cfg, run_dir)
    _write_metadata(run_dir, cfg)
    print(f"stats: wrote summaries for {len(recs)} records to {run_dir}")
    return 0


def cmd_oracle_verify(cfg: RunConfig) -> int:
    fragments = None
    if cfg.fragments:
        fragments = load_fragments(cfg.fragments)
        if not fragments:
            raise ValueError("empty fragment list")
    run_dir = _make_run_dir(cfg)
    report = run_oracle_suite(seed=cfg.seed, fragments=fragments,
                              exhaustive=cfg.exhaustive)
    records.write_json(run_dir / "oracle_report.json", "oracle_report",
                       report, cfg.to_dict())
    _write_metadata(run_dir, cfg)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status} {check['name']}")
    print(f"resolved weight convention: {report['resolved_weight_convention']}")
    print(f"oracle report written to {run_dir}")
    return 0 if report["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="akltsim",
        description="Monte Carlo and exact-oracle study of measurement-induced "
                    "random graph states on the honeycomb lattice")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON config file; flags override")
        p.add_argument("--L", type=int, nargs="+", help="lattice side lengths")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--burn-in", dest="burn_in", type=int)
        p.add_argument("--thinning", type=int)
        p.add_argument("--boundary", choices=("open", "periodic"))
        p.add_argument("--convention", choices=("multigraph", "simple", "auto"))
        p.add_argument("--out", type=str)

    p = sub.add_parser("sample", help="run chains, write per-sample records")
    common(p)

    p = sub.add_parser("percolate", help="deletion-threshold scan on sampled graphs")
    common(p)
    p.add_argument("--mode", choices=("vertex", "edge", "both"))
    p.add_argument("--p-grid", dest="p_grid", type=str,
                   help="deletion grid start:stop:step")
    p.add_argument("--trials", type=int, help="deletion trials per (sample, point)")

    p = sub.add_parser("stats", help="re-summarize an existing samples.csv")
    common(p)
    p.add_argument("--in", dest="input", type=str, help="samples.csv path")

    p = sub.add_parser("oracle-verify", help="run the exact verification suite")
    common(p)
    p.add_argument("--fragments", type=str, help="JSON fragment definitions")
    p.add_argument("--exhaustive", action="store_true",
                   help="sweep all configurations in stabilizer checks")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if getattr(args, "config", None):
        payload = json.loads(Path(args.config).read_text(encoding="utf-8"))
        for key, value in payload.items():
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
    for key in ("L", "seed", "samples", "burn_in", "thinning", "boundary",
                "convention", "mode", "p_grid", "trials", "out", "input",
                "fragments", "exhaustive"):
        value = getattr(args, key, None)
        if value not in (None, False):
            setattr(cfg, key, value)
    if isinstance(cfg.L, int):
        cfg.L = [cfg.L]
    return cfg


COMMANDS = {
    "sample": cmd_sample,
    "percolate": cmd_percolate,
    "stats": cmd_stats,
    "oracle-verify": cmd_oracle_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (ValueError, FileExistsError, FileNotFoundError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
