"""Ensemble observables, binning errors, and infinite-size extrapolation."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .domains import DomainPartition, SimpleGraph, domain_size_histogram
from .percolation import components


@dataclass(frozen=True)
class SampleRecord:
    """Reduced-graph observables of one chain sample."""

    L: int
    boundary: str
    n_domains: int
    n_edges_simple: int
    n_components: int
    betti: int
    mean_degree: float
    mean_domain_size: float
    domain_size_width: float
    max_domain_size: int

    def check_identities(self) -> None:
        b = self.n_edges_simple - self.n_domains + self.n_components
        if b != self.betti or b < 0:
            raise AssertionError("Betti identity violated in sample record")


OBSERVABLES = ("n_domains", "n_edges_simple", "n_components", "betti",
               "mean_degree", "mean_domain_size", "domain_size_width",
               "max_domain_size")


def betti_number(g: SimpleGraph) -> int:
    """Independent cycle count |E| - |V| + C."""
    n_comp = np.unique(components(g)).size
    return int(g.n_edges - g.n_vertices + n_comp)


def make_sample_record(L: int, boundary: str, part: DomainPartition,
                       g: SimpleGraph) -> SampleRecord:
    n_comp = np.unique(components(g)).size
    sizes = domain_size_histogram(part)
    rec = SampleRecord(
        L=L,
        boundary=boundary,
        n_domains=part.n_domains,
        n_edges_simple=g.n_edges,
        n_components=n_comp,
        betti=g.n_edges - part.n_domains + n_comp,
        mean_degree=2.0 * g.n_edges / part.n_domains,
        mean_domain_size=sizes.mean,
        domain_size_width=sizes.width,
        max_domain_size=sizes.max,
    )
    rec.check_identities()
    return rec


@dataclass(frozen=True)
class ObservableEstimate:
    mean: float
    stderr: float
    n_samples: int
    bin_size: int


def binned_error(series: np.ndarray) -> tuple[float, int]:
    """Standard error from bin doubling.

    Bins of 1, 2, 4, ... samples are averaged and the naive error of the
    bin means is tracked; doubling stops when it plateaus (growth below
    5%) or fewer than 8 bins remain.  This absorbs residual
    autocorrelation between chain samples.
    """
    x = np.asarray(series, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two samples for an error estimate")

    def err(bsize: int) -> float:
        nb = x.size // bsize
        means = x[:nb * bsize].reshape(nb, bsize).mean(axis=1)
        return float(means.std(ddof=1) / np.sqrt(nb))

    bsize = 1
    best = err(bsize)
    while x.size // (2 * bsize) >= 8:
        nxt = err(2 * bsize)
        if nxt <= best * 1.05:
            break
        bsize *= 2
        best = nxt
    return best, bsize


def accumulate(records: list[SampleRecord]) -> dict[str, ObservableEstimate]:
    """Mean and binning standard error per observable at one L."""
    if len(records) < 2:
        raise ValueError("need at least two records for error bars")
    if len({(r.L, r.boundary) for r in records}) != 1:
        raise ValueError("records must share one (L, boundary)")
    for r in records:
        r.check_identities()
    out = {}
    for name in OBSERVABLES:
        series = np.array([getattr(r, name) for r in records], dtype=float)
        stderr, bsize = binned_error(series)
        out[name] = ObservableEstimate(mean=float(series.mean()), stderr=stderr,
                                       n_samples=len(records), bin_size=bsize)
    return out


@dataclass(frozen=True)
class ExtrapolationResult:
    limit: float
    limit_err: float
    slope: float
    chi2_reduced: float
    ansatz: str = "a+b/L"


def extrapolate_infinite(points: list[tuple[float, float, float]]) -> ExtrapolationResult:
    """Weighted least-squares fit mean(L) = a + b/L; returns a.

    points: (L, mean, stderr) triples with at least three distinct L.
    Zero or missing stderr values switch the fit to unweighted with the
    covariance scaled by the residual variance.
    """
    pts = sorted(points)
    Ls = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    se = np.array([p[2] for p in pts], dtype=float)
    if np.unique(Ls).size < 3:
        raise ValueError("need at least three distinct L values")

    X = np.stack([np.ones_like(Ls), 1.0 / Ls], axis=1)
    weighted = np.all(se > 0)
    w = 1.0 / se if weighted else np.ones_like(se)
    Xw = X * w[:, None]
    yw = y * w
    coef, _, rank, _ = np.linalg.lstsq(Xw, yw, rcond=None)
    if rank < 2:
        raise ValueError("degenerate design matrix")
    resid = yw - Xw @ coef
    chi2 = float(resid @ resid)
    dof = max(Ls.size - 2, 1)
    cov = np.linalg.inv(Xw.T @ Xw)
    if not weighted:
        cov = cov * (chi2 / dof)
    return ExtrapolationResult(
        limit=float(coef[0]),
        limit_err=float(np.sqrt(max(cov[0, 0], 0.0))),
        slope=float(coef[1]),
        chi2_reduced=chi2 / dof if weighted else float("nan"),
    )


@dataclass(frozen=True)
class LogFit:
    slope: float
    intercept: float
    residual_norm: float


def fit_log_growth(points: list[tuple[float, float]]) -> LogFit:
    """Least-squares fit S(N) = a * ln(N) + b for the largest domain."""
    pts = sorted(points)
    if len({p[0] for p in pts}) < 3:
        raise ValueError("need at least three distinct N values")
    N = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    X = np.stack([np.log(N), np.ones_like(N)], axis=1)
    coef, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    return LogFit(slope=float(coef[0]), intercept=float(coef[1]),
                  residual_norm=float(np.linalg.norm(resid)))
