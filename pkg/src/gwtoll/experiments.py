"""Monte Carlo harness for additive functionals of conditioned trees.

For each size ``n`` the harness samples replicate trees, evaluates one or
more functionals on each tree and summarises ``F``: the mean per node
``mu_hat``, ``var(F) / n`` as the estimate of the limiting variance, and
moment and Kolmogorov-Smirnov statistics of the standardised sample.

Replicate ``i`` at size ``n`` always uses the random stream
``(seed, n, i)``, and results are stored by replicate index, so the output
does not depend on the number of worker threads.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .bounds import cutoff_error
from .errors import ConfigInvalid, InsufficientSizes, SampleTooSmall
from .functionals import FunctionalFamily, evaluate, parse_family, toll_value
from .sampler import (
    OffspringDistribution,
    SamplerConfig,
    extend_size_biased,
    make_offspring,
    make_rng,
    replicate_seed,
    sample_conditioned,
    sample_size_biased,
    size_possible,
)


BAND = 3.3
SKEW_TOL = 0.08
KURT_TOL = 0.16
KS_TOL = 0.02
MIN_NORMALITY_SAMPLE = 100

# spawn-key tags keeping the pm-curve streams apart from the size streams
_PM_CONDITIONED = 1 << 40
_PM_BIASED = 1 << 41


def default_threads() -> int:
    return os.cpu_count() or 1


# --------------------------------------------------------------------------
# configuration


@dataclass
class ExperimentConfig:
    """Settings of one Monte Carlo run; see ``docs/config.md`` for the JSON form."""

    dist: dict | str = "geometric"
    families: list = field(default_factory=lambda: ["indset"])
    sizes: list[int] = field(default_factory=lambda: [1000])
    replicates: int = 1000
    seed: int = 0
    cutoffs: list[int] = field(default_factory=list)
    alpha: int = 1
    threads: int | None = None
    out: str | None = None
    histogram: bool = False
    pm_size: int | None = None
    pm_replicates: int = 200
    pm_inner: int = 32
    pm_delta: int = 12
    rejection_budget: int = 1_000_000
    adjusted_sizes: list[tuple[int, int]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if isinstance(self.families, (str, dict, FunctionalFamily)):
            self.families = [self.families]
        self.validate()

    def validate(self) -> None:
        if self.replicates < 2:
            raise ConfigInvalid("replicates must be >= 2")
        if not self.sizes:
            raise ConfigInvalid("sizes must be nonempty")
        if not self.families:
            raise ConfigInvalid("at least one family is required")
        try:
            self._families = [parse_family(f) for f in self.families]
            self._dist = make_offspring(self.dist)
        except (ValueError, TypeError) as exc:
            raise ConfigInvalid(str(exc)) from exc
        sizes = []
        self.adjusted_sizes = []
        for n in self.sizes:
            n = int(n)
            if n < 1:
                raise ConfigInvalid(f"size {n} must be >= 1")
            if self._dist.kind == "binary" and n % 2 == 0:
                self.adjusted_sizes.append((n, n + 1))
                n += 1
            if not size_possible(self._dist, n):
                raise ConfigInvalid(f"P(|T| = {n}) = 0 under {self._dist.name}")
            sizes.append(n)
        self.sizes = sizes
        if any(M < 0 for M in self.cutoffs):
            raise ConfigInvalid("cut-offs must be >= 0")
        if int(self.alpha) < 0:
            raise ConfigInvalid("alpha must be >= 0")

    @property
    def offspring(self) -> OffspringDistribution:
        return self._dist

    @property
    def moment_condition(self) -> dict:
        """``E xi^(2 alpha + 1)`` of the offspring law and whether it is finite."""
        order = 2 * int(self.alpha) + 1
        value = self._dist.moment(order)
        return {"order": order, "value": value, "finite": bool(math.isfinite(value))}

    @property
    def family_objects(self) -> list[FunctionalFamily]:
        return list(self._families)

    def to_dict(self) -> dict:
        return {
            "dist": self._dist.descriptor(),
            "families": [f.descriptor() for f in self._families],
            "sizes": list(self.sizes),
            "replicates": self.replicates,
            "seed": self.seed,
            "cutoffs": list(self.cutoffs),
            "alpha": self.alpha,
            "histogram": self.histogram,
            "pm_size": self.pm_size,
            "pm_replicates": self.pm_replicates,
            "pm_inner": self.pm_inner,
            "pm_delta": self.pm_delta,
            "rejection_budget": self.rejection_budget,
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if "family" in data:
            data.setdefault("families", data.pop("family"))
        known = set(cls.__dataclass_fields__) - {"adjusted_sizes"}
        unknown = set(data) - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigInvalid(f"{path}: {exc}") from exc
        return cls.from_dict(data)


# --------------------------------------------------------------------------
# normality statistics


@dataclass(frozen=True)
class NormalityReport:
    """Moment and KS statistics of a sample after standardising it.

    ``ks_pvalue`` uses the asymptotic Kolmogorov law and ignores that mean
    and variance were fitted, so it is only indicative. When the data sit
    on an integer lattice the KS distance compares against the normal law
    with a half-step continuity correction.
    """

    N: int
    mean: float
    sd: float
    degenerate: bool
    skewness: float | None = None
    excess_kurtosis: float | None = None
    ks_distance: float | None = None
    ks_pvalue: float | None = None
    lattice: bool = False
    skew_band: float = 0.0
    kurt_band: float = 0.0
    normal: bool = False

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def standardize(x: np.ndarray) -> np.ndarray:
    """``(x - mean) / sd`` with the unbiased sd."""
    x = np.asarray(x, dtype=np.float64)
    sd = float(np.std(x, ddof=1))
    if sd == 0.0:
        raise ValueError("constant sample")
    return (x - x.mean()) / sd


def _ks_continuous(z: np.ndarray) -> float:
    z = np.sort(z)
    N = z.shape[0]
    cdf = special.ndtr(z)
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - cdf), np.max(cdf - (i - 1) / N)))


def _ks_lattice(x: np.ndarray, mean: float, sd: float) -> float:
    vals, counts = np.unique(x, return_counts=True)
    ecdf = np.cumsum(counts) / x.shape[0]
    before = ecdf - counts / x.shape[0]
    upper = special.ndtr((vals + 0.5 - mean) / sd)
    lower = special.ndtr((vals - 0.5 - mean) / sd)
    return float(max(np.max(np.abs(ecdf - upper)), np.max(np.abs(before - lower))))


def normality_report(
    sample: Sequence[float],
    skew_tol: float = SKEW_TOL,
    kurt_tol: float = KURT_TOL,
    ks_tol: float = KS_TOL,
) -> NormalityReport:
    """Skewness, excess kurtosis and KS distance to the fitted normal.

    The verdict ``normal`` requires ``|skew| < skew_tol + 3.3 sqrt(6/N)``,
    ``|exkurt| < kurt_tol + 3.3 sqrt(24/N)`` and ``ks < ks_tol``.

    Raises
    ------
    SampleTooSmall
        For fewer than 100 observations.
    """
    x = np.asarray(sample, dtype=np.float64)
    N = int(x.shape[0])
    if N < MIN_NORMALITY_SAMPLE:
        raise SampleTooSmall(f"need at least {MIN_NORMALITY_SAMPLE} observations, got {N}")
    mean = float(x.mean())
    sd = float(np.std(x, ddof=1))
    if sd == 0.0:
        return NormalityReport(N=N, mean=mean, sd=0.0, degenerate=True)
    c = x - mean
    m2 = float(np.mean(c**2))
    skew = float(np.mean(c**3)) / m2**1.5
    kurt = float(np.mean(c**4)) / m2**2 - 3.0
    lattice = bool(np.all(x == np.round(x)))
    ks = _ks_lattice(x, mean, sd) if lattice else _ks_continuous(c / sd)
    pval = float(special.kolmogorov(math.sqrt(N) * ks))
    sb = BAND * math.sqrt(6.0 / N)
    kb = BAND * math.sqrt(24.0 / N)
    ok = abs(skew) < skew_tol + sb and abs(kurt) < kurt_tol + kb and ks < ks_tol
    return NormalityReport(
        N=N,
        mean=mean,
        sd=sd,
        degenerate=False,
        skewness=skew,
        excess_kurtosis=kurt,
        ks_distance=ks,
        ks_pvalue=pval,
        lattice=lattice,
        skew_band=sb,
        kurt_band=kb,
        normal=ok,
    )


# --------------------------------------------------------------------------
# running


@dataclass
class SizeSummary:
    """Statistics of ``F`` over the replicates at one size."""

    family: str
    n: int
    replicates: int
    F: np.ndarray = field(repr=False)
    root_toll: np.ndarray = field(repr=False)
    seeds: list[int] = field(repr=False)
    mean: float = 0.0
    mu_hat: float = 0.0
    var: float = 0.0
    gamma2_hat: float = 0.0
    se_mean: float = 0.0
    normality: NormalityReport | None = None

    @property
    def standardized(self) -> np.ndarray | None:
        if self.var == 0.0:
            return None
        return standardize(self.F)

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "replicates": self.replicates,
            "mean": self.mean,
            "mu_hat": self.mu_hat,
            "var": self.var,
            "gamma2_hat": self.gamma2_hat,
            "se_mean": self.se_mean,
            "normality": None if self.normality is None else self.normality.as_dict(),
        }


@dataclass
class ExperimentSummary:
    config: ExperimentConfig
    sizes: dict[str, list[SizeSummary]]
    drift: dict[str, "DriftReport | None"]
    gamma2_spread: dict[str, float]
    pm: dict[str, "PMCurve"] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "config_hash": self.config.config_hash(),
            "moment_condition": self.config.moment_condition,
            "sizes": {k: [s.as_dict() for s in v] for k, v in self.sizes.items()},
            "drift": {k: (None if v is None else v.as_dict()) for k, v in self.drift.items()},
            "gamma2_spread": self.gamma2_spread,
            "pm": {k: v.as_dict() for k, v in self.pm.items()},
        }


def _map_ordered(fn, items, threads: int | None):
    threads = threads or 1
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (threads * 8))))


def evaluate_replicates(
    dist: OffspringDistribution,
    families: Sequence[FunctionalFamily],
    n: int,
    replicates: int,
    seed: int,
    threads: int | None = None,
    rejection_budget: int = 1_000_000,
) -> tuple[np.ndarray, np.ndarray]:
    """``(F, root_toll)`` arrays of shape ``(len(families), replicates)``."""
    cfg = SamplerConfig(seed=seed, rejection_budget=rejection_budget)

    def one(i):
        t = sample_conditioned(dist, n, cfg, rng=make_rng(seed, n, i))
        ev = [evaluate(t, fam, keep_toll=False) for fam in families]
        return [e.F_value for e in ev], [e.root_toll for e in ev]

    rows = _map_ordered(one, range(replicates), threads)
    F = np.array([r[0] for r in rows], dtype=np.float64).T
    root = np.array([r[1] for r in rows], dtype=np.float64).T
    return F, root


def summarize(family: str, n: int, F: np.ndarray, root: np.ndarray, seeds: list[int]) -> SizeSummary:
    R = F.shape[0]
    mean = float(F.mean())
    var = float(np.var(F, ddof=1))
    normality = normality_report(F) if R >= MIN_NORMALITY_SAMPLE else None
    return SizeSummary(
        family=family,
        n=n,
        replicates=R,
        F=F,
        root_toll=root,
        seeds=seeds,
        mean=mean,
        mu_hat=mean / n,
        var=var,
        gamma2_hat=var / n,
        se_mean=math.sqrt(var / R),
        normality=normality,
    )


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentSummary:
    """Sample, evaluate and summarise every (family, size) pair of ``cfg``.

    Each tree is evaluated for all families, so the families share samples.
    """
    threads = threads or cfg.threads or 1
    fams = cfg.family_objects
    sizes: dict[str, list[SizeSummary]] = {f.name: [] for f in fams}
    for n in cfg.sizes:
        F, root = evaluate_replicates(
            cfg.offspring, fams, n, cfg.replicates, cfg.seed, threads, cfg.rejection_budget
        )
        seeds = [replicate_seed(cfg.seed, n, i) for i in range(cfg.replicates)]
        for j, fam in enumerate(fams):
            sizes[fam.name].append(summarize(fam.name, n, F[j], root[j], seeds))
    drift = {}
    spread = {}
    for name, rows in sizes.items():
        try:
            drift[name] = mean_drift_check(rows)
        except InsufficientSizes:
            drift[name] = None
        g = [s.gamma2_hat for s in rows]
        spread[name] = (max(g) / min(g) - 1.0) if min(g) > 0 else (0.0 if max(g) == 0 else math.inf)
    pm = {}
    if cfg.cutoffs:
        for fam in fams:
            if fam.tag in ("indset", "matching", "domset", "reduction"):
                pm[fam.name] = pm_curve(
                    cfg.offspring,
                    fam,
                    cfg.cutoffs,
                    n=cfg.pm_size or max(cfg.sizes),
                    replicates=cfg.pm_replicates,
                    inner=cfg.pm_inner,
                    delta=cfg.pm_delta,
                    seed=cfg.seed,
                    threads=threads,
                )
    return ExperimentSummary(cfg, sizes, drift, spread, pm)


# --------------------------------------------------------------------------
# mean drift


@dataclass(frozen=True)
class DriftReport:
    """``r_n = (mean F(n) - mu_hat n) / sqrt(n)`` per size.

    ``mu_hat`` comes from a weighted least-squares fit of the means on
    ``(n, sqrt(n), 1)``; the ``sqrt(n)`` column keeps a genuine order
    ``sqrt(n)`` drift from leaking into ``mu_hat``. Standard errors of
    ``r_n`` are propagated through the fit.
    """

    sizes: tuple[int, ...]
    mu_hat: float
    r: tuple[float, ...]
    se: tuple[float, ...]
    slope: float
    slope_se: float
    sqrt_coef: float
    sqrt_coef_se: float
    within_noise: bool
    verdict: str

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def mean_drift_check(summaries: Sequence, band: float = BAND) -> DriftReport:
    """Check that the mean grows like ``mu n`` up to ``o(sqrt(n))``.

    PASS when any of these holds, each at ``band`` standard errors:

    * every ``|r_n|`` is indistinguishable from zero;
    * ``log |r_n|`` decreases in ``log n``;
    * the fitted ``sqrt(n)`` coefficient is indistinguishable from zero,
      so ``r_n`` is a constant over ``sqrt(n)`` plus noise.

    ``summaries`` holds objects with ``n``, ``mean`` and ``se_mean``
    attributes, or ``(n, mean, se)`` triples.
    """
    rows = []
    for s in summaries:
        if isinstance(s, (tuple, list)):
            rows.append(tuple(float(v) for v in s))
        else:
            rows.append((float(s.n), float(s.mean), float(s.se_mean)))
    rows.sort()
    n = np.array([r[0] for r in rows])
    m = np.array([r[1] for r in rows])
    se = np.array([r[2] for r in rows])
    if n.size < 3 or n[-1] < 10 * n[0]:
        raise InsufficientSizes("need at least three sizes spanning a decade")
    se = np.where(se > 0, se, np.min(se[se > 0]) if np.any(se > 0) else 1.0)
    X = np.column_stack((n, np.sqrt(n), np.ones_like(n)))
    W = 1.0 / se**2
    XtW = X.T * W
    coef_cov = np.linalg.pinv(XtW @ X)
    coef_map = coef_cov @ XtW  # coefficients = coef_map @ means
    mu = float(coef_map[0] @ m)
    b = float(coef_map[1] @ m)
    b_se = math.sqrt(max(float(coef_cov[1, 1]), 0.0))
    # r = A m with A = (I - n mu_row) / sqrt(n)
    A = (np.eye(n.size) - np.outer(n, coef_map[0])) / np.sqrt(n)[:, None]
    r = A @ m
    cov = A @ np.diag(se**2) @ A.T
    r_se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    within = bool(np.all(np.abs(r) <= band * r_se))
    absr = np.maximum(np.abs(r), 1e-300)
    y = np.log(absr)
    x = np.log(n)
    wy = 1.0 / np.maximum((r_se / absr) ** 2, 1e-300)
    xb = np.sum(wy * x) / np.sum(wy)
    sxx = float(np.sum(wy * (x - xb) ** 2))
    slope = float(np.sum(wy * (x - xb) * y) / sxx)
    slope_se = float(1.0 / math.sqrt(sxx))
    decreasing = slope + band * slope_se < 0
    no_sqrt_term = abs(b) <= band * b_se
    return DriftReport(
        sizes=tuple(int(v) for v in n),
        mu_hat=mu,
        r=tuple(float(v) for v in r),
        se=tuple(float(v) for v in r_se),
        slope=slope,
        slope_se=slope_se,
        sqrt_coef=b,
        sqrt_coef_se=b_se,
        within_noise=within,
        verdict="PASS" if (within or decreasing or no_sqrt_term) else "FAIL",
    )


# --------------------------------------------------------------------------
# cut-off error curves


@dataclass(frozen=True)
class PMCurve:
    """Mean cut-off error per ``M`` for conditioned and size-biased trees.

    ``conditioned[k]`` is the mean of ``|f(T_n) - f(T_n^(M))|``.
    ``biased[k]`` is the mean of ``|f(T^(M)) - E(f(T^(N)) | T^(M))|`` for
    the size-biased tree with ``N = M + delta``, where the conditional
    mean is a plug-in average of ``inner`` extensions (bias of order
    ``1 / sqrt(inner)``).
    """

    family: str
    Ms: tuple[int, ...]
    conditioned: tuple[float, ...]
    conditioned_se: tuple[float, ...]
    biased: tuple[float, ...]
    biased_se: tuple[float, ...]
    n: int
    inner: int
    delta: int
    base_conditioned: float
    base_biased: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def decay_base(Ms: Sequence[int], values: Sequence[float]) -> float:
    """``exp(slope)`` of ``log(value)`` against ``M`` over the positive values.

    Returns 0.0 when at most one value is positive (no decay to fit means
    the curve has already hit zero).
    """
    Ms = np.asarray(Ms, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    ok = v > 0
    if ok.sum() < 2:
        return 0.0
    slope = np.polyfit(Ms[ok], np.log(v[ok]), 1)[0]
    return float(math.exp(slope))


def pm_curve(
    dist,
    family,
    Ms: Sequence[int],
    n: int = 1000,
    replicates: int = 200,
    inner: int = 32,
    delta: int = 12,
    seed: int = 0,
    threads: int | None = None,
    biased: bool = True,
) -> PMCurve:
    """Measured cut-off errors for each ``M`` in ``Ms``."""
    dist = make_offspring(dist)
    fam = parse_family(family)
    Ms = [int(M) for M in Ms]

    def conditioned_one(i):
        t = sample_conditioned(dist, n, rng=make_rng(seed, _PM_CONDITIONED, n, i))
        return [cutoff_error(t, M, fam) for M in Ms]

    errs = np.array(_map_ordered(conditioned_one, range(replicates), threads)).reshape(replicates, len(Ms))
    cmean = errs.mean(axis=0)
    cse = errs.std(axis=0, ddof=1) / math.sqrt(replicates)

    bmean = np.full(len(Ms), np.nan)
    bse = np.full(len(Ms), np.nan)
    if biased:
        for k, M in enumerate(Ms):

            def biased_one(i, M=M):
                rng = make_rng(seed, _PM_BIASED, M, i)
                t = sample_size_biased(dist, M, rng=rng)
                f0 = toll_value(fam, t)
                ext = [toll_value(fam, extend_size_biased(t, M, M + delta, dist, rng)) for _ in range(inner)]
                return abs(f0 - float(np.mean(ext)))

            g = np.array(_map_ordered(biased_one, range(replicates), threads))
            bmean[k] = g.mean()
            bse[k] = g.std(ddof=1) / math.sqrt(replicates)
    return PMCurve(
        family=fam.name,
        Ms=tuple(Ms),
        conditioned=tuple(float(v) for v in cmean),
        conditioned_se=tuple(float(v) for v in cse),
        biased=tuple(float(v) for v in bmean),
        biased_se=tuple(float(v) for v in bse),
        n=n,
        inner=inner,
        delta=delta,
        base_conditioned=decay_base(Ms, cmean),
        base_biased=decay_base(Ms, bmean) if biased else float("nan"),
    )


# --------------------------------------------------------------------------
# output


def write_replicates_csv(summary: ExperimentSummary, path: str) -> None:
    """Rows ``family,n,replicate,seed,F,toll_root`` in replicate order."""
    with open(path, "w") as fh:
        fh.write("family,n,replicate,seed,F,toll_root\n")
        for name, rows in summary.sizes.items():
            for s in rows:
                for i in range(s.replicates):
                    fh.write(f"{name},{s.n},{i},{s.seeds[i]},{s.F[i]!r},{s.root_toll[i]!r}\n")


def histogram_svg(sample: Sequence[float], title: str = "", bins: int = 40, width: int = 480, height: int = 300) -> str:
    """SVG histogram of the standardised sample with the standard normal density."""
    z = standardize(np.asarray(sample, dtype=np.float64))
    lo, hi = -4.0, 4.0
    counts, edges = np.histogram(np.clip(z, lo, hi), bins=bins, range=(lo, hi), density=True)
    grid = np.linspace(lo, hi, 200)
    dens = np.exp(-0.5 * grid**2) / math.sqrt(2 * math.pi)
    top = max(float(counts.max()), float(dens.max())) * 1.1
    pad = 30

    def px(x):
        return pad + (x - lo) / (hi - lo) * (width - 2 * pad)

    def py(y):
        return height - pad - y / top * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{width / 2}" y="18" text-anchor="middle" font-size="13">{title}</text>',
    ]
    for c, a, b in zip(counts, edges[:-1], edges[1:]):
        parts.append(
            f'<rect x="{px(a):.2f}" y="{py(c):.2f}" width="{px(b) - px(a):.2f}" '
            f'height="{py(0) - py(c):.2f}" fill="#9ab" stroke="#567"/>'
        )
    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(grid, dens))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#c33" stroke-width="2"/>')
    parts.append(f'<line x1="{pad}" y1="{py(0)}" x2="{width - pad}" y2="{py(0)}" stroke="black"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def write_outputs(summary: ExperimentSummary, out_dir: str) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    csv_path = os.path.join(out_dir, "replicates.csv")
    write_replicates_csv(summary, csv_path)
    paths.append(csv_path)
    js = os.path.join(out_dir, "summary.json")
    with open(js, "w") as fh:
        json.dump(summary.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths.append(js)
    if summary.config.histogram:
        for name, rows in summary.sizes.items():
            for s in rows:
                if s.var == 0.0:
                    continue
                safe = name.replace(":", "_").replace(" ", "")
                p = os.path.join(out_dir, f"hist_{safe}_{s.n}.svg")
                with open(p, "w") as fh:
                    fh.write(histogram_svg(s.F, title=f"{name}, n = {s.n}"))
                paths.append(p)
    return paths


__all__ = [
    "DriftReport",
    "ExperimentConfig",
    "ExperimentSummary",
    "NormalityReport",
    "PMCurve",
    "SizeSummary",
    "decay_base",
    "default_threads",
    "evaluate_replicates",
    "histogram_svg",
    "mean_drift_check",
    "normality_report",
    "pm_curve",
    "run_experiment",
    "standardize",
    "write_outputs",
    "write_replicates_csv",
]

