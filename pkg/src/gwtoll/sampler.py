"""Offspring distributions and exact samplers for Galton-Watson trees.

Three tree laws are covered:

* the unconditioned tree (optionally cut at a depth), grown level by level;
* the size-conditioned tree: an exchangeable degree sequence conditioned on
  summing to ``n - 1``, rotated into a valid preorder by the cycle lemma;
* the size-biased tree cut at depth ``M``, built around a uniform spine.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence``; the
spawn key gives independent, reproducible streams per replicate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import BudgetExhausted, ImpossibleSize, InvalidPmf, LimitExceeded
from .trees import Tree, build_tree

PMF_TOL = 1e-12
TAIL_CUTOFF = 1e-15
SIZE_PROB_LIMIT = 2000
TABLE_LIMIT = 64
MOMENT_BOUND = 8

_ALIASES = {
    "geometric": "geometric",
    "geometric-1/2": "geometric",
    "geom": "geometric",
    "poisson": "poisson",
    "poisson-1": "poisson",
    "binary": "binary",
    "binary-half": "binary",
}


@dataclass(frozen=True, eq=False)
class OffspringDistribution:
    """Law of the number of children ``xi`` of a node.

    ``pmf[k] = P(xi = k)``. Infinite-support laws are truncated where the
    atoms drop below 1e-15 and the tail is folded into the last kept atom.
    ``warnings`` lists violated assumptions (mean 1, positive variance);
    they are flags, not errors.
    """

    name: str
    kind: str
    pmf: np.ndarray
    mean: float
    variance: float
    moments: tuple[float, ...]
    warnings: tuple[str, ...] = ()
    cdf: np.ndarray = field(repr=False, default=None)

    def moment(self, r: int) -> float:
        """Raw moment ``E xi^r``."""
        if 0 <= r < len(self.moments):
            return self.moments[r]
        k = np.arange(len(self.pmf), dtype=np.float64)
        return float(np.dot(self.pmf, k**r))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.pmf > 0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.searchsorted(self.cdf, rng.random(size), side="right").astype(np.int64)

    def descriptor(self) -> dict:
        if self.kind == "custom":
            return {"kind": "custom", "pmf": self.pmf.tolist()}
        return {"kind": self.kind}


@dataclass(frozen=True, eq=False)
class SizeBiasedOffspring:
    """``pmf[k] = k P(xi = k) / E xi`` (the spine's offspring law)."""

    pmf: np.ndarray
    cdf: np.ndarray = field(repr=False)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.searchsorted(self.cdf, rng.random(size), side="right").astype(np.int64)


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    max_nodes: int = 10_000_000
    rejection_budget: int = 1_000_000

    def __post_init__(self):
        if self.max_nodes < 1 or self.rejection_budget < 1:
            raise ValueError("max_nodes and rejection_budget must be >= 1")


@dataclass(frozen=True)
class Overflow:
    """Returned by :func:`sample_gw` when the tree outgrows ``max_nodes``."""

    nodes: int


def _cdf(pmf: np.ndarray) -> np.ndarray:
    c = np.cumsum(pmf)
    c[-1] = 1.0
    c.flags.writeable = False
    return c


def _truncated(atoms) -> np.ndarray:
    p = []
    for a in atoms:
        if a < TAIL_CUTOFF and p:
            break
        p.append(a)
    p = np.array(p, dtype=np.float64)
    p[-1] += 1.0 - p.sum()
    return p


def _finish(name: str, kind: str, pmf: np.ndarray) -> OffspringDistribution:
    pmf = np.asarray(pmf, dtype=np.float64)
    pmf.flags.writeable = False
    k = np.arange(len(pmf), dtype=np.float64)
    moments = tuple(float(np.dot(pmf, k**r)) for r in range(MOMENT_BOUND + 1))
    mean = moments[1]
    variance = float(np.dot(pmf, (k - mean) ** 2))
    flags = []
    if abs(mean - 1.0) > 1e-9:
        flags.append(f"mean {mean:.6g} != 1")
    if not variance > 0.0:
        flags.append("variance is 0")
    if pmf[0] == 0.0:
        flags.append("P(xi = 0) = 0: the tree is never finite")
    return OffspringDistribution(
        name=name,
        kind=kind,
        pmf=pmf,
        mean=mean,
        variance=variance,
        moments=moments,
        warnings=tuple(flags),
        cdf=_cdf(pmf),
    )


def make_offspring(spec) -> OffspringDistribution:
    """Build an offspring law from a name, a descriptor dict or a pmf.

    Built-ins: ``"geometric"`` (P(xi=k) = 2^-(k+1)), ``"poisson"`` (mean 1)
    and ``"binary"`` (P(0) = P(2) = 1/2). A descriptor looks like
    ``{"kind": "custom", "pmf": [...]}``.
    """
    if isinstance(spec, OffspringDistribution):
        return spec
    if isinstance(spec, str):
        key = spec.strip().lower()
        if key.startswith("custom:"):
            return make_offspring([float(x) for x in key[7:].split(",")])
        if key not in _ALIASES:
            raise InvalidPmf(f"unknown distribution {spec!r}")
        kind = _ALIASES[key]
        if kind == "geometric":
            return _finish("geometric-1/2", "geometric", _truncated(2.0 ** -(k + 1) for k in range(200)))
        if kind == "poisson":
            return _finish(
                "poisson-1", "poisson", _truncated(math.exp(-1.0) / math.factorial(k) for k in range(60))
            )
        return _finish("binary-half", "binary", np.array([0.5, 0.0, 0.5]))
    if isinstance(spec, Mapping):
        kind = str(spec.get("kind", "")).lower()
        if kind == "custom":
            if "pmf" not in spec:
                raise InvalidPmf("custom descriptor needs a 'pmf' list")
            return make_offspring(list(spec["pmf"]))
        return make_offspring(kind)
    pmf = np.asarray(spec, dtype=np.float64)
    if pmf.ndim != 1 or pmf.size == 0:
        raise InvalidPmf("pmf must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(pmf)) or np.any(pmf < 0):
        raise InvalidPmf("pmf has negative or non-finite mass")
    total = float(pmf.sum())
    if abs(total - 1.0) > PMF_TOL:
        raise InvalidPmf(f"pmf sums to {total!r}, not 1")
    nz = np.flatnonzero(pmf)
    pmf = pmf[: nz[-1] + 1] / total
    return _finish("custom", "custom", pmf)


def size_biased(dist: OffspringDistribution) -> SizeBiasedOffspring:
    k = np.arange(len(dist.pmf), dtype=np.float64)
    p = k * dist.pmf / dist.mean
    return SizeBiasedOffspring(pmf=p, cdf=_cdf(p))


# --------------------------------------------------------------------------
# random streams


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Generator for ``(seed, *keys)``; distinct keys give independent streams."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def replicate_seed(seed: int, *keys: int) -> int:
    """64-bit seed of the stream ``(seed, *keys)``, for logging."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(cfg: SamplerConfig | None, rng: np.random.Generator | None) -> np.random.Generator:
    if rng is not None:
        return rng
    return make_rng((cfg or SamplerConfig()).seed)


# --------------------------------------------------------------------------
# exact size probabilities


def _conv_power_upto(pmf: np.ndarray, k: int, length: int) -> np.ndarray:
    """First ``length`` coefficients of ``pmf`` convolved with itself k times."""
    result = np.zeros(length)
    result[0] = 1.0
    base = np.zeros(length)
    m = min(len(pmf), length)
    base[:m] = pmf[:m]
    while k:
        if k & 1:
            result = np.convolve(result, base)[:length]
        k >>= 1
        if k:
            base = np.convolve(base, base)[:length]
    return result


def exact_size_prob(dist: OffspringDistribution, k: int, limit: int = SIZE_PROB_LIMIT) -> float:
    """``P(|T| = k)`` via ``P(xi_1 + ... + xi_k = k - 1) / k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > limit:
        raise LimitExceeded(f"k = {k} exceeds the convolution limit {limit}")
    return float(_conv_power_upto(dist.pmf, k, k)[k - 1] / k)


def size_possible(dist: OffspringDistribution, n: int) -> bool:
    """Whether ``P(|T| = n) > 0``."""
    if n < 1 or dist.pmf[0] == 0.0:
        return False
    if n == 1:
        return True
    if dist.kind in ("geometric", "poisson"):
        return True
    if dist.kind == "binary":
        return n % 2 == 1
    if n <= SIZE_PROB_LIMIT:
        return exact_size_prob(dist, n) > 0.0
    support = dist.support
    if support.max() < 1:
        return False
    # for large n only the lattice condition matters
    return (n - 1) % int(np.gcd.reduce(support[support > 0])) == 0


# --------------------------------------------------------------------------
# samplers


def sample_gw(
    dist: OffspringDistribution,
    cfg: SamplerConfig | None = None,
    rng: np.random.Generator | None = None,
    max_depth: int | None = None,
) -> Tree | Overflow:
    """Grow an unconditioned Galton-Watson tree generation by generation.

    With ``max_depth`` the nodes at that depth get no children, which yields
    the cut tree ``T^(max_depth)`` directly.
    """
    cfg = cfg or SamplerConfig()
    rng = _rng(cfg, rng)
    levels = []
    width, total, d = 1, 1, 0
    while width > 0:
        if max_depth is not None and d == max_depth:
            levels.append(np.zeros(width, dtype=np.int64))
            break
        k = dist.sample(rng, width)
        levels.append(k)
        width = int(k.sum())
        total += width
        if total > cfg.max_nodes:
            return Overflow(total)
        d += 1
    bfs = np.concatenate(levels)
    return build_tree(kernels.bfs_to_preorder(bfs))


def rotate_to_preorder(xi: np.ndarray) -> np.ndarray:
    """The unique cyclic shift of ``xi`` (summing to n-1) that is a preorder code."""
    s = np.cumsum(xi - 1)
    m = int(np.argmin(s))
    return np.concatenate((xi[m + 1 :], xi[: m + 1]))


def _table_degrees(dist: OffspringDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    # q[j][s] = P(xi_1 + ... + xi_j = s), s < n
    q = np.zeros((n + 1, n))
    q[0, 0] = 1.0
    p = np.zeros(n)
    m = min(len(dist.pmf), n)
    p[:m] = dist.pmf[:m]
    for j in range(1, n + 1):
        q[j] = np.convolve(q[j - 1], p)[:n]
    xi = np.empty(n, dtype=np.int64)
    left = n - 1
    for i in range(n):
        rest = n - i - 1
        w = p[: left + 1] * q[rest, left::-1]
        w /= w.sum()
        k = int(np.searchsorted(np.cumsum(w), rng.random(), side="right"))
        k = min(k, left)
        xi[i] = k
        left -= k
    return xi


def conditioned_degrees(
    dist: OffspringDistribution, n: int, rng: np.random.Generator, budget: int = 1_000_000
) -> np.ndarray:
    """i.i.d. offspring counts ``xi_1..xi_n`` conditioned on summing to ``n - 1``.

    Geometric, Poisson and binary laws are conditioned in closed form
    (uniform composition, multinomial, uniform placement of the 2s). Other
    laws use an exact table for ``n <= 64`` and rejection on the sum above.
    """
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    if dist.kind == "geometric":
        bars = np.sort(rng.choice(2 * n - 2, size=n - 1, replace=False))
        return np.diff(np.concatenate(([-1], bars, [2 * n - 2]))) - 1
    if dist.kind == "poisson":
        return np.bincount(rng.integers(0, n, size=n - 1), minlength=n).astype(np.int64)
    if dist.kind == "binary":
        xi = np.zeros(n, dtype=np.int64)
        xi[rng.choice(n, size=(n - 1) // 2, replace=False)] = 2
        return xi
    if n <= TABLE_LIMIT:
        return _table_degrees(dist, n, rng)
    for _ in range(budget):
        xi = dist.sample(rng, n)
        if int(xi.sum()) == n - 1:
            return xi
    raise BudgetExhausted(f"no degree sequence summing to {n - 1} in {budget} attempts")


def sample_conditioned(
    dist: OffspringDistribution,
    n: int,
    cfg: SamplerConfig | None = None,
    rng: np.random.Generator | None = None,
) -> Tree:
    """Exact sample of the Galton-Watson tree conditioned on ``|T| = n``.

    Raises
    ------
    ImpossibleSize
        If ``P(|T| = n) = 0`` (e.g. even ``n`` for binary offspring).
    BudgetExhausted
        If rejection on the degree sum runs out of attempts.
    """
    cfg = cfg or SamplerConfig()
    if not size_possible(dist, n):
        raise ImpossibleSize(f"P(|T| = {n}) = 0 for {dist.name}")
    rng = _rng(cfg, rng)
    xi = conditioned_degrees(dist, n, rng, cfg.rejection_budget)
    return build_tree(rotate_to_preorder(xi))


def sample_conditioned_batch(
    dist: OffspringDistribution, n: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """``count`` conditioned trees as rows of preorder outdegrees.

    Vectorised form of :func:`sample_conditioned` meant for small ``n``.
    """
    if not size_possible(dist, n):
        raise ImpossibleSize(f"P(|T| = {n}) = 0 for {dist.name}")
    if n == 1:
        return np.zeros((count, 1), dtype=np.int64)
    if dist.kind == "geometric":
        bars = np.sort(np.argsort(rng.random((count, 2 * n - 2)), axis=1)[:, : n - 1], axis=1)
        pad = np.concatenate(
            (np.full((count, 1), -1), bars, np.full((count, 1), 2 * n - 2)), axis=1
        )
        xi = np.diff(pad, axis=1) - 1
    elif dist.kind == "poisson":
        cells = rng.integers(0, n, size=(count, n - 1)) + n * np.arange(count)[:, None]
        xi = np.bincount(cells.ravel(), minlength=count * n).reshape(count, n)
    elif dist.kind == "binary":
        picks = np.argsort(rng.random((count, n)), axis=1)[:, : (n - 1) // 2]
        xi = np.zeros((count, n), dtype=np.int64)
        np.put_along_axis(xi, picks, 2, axis=1)
    else:
        xi = np.stack([conditioned_degrees(dist, n, rng) for _ in range(count)])
    xi = xi.astype(np.int64)
    m = np.argmin(np.cumsum(xi - 1, axis=1), axis=1)
    idx = (m[:, None] + 1 + np.arange(n)) % n
    return np.take_along_axis(xi, idx, axis=1)


def _spine_levels(dist, biased, M, rng):
    """BFS outdegree levels of a size-biased tree cut at depth M."""
    levels = []
    width, spine = 1, 0
    for _ in range(M):
        k = dist.sample(rng, width)
        k[spine] = biased.sample(rng, 1)[0]
        levels.append(k)
        spine = int(k[:spine].sum()) + int(rng.integers(0, k[spine]))
        width = int(k.sum())
    levels.append(np.zeros(width, dtype=np.int64))
    return levels


def sample_size_biased(
    dist: OffspringDistribution,
    M: int,
    cfg: SamplerConfig | None = None,
    rng: np.random.Generator | None = None,
) -> Tree:
    """Kesten's size-biased tree cut at depth ``M``.

    A spine runs from the root to depth ``M``: spine nodes draw their
    outdegree from the size-biased law and pass the spine to a uniformly
    chosen child; every other node is an ordinary Galton-Watson node. The
    result satisfies ``P(T^ = T) = w_M(T) P(T^(M) = T)``.
    """
    if M < 0:
        raise ValueError("M must be >= 0")
    rng = _rng(cfg, rng)
    if M == 0:
        return build_tree([0])
    levels = _spine_levels(dist, size_biased(dist), M, rng)
    return build_tree(kernels.bfs_to_preorder(np.concatenate(levels)))


def extend_size_biased(
    t: Tree, M: int, N: int, dist: OffspringDistribution, rng: np.random.Generator
) -> Tree:
    """Draw ``T^(N)`` from its conditional law given ``T^(M) = t``.

    Given the first ``M`` levels, the spine passes through a uniform node
    at depth ``M``; it continues as a size-biased tree of depth ``N - M``
    while every other depth-``M`` node roots an independent Galton-Watson
    tree cut at relative depth ``N - M``.
    """
    if N < M:
        raise ValueError("N must be >= M")
    at_m = np.flatnonzero(t.depth == M)
    if N == M or at_m.size == 0:
        return t
    spine = int(rng.integers(0, at_m.size))
    biased = size_biased(dist)
    pieces = []
    start = 0
    for j, v in enumerate(at_m.tolist()):
        pieces.append(t.outdeg[start:v])
        if j == spine:
            sub = kernels.bfs_to_preorder(np.concatenate(_spine_levels(dist, biased, N - M, rng)))
        else:
            sub = sample_gw(dist, rng=rng, max_depth=N - M).outdeg
        pieces.append(sub)
        start = v + 1
    pieces.append(t.outdeg[start:])
    return build_tree(np.concatenate(pieces))
