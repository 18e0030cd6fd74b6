"""Ground truth by brute force.

Exact counts of independent sets, matchings and dominating sets come from
two independent routes: a scan over all vertex or edge subsets (small
trees) and an integer recursion on Python ints. Exhaustive enumeration of
ordered trees gives exact Galton-Watson weights and conditional means.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import ImpossibleSize, TooLarge
from .functionals import evaluate, parse_family
from .sampler import OffspringDistribution, make_offspring
from .trees import Tree, build_tree

SCAN_LIMITS = {"indset": 26, "matching": 27, "domset": 22}
DP_LIMIT = 2000
ENUM_LIMIT = 12
_CHUNK = 1 << 18


@dataclass(frozen=True)
class ExactCounts:
    """Exact counts for the whole tree.

    ``total`` is I, m or d; ``without_root`` is I0, m0 or d0; ``star`` is
    d* for dominating sets and None otherwise.
    """

    family: str
    total: int
    without_root: int
    star: int | None = None

    def ratios(self) -> tuple[Fraction, ...]:
        out = (Fraction(self.without_root, self.total),)
        if self.star is not None:
            out += (Fraction(self.star, self.total),)
        return out

    def as_strings(self) -> list[str]:
        vals = [self.total, self.without_root] + ([self.star] if self.star is not None else [])
        return [str(v) for v in vals]


# --------------------------------------------------------------------------
# integer recursions


def counts_per_node(t: Tree, family) -> list[tuple[int, ...]]:
    """Exact integer counts of every fringe subtree, by recursion.

    Entries are ``(I, I0)``, ``(m, m0)`` or ``(d, d0, d*)``.
    """
    fam = parse_family(family).tag
    if t.n > DP_LIMIT:
        raise TooLarge(f"integer recursion limited to n <= {DP_LIMIT}")
    par = t.parent.tolist()
    n = t.n
    kids: list[list[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        kids[par[v]].append(v)
    out: list[tuple[int, ...]] = [()] * n
    for v in range(n - 1, -1, -1):
        ch = [out[c] for c in kids[v]]
        if fam == "indset":
            i0 = _prod(c[0] for c in ch)
            i1 = _prod(c[1] for c in ch)
            out[v] = (i0 + i1, i0)
        elif fam == "matching":
            m0 = _prod(c[0] for c in ch)
            extra = sum(c[1] * (m0 // c[0]) for c in ch)
            out[v] = (m0 + extra, m0)
        elif fam == "domset":
            star = _prod(c[1] for c in ch)
            d0 = _prod(c[0] for c in ch) - star
            d = d0 + _prod(c[0] + c[2] for c in ch)
            out[v] = (d, d0, star)
        else:
            raise ValueError(f"no exact counts for {family!r}")
    return out


def _prod(values) -> int:
    p = 1
    for x in values:
        p *= x
    return p


def dp_counts(t: Tree, family) -> ExactCounts:
    fam = parse_family(family).tag
    root = counts_per_node(t, fam)[0]
    return ExactCounts(fam, *root)


# --------------------------------------------------------------------------
# subset scans


def _masks(n_bits: int) -> Iterator[np.ndarray]:
    total = 1 << n_bits
    for start in range(0, total, _CHUNK):
        yield np.arange(start, min(total, start + _CHUNK), dtype=np.int64)


def _bit(masks: np.ndarray, i: int) -> np.ndarray:
    return (masks >> i) & 1


def scan_independent(t: Tree) -> ExactCounts:
    """Count vertex subsets with no edge inside, by listing all of them."""
    if t.n > SCAN_LIMITS["indset"]:
        raise TooLarge(f"vertex scan limited to n <= {SCAN_LIMITS['indset']}")
    par = t.parent.tolist()
    total = without = 0
    for masks in _masks(t.n):
        ok = np.ones(masks.shape[0], dtype=bool)
        for v in range(1, t.n):
            ok &= (_bit(masks, v) & _bit(masks, par[v])) == 0
        total += int(ok.sum())
        without += int((ok & (_bit(masks, 0) == 0)).sum())
    return ExactCounts("indset", total, without)


def scan_matching(t: Tree) -> ExactCounts:
    """Count edge subsets covering no node twice. Bit ``v - 1`` is edge (v, parent)."""
    if t.n > SCAN_LIMITS["matching"]:
        raise TooLarge(f"edge scan limited to n <= {SCAN_LIMITS['matching']}")
    par = t.parent.tolist()
    n = t.n
    incident: list[list[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        incident[v].append(v - 1)
        incident[par[v]].append(v - 1)
    total = without = 0
    for masks in _masks(n - 1):
        ok = np.ones(masks.shape[0], dtype=bool)
        for v in range(n):
            if len(incident[v]) > 1:
                cover = sum(_bit(masks, e) for e in incident[v])
                ok &= cover <= 1
        root_free = np.ones_like(ok)
        for e in incident[0]:
            root_free &= _bit(masks, e) == 0
        total += int(ok.sum())
        without += int((ok & root_free).sum())
    return ExactCounts("matching", total, without)


def scan_dominating(t: Tree) -> ExactCounts:
    """Count dominating vertex sets, and the two restricted variants."""
    if t.n > SCAN_LIMITS["domset"]:
        raise TooLarge(f"vertex scan limited to n <= {SCAN_LIMITS['domset']}")
    par = t.parent.tolist()
    n = t.n
    closed = [1 << v for v in range(n)]
    for v in range(1, n):
        closed[v] |= 1 << par[v]
        closed[par[v]] |= 1 << v
    total = without = star = 0
    for masks in _masks(n):
        rest = np.ones(masks.shape[0], dtype=bool)
        for v in range(1, n):
            rest &= (masks & closed[v]) != 0
        root_dom = (masks & closed[0]) != 0
        no_root = _bit(masks, 0) == 0
        total += int((rest & root_dom).sum())
        without += int((rest & root_dom & no_root).sum())
        star += int((rest & ~root_dom).sum())
    return ExactCounts("domset", total, without, star)


_SCANS = {"indset": scan_independent, "matching": scan_matching, "domset": scan_dominating}


def _both(t: Tree, fam: str) -> ExactCounts:
    dp = dp_counts(t, fam)
    if t.n <= SCAN_LIMITS[fam]:
        scan = _SCANS[fam](t)
        if scan != dp:
            raise AssertionError(f"scan {scan} and recursion {dp} disagree on {t!r}")
    return dp


def brute_independent(t: Tree) -> ExactCounts:
    """Exact ``I`` and ``I0``; scan and recursion are cross-checked when both apply."""
    return _both(t, "indset")


def brute_matching(t: Tree) -> ExactCounts:
    """Exact ``m`` and ``m0``; scan and recursion are cross-checked when both apply."""
    return _both(t, "matching")


def brute_dominating(t: Tree) -> ExactCounts:
    """Exact ``d``, ``d0`` and ``d*``; scan and recursion are cross-checked."""
    return _both(t, "domset")


def brute_counts(t: Tree, family) -> ExactCounts:
    return _both(t, parse_family(family).tag)


# --------------------------------------------------------------------------
# enumeration


def iter_trees(n: int) -> Iterator[tuple[int, ...]]:
    """All preorder outdegree sequences of ordered trees with ``n`` nodes."""
    if n < 1:
        return
    seq: list[int] = []

    def rec(slots: int, left: int):
        # slots = children still to be placed, left = nodes still to place
        if left == 0:
            if slots == 0:
                yield tuple(seq)
            return
        if slots == 0:
            return
        for k in range(0, left):
            if slots - 1 + k > left - 1:
                break
            seq.append(k)
            yield from rec(slots - 1 + k, left - 1)
            seq.pop()

    yield from rec(1, n)


@dataclass(frozen=True)
class TreeEnumeration:
    """Every ordered tree with ``n`` nodes and its Galton-Watson weight."""

    n: int
    trees: tuple[Tree, ...]
    weights: np.ndarray
    pi_n: float

    def conditional(self) -> np.ndarray:
        """Probabilities under the size-conditioned law."""
        if self.pi_n == 0.0:
            raise ImpossibleSize(f"P(|T| = {self.n}) = 0")
        return self.weights / self.pi_n


def gw_weight(t: Tree | tuple[int, ...], dist: OffspringDistribution) -> float:
    seq = t.outdeg.tolist() if isinstance(t, Tree) else t
    p = dist.pmf
    w = 1.0
    for k in seq:
        w *= p[k] if k < len(p) else 0.0
    return w


def enumerate_trees(n: int, dist=None) -> TreeEnumeration:
    """List the Catalan(n-1) ordered trees with ``n`` nodes (``n <= 12``).

    Weights are ``prod_v p[outdeg(v)]`` under ``dist`` (geometric by default).
    """
    if n > ENUM_LIMIT:
        raise TooLarge(f"enumeration limited to n <= {ENUM_LIMIT}")
    dist = make_offspring(dist or "geometric")
    seqs = list(iter_trees(n))
    trees = tuple(build_tree(s) for s in seqs)
    w = np.array([gw_weight(s, dist) for s in seqs])
    return TreeEnumeration(n=n, trees=trees, weights=w, pi_n=float(w.sum()))


def exact_expectation(family, dist, n: int) -> tuple[float, float]:
    """``(E f(T_n), E F(T_n))`` by exhaustive enumeration."""
    fam = parse_family(family)
    en = enumerate_trees(n, dist)
    prob = en.conditional()
    f = np.array([float(evaluate(t, fam, keep_toll=False).root_toll) for t in en.trees])
    F = np.array([float(evaluate(t, fam, keep_toll=False).F_value) for t in en.trees])
    return float(prob @ f), float(prob @ F)


def truncated_shape_probs(dist, M: int, min_prob: float = 1e-8) -> dict[tuple[int, ...], float]:
    """``P(T^(M) = T)`` for every shape of height <= M with probability >= ``min_prob``.

    Nodes at depth ``M`` are leaves of the cut tree and carry no factor.
    """
    dist = make_offspring(dist)
    pmf = dist.pmf.tolist()
    out: dict[tuple[int, ...], float] = {}
    seq: list[int] = []
    pending: list[int] = [0]

    def rec(prob: float):
        if not pending:
            out[tuple(seq)] = prob
            return
        d = pending.pop()
        if d == M:
            seq.append(0)
            rec(prob)
            seq.pop()
        else:
            for k, pk in enumerate(pmf):
                q = prob * pk
                if pk == 0.0 or q < min_prob:
                    continue
                seq.append(k)
                pending.extend([d + 1] * k)
                rec(q)
                if k:
                    del pending[-k:]
                seq.pop()
        pending.append(d)

    rec(1.0)
    return out


# --------------------------------------------------------------------------
# variance witness


def complete_tree(d: int, height: int) -> Tree:
    """Complete ``d``-ary tree of the given height."""
    seq: list[int] = []
    stack = [0]
    while stack:
        depth = stack.pop()
        if depth < height:
            seq.append(d)
            stack.extend([depth + 1] * d)
        else:
            seq.append(0)
    return build_tree(seq)


def caterpillar(d: int, spine: int) -> Tree:
    """Spine of ``spine`` nodes; each spine node has the next spine node as
    its first child followed by ``d - 1`` leaves, the last has ``d`` leaves."""
    leaves = (spine - 1) * (d - 1) + d
    return build_tree([d] * spine + [0] * leaves)


@dataclass(frozen=True)
class WitnessReport:
    d: int
    size1: int
    size2: int
    I1: int
    I2: int
    I01: int
    I02: int
    eta: Fraction
    degenerate: bool
    holds: bool


def variance_positivity_witness(d: int) -> WitnessReport:
    """Compare a complete ``d``-ary tree of height 3 with a ``d``-ary
    caterpillar of the same size.

    Two fixed shapes with equal size but different ``I`` and ``I0`` show that
    the independent-set functional is not a deterministic function of the
    size, hence has positive limiting variance.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    s1 = complete_tree(d, 3)
    s2 = caterpillar(d, d * d + d + 1)
    c1 = dp_counts(s1, "indset")
    c2 = dp_counts(s2, "indset")
    eta = min(Fraction(c1.total, c2.total), Fraction(c1.without_root, c2.without_root))
    degenerate = s1 == s2
    holds = (
        s1.n == s2.n and c1.total > c2.total and c1.without_root > c2.without_root and eta > 1
    )
    return WitnessReport(
        d=d,
        size1=s1.n,
        size2=s2.n,
        I1=c1.total,
        I2=c2.total,
        I01=c1.without_root,
        I02=c2.without_root,
        eta=eta,
        degenerate=degenerate,
        holds=holds,
    )
