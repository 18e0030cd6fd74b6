"""Single-pass evaluators for additive tree functionals.

An additive functional satisfies ``F(T) = sum_i F(T_i) + f(T)`` over the
root branches ``T_i``; unrolled, ``F(T)`` is the sum of the toll ``f`` over
all fringe subtrees. Every evaluator here returns the per-node tolls and
their sum.

The counting families (independent sets, matchings, dominating sets) work
with ratios in ``[0, 1]`` and sum logarithmic tolls, so ``F = log(count)``
never overflows.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .errors import PrecisionWarning
from .reductions import ReductionKind, reduction_tolls
from .trees import Tree, build_tree, parse_tree

# beyond this outdegree rho0 + rho* can underflow in double precision
DOM_DEGREE_LIMIT = 700

INDSET, MATCHING, DOMSET, REDUCTION, FRINGE, OUTDEG = (
    "indset",
    "matching",
    "domset",
    "reduction",
    "fringe",
    "outdeg",
)
_COUNTING = (INDSET, MATCHING, DOMSET)


@dataclass(frozen=True)
class FunctionalFamily:
    """Tagged choice of toll function.

    Use the constructors :meth:`indset`, :meth:`matching`, :meth:`domset`,
    :meth:`reduction`, :meth:`fringe` and :meth:`outdeg`.
    """

    tag: str
    kind: ReductionKind | None = None
    r: int | None = None
    pattern: Tree | None = field(default=None, compare=False)
    pattern_seq: tuple[int, ...] | None = None
    R: frozenset | None = None

    def __post_init__(self):
        if self.tag == REDUCTION and (self.r is None or self.r < 1):
            raise ValueError("reduction family needs r >= 1")
        if self.tag == OUTDEG and not self.R:
            raise ValueError("outdegree family needs a nonempty set R")
        if self.tag == FRINGE and self.pattern is None:
            raise ValueError("fringe family needs a pattern tree")

    @classmethod
    def indset(cls):
        return cls(INDSET)

    @classmethod
    def matching(cls):
        return cls(MATCHING)

    @classmethod
    def domset(cls):
        return cls(DOMSET)

    @classmethod
    def reduction(cls, kind, r: int):
        return cls(REDUCTION, kind=ReductionKind.parse(kind), r=int(r))

    @classmethod
    def fringe(cls, pattern):
        if not isinstance(pattern, Tree):
            pattern = build_tree(pattern)
        return cls(FRINGE, pattern=pattern, pattern_seq=pattern.preorder_outdegrees())

    @classmethod
    def outdeg(cls, R: Iterable[int]):
        return cls(OUTDEG, R=frozenset(int(x) for x in R))

    @property
    def integer_valued(self) -> bool:
        return self.tag not in _COUNTING

    @property
    def name(self) -> str:
        if self.tag == REDUCTION:
            return f"reduction:{self.kind.value}:{self.r}"
        if self.tag == FRINGE:
            return "fringe:" + " ".join(map(str, self.pattern_seq))
        if self.tag == OUTDEG:
            return "outdeg:" + ",".join(map(str, sorted(self.R)))
        return self.tag

    def descriptor(self) -> dict:
        if self.tag == REDUCTION:
            return {"name": REDUCTION, "kind": self.kind.value, "r": self.r}
        if self.tag == FRINGE:
            return {"name": FRINGE, "pattern": list(self.pattern_seq)}
        if self.tag == OUTDEG:
            return {"name": OUTDEG, "R": sorted(self.R)}
        return {"name": self.tag}


def parse_family(spec, **kw) -> FunctionalFamily:
    """Family from a name (``"indset"``, ``"reduction:oldpath:2"``, ...) or dict.

    Extra keywords (``kind``, ``r``, ``pattern``, ``R``) fill in parameters
    not given in the name.
    """
    if isinstance(spec, FunctionalFamily):
        return spec
    if isinstance(spec, dict):
        kw = {**{k: v for k, v in spec.items() if k not in ("name", "tag", "family")}, **kw}
        spec = spec.get("name", spec.get("tag", spec.get("family", "")))
    parts = str(spec).strip().lower().split(":")
    head = parts[0].replace("-", "").replace("_", "")
    aliases = {"ind": INDSET, "independent": INDSET, "match": MATCHING, "dom": DOMSET, "dominating": DOMSET}
    head = aliases.get(head, head)
    if head in _COUNTING:
        return FunctionalFamily(head)
    if head == REDUCTION:
        kind = parts[1] if len(parts) > 1 else kw.get("kind")
        r = parts[2] if len(parts) > 2 else kw.get("r")
        if kind is None or r is None:
            raise ValueError("reduction family needs a kind and r")
        return FunctionalFamily.reduction(kind, int(r))
    if head == FRINGE:
        pat = parts[1] if len(parts) > 1 else kw.get("pattern")
        if pat is None:
            raise ValueError("fringe family needs a pattern")
        if isinstance(pat, str):
            pat = parse_tree(pat.replace(",", " "))
        return FunctionalFamily.fringe(pat)
    if head == OUTDEG:
        R = parts[1] if len(parts) > 1 else kw.get("R")
        if R is None:
            raise ValueError("outdegree family needs a set R")
        if isinstance(R, str):
            R = [int(x) for x in R.replace(" ", ",").split(",") if x]
        return FunctionalFamily.outdeg(R)
    raise ValueError(f"unknown family {spec!r}")


@dataclass(frozen=True)
class IndState:
    """``rho[v] = I0/I`` of the fringe at ``v`` (sets avoiding the root)."""

    rho: np.ndarray


@dataclass(frozen=True)
class MatchState:
    """``rho[v] = m0/m`` of the fringe at ``v`` (matchings missing the root)."""

    rho: np.ndarray


@dataclass(frozen=True)
class DomState:
    """Ratios ``rho0 = d0/d`` and ``rho_star = d*/d``.

    ``d0`` counts dominating sets without the root; ``d*`` counts sets
    without the root that dominate every other node but not the root.
    """

    rho0: np.ndarray
    rho_star: np.ndarray


@dataclass(frozen=True)
class AdditiveEvaluation:
    """``F_value`` is the sum of ``toll`` over all nodes.

    ``toll`` is None when the evaluator was asked not to keep it.
    """

    family: FunctionalFamily
    F_value: float
    root_toll: float
    toll: np.ndarray | None = None
    state: object = None

    def root_ratios(self) -> tuple[float, ...]:
        """Family-specific ratios at the root (empty for integer families)."""
        s = self.state
        if isinstance(s, (IndState, MatchState)):
            return (float(s.rho[0]),)
        if isinstance(s, DomState):
            return (float(s.rho0[0]), float(s.rho_star[0]))
        return ()


def _finish(family, toll, state, keep_toll, integer=False):
    if integer:
        total = int(toll.sum())
        root = int(toll[0])
    else:
        total = float(np.sum(toll))
        root = float(toll[0])
    toll.flags.writeable = False
    return AdditiveEvaluation(family, total, root, toll if keep_toll else None, state)


def eval_independent(t: Tree, keep_toll: bool = True) -> tuple[AdditiveEvaluation, IndState]:
    """``F = log I(t)`` with toll ``-log rho``, ``rho = 1 / (1 + prod_children rho)``."""
    rho = kernels.ind_rho(t.parent)
    state = IndState(rho)
    return _finish(FunctionalFamily.indset(), -np.log(rho), state, keep_toll), state


def eval_matching(t: Tree, keep_toll: bool = True) -> tuple[AdditiveEvaluation, MatchState]:
    """``F = log m(t)`` with toll ``-log rho``, ``rho = 1 / (1 + sum_children rho)``."""
    rho = kernels.match_rho(t.parent)
    state = MatchState(rho)
    return _finish(FunctionalFamily.matching(), -np.log(rho), state, keep_toll), state


def eval_dominating(t: Tree, keep_toll: bool = True) -> tuple[AdditiveEvaluation, DomState]:
    """``F = log d(t)`` with toll ``-log(rho0 + rho_star)``.

    With ``P = prod rho0(child)`` and ``A = prod (1 + rho_star(child))``::

        rho0 = (1 - P) / (1 - P + A),   rho_star = P / (1 - P + A)
    """
    if t.n > 1 and int(t.outdeg.max()) > DOM_DEGREE_LIMIT:
        warnings.warn(
            f"outdegree above {DOM_DEGREE_LIMIT}; dominating-set ratios may underflow",
            PrecisionWarning,
            stacklevel=2,
        )
    r0, rs = kernels.dom_rho(t.parent)
    state = DomState(r0, rs)
    return _finish(FunctionalFamily.domset(), -np.log(r0 + rs), state, keep_toll), state


_HASH_BASE = np.uint64(0x9E3779B97F4A7C15)


def _prefix_hash(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``G[i] = sum_{j<i} (x_j + 1) B^j`` and ``B^j`` modulo 2^64."""
    n = x.shape[0]
    powers = np.empty(n + 1, dtype=np.uint64)
    powers[0] = 1
    with np.errstate(over="ignore"):
        powers[1:] = np.cumprod(np.full(n, _HASH_BASE, dtype=np.uint64), dtype=np.uint64)
        terms = (x.astype(np.uint64) + np.uint64(1)) * powers[:n]
        g = np.zeros(n + 1, dtype=np.uint64)
        g[1:] = np.cumsum(terms, dtype=np.uint64)
    return g, powers


def fringe_matches(t: Tree, pattern: Tree) -> np.ndarray:
    """Boolean mask of the nodes whose fringe equals ``pattern``."""
    m = pattern.n
    cand = np.flatnonzero(t.subtree_size == m)
    if m == 1 or cand.size == 0:
        mask = np.zeros(t.n, dtype=bool)
        mask[cand] = True
        return mask
    g, powers = _prefix_hash(t.outdeg)
    gp, _ = _prefix_hash(pattern.outdeg)
    with np.errstate(over="ignore"):
        cand = cand[(g[cand + m] - g[cand]) == gp[m] * powers[cand]]
    # hash hits are confirmed by exact comparison
    if cand.size:
        windows = t.outdeg[cand[:, None] + np.arange(m)]
        cand = cand[np.all(windows == pattern.outdeg, axis=1)]
    mask = np.zeros(t.n, dtype=bool)
    mask[cand] = True
    return mask


def eval_fringe_count(t: Tree, pattern, keep_toll: bool = True) -> AdditiveEvaluation:
    """Occurrences of ``pattern`` as a fringe subtree (ordered equality)."""
    fam = FunctionalFamily.fringe(pattern)
    toll = fringe_matches(t, fam.pattern).astype(np.int64)
    return _finish(fam, toll, None, keep_toll, integer=True)


def eval_outdegree_count(t: Tree, R: Iterable[int], keep_toll: bool = True) -> AdditiveEvaluation:
    """Number of nodes whose outdegree lies in ``R``."""
    fam = FunctionalFamily.outdeg(R)
    toll = np.isin(t.outdeg, np.fromiter(fam.R, dtype=np.int64)).astype(np.int64)
    return _finish(fam, toll, None, keep_toll, integer=True)


def eval_reduction(t: Tree, kind, r: int, keep_toll: bool = True) -> AdditiveEvaluation:
    """``F_r = n - X_r``, the number of nodes removed within ``r`` rounds."""
    fam = FunctionalFamily.reduction(kind, r)
    return _finish(fam, reduction_tolls(t, fam.kind, fam.r), None, keep_toll, integer=True)


def evaluate(t: Tree, family, keep_toll: bool = True) -> AdditiveEvaluation:
    """Dispatch on ``family``; the evaluation's ``state`` holds any ratios."""
    fam = parse_family(family)
    if fam.tag == INDSET:
        return eval_independent(t, keep_toll)[0]
    if fam.tag == MATCHING:
        return eval_matching(t, keep_toll)[0]
    if fam.tag == DOMSET:
        return eval_dominating(t, keep_toll)[0]
    if fam.tag == REDUCTION:
        return eval_reduction(t, fam.kind, fam.r, keep_toll)
    if fam.tag == FRINGE:
        return eval_fringe_count(t, fam.pattern, keep_toll)
    return eval_outdegree_count(t, fam.R, keep_toll)


def toll_value(family, t: Tree) -> float:
    """``f(t)``, the toll of the whole tree."""
    return evaluate(t, family, keep_toll=False).root_toll


def log_count(family, t: Tree) -> float:
    """``log`` of the exact count for a counting family (equal to ``F``)."""
    fam = parse_family(family)
    if fam.tag not in _COUNTING:
        raise ValueError(f"{fam.name} is not a counting family")
    return evaluate(t, fam, keep_toll=False).F_value


__all__ = [
    "AdditiveEvaluation",
    "DomState",
    "FunctionalFamily",
    "IndState",
    "MatchState",
    "eval_dominating",
    "eval_fringe_count",
    "eval_independent",
    "eval_matching",
    "eval_outdegree_count",
    "eval_reduction",
    "evaluate",
    "fringe_matches",
    "log_count",
    "parse_family",
    "toll_value",
]
