"""Round-based tree reductions and the functionals they induce.

Four rules are supported. In each round every rule is evaluated on the
tree as it stood at the start of that round, and all qualifying nodes are
removed at once. The root is never removed.

``leaf``
    remove every leaf.
``oldleaf``
    remove every leaf that is the leftmost remaining child of its parent.
``path``
    remove every fringe subtree in which no node has two or more children.
``oldpath``
    as ``path``, restricted to fringes whose top node is the leftmost
    remaining child of its parent (the lower nodes are only children).

After ``r`` rounds, ``X_r`` nodes survive and ``F_r = n - X_r``. ``F_r`` is
additive with toll ``f_r(T)`` = number of root branches whose root is gone
after ``r`` rounds.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .trees import Tree, build_tree


class ReductionKind(enum.Enum):
    LEAF = "leaf"
    OLDLEAF = "oldleaf"
    PATH = "path"
    OLDPATH = "oldpath"

    @property
    def code(self) -> int:
        return _CODES[self]

    @classmethod
    def parse(cls, value) -> "ReductionKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        for k in cls:
            if k.value == key:
                return k
        raise ValueError(f"unknown reduction kind {value!r}")


_CODES = {
    ReductionKind.LEAF: kernels.LEAF,
    ReductionKind.OLDLEAF: kernels.OLDLEAF,
    ReductionKind.PATH: kernels.PATH,
    ReductionKind.OLDPATH: kernels.OLDPATH,
}


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of ``r`` rounds.

    ``deletion_round[v]`` is the round in which ``v`` was removed, or 0 if
    it survived.
    """

    kind: ReductionKind
    r: int
    survivors: np.ndarray
    deletion_round: np.ndarray
    X_r: int
    F_r: int


def deletion_rounds(t: Tree, kind: ReductionKind | str, r: int) -> np.ndarray:
    kind = ReductionKind.parse(kind)
    if r < 1:
        raise ValueError("r must be >= 1")
    return kernels.deletion_rounds(t.parent, t.outdeg, kind.code, int(r))


def reduce_r(t: Tree, kind: ReductionKind | str, r: int) -> ReductionResult:
    """Run ``r`` rounds (stopping early once nothing changes)."""
    kind = ReductionKind.parse(kind)
    rnd = deletion_rounds(t, kind, r)
    survivors = rnd == 0
    survivors.flags.writeable = False
    rnd.flags.writeable = False
    x = int(survivors.sum())
    return ReductionResult(kind=kind, r=int(r), survivors=survivors, deletion_round=rnd, X_r=x, F_r=t.n - x)


def _survivor_tree(t: Tree, alive: np.ndarray) -> Tree:
    child_alive = alive.copy()
    child_alive[0] = False
    deg = np.bincount(t.parent[child_alive], minlength=t.n)
    return build_tree(deg[alive])


def reduce_once(t: Tree, kind: ReductionKind | str) -> Tree:
    """The tree left after a single round."""
    return _survivor_tree(t, reduce_r(t, kind, 1).survivors)


def reduce_tree(t: Tree, kind: ReductionKind | str, r: int) -> Tree:
    """The tree left after ``r`` rounds."""
    return _survivor_tree(t, reduce_r(t, kind, r).survivors)


def reduction_tolls(t: Tree, kind: ReductionKind | str, r: int) -> np.ndarray:
    """``f_r`` of every fringe subtree, from a single run on ``t``.

    All four rules only look at a node's descendants and siblings, so the
    run restricted to a fringe matches a standalone run on it.
    """
    rnd = deletion_rounds(t, kind, r)
    gone = rnd > 0
    return np.bincount(t.parent[gone], minlength=t.n).astype(np.int64)


def reduction_toll(t: Tree, kind: ReductionKind | str, r: int) -> int:
    """``f_r(t)``: root branches whose root is removed within ``r`` rounds."""
    if t.n == 1:
        return 0
    rnd = deletion_rounds(t, kind, r)
    return int(np.count_nonzero(rnd[t.root_children()] > 0))
