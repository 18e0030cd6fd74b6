"""Finite rooted ordered trees stored as preorder arrays.

A tree with ``n`` nodes is identified by its preorder outdegree sequence.
Node ``v`` is the ``v``-th node visited in depth-first order (0 is the root),
and the fringe subtree at ``v`` occupies the contiguous index range
``v, ..., v + subtree_size[v] - 1``. All traversals are iterative, so deep
trees (height of order sqrt(n)) are fine.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from . import kernels
from .errors import IndexOutOfRange, MalformedSequence

ROOT_PARENT = -1


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Tree:
    """Immutable preorder arena.

    Attributes
    ----------
    outdeg : int64[n]
        Number of children of each node, in preorder.
    parent : int64[n]
        Parent index; ``-1`` for the root.
    subtree_size : int64[n]
        Size of the fringe subtree rooted at each node.
    depth : int64[n]
        Distance from the root.
    n : int
        Number of nodes.
    """

    __slots__ = ("outdeg", "parent", "subtree_size", "depth", "n", "_hash")

    def __init__(self, outdeg, parent, subtree_size, depth):
        self.outdeg = _frozen(outdeg)
        self.parent = _frozen(parent)
        self.subtree_size = _frozen(subtree_size)
        self.depth = _frozen(depth)
        self.n = int(outdeg.shape[0])
        self._hash = None

    @property
    def degree(self) -> int:
        """Outdegree of the root."""
        return int(self.outdeg[0])

    @property
    def height(self) -> int:
        return int(self.depth.max())

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.outdeg, other.outdeg))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.outdeg.tobytes())
        return self._hash

    def __repr__(self) -> str:
        if self.n <= 12:
            return f"Tree({list(self.preorder_outdegrees())})"
        return f"Tree(n={self.n}, height={self.height})"

    def preorder_outdegrees(self) -> tuple[int, ...]:
        return tuple(self.outdeg.tolist())

    def children(self, v: int) -> list[int]:
        """Indices of the children of ``v``, left to right."""
        self._check(v)
        out = []
        c = v + 1
        for _ in range(int(self.outdeg[v])):
            out.append(c)
            c += int(self.subtree_size[c])
        return out

    def root_children(self) -> np.ndarray:
        return np.flatnonzero(self.parent == 0)

    def branches(self) -> list["Tree"]:
        """The fringe subtrees rooted at the children of the root."""
        return [fringe_at(self, int(c)) for c in self.root_children()]

    def level_profile(self) -> "LevelProfile":
        return level_profile(self)

    def truncate(self, M: int) -> "Tree":
        return truncate(self, M)

    def fringe_at(self, v: int) -> "Tree":
        return fringe_at(self, v)

    def to_text(self) -> str:
        return format_tree(self)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexOutOfRange(f"node {v} not in tree of size {self.n}")


@dataclass(frozen=True)
class LevelProfile:
    """Number of nodes at each depth; ``w[k]`` for ``0 <= k <= height``."""

    w: np.ndarray
    height: int

    def at(self, k: int) -> int:
        """``w_k``, zero outside ``0..height``."""
        if 0 <= k <= self.height:
            return int(self.w[k])
        return 0


def build_tree(preorder_outdegrees: Sequence[int] | np.ndarray) -> Tree:
    """Validate a preorder outdegree sequence and build its arena.

    Raises
    ------
    MalformedSequence
        If the sequence is empty, contains negative entries, closes before
        its end, or ends with unfilled child slots.
    """
    deg = np.ascontiguousarray(preorder_outdegrees, dtype=np.int64)
    if deg.ndim != 1 or deg.shape[0] == 0:
        raise MalformedSequence("outdegree sequence must be a nonempty 1-d sequence")
    parent, size, depth, bad = kernels.tree_arrays(deg)
    if bad >= 0:
        if bad == deg.shape[0]:
            raise MalformedSequence(
                f"sequence of length {deg.shape[0]} leaves child slots unfilled "
                f"(sum of outdegrees {int(deg.sum())} != n - 1)"
            )
        raise MalformedSequence(f"invalid outdegree sequence at position {bad}")
    return Tree(deg, parent, size, depth)


def single_node() -> Tree:
    return build_tree([0])


def level_profile(t: Tree) -> LevelProfile:
    w = np.bincount(t.depth)
    return LevelProfile(w=_frozen(w), height=len(w) - 1)


def truncate(t: Tree, M: int) -> Tree:
    """Restriction to the nodes of depth at most ``M`` (preorder kept)."""
    if M < 0:
        raise ValueError("cut-off M must be non-negative")
    if t.height <= M:
        return t
    keep = t.depth <= M
    deg = t.outdeg[keep].copy()
    deg[t.depth[keep] == M] = 0
    return build_tree(deg)


def fringe_at(t: Tree, v: int) -> Tree:
    t._check(v)
    if v == 0:
        return t
    return build_tree(t.outdeg[v : v + t.subtree_size[v]].copy())


def parse_tree(line: str) -> Tree:
    """Parse one line of space-separated preorder outdegrees."""
    try:
        seq = [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise MalformedSequence(f"non-integer token in {line!r}") from exc
    return build_tree(seq)


def format_tree(t: Tree) -> str:
    return " ".join(map(str, t.outdeg.tolist()))


def read_trees(stream: TextIO | Iterable[str]) -> Iterator[Tree]:
    """Trees from text lines; blank lines and ``#`` comments are skipped."""
    for line in stream:
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        yield parse_tree(s)


def write_trees(trees: Iterable[Tree], stream: TextIO) -> None:
    for t in trees:
        stream.write(format_tree(t))
        stream.write("\n")
