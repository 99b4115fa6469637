"""Rooted ordered binary trees and their path hypergraphs.

Every node has exactly zero or two children.  Nodes are stored in flat
parallel arrays with the invariant that a parent's index is smaller than
its children's, which lets the statistics run as level-wise vector
passes even on multi-million-node trees.

Node identity for serialized artifacts is the descent string from the
root ("", "L", "LR", ...), so every downstream file is reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import ValidationError
from .hypergraph import Hypergraph, Pairing
from .sequences import DistanceSequence


class BinaryTree:
    __slots__ = ("left", "right", "parent")

    def __init__(self, left: list[int], right: list[int], parent: list[int]):
        self.left = left
        self.right = right
        self.parent = parent

    # -- constructors ----------------------------------------------------

    @classmethod
    def single(cls) -> "BinaryTree":
        return cls([-1], [-1], [-1])

    @classmethod
    def full(cls, height: int) -> "BinaryTree":
        """Complete tree of the given height (height 0 is a single node)."""
        if height < 0:
            raise ValidationError("height must be >= 0")
        n = 2 ** (height + 1) - 1
        internal = 2 ** height - 1
        left = [2 * i + 1 if i < internal else -1 for i in range(n)]
        right = [2 * i + 2 if i < internal else -1 for i in range(n)]
        parent = [-1] + [(i - 1) // 2 for i in range(1, n)]
        return cls(left, right, parent)

    @classmethod
    def join(cls, a: "BinaryTree", b: "BinaryTree") -> "BinaryTree":
        """New root with a as left subtree and b as right subtree."""
        na = a.node_count
        left = [1] + [x + 1 if x >= 0 else -1 for x in a.left]
        right = [1 + na] + [x + 1 if x >= 0 else -1 for x in a.right]
        left += [x + 1 + na if x >= 0 else -1 for x in b.left]
        right += [x + 1 + na if x >= 0 else -1 for x in b.right]
        parent = [-1, 0] + [p + 1 for p in a.parent[1:]]
        parent += [0] + [p + 1 + na for p in b.parent[1:]]
        return cls(left, right, parent)

    def graft(self, attachments: Mapping[int, "BinaryTree"]) -> "BinaryTree":
        """Attach subtrees so each given leaf becomes the attached tree's root."""
        left = list(self.left)
        right = list(self.right)
        parent = list(self.parent)
        for leaf in sorted(attachments):
            sub = attachments[leaf]
            if left[leaf] != -1:
                raise ValidationError(f"node {leaf} is not a leaf")
            if sub.node_count == 1:
                continue
            off = len(left)  # sub node j>0 maps to off + j - 1

            def remap(x: int) -> int:
                return -1 if x == -1 else off + x - 1

            left[leaf] = remap(sub.left[0])
            right[leaf] = remap(sub.right[0])
            for j in range(1, sub.node_count):
                left.append(remap(sub.left[j]))
                right.append(remap(sub.right[j]))
                p = sub.parent[j]
                parent.append(leaf if p == 0 else off + p - 1)
        return BinaryTree(left, right, parent)

    @classmethod
    def attach_to_full(cls, sub: "BinaryTree", height: int) -> "BinaryTree":
        """Full tree of the given height with a copy of sub under every leaf."""
        base = cls.full(height)
        return base.graft({leaf: sub for leaf in base.leaves()})

    @classmethod
    def random(cls, rng: random.Random, max_nodes: int) -> "BinaryTree":
        """Grow a tree by splitting random leaves (node count is odd, <= max)."""
        left, right, parent = [-1], [-1], [-1]
        leaves = [0]
        while len(left) + 2 <= max_nodes and (len(left) == 1 or rng.random() < 0.85):
            leaf = leaves.pop(rng.randrange(len(leaves)))
            left[leaf] = len(left)
            right[leaf] = len(left) + 1
            parent += [leaf, leaf]
            left += [-1, -1]
            right += [-1, -1]
            leaves += [left[leaf], right[leaf]]
        return cls(left, right, parent)

    # -- views -------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.left)

    def is_leaf(self, i: int) -> bool:
        return self.left[i] == -1

    def leaves(self) -> list[int]:
        return [i for i in range(self.node_count) if self.left[i] == -1]

    def depths(self) -> list[int]:
        d = [0] * self.node_count
        for i in range(1, self.node_count):
            d[i] = d[self.parent[i]] + 1
        return d

    def path_ids(self) -> list[str]:
        ids = [""] * self.node_count
        for i in range(self.node_count):
            l, r = self.left[i], self.right[i]
            if l != -1:
                ids[l] = ids[i] + "L"
                ids[r] = ids[i] + "R"
        return ids

    def validate(self) -> None:
        for i in range(self.node_count):
            l, r = self.left[i], self.right[i]
            if (l == -1) != (r == -1):
                raise ValidationError(f"node {i} has exactly one child")
            if l != -1 and (l <= i or r <= i):
                raise ValidationError("children must have larger indices than parents")

    # -- statistics ----------------------------------------------------------

    def leaf_distance_counts(self, horizon: int) -> np.ndarray:
        """counts[v, d] = leaf descendants of v at distance exactly d < horizon."""
        n_nodes = self.node_count
        left = np.asarray(self.left, dtype=np.int64)
        right = np.asarray(self.right, dtype=np.int64)
        depth = np.asarray(self.depths(), dtype=np.int64)
        counts = np.zeros((n_nodes, horizon), dtype=np.int64)
        leaf_mask = left == -1
        counts[leaf_mask, 0] = 1
        if n_nodes == 1:
            return counts
        max_depth = int(depth.max())
        # bucket nodes by depth for level-wise vector updates
        order = np.argsort(depth, kind="stable")
        level_starts = np.searchsorted(depth[order], np.arange(max_depth + 2))
        for d in range(max_depth - 1, -1, -1):
            nodes = order[level_starts[d]:level_starts[d + 1]]
            internal = nodes[~leaf_mask[nodes]]
            if internal.size == 0:
                continue
            counts[internal, 1:] = counts[left[internal], :-1] + counts[right[internal], :-1]
        return counts

    def distance_sequence(self, v: int, n: int, s: int) -> DistanceSequence:
        """Brute-force profile of node v via a full descendant traversal."""
        dist_counts = [0] * n
        stack = [(v, 0)]
        while stack:
            node, d = stack.pop()
            if self.left[node] == -1:
                if d <= n - 1:
                    dist_counts[d] += 1
                continue
            if d + 1 <= n - 1:
                stack.append((self.left[node], d + 1))
                stack.append((self.right[node], d + 1))
        entries = [
            Fraction(dist_counts[n - 1 - i] * 2 ** (i + 1), s) for i in range(n)
        ]
        return DistanceSequence.make(n, s, entries)

    # -- serialization ---------------------------------------------------------

    def to_json_obj(self) -> dict:
        ids = self.path_ids()
        objs: list[dict | None] = [None] * self.node_count
        for i in range(self.node_count - 1, -1, -1):
            l, r = self.left[i], self.right[i]
            objs[i] = {
                "id": ids[i],
                "left": objs[l] if l != -1 else None,
                "right": objs[r] if r != -1 else None,
            }
        return objs[0]

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "BinaryTree":
        left, right, parent = [], [], []
        stack = [(obj, -1, "")]
        while stack:
            node, par, which = stack.pop()
            idx = len(left)
            left.append(-1)
            right.append(-1)
            parent.append(par)
            if par >= 0:
                if which == "L":
                    left[par] = idx
                else:
                    right[par] = idx
            l, r = node.get("left"), node.get("right")
            if (l is None) != (r is None):
                raise ValidationError("tree JSON node with exactly one child")
            if l is not None:
                stack.append((r, idx, "R"))
                stack.append((l, idx, "L"))
        tree = cls(left, right, parent)
        tree.validate()
        return tree

    def to_dot(self, name: str = "tree", max_nodes: int = 50_000) -> str:
        if self.node_count > max_nodes:
            raise ValidationError(f"tree too large for DOT export ({self.node_count} nodes)")
        ids = self.path_ids()
        lines = [f"digraph {name} {{"]
        for i in range(self.node_count):
            label = ids[i] if ids[i] else "root"
            lines.append(f'  n{i} [label="{label}"];')
        for i in range(self.node_count):
            if self.left[i] != -1:
                lines.append(f"  n{i} -> n{self.left[i]};")
                lines.append(f"  n{i} -> n{self.right[i]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- path hypergraph -----------------------------------------------------


def hyperedges_of_tree(tree: BinaryTree, n: int) -> tuple[Hypergraph, bool]:
    """The n-uniform path board of a tree, plus its depth-class flag.

    Vertices are all tree nodes; edges are the downward paths of n
    vertices ending at a leaf.  The flag reports whether every leaf has
    depth at least n-1 (shallower leaves simply contribute no edge).
    """
    if n < 1:
        raise ValidationError("n must be positive")
    ids = tree.path_ids()
    depths = tree.depths()
    edges = []
    deep_enough = True
    for leaf in tree.leaves():
        if depths[leaf] < n - 1:
            deep_enough = False
            continue
        path = []
        node = leaf
        for _ in range(n):
            path.append(ids[node])
            node = tree.parent[node]
        edges.append(path)
    return Hypergraph(ids, edges), deep_enough


def sibling_pairing(tree: BinaryTree) -> tuple[str, Pairing]:
    """Root as the opening move, every other node paired with its sibling."""
    ids = tree.path_ids()
    pairs = [
        (ids[tree.left[i]], ids[tree.right[i]])
        for i in range(tree.node_count)
        if tree.left[i] != -1
    ]
    return ids[0], Pairing(tuple(pairs))


# -- window-degree verification --------------------------------------------


@dataclass
class TreeReport:
    """verify_tree outcome: leaf depth floor and degree ceiling."""

    n: int
    s: int
    node_count: int
    min_leaf_depth: int
    max_degree: int
    root_degree: int
    depth_ok: bool
    degree_ok: bool

    @property
    def passed(self) -> bool:
        return self.depth_ok and self.degree_ok

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "node_count": self.node_count,
            "min_leaf_depth": self.min_leaf_depth,
            "max_degree": self.max_degree,
            "root_degree": self.root_degree,
            "depth_ok": self.depth_ok,
            "degree_ok": self.degree_ok,
            "passed": self.passed,
        }


def verify_tree(tree: BinaryTree, n: int, s: int) -> TreeReport:
    """Check min leaf depth >= n-1 and window degree <= s at every node.

    The window degree of a node is its count of leaf descendants within
    distance n-1; on trees that pass the depth check it coincides with
    the vertex degree in the path board.
    """
    counts = tree.leaf_distance_counts(n)
    degrees = counts.sum(axis=1)
    depths = np.asarray(tree.depths(), dtype=np.int64)
    leaf_mask = np.asarray([tree.is_leaf(i) for i in range(tree.node_count)])
    min_leaf_depth = int(depths[leaf_mask].min())
    max_degree = int(degrees.max())
    return TreeReport(
        n=n,
        s=s,
        node_count=tree.node_count,
        min_leaf_depth=min_leaf_depth,
        max_degree=max_degree,
        root_degree=int(degrees[0]),
        depth_ok=min_leaf_depth >= n - 1,
        degree_ok=max_degree <= s,
    )


def window_degrees(tree: BinaryTree, n: int) -> np.ndarray:
    """Per-node count of leaf descendants within distance n-1."""
    return tree.leaf_distance_counts(n).sum(axis=1)
