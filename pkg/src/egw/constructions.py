"""The extremal tree families and their parameter bookkeeping.

Three materialized families live here:

* ``complete_tree_game(n)`` -- the full-tree board with 2**(n-1) edges,
  the tight case for the edge-count winning criterion.
* ``neighborhood_counterexample(n)`` -- a three-stage grafted tree whose
  path board has maximum neighborhood size 2**(n-2) + 2**(n-3) while the
  first player still wins with a pairing strategy.
* ``regular_weak(n)`` -- a full tree with staggered subtrees under its
  leaves, bringing every window degree down to s = 2**(n+1) / 2**floor(log2 n).

``tree_path_neighborhood`` counts edge neighborhoods directly on the
tree, which is the only way to reach n = 9 (the boards have millions of
edges, so materializing pairwise intersections is hopeless).  It is
cross-checked against the generic per-edge counter on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .trees import BinaryTree


def _log2_exact(x: int) -> int:
    if x <= 0 or x & (x - 1):
        raise ValidationError(f"{x} is not a power of two")
    return x.bit_length() - 1


def complete_tree_game_tree(n: int) -> BinaryTree:
    if n < 1:
        raise ValidationError("n must be >= 1")
    return BinaryTree.full(n - 1)


def complete_tree_game(n: int):
    """Board of the full tree of height n-1: all 2**(n-1) root-to-leaf paths."""
    from .trees import hyperedges_of_tree

    board, flag = hyperedges_of_tree(complete_tree_game_tree(n), n)
    assert flag
    return board


def neighborhood_counterexample(n: int) -> BinaryTree:
    """Three-stage graft with maximum neighborhood 2**(n-2) + 2**(n-3).

    Stage 1: under each leaf u of a full tree of height n-2, hang a leaf v
    and an internal child w.  Stage 2: grow a full tree of height n-3 from
    w; under each of its leaves u', hang a leaf v' and an internal child
    w'.  Stage 3: grow a full tree of height n-2 from w'.  Every leaf ends
    at depth >= n-1.
    """
    if n < 3:
        raise ValidationError("n must be >= 3")
    stage3 = BinaryTree.join(BinaryTree.single(), BinaryTree.full(n - 2))
    stage2 = BinaryTree.attach_to_full(stage3, n - 3)
    unit = BinaryTree.join(BinaryTree.single(), stage2)
    return BinaryTree.attach_to_full(unit, n - 2)


def regular_weak(n: int) -> tuple[BinaryTree, int]:
    """Staggered-subtree tree and its degree budget s = 2**(n+1)/2**floor(log2 n).

    The leaves of a full tree of height n-1 are split left-to-right into
    intervals of length 2**floor(log2 n) / 2; the i-th leaf of each
    interval gets a full subtree of height i.
    """
    if n < 4:
        raise ValidationError("n must be >= 4")
    log_n = n.bit_length() - 1
    interval = 2 ** log_n // 2
    s = 2 ** (n + 1) // 2 ** log_n
    base = BinaryTree.full(n - 1)
    leaves = base.leaves()
    subs = {h: BinaryTree.full(h) for h in range(1, interval)}
    attachments = {}
    for pos, leaf in enumerate(leaves):
        i = pos % interval
        if i > 0:
            attachments[leaf] = subs[i]
    return base.graft(attachments), s


def regular_weak_max_leaf_depth_bound(n: int) -> int:
    """No leaf is deeper than interval_length + n - 2."""
    log_n = n.bit_length() - 1
    return 2 ** log_n // 2 + n - 2


# -- tree-native neighborhood counting --------------------------------------


def tree_path_neighborhood(tree: BinaryTree, n: int) -> tuple[int, np.ndarray]:
    """Max (and per-edge) neighborhood sizes of the n-vertex path board.

    Edges are vertical n-vertex paths ending at leaves.  An edge [a..b]
    meets exactly the edges starting on it plus the edges that pass down
    through its top vertex a from above:

        |N(e)| = sum_{v in e} S(v) + (d(a) - S(a)) - 1

    with S(v) the count of leaves at distance exactly n-1 below v and
    d(v) the count within distance n-1.  This needs every leaf depth to
    be >= n-1, which is asserted.
    """
    counts = tree.leaf_distance_counts(n)
    s_exact = counts[:, n - 1].copy()
    d_window = counts.sum(axis=1)
    depths = np.asarray(tree.depths(), dtype=np.int64)
    parent = np.asarray(tree.parent, dtype=np.int64)
    leaf_idx = np.asarray(tree.leaves(), dtype=np.int64)
    if int(depths[leaf_idx].min()) < n - 1:
        raise ValidationError("tree has a leaf above depth n-1")
    acc = s_exact[leaf_idx].copy()
    cur = leaf_idx
    for _ in range(n - 1):
        cur = parent[cur]
        acc += s_exact[cur]
    sizes = acc + (d_window[cur] - s_exact[cur]) - 1
    return int(sizes.max()), sizes


def neighborhood_family_expected_max(n: int) -> int:
    return 2 ** (n - 2) + 2 ** (n - 3)


# -- parameter bookkeeping --------------------------------------------------


@dataclass(frozen=True)
class ConstructionParams:
    """Validated (n, s, c) tuple for one family.

    family is one of "complete-game", "neighborhood", "regular-weak",
    "regular-strong".  For the strong family, s = 2**(n-1) / (c*n) with
    c*n a power of two, and r = floor(log2(s)/2) - 1 drives the planner.
    """

    family: str
    n: int
    c: Fraction = Fraction(1)
    s: int = 0

    def __post_init__(self):
        if self.family == "complete-game":
            if self.n < 1:
                raise ValidationError("complete-game needs n >= 1")
        elif self.family == "neighborhood":
            if self.n < 3:
                raise ValidationError("neighborhood family needs n >= 3")
        elif self.family == "regular-weak":
            if self.n < 4:
                raise ValidationError("regular-weak needs n >= 4")
            log_n = self.n.bit_length() - 1
            object.__setattr__(self, "s", 2 ** (self.n + 1) // 2 ** log_n)
        elif self.family == "regular-strong":
            cn = self.c * self.n
            if cn.denominator != 1:
                raise ValidationError(f"c*n = {cn} is not an integer")
            cn_int = int(cn)
            _log2_exact(cn_int)  # raises unless power of two
            if cn_int < 8:
                raise ValidationError("regular-strong needs c*n >= 8")
            s = Fraction(2 ** (self.n - 1), cn_int)
            if s.denominator != 1:
                raise ValidationError("degree budget 2**(n-1)/(c*n) is not an integer")
            object.__setattr__(self, "s", int(s))
        else:
            raise ValidationError(f"unknown family {self.family!r}")

    @property
    def cn(self) -> int:
        return int(self.c * self.n)

    @property
    def log_s(self) -> int:
        return _log2_exact(self.s)

    @property
    def r(self) -> int:
        return self.log_s // 2 - 1

    def to_json_obj(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "c": str(self.c),
            "s": self.s,
        }
