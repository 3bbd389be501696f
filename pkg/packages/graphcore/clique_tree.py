"""Clique trees: construction by maximum-weight spanning tree, verification and traversal."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from packages.graphcore.chordal import Clique
from packages.graphcore.graph import GraphError

logger = logging.getLogger("treeloc.graphcore.clique_tree")


@dataclass(frozen=True)
class CliqueTree:
    """
    Cliques arranged in a rooted tree.

    parent maps every non-root node to its parent. separators[k] is
    C_k & C_parent(k) and residuals[k] is C_k minus that separator; the root's
    separator is empty and its residual is the whole clique.
    """

    cliques: tuple[Clique, ...]
    parent: dict[int, int]
    root: int
    separators: dict[int, tuple[int, ...]]
    residuals: dict[int, tuple[int, ...]]

    @property
    def size(self) -> int:
        return len(self.cliques)

    def children(self, k: int) -> list[int]:
        return sorted(c for c, p in self.parent.items() if p == k)

    def vertices(self) -> set[int]:
        return {v for c in self.cliques for v in c.members}


def _make_tree(cliques: tuple[Clique, ...], parent: dict[int, int], root: int) -> CliqueTree:
    separators: dict[int, tuple[int, ...]] = {root: ()}
    residuals: dict[int, tuple[int, ...]] = {root: cliques[root].members}
    for k, p in parent.items():
        shared = cliques[k].as_set() & cliques[p].as_set()
        separators[k] = tuple(sorted(shared))
        residuals[k] = tuple(v for v in cliques[k].members if v not in shared)
    return CliqueTree(cliques, dict(parent), root, separators, residuals)


def build_clique_tree(cliques: Sequence[Clique], root: Optional[int] = None) -> CliqueTree:
    """
    Build a clique tree as a maximum-weight spanning tree of the clique graph.

    Edge weights are |C_i & C_j|. Prim's algorithm grows the tree from the root;
    ties go to the lowest candidate index, then to the earliest tree node.

    Args:
        cliques: Maximal cliques of a connected chordal graph
        root: Clique index to use as root; defaults to the largest clique
            (lowest index on ties)

    Returns:
        CliqueTree with separators and residuals populated

    Raises:
        GraphError: If no cliques are given, root is out of range, or the
            cliques do not form a connected clique graph
    """
    cliques = tuple(cliques)
    q = len(cliques)
    if q == 0:
        raise GraphError("no cliques to build a tree from")
    if root is None:
        root = max(range(q), key=lambda k: (len(cliques[k]), -k))
    elif not 0 <= root < q:
        raise GraphError(f"root {root} out of range for {q} cliques")

    sets = [c.as_set() for c in cliques]
    in_tree = [root]
    parent: dict[int, int] = {}
    # best[k] = (weight, tree node) of the heaviest link from k into the tree
    best: dict[int, tuple[int, int]] = {}
    for k in range(q):
        if k != root:
            best[k] = (len(sets[k] & sets[root]), root)

    while best:
        candidate = max(best, key=lambda k: (best[k][0], -k))
        weight, attach = best.pop(candidate)
        if weight == 0:
            raise GraphError("cliques are not connected")
        parent[candidate] = attach
        in_tree.append(candidate)
        for k in best:
            w = len(sets[k] & sets[candidate])
            if w > best[k][0]:
                best[k] = (w, candidate)

    tree = _make_tree(cliques, parent, root)
    logger.debug(f"clique tree over {q} cliques rooted at {root}, height {tree_height(tree)}")
    return tree


def _depths(t: CliqueTree) -> Optional[dict[int, int]]:
    """Depth of every node, or None if the parent map is not a tree rooted at t.root."""
    q = t.size
    if t.root in t.parent or not 0 <= t.root < q:
        return None
    if set(t.parent) != set(range(q)) - {t.root}:
        return None
    depth = {t.root: 0}
    for start in range(q):
        path = []
        node = start
        while node not in depth:
            if node in path or node not in t.parent or not 0 <= t.parent[node] < q:
                return None
            path.append(node)
            node = t.parent[node]
        base = depth[node]
        for offset, visited in enumerate(reversed(path), start=1):
            depth[visited] = base + offset
    return depth


def verify_cip(t: CliqueTree) -> bool:
    """
    Check the clique-intersection property.

    Equivalent per-vertex form: the tree nodes containing any vertex v induce
    a connected subtree, i.e. exactly one of them has a parent without v.
    """
    if _depths(t) is None:
        return False
    sets = [c.as_set() for c in t.cliques]
    for v in t.vertices():
        holders = [k for k in range(t.size) if v in sets[k]]
        tops = [k for k in holders if k == t.root or v not in sets[t.parent[k]]]
        if len(tops) != 1:
            return False
    return True


def tree_height(t: CliqueTree) -> int:
    """Edges on the longest root-to-leaf path."""
    depth = _depths(t)
    if depth is None:
        raise GraphError("parent map is not a tree")
    return max(depth.values())


def pre_order(t: CliqueTree) -> list[int]:
    """Parents before children, children in ascending index."""
    order = []
    stack = [t.root]
    while stack:
        k = stack.pop()
        order.append(k)
        stack.extend(reversed(t.children(k)))
    return order


def post_order(t: CliqueTree) -> list[int]:
    """Children before parents, siblings in ascending index."""
    order = []
    stack = [t.root]
    while stack:
        k = stack.pop()
        order.append(k)
        stack.extend(t.children(k))
    return order[::-1]
