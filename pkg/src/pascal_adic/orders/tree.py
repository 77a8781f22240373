"""Pascal order with a continuum of minimal paths and countably many maximal ones.

A binary tree of 0-labeled edges is grown between the vertex sets
``S_k = {(2j, 4^k - 2j) : 1 <= j <= 2^k}``. Every vertical edge not in the tree
whose horizontal sibling is not in the tree is also labeled 0, axis edges are 0
automatically, and everything else is 1.
"""

from __future__ import annotations

from ..diagram import Diagram, Edge, PascalVertex
from ..errors import ConsistencyError
from .core import OrderAssignment, OrderBuilder

P = PascalVertex


def tree_level_set(k: int) -> list[PascalVertex]:
    """The vertex set ``S_k`` on level ``4^k``."""
    return [P(2 * j, 4**k - 2 * j) for j in range(1, 2**k + 1)]


def _run(a: PascalVertex, b: PascalVertex) -> list[Edge]:
    """Straight horizontal or vertical run of unit edges from a to b."""
    if a.j == b.j:
        return [Edge(P(i, a.j), P(i + 1, a.j)) for i in range(a.i, b.i)]
    if a.i == b.i:
        return [Edge(P(a.i, j), P(a.i, j + 1)) for j in range(a.j, b.j)]
    raise ValueError("runs are axis-parallel")


def tree_stage_edges(k: int) -> list[Edge]:
    """Edges of the stage joining ``S_k`` to ``S_{k+1}`` (stage 0 is the seed)."""
    if k == 0:
        return _run(P(0, 0), P(4, 0)) + _run(P(2, 0), P(2, 2))
    edges = []
    for j in range(1, 2**k + 1):
        top = P(2 * j, 4**k - 2 * j)
        row = 4 ** (k + 1) - 4 * j
        corner = P(2 * j, row)
        fork = P(4 * j - 2, row)
        edges += _run(top, corner)
        edges += _run(corner, fork)
        edges += _run(fork, P(4 * j, row))
        edges += _run(fork, P(4 * j - 2, row + 2))
    return edges


def tree_edges(depth: int) -> set[Edge]:
    """All tree edges whose range lies within ``depth``."""
    out = set()
    k = 0
    while 4**k <= depth:
        out.update(e for e in tree_stage_edges(k) if e.range.level <= depth)
        k += 1
    return out


def countable_max_order(depth: int) -> OrderAssignment:
    """Label tree, Psi-type vertical and axis edges 0 and the rest 1, truncated at depth."""
    if depth < 4:
        raise ValueError("depth must be at least 4 to hold the seed stage")
    d = Diagram.pascal(depth)
    tree = tree_edges(depth)
    b = OrderBuilder(d)
    zeros: dict = {}
    for n in range(1, depth + 1):
        for v in d.level_vertices(n):
            for _, e in d.parents(v):
                lab = _label_rule(e, tree)
                if lab == 0:
                    if v in zeros:
                        raise ConsistencyError(f"fiber of {v} receives two 0 labels")
                    zeros[v] = e
                b.force(e, lab)
    return b.build(name="thm42")


def _label_rule(e: Edge, tree: set) -> int:
    s, r = e.source, e.range
    if s.i == 0 and r.i == 0 or s.j == 0 and r.j == 0:
        return 0
    if e in tree:
        return 0
    if r.i == s.i:  # vertical edge ((i, j), (i, j + 1)) with i >= 1
        sib = Edge(P(r.i - 1, r.j), r)
        if sib not in tree:
            return 0
    return 1


def tree_incoming_counts(depth: int) -> dict:
    """Number of tree edges entering each vertex."""
    counts: dict = {}
    for e in tree_edges(depth):
        counts[e.range] = counts.get(e.range, 0) + 1
    return counts


def tree_is_forest_of_root(depth: int) -> bool:
    """True if the tree edges form a tree containing the origin: connected from
    (0, 0), at most one incoming edge per vertex."""
    edges = tree_edges(depth)
    if any(c > 1 for c in tree_incoming_counts(depth).values()):
        return False
    children: dict = {}
    for e in edges:
        children.setdefault(e.source, []).append(e.range)
    seen = {P(0, 0)}
    stack = [P(0, 0)]
    while stack:
        v = stack.pop()
        for w in children.get(v, []):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    touched = {e.source for e in edges} | {e.range for e in edges}
    return touched <= seen
