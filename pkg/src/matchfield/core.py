"""Bipartite-graph primitives shared by every other module.

Graphs live on left nodes l1..ln and right nodes r1..rd and are identified
with their edge sets.  Edges are 1-based pairs (j, i) meaning (lj, ri),
encoded internally as bits of an integer mask, so equality, union and
intersection are structural and cheap.  The hard cap n, d <= 64 keeps the
masks honest; enumerative operations impose much smaller practical caps of
their own.

The central relation is *compatibility*: two graphs are incompatible when
one can find a perfect matching inside the first and another one inside the
second, on the same node sets, that are edge-disjoint.  This is decided by
orienting the edges of g1 \\ g2 left-to-right and those of g2 \\ g1
right-to-left and searching for a directed cycle; such a cycle alternates
between the two graphs and its two halves are the conflicting matchings.
Note the criterion ignores edges present in both graphs.  The stronger,
containment-based agreement check used for triangulation axioms lives in
``matchings_agree``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import MatchfieldError, NotASpanningTreeError, SizeCapError

MAX_SIDE = 64


def _check_sides(n: int, d: int) -> None:
    # n = 0 is allowed for the degenerate stacks that complete to n = d fields
    if not (0 <= n <= MAX_SIDE and 1 <= d <= MAX_SIDE):
        raise SizeCapError(f"node counts ({n}, {d}) outside [0, {MAX_SIDE}]")


class BipartiteGraph:
    """Immutable bipartite graph on [n] ⊔ [d], stored as an edge bitmask."""

    __slots__ = ("n", "d", "mask", "_edges")

    def __init__(self, n: int, d: int, edges: Iterable[tuple[int, int]]):
        _check_sides(n, d)
        mask = 0
        for j, i in edges:
            if not (1 <= j <= n and 1 <= i <= d):
                raise MatchfieldError(f"edge ({j}, {i}) out of range for ({n}, {d})")
            mask |= 1 << ((j - 1) * d + (i - 1))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "_edges", None)

    @classmethod
    def from_mask(cls, n: int, d: int, mask: int) -> "BipartiteGraph":
        _check_sides(n, d)
        if mask < 0 or mask >> (n * d):
            raise MatchfieldError(f"mask has bits outside the {n}x{d} grid")
        g = cls.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "d", d)
        object.__setattr__(g, "mask", mask)
        object.__setattr__(g, "_edges", None)
        return g

    def __setattr__(self, *args):
        raise AttributeError("BipartiteGraph is immutable")

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges in lexicographic order; computed once."""
        cached = self._edges
        if cached is None:
            d = self.d
            cached = tuple(
                (b // d + 1, b % d + 1)
                for b in _bits(self.mask)
            )
            object.__setattr__(self, "_edges", cached)
        return cached

    def __eq__(self, other):
        return (
            isinstance(other, BipartiteGraph)
            and self.n == other.n
            and self.d == other.d
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((self.n, self.d, self.mask))

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, edge):
        j, i = edge
        if not (1 <= j <= self.n and 1 <= i <= self.d):
            return False
        return bool(self.mask >> ((j - 1) * self.d + (i - 1)) & 1)

    def __repr__(self):
        return f"BipartiteGraph({self.n}, {self.d}, {list(self.edges)})"

    def _same_sides(self, other: "BipartiteGraph") -> None:
        if self.n != other.n or self.d != other.d:
            raise MatchfieldError("graphs live on different node sets")

    def union(self, other: "BipartiteGraph") -> "BipartiteGraph":
        self._same_sides(other)
        return BipartiteGraph.from_mask(self.n, self.d, self.mask | other.mask)

    def intersection(self, other: "BipartiteGraph") -> "BipartiteGraph":
        self._same_sides(other)
        return BipartiteGraph.from_mask(self.n, self.d, self.mask & other.mask)

    def difference(self, other: "BipartiteGraph") -> "BipartiteGraph":
        self._same_sides(other)
        return BipartiteGraph.from_mask(self.n, self.d, self.mask & ~other.mask)

    def is_subgraph(self, other: "BipartiteGraph") -> bool:
        self._same_sides(other)
        return self.mask & ~other.mask == 0

    def without_edges(self, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        drop = BipartiteGraph(self.n, self.d, edges)
        return self.difference(drop)

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        add = BipartiteGraph(self.n, self.d, edges)
        return self.union(add)

    def left_degrees(self) -> tuple[int, ...]:
        row = (1 << self.d) - 1
        return tuple(
            (self.mask >> ((j - 1) * self.d) & row).bit_count() for j in range(1, self.n + 1)
        )

    def right_degrees(self) -> tuple[int, ...]:
        degs = [0] * self.d
        for _, i in self.edges:
            degs[i - 1] += 1
        return tuple(degs)

    def left_neighbors(self, j: int) -> tuple[int, ...]:
        row = self.mask >> ((j - 1) * self.d) & ((1 << self.d) - 1)
        return tuple(b + 1 for b in _bits(row))

    def right_neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, i2 in self.edges if i2 == i)

    def left_support(self) -> tuple[int, ...]:
        return tuple(j for j, deg in enumerate(self.left_degrees(), start=1) if deg)

    def right_support(self) -> tuple[int, ...]:
        return tuple(i for i, deg in enumerate(self.right_degrees(), start=1) if deg)

    def restrict(self, left: Iterable[int], right: Iterable[int]) -> "BipartiteGraph":
        """Induced subgraph on left ⊔ right, kept on the same ambient node set."""
        ls, rs = set(left), set(right)
        return BipartiteGraph(
            self.n, self.d, [e for e in self.edges if e[0] in ls and e[1] in rs]
        )

    def relabel_left(self, new_n: int, label_map: dict[int, int]) -> "BipartiteGraph":
        return BipartiteGraph(new_n, self.d, [(label_map[j], i) for j, i in self.edges])


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# degree vectors and classification


def degree_vectors(g: BipartiteGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Left and right degree vectors; both sum to the edge count."""
    return g.left_degrees(), g.right_degrees()


@dataclass(frozen=True)
class GraphClass:
    kind: str  # one of: matching, tope, spanning-tree, forest, other
    type_vector: Optional[tuple[int, ...]] = None


def _adjacency(g: BipartiteGraph) -> dict[tuple[str, int], list[tuple[str, int]]]:
    adj: dict[tuple[str, int], list[tuple[str, int]]] = {}
    for j in range(1, g.n + 1):
        adj[("L", j)] = []
    for i in range(1, g.d + 1):
        adj[("R", i)] = []
    for j, i in g.edges:
        adj[("L", j)].append(("R", i))
        adj[("R", i)].append(("L", j))
    return adj


def find_cycle(g: BipartiteGraph) -> Optional[list[tuple[int, int]]]:
    """Some cycle of g as an edge list, or None if g is a forest.

    Edges are added in lexicographic order to a union-find forest; the first
    edge closing a cycle determines it, so the result is deterministic.
    """
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj: dict = {}
    for j, i in g.edges:
        a, b = ("L", j), ("R", i)
        for node in (a, b):
            parent.setdefault(node, node)
            adj.setdefault(node, [])
        ra, rb = find(a), find(b)
        if ra == rb:
            path = _forest_path(adj, a, b)
            edges = []
            for u, v in zip(path, path[1:]):
                l, r = (u, v) if u[0] == "L" else (v, u)
                edges.append((l[1], r[1]))
            edges.append((j, i))
            return edges
        parent[ra] = rb
        adj[a].append(b)
        adj[b].append(a)
    return None


def _forest_path(adj, start, goal):
    prev = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for nb in adj[node]:
                if nb in prev:
                    continue
                prev[nb] = node
                if nb == goal:
                    path = [nb]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return path[::-1]
                nxt.append(nb)
        frontier = nxt
    raise MatchfieldError("no path in forest")  # unreachable for joined components


def is_forest(g: BipartiteGraph) -> bool:
    return find_cycle(g) is None


def connected_components(g: BipartiteGraph) -> list[set]:
    adj = _adjacency(g)
    seen: set = set()
    comps = []
    for root in adj:
        if root in seen:
            continue
        comp = set()
        stack = [root]
        while stack:
            node = stack.pop()
            if node in comp:
                continue
            comp.add(node)
            stack.extend(adj[node])
        seen |= comp
        comps.append(comp)
    return comps


def is_spanning_tree(g: BipartiteGraph) -> bool:
    """Connected and acyclic on all n + d nodes."""
    if len(g) != g.n + g.d - 1:
        return False
    return is_forest(g) and len(connected_components(g)) == 1


def classify(g: BipartiteGraph) -> GraphClass:
    """Classify with priority matching > tope > spanning tree > forest > other."""
    left, right = degree_vectors(g)
    if all(deg >= 1 for deg in right) and all(deg <= 1 for deg in left):
        if all(deg == 1 for deg in right):
            return GraphClass("matching", right)
        return GraphClass("tope", right)
    if is_spanning_tree(g):
        return GraphClass("spanning-tree")
    if is_forest(g):
        return GraphClass("forest")
    return GraphClass("other")


def is_matching(g: BipartiteGraph) -> bool:
    return all(deg <= 1 for deg in g.left_degrees()) and all(
        deg <= 1 for deg in g.right_degrees()
    )


def is_tope(g: BipartiteGraph, allow_isolated_right: bool = False) -> bool:
    left, right = degree_vectors(g)
    if not all(deg <= 1 for deg in left):
        return False
    return allow_isolated_right or all(deg >= 1 for deg in right)


# ---------------------------------------------------------------------------
# compatibility


@dataclass(frozen=True)
class CompatibilityWitness:
    """Two edge-disjoint perfect matchings on the same node sets J ⊔ I."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    first: BipartiteGraph
    second: BipartiteGraph


def is_compatible(
    g1: BipartiteGraph, g2: BipartiteGraph
) -> tuple[bool, Optional[CompatibilityWitness]]:
    """Alternating-cycle compatibility test.

    Orient g1 \\ g2 from left to right and g2 \\ g1 from right to left; the
    graphs are incompatible exactly when this digraph has a cycle.  The cycle
    is reported as a witness: its g1 half and g2 half are edge-disjoint
    perfect matchings on the cycle's node sets.  The search is deterministic:
    arcs are scanned in lexicographic order and the first cycle found through
    the smallest starting edge is returned.
    """
    g1._same_sides(g2)
    only1 = g1.difference(g2)
    only2 = g2.difference(g1)
    # arcs: left node -> right nodes (from g1), right node -> left nodes (from g2)
    fwd: dict[int, list[int]] = {}
    bwd: dict[int, list[int]] = {}
    for j, i in only1.edges:
        fwd.setdefault(j, []).append(i)
    for j, i in only2.edges:
        bwd.setdefault(i, []).append(j)
    for j in sorted(fwd):
        for i in fwd[j]:
            cycle = _directed_cycle_through(j, i, fwd, bwd)
            if cycle is not None:
                m1 = [(a, b) for a, b in cycle if (a, b) in only1]
                m2 = [(a, b) for a, b in cycle if (a, b) in only2]
                left = tuple(sorted({a for a, _ in cycle}))
                right = tuple(sorted({b for _, b in cycle}))
                witness = CompatibilityWitness(
                    left,
                    right,
                    BipartiteGraph(g1.n, g1.d, m1),
                    BipartiteGraph(g1.n, g1.d, m2),
                )
                return False, witness
    return True, None


def _directed_cycle_through(j0, i0, fwd, bwd):
    """Shortest directed cycle using arc lj0 -> ri0, via BFS back to lj0."""
    # BFS over alternating arcs starting at ri0, looking for lj0
    prev: dict = {("R", i0): None}
    frontier = [("R", i0)]
    while frontier:
        nxt_frontier = []
        for node in frontier:
            side, idx = node
            targets = (
                [("L", j) for j in sorted(bwd.get(idx, []))]
                if side == "R"
                else [("R", i) for i in sorted(fwd.get(idx, []))]
            )
            for tgt in targets:
                if tgt == ("L", j0):
                    edges = [(j0, i0), (j0, node[1])]
                    cur = node
                    while cur is not None:
                        par = prev[cur]
                        if par is None:
                            break
                        a, b = (par, cur) if par[0] == "L" else (cur, par)
                        edges.append((a[1], b[1]))
                        cur = par
                    return edges
                if tgt not in prev:
                    prev[tgt] = node
                    nxt_frontier.append(tgt)
        frontier = nxt_frontier
    return None


def contained_matchings(g: BipartiteGraph) -> dict[tuple, BipartiteGraph]:
    """All nonempty matchings inside g, keyed by (left support, right support).

    A forest contains at most one matching per support pair; for a graph with
    several, an arbitrary conflict is kept so callers must treat the map as
    advisory (matchings_agree handles conflicts exactly).
    """
    out: dict[tuple, BipartiteGraph] = {}
    for m in _enumerate_matchings(g.edges, 0, [], g.n, g.d):
        key = (tuple(sorted(j for j, _ in m)), tuple(sorted(i for _, i in m)))
        out[key] = BipartiteGraph(g.n, g.d, m)
    return out


def _enumerate_matchings(edges, start, current, n, d):
    if current:
        yield tuple(current)
    used_l = {j for j, _ in current}
    used_r = {i for _, i in current}
    for idx in range(start, len(edges)):
        j, i = edges[idx]
        if j in used_l or i in used_r:
            continue
        current.append((j, i))
        yield from _enumerate_matchings(edges, idx + 1, current, n, d)
        current.pop()


def matchings_agree(
    g1: BipartiteGraph, g2: BipartiteGraph
) -> tuple[bool, Optional[CompatibilityWitness]]:
    """Containment-based agreement: whenever both graphs contain perfect
    matchings on the same J ⊔ I, those matchings coincide.

    Stronger than is_compatible for trees: a shared edge may lie on an
    alternating cycle, which the symmetric-difference orientation cannot see.
    """
    g1._same_sides(g2)
    first = contained_matchings(g1)
    for key, m2 in contained_matchings(g2).items():
        m1 = first.get(key)
        if m1 is not None and m1 != m2:
            return False, CompatibilityWitness(key[0], key[1], m1, m2)
    return True, None


# ---------------------------------------------------------------------------
# topes inside trees


def contained_tope(tree: BipartiteGraph, k: int) -> BipartiteGraph:
    """The unique tope with right degree vector v - 1_{[d] minus k} inside a tree.

    The tree must cover every right node and be a tree on its support
    (isolated left nodes are ignored, so linkage covectors on a subset of L
    qualify).  Rooting the tree at rk, the last edge of the path from rk to
    every other right node is removed; that edge is the one joining the other
    right node to its parent.
    """
    if not (1 <= k <= tree.d):
        raise MatchfieldError(f"right index {k} out of range")
    right = tree.right_degrees()
    if any(deg == 0 for deg in right):
        raise NotASpanningTreeError("tree must cover every right node")
    support = set(tree.left_support())
    nodes = len(support) + tree.d
    if len(tree) != nodes - 1 or not is_forest(tree):
        raise NotASpanningTreeError("input is not a tree on its support")
    # BFS from rk; drop the parent edge of every other right node
    adj = _adjacency(tree)
    parent: dict = {("R", k): None}
    frontier = [("R", k)]
    drop = []
    while frontier:
        nxt = []
        for node in frontier:
            for nb in adj[node]:
                if nb in parent:
                    continue
                parent[nb] = node
                if nb[0] == "R":
                    drop.append((node[1], nb[1]))
                nxt.append(nb)
        frontier = nxt
    if len(parent) != nodes:
        raise NotASpanningTreeError("tree is disconnected")
    return tree.without_edges(drop)


# ---------------------------------------------------------------------------
# subsets and lattice points


def subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """k-subsets of [n] in colexicographic order."""
    if not (0 <= k <= n <= MAX_SIDE):
        raise SizeCapError(f"subsets({n}, {k}) out of range")
    if k == 0:
        yield ()
        return
    for top in range(k, n + 1):
        for rest in subsets(top - 1, k - 1):
            yield rest + (top,)


def simplex_lattice_points(m: int, dim: int) -> list[tuple[int, ...]]:
    """Lattice points of the dilated simplex m * Delta_{dim-1}: nonnegative
    integer vectors of length dim with coordinate sum m, in lexicographic
    order."""
    if dim < 1 or m < 0:
        raise MatchfieldError(f"invalid lattice point parameters ({m}, {dim})")
    if dim == 1:
        return [(m,)]
    out = []
    for first in range(m + 1):
        out.extend((first,) + rest for rest in simplex_lattice_points(m - first, dim - 1))
    return out


def vector_sum(a: Iterable[int], b: Iterable[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def unit_vector(dim: int, i: int) -> tuple[int, ...]:
    return tuple(1 if t == i else 0 for t in range(1, dim + 1))


def all_ones(dim: int) -> tuple[int, ...]:
    return (1,) * dim


# ---------------------------------------------------------------------------
# serialization


def graph_to_json_dict(g: BipartiteGraph) -> dict:
    return {"n": g.n, "d": g.d, "edges": [list(e) for e in g.edges]}


def graph_from_json_dict(data: dict) -> BipartiteGraph:
    return BipartiteGraph(data["n"], data["d"], [tuple(e) for e in data["edges"]])


def canonical_json(data) -> str:
    """Canonical JSON: sorted keys, no floats, newline-terminated."""
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def graph_to_dot(g: BipartiteGraph, name: str = "G") -> str:
    """DOT export: left nodes as boxes L1..Ln, right nodes as circles R1..Rd."""
    lines = [f"graph {name} {{"]
    for j in range(1, g.n + 1):
        lines.append(f'  L{j} [shape=box, label="{j}"];')
    for i in range(1, g.d + 1):
        lines.append(f'  R{i} [shape=circle, label="{i}"];')
    for j, i in g.edges:
        lines.append(f"  L{j} -- R{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_subset_key(key: str) -> tuple[int, ...]:
    return tuple(int(part) for part in key.split(","))


def subset_key(subset: Iterable[int]) -> str:
    return ",".join(str(x) for x in subset)


def binomial(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def all_spanning_trees(n: int, d: int) -> list[BipartiteGraph]:
    """All spanning trees of the complete bipartite graph K_{n,d}.

    Desk scale only: iterates over all (n + d - 1)-subsets of the n*d edges.
    """
    if n * d > 24:
        raise SizeCapError(f"all_spanning_trees({n}, {d}) beyond desk scale")
    every = [(j, i) for j in range(1, n + 1) for i in range(1, d + 1)]
    out = []
    for chosen in combinations(every, n + d - 1):
        g = BipartiteGraph(n, d, chosen)
        if is_spanning_tree(g):
            out.append(g)
    return out
