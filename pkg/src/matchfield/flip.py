"""Flip graph of a matching field and its prodsimplicial cells.

Vertices are the matchings (identified by their d-subsets); two are adjacent
when they differ in exactly one edge, necessarily at the same right node,
which labels the edge.  For a linkage field the flip graph has
binom(n, d+1) * d edges and decomposes edge-exactly into the linkage trees,
one per (d+1)-subset of left nodes.

The matchings contained in a maximal tope with right degree vector v induce a
subgraph isomorphic to the vertex-edge graph of the product of simplices
Delta_{v1-1} x ... x Delta_{vd-1}: a matching corresponds to its tuple of
neighbour choices, and flips change exactly one coordinate.  These product
skeleta are the maximal cells of the prodsimplicial flag complex of the flip
graph, in bijection with the lattice points of (n-d)*Delta_{d-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from . import core, fields
from .core import BipartiteGraph
from .errors import MatchfieldError, NotAProductSkeletonError, NotLinkageError


@dataclass(frozen=True)
class FlipGraph:
    n: int
    d: int
    vertices: tuple  # d-subsets, sorted
    edges: frozenset  # (sigma1, sigma2, label) with sigma1 < sigma2

    def degree(self, sigma) -> int:
        sigma = tuple(sorted(sigma))
        return sum(1 for a, b, _ in self.edges if sigma in (a, b))

    def neighbors(self, sigma):
        sigma = tuple(sorted(sigma))
        out = []
        for a, b, label in self.edges:
            if a == sigma:
                out.append((b, label))
            elif b == sigma:
                out.append((a, label))
        return sorted(out)


def _flip_label(m1: BipartiteGraph, m2: BipartiteGraph):
    """Deviating right node if the matchings differ in exactly one edge."""
    diff1 = m1.difference(m2)
    diff2 = m2.difference(m1)
    if len(diff1) == 1 and len(diff2) == 1:
        ((_, i1),) = diff1.edges
        ((_, i2),) = diff2.edges
        if i1 == i2:
            return i1
    return None


def flip_graph(field: fields.MatchingField) -> FlipGraph:
    vertices = tuple(core.subsets(field.n, field.d))
    edges = set()
    for s1, s2 in combinations(vertices, 2):
        label = _flip_label(field.matching(s1), field.matching(s2))
        if label is not None:
            a, b = sorted((s1, s2))
            edges.add((a, b, label))
    return FlipGraph(field.n, field.d, vertices, frozenset(edges))


def expected_edge_count(n: int, d: int) -> int:
    return core.binomial(n, d + 1) * d


def edge_count_check(field: fields.MatchingField) -> bool:
    """Edge count of the flip graph equals binom(n, d+1) * d (linkage only)."""
    fields.require_linkage(field)
    return len(flip_graph(field).edges) == expected_edge_count(field.n, field.d)


@dataclass(frozen=True)
class LinkageTree:
    tau: tuple
    vertices: tuple  # the d-subsets tau minus {l}, keyed by the dropped node
    edges: frozenset  # (sigma1, sigma2, label)


def linkage_tree(field: fields.MatchingField, tau: Iterable[int]) -> LinkageTree:
    """Induced flip subgraph on the d+1 matchings of tau: a tree with d edges
    whose labels reproduce the linkage covector (the two endpoints of an
    i-labelled edge are the matchings exchanging the partner of ri)."""
    tau = tuple(sorted(tau))
    if len(tau) != field.d + 1:
        raise MatchfieldError(f"tau must have size {field.d + 1}")
    res = fields.linkage_covector(field, tau)
    if not res.ok:
        raise NotLinkageError(tau, res.cycle)
    verts = [tuple(x for x in tau if x != drop) for drop in tau]
    edges = set()
    for s1, s2 in combinations(verts, 2):
        label = _flip_label(field.matching(s1), field.matching(s2))
        if label is not None:
            a, b = sorted((s1, s2))
            edges.add((a, b, label))
    if len(edges) != field.d:
        raise MatchfieldError(f"induced subgraph on {tau} is not a linkage tree")
    # labels must mirror the covector: an i-edge joins M_{tau-j} and M_{tau-j'}
    # with (lj, ri) and (lj', ri) both covector edges
    for a, b, i in edges:
        (j,) = set(tau) - set(a)
        (j_p,) = set(tau) - set(b)
        if (j, i) not in res.graph or (j_p, i) not in res.graph:
            raise MatchfieldError(f"edge labels disagree with the covector on {tau}")
    return LinkageTree(tau, tuple(sorted(verts)), frozenset(edges))


def linkage_tree_decomposition(field: fields.MatchingField) -> dict:
    """Every flip edge lies in exactly one linkage tree; returns tau -> tree
    and certifies the exact cover."""
    fg = flip_graph(field)
    cover: dict = {}
    trees = {}
    for tau in core.subsets(field.n, field.d + 1):
        tree = linkage_tree(field, tau)
        trees[tau] = tree
        for edge in tree.edges:
            if edge in cover:
                raise MatchfieldError(f"flip edge {edge} covered twice")
            cover[edge] = tau
    if set(cover) != set(fg.edges):
        raise MatchfieldError("linkage trees do not cover the flip graph exactly")
    return trees


# ---------------------------------------------------------------------------
# prodsimplicial cells


@dataclass(frozen=True)
class ProdsimplicialCell:
    """Product-of-simplices cell given by the tope's neighbour sets."""

    neighbor_sets: tuple  # tuple of sorted tuples N_1..N_d
    vertices: frozenset  # the d-subsets of the contained matchings

    @property
    def factor_dims(self) -> tuple:
        return tuple(len(ns) - 1 for ns in self.neighbor_sets)


def tope_to_cell(field: fields.MatchingField, v: Sequence[int]) -> ProdsimplicialCell:
    """Cell of the maximal tope with right degree vector v: its matchings are
    the transversals of the neighbour sets."""
    tope = fields.maximal_tope(field, v)
    return cell_of_tope(field, tope)


def cell_of_tope(field: fields.MatchingField, tope: BipartiteGraph) -> ProdsimplicialCell:
    neighbor_sets = tuple(tope.right_neighbors(i) for i in range(1, field.d + 1))
    verts = set()
    for choice in fields._product(neighbor_sets):
        sigma = tuple(sorted(choice))
        expected = BipartiteGraph(field.n, field.d, list(zip(choice, range(1, field.d + 1))))
        if field.matching(sigma) != expected:
            raise MatchfieldError(f"tope matching on {sigma} is not in the field")
        verts.add(sigma)
    return ProdsimplicialCell(neighbor_sets, frozenset(verts))


def cell_to_tope(field: fields.MatchingField, vertices: Iterable) -> BipartiteGraph:
    """Union of the matchings of a cell's vertex set, verified to be a product
    skeleton via the neighbour-choice coordinatisation."""
    verts = sorted(tuple(sorted(s)) for s in vertices)
    union = BipartiteGraph.from_mask(field.n, field.d, 0)
    for sigma in verts:
        union = union.union(field.matching(sigma))
    if not core.is_tope(union):
        raise NotAProductSkeletonError("union of the matchings is not a tope")
    neighbor_sets = tuple(union.right_neighbors(i) for i in range(1, field.d + 1))
    coords = {}
    for sigma in verts:
        m = field.matching(sigma)
        coord = tuple((m.right_neighbors(i))[0] for i in range(1, field.d + 1))
        coords[sigma] = coord
    expected = {tuple(sorted(c)): c for c in fields._product(neighbor_sets)}
    if sorted(coords) != sorted(expected) or any(
        coords[s] != expected[s] for s in coords
    ):
        raise NotAProductSkeletonError("vertex set is not a full product of simplices")
    # flips must change exactly one coordinate
    for s1, s2 in combinations(verts, 2):
        label = _flip_label(field.matching(s1), field.matching(s2))
        differ = sum(1 for a, b in zip(coords[s1], coords[s2]) if a != b)
        if (label is not None) != (differ == 1):
            raise NotAProductSkeletonError("flip structure disagrees with coordinates")
    return union


def maximal_cells(field: fields.MatchingField) -> dict:
    """One cell per lattice point of (n-d)*Delta_{d-1}; vertex sets certified
    inclusion-maximal among each other."""
    ta = fields.tope_arrangement(field)
    cells = {
        point: cell_of_tope(field, tope) for point, tope in ta.items()
    }
    items = sorted(cells.items())
    for (p1, c1), (p2, c2) in combinations(items, 2):
        if c1.vertices < c2.vertices or c2.vertices < c1.vertices:
            raise MatchfieldError(f"cells at {p1} and {p2} are nested")
    return cells


def matching_word(m: BipartiteGraph) -> str:
    """Word encoding of a matching: position i holds the partner of ri."""
    return "".join(str(m.right_neighbors(i)[0]) for i in range(1, m.d + 1))


def flip_graph_to_dot(field: fields.MatchingField, color: bool = True) -> str:
    """DOT export with edge labels; with color, each linkage tree gets one of
    a cycling palette."""
    fg = flip_graph(field)
    palette = ["red", "blue", "green", "orange", "magenta", "cyan", "brown", "black"]
    tree_of_edge = {}
    if color:
        for idx, tau in enumerate(core.subsets(field.n, field.d + 1)):
            tree = linkage_tree(field, tau)
            for edge in tree.edges:
                tree_of_edge[edge] = palette[idx % len(palette)]
    lines = ["graph flips {"]

    def vertex_name(sigma):
        if field.n <= 9:
            return matching_word(field.matching(sigma))
        return "s" + "_".join(map(str, sigma))

    for sigma in fg.vertices:
        lines.append(f'  "{vertex_name(sigma)}";')
    for a, b, label in sorted(fg.edges):
        attrs = [f'label="{label}"']
        if color and (a, b, label) in tree_of_edge:
            attrs.append(f"color={tree_of_edge[(a, b, label)]}")
        lines.append(
            f'  "{vertex_name(a)}" -- "{vertex_name(b)}" [{", ".join(attrs)}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
