"""Triangulations of a product of two simplices as sets of spanning trees.

A triangulation of Delta_{n-1} x Delta_{d-1} is encoded by its set of
K = binom(n+d-2, n-1) full-dimensional cells, spanning trees on the bipartite
node set, characterised by three axioms: every tree spans, removing a
non-leaf edge of one tree leaves a forest contained in another tree, and any
two trees containing perfect matchings on the same node sets agree there.
The last axiom is checked by containment (not the symmetric-difference cycle
criterion): a shared edge can sit on an alternating cycle that the
orientation test cannot see.

The degree-pair map sends each tree to its left and right degree vectors,
normalised by subtracting the all-ones vectors.  The pair set determines the
triangulation; reconstruction works by recursion on n + d, mirroring the
covector reconstruction: pick a left node j that is a leaf of some trees,
split those trees into combinatorial sectors per right node by a level sweep
over the right degree of that node, delete the leaf edge, recurse on the
deletion (a triangulation of a facet) and re-attach.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Optional, Sequence

from . import core, fields
from .core import BipartiteGraph
from .errors import (
    InconsistentPairsError,
    MatchfieldError,
    SizeCapError,
)


def tree_count(n: int, d: int) -> int:
    """Number of full-dimensional cells in any triangulation."""
    return comb(n + d - 2, n - 1)


@dataclass(frozen=True)
class TriangulationReport:
    ok: bool
    kind: Optional[str] = None  # count, spanning, flip, agreement
    witness: Optional[tuple] = None


class Triangulation:
    """Validated set of spanning trees encoding the maximal cells."""

    def __init__(self, n: int, d: int, trees: Iterable[BipartiteGraph]):
        self.n = n
        self.d = d
        self.trees = frozenset(trees)

    def sorted_trees(self) -> list[BipartiteGraph]:
        return sorted(self.trees, key=lambda g: g.mask)

    def __eq__(self, other):
        return (
            isinstance(other, Triangulation)
            and (self.n, self.d) == (other.n, other.d)
            and self.trees == other.trees
        )

    def __hash__(self):
        return hash((self.n, self.d, self.trees))

    def __repr__(self):
        return f"<Triangulation ({self.n},{self.d}) with {len(self.trees)} trees>"


def find_agreement_violation(trees: Sequence[BipartiteGraph]):
    """Pair of trees containing different matchings on the same node sets."""
    maps = [core.contained_matchings(g) for g in trees]
    for (g, mg), (h, mh) in combinations(zip(trees, maps), 2):
        for key, m1 in mg.items():
            m2 = mh.get(key)
            if m2 is not None and m1 != m2:
                return (g, h, key[0], key[1])
    return None


def find_flip_violation(trees: Sequence[BipartiteGraph]):
    """Tree and non-leaf edge whose removal is contained in no other tree."""
    for g in trees:
        left, right = core.degree_vectors(g)
        for j, i in g.edges:
            if left[j - 1] == 1 or right[i - 1] == 1:
                continue
            reduced = g.without_edges([(j, i)])
            if not any(h != g and reduced.is_subgraph(h) for h in trees):
                return (g, (j, i))
    return None


def check_triangulation(
    trees: Iterable[BipartiteGraph], n: int, d: int
) -> TriangulationReport:
    """Evaluate the three tree axioms plus the cell count; the first failing
    check (count, spanning, agreement, flip) is reported with a witness."""
    trees = sorted(set(trees), key=lambda g: g.mask)
    if len(trees) != tree_count(n, d):
        return TriangulationReport(False, "count", (len(trees), tree_count(n, d)))
    for g in trees:
        if g.n != n or g.d != d or not core.is_spanning_tree(g):
            return TriangulationReport(False, "spanning", (g,))
    witness = find_agreement_violation(trees)
    if witness is not None:
        return TriangulationReport(False, "agreement", witness)
    witness = find_flip_violation(trees)
    if witness is not None:
        return TriangulationReport(False, "flip", witness)
    return TriangulationReport(True)


def validate_triangulation(
    trees: Iterable[BipartiteGraph], n: int, d: int
) -> Triangulation:
    report = check_triangulation(trees, n, d)
    if not report.ok:
        raise MatchfieldError(f"not a triangulation: {report.kind} {report.witness}")
    return Triangulation(n, d, trees)


# ---------------------------------------------------------------------------
# extraction


def extract_field_from_trees(
    trees: Iterable[BipartiteGraph], n: int, d: int
) -> fields.MatchingField:
    """Collect the size-d matchings occurring in the trees.

    Works for partial tree sets as long as every d-subset is covered and the
    trees agree; the extraction of a full triangulation always qualifies.
    """
    assignment: dict = {}
    for g in trees:
        for key, m in core.contained_matchings(g).items():
            sigma, right = key
            if len(right) != d:
                continue
            old = assignment.get(sigma)
            if old is not None and old != m:
                raise MatchfieldError(f"trees disagree on the matching of {sigma}")
            assignment[sigma] = m
    return fields.validate_matching_field(n, d, assignment)


def extract_field(t: Triangulation) -> fields.MatchingField:
    """The matching field of a triangulation; always linkage.

    Needs n >= d; transpose the triangulation for the other orientation.
    """
    if t.n < t.d:
        raise MatchfieldError("extraction needs n >= d; transpose first")
    field = extract_field_from_trees(t.sorted_trees(), t.n, t.d)
    fields.require_linkage(field)
    return field


# ---------------------------------------------------------------------------
# the degree-pair map


def tree_degree_pair(g: BipartiteGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Normalised (left, right) degree pair of a spanning tree."""
    left, right = core.degree_vectors(g)
    return (
        tuple(x - 1 for x in left),
        tuple(x - 1 for x in right),
    )


def phi(t: Triangulation) -> frozenset:
    """Degree pairs of all trees; both projections biject onto their lattice
    point sets."""
    pairs = frozenset(tree_degree_pair(g) for g in t.trees)
    if len(pairs) != len(t.trees):
        raise MatchfieldError("degree pairs are not distinct")
    lefts = sorted(u for u, _ in pairs)
    rights = sorted(v for _, v in pairs)
    if lefts != core.simplex_lattice_points(t.d - 1, t.n):
        raise MatchfieldError("left projection is not a bijection")
    if rights != core.simplex_lattice_points(t.n - 1, t.d):
        raise MatchfieldError("right projection is not a bijection")
    return pairs


# ---------------------------------------------------------------------------
# reconstruction from degree pairs


def reconstruct_triangulation(pairs: Iterable, n: int, d: int) -> Triangulation:
    """Rebuild the unique triangulation with the given normalised degree
    pairs.  Raises InconsistentPairsError if none exists (detection is
    best-effort for inputs not arising from a triangulation)."""
    pairs = frozenset((tuple(u), tuple(v)) for u, v in pairs)
    _check_pair_shape(pairs, n, d)
    memo: dict = {}
    trees = _reconstruct(pairs, tuple(range(1, n + 1)), tuple(range(1, d + 1)), memo)
    out = [BipartiteGraph(n, d, edges) for edges in trees]
    t = Triangulation(n, d, out)
    if frozenset(tree_degree_pair(g) for g in t.trees) != pairs:
        raise InconsistentPairsError("reconstruction does not reproduce the pairs")
    # certificate: the rebuilt trees must satisfy the axioms themselves
    report = check_triangulation(out, n, d)
    if not report.ok:
        raise InconsistentPairsError(
            f"rebuilt trees violate the {report.kind} axiom"
        )
    return t


def _check_pair_shape(pairs, n, d):
    lefts = sorted(u for u, _ in pairs)
    rights = sorted(v for _, v in pairs)
    if lefts != core.simplex_lattice_points(d - 1, n) or rights != core.simplex_lattice_points(
        n - 1, d
    ):
        raise InconsistentPairsError("projections are not bijections onto lattice points")


def _reconstruct(pairs, left_labels, right_labels, memo):
    """pairs: normalised degree pairs over the given label tuples.

    Returns a set of edge tuples in original labels.
    """
    key = (left_labels, right_labels, pairs)
    if key in memo:
        return memo[key]
    n, d = len(left_labels), len(right_labels)
    if n == 1:
        (pair,) = pairs
        edges = frozenset({tuple((left_labels[0], i) for i in right_labels)})
        memo[key] = edges
        return edges
    if d == 1:
        edges = frozenset({tuple((j, right_labels[0]) for j in left_labels)})
        memo[key] = edges
        return edges
    if n < d:
        flipped = frozenset((v, u) for u, v in pairs)
        sub = _reconstruct(flipped, right_labels, left_labels, memo)
        trees = frozenset(tuple(sorted((j, i) for i, j in t)) for t in sub)
        memo[key] = trees
        return trees

    by_rdv = {v: (u, v) for u, v in pairs}
    if len(by_rdv) != len(pairs):
        raise InconsistentPairsError("right projection is not injective")
    trees: dict = {}
    for pos, j in enumerate(left_labels):
        member_rdvs = {v for u, v in pairs if u[pos] == 0}
        if not member_rdvs:
            raise InconsistentPairsError(f"no tree has {j} as a leaf")
        assigned: dict = {}
        for ipos, i in enumerate(right_labels):
            admitted = _tree_sector_sweep(by_rdv, member_rdvs, ipos, n, d)
            for rdv in admitted:
                if rdv in assigned:
                    raise InconsistentPairsError(
                        f"rdv {rdv} admitted to two sectors of {j}"
                    )
                assigned[rdv] = (ipos, i)
        if set(assigned) != member_rdvs:
            raise InconsistentPairsError(f"sectors do not cover all pairs through {j}")
        sub_left = tuple(x for x in left_labels if x != j)
        sub_pairs = {}
        for rdv, (ipos, i) in assigned.items():
            u, v = by_rdv[rdv]
            sub_u = tuple(x for t, x in enumerate(u) if t != pos)
            sub_v = tuple(x - (1 if t == ipos else 0) for t, x in enumerate(v))
            if any(x < 0 for x in sub_v):
                raise InconsistentPairsError("deletion leaves a negative degree")
            sub_pairs[(sub_u, sub_v)] = (rdv, i)
        if len(sub_pairs) != len(assigned):
            raise InconsistentPairsError("deletion pairs collide")
        sub_trees = _reconstruct(
            frozenset(sub_pairs), sub_left, right_labels, memo
        )
        sub_by_pair = {}
        for t in sub_trees:
            g = BipartiteGraph(max(left_labels), max(right_labels), t)
            lu = tuple(g.left_degrees()[x - 1] - 1 for x in sub_left)
            rv = tuple(g.right_degrees()[x - 1] - 1 for x in right_labels)
            sub_by_pair[(lu, rv)] = t
        for (sub_u, sub_v), (rdv, i) in sub_pairs.items():
            base = sub_by_pair.get((sub_u, sub_v))
            if base is None:
                raise InconsistentPairsError("recursion lost a deletion pair")
            tree = tuple(sorted(base + ((j, i),)))
            pair = by_rdv[rdv]
            old = trees.get(pair)
            if old is not None and old != tree:
                raise InconsistentPairsError(f"branches disagree on the tree at {pair}")
            trees[pair] = tree
    if len(trees) != len(pairs):
        raise InconsistentPairsError("not every tree was reconstructed")
    result = frozenset(trees.values())
    memo[key] = result
    return result


def _tree_sector_sweep(by_rdv, member_rdvs, ipos, n, d):
    """Level sweep for trees: normalised rdvs, pivot coordinate ipos.

    Seed is the point (n-1) * e_ipos; a member at level h joins when an
    admitted pair sits at v + e_ipos - e_k (with v_k >= 1, i.e. unnormalised
    degree > 1)."""
    seed = tuple((n - 1) if t == ipos else 0 for t in range(d))
    if seed not in by_rdv:
        raise InconsistentPairsError(f"no tree with extreme rdv {seed}")
    if seed not in member_rdvs:
        return set()
    admitted = {seed}
    by_level: dict[int, list] = {}
    for rdv in member_rdvs:
        by_level.setdefault(rdv[ipos], []).append(rdv)
    for h in range(n - 2, -1, -1):
        for rdv in sorted(by_level.get(h, [])):
            for k in range(d):
                if k == ipos or rdv[k] == 0:
                    continue
                up = list(rdv)
                up[ipos] += 1
                up[k] -= 1
                if tuple(up) in admitted:
                    admitted.add(rdv)
                    break
    return admitted


# ---------------------------------------------------------------------------
# necessary conditions on pair sets


def _adjacent_pairs(p, q):
    """Both components differ by +1/-1 in exactly two coordinates."""

    def one_swap(a, b):
        diffs = [x - y for x, y in zip(a, b)]
        return sorted(x for x in diffs if x) == [-1, 1]

    return one_swap(p[0], q[0]) and one_swap(p[1], q[1])


@dataclass(frozen=True)
class NecessaryConditionsReport:
    projections_ok: bool
    adjacency_ok: bool
    deletion_ok: Optional[bool]  # None when an earlier condition already failed
    witness: Optional[tuple] = None

    @property
    def ok(self):
        return bool(self.projections_ok and self.adjacency_ok and self.deletion_ok)


def necessary_conditions(pairs: Iterable, n: int, d: int, check_deletions: bool = True):
    """Screen a pair set against conditions every triangulation image meets:
    bijective projections, enough adjacent pairs (at least n+d-1-l(p) where
    l(p) counts unnormalised entries equal to 1), and existence of a deletion
    satisfying the first two conditions (searched exhaustively)."""
    pairs = frozenset((tuple(u), tuple(v)) for u, v in pairs)
    try:
        _check_pair_shape(pairs, n, d)
    except InconsistentPairsError as exc:
        return NecessaryConditionsReport(False, None, None, (str(exc),))

    plist = sorted(pairs)
    for p in plist:
        l_p = sum(1 for x in p[0] if x == 0) + sum(1 for x in p[1] if x == 0)
        needed = n + d - 1 - l_p
        have = sum(1 for q in plist if q != p and _adjacent_pairs(p, q))
        if have < needed:
            return NecessaryConditionsReport(True, False, None, (p, have, needed))

    if not check_deletions:
        return NecessaryConditionsReport(True, True, True)
    for pos in range(n):
        members = [p for p in plist if p[0][pos] == 0]
        if not _deletion_exists(members, pos, None, n, d):
            return NecessaryConditionsReport(True, True, False, ("left", pos + 1))
    for ipos in range(d):
        members = [p for p in plist if p[1][ipos] == 0]
        if not _deletion_exists(members, None, ipos, n, d):
            return NecessaryConditionsReport(True, True, False, ("right", ipos + 1))
    return NecessaryConditionsReport(True, True, True)


def _deletion_exists(members, pos, ipos, n, d):
    """Search a choice of decremented coordinate per member making the
    deletion satisfy the first two conditions."""
    if pos is not None:
        n_new, d_new = n - 1, d
    else:
        n_new, d_new = n, d - 1

    def candidates(p):
        u, v = p
        if pos is not None:
            base_u = tuple(x for t, x in enumerate(u) if t != pos)
            return [
                ((base_u, tuple(x - (1 if t == k else 0) for t, x in enumerate(v))))
                for k in range(d)
                if v[k] >= 1
            ]
        base_v = tuple(x for t, x in enumerate(v) if t != ipos)
        return [
            ((tuple(x - (1 if t == k else 0) for t, x in enumerate(u)), base_v))
            for k in range(n)
            if u[k] >= 1
        ]

    options = [candidates(p) for p in members]

    def search(idx, chosen):
        if idx == len(options):
            try:
                _check_pair_shape(frozenset(chosen), n_new, d_new)
            except InconsistentPairsError:
                return False
            rep = necessary_conditions(chosen, n_new, d_new, check_deletions=False)
            return rep.projections_ok and rep.adjacency_ok
        for cand in options[idx]:
            if cand in chosen:
                continue
            if search(idx + 1, chosen | {cand}):
                return True
        return False

    return search(0, frozenset())


# ---------------------------------------------------------------------------
# generators


def staircase_triangulation(
    n: int,
    d: int,
    left_order: Optional[Sequence[int]] = None,
    right_order: Optional[Sequence[int]] = None,
) -> Triangulation:
    """Staircase triangulation: one tree per monotone lattice path through the
    n x d grid, with rows and columns taken in the given orders (identity by
    default).  For n = 2 the right order realises the bijection between
    triangulations of Delta_1 x Delta_{d-1} and permutations of [d]."""
    left_order = list(left_order or range(1, n + 1))
    right_order = list(right_order or range(1, d + 1))
    if sorted(left_order) != list(range(1, n + 1)) or sorted(right_order) != list(
        range(1, d + 1)
    ):
        raise MatchfieldError("orders must be permutations")
    trees = []
    for rises in combinations(range(1, n + d - 1), d - 1):
        row, col = 0, 0
        cells = [(left_order[0], right_order[0])]
        for step in range(1, n + d - 1):
            if step in rises:
                col += 1
            else:
                row += 1
            cells.append((left_order[row], right_order[col]))
        trees.append(BipartiteGraph(n, d, cells))
    return Triangulation(n, d, trees)


def count_bound(n: int, d: int) -> int:
    """Upper bound K! on the number of triangulations."""
    return factorial(tree_count(n, d))


def enumerate_triangulations(n: int, d: int) -> list[Triangulation]:
    """Exhaustive enumeration, deterministic order.  Capped at K <= 6.

    Trees are grouped by right degree vector (each class contributes exactly
    one tree, by the agreement axiom and counting); the search extends a
    partial selection class by class, pruning on containment-agreement and
    distinct left degree vectors, and validates each complete candidate.
    """
    K = tree_count(n, d)
    if K > 6:
        raise SizeCapError(f"enumerate_triangulations capped at K <= 6, got K = {K}")
    trees = core.all_spanning_trees(n, d)
    classes: dict[tuple, list[BipartiteGraph]] = {}
    for g in trees:
        classes.setdefault(g.right_degrees(), []).append(g)
    rdvs = sorted(classes)
    if len(rdvs) != K:
        raise MatchfieldError("unexpected degree class count")
    maps = {g: core.contained_matchings(g) for g in trees}

    found: list[Triangulation] = []

    def agree(g, h):
        mg, mh = maps[g], maps[h]
        small, big = (mg, mh) if len(mg) <= len(mh) else (mh, mg)
        for key, m in small.items():
            other = big.get(key)
            if other is not None and other != m:
                return False
        return True

    def extend(idx, chosen, used_ldv):
        if idx == len(rdvs):
            report = check_triangulation(chosen, n, d)
            if report.ok:
                found.append(Triangulation(n, d, chosen))
            return
        for g in sorted(classes[rdvs[idx]], key=lambda x: x.mask):
            ldv = g.left_degrees()
            if ldv in used_ldv:
                continue
            if all(agree(g, h) for h in chosen):
                extend(idx + 1, chosen + [g], used_ldv | {ldv})

    extend(0, [], frozenset())
    found.sort(key=lambda t: sorted(g.mask for g in t.trees))
    return found


# ---------------------------------------------------------------------------
# extended arrangements from triangulations


def extended_tope_arrangement(t: Triangulation) -> fields.ExtendedTopeArrangement:
    """The cells of a triangulation with all left degrees 1, one per right
    degree vector in n*Delta_{d-1}; boundary cells have isolated right nodes."""
    graphs: dict = {}
    for g in t.sorted_trees():
        for choice in fields._product([g.left_neighbors(j) for j in range(1, t.n + 1)]):
            cell = BipartiteGraph(t.n, t.d, list(zip(range(1, t.n + 1), choice)))
            rdv = cell.right_degrees()
            old = graphs.get(rdv)
            if old is not None and old != cell:
                raise MatchfieldError(f"two cells share the right degree vector {rdv}")
            graphs[rdv] = cell
    return fields.ExtendedTopeArrangement(t.n, t.d, graphs)


# ---------------------------------------------------------------------------
# serialization


def triangulation_to_json_dict(t: Triangulation) -> dict:
    return {
        "n": t.n,
        "d": t.d,
        "trees": [[list(e) for e in g.edges] for g in t.sorted_trees()],
    }


def triangulation_from_json_dict(data: dict) -> Triangulation:
    n, d = data["n"], data["d"]
    trees = [BipartiteGraph(n, d, [tuple(e) for e in tree]) for tree in data["trees"]]
    return validate_triangulation(trees, n, d)


def pairs_to_json_dict(pairs: Iterable, n: int, d: int) -> dict:
    return {
        "n": n,
        "d": d,
        "pairs": sorted([list(u), list(v)] for u, v in pairs),
    }


def pairs_from_json_dict(data: dict) -> frozenset:
    return frozenset((tuple(u), tuple(v)) for u, v in data["pairs"])
