"""Matching stacks, ensembles, completion, and transversal matroids.

A matching stack assigns a perfect matching to every pair (J, I) of
equal-sized subsets of the two node sets.  An ensemble additionally
satisfies closure (submatchings are again assigned values) and linkage
(every fixed-I layer is a left-linkage field, every fixed-J layer a
right-linkage field).  Triangulations induce ensembles: collect every
partial matching occurring in the trees.

Completion embeds an (m, d)-stack into an (m+d, d)-matching field by
appending d dummy left nodes; the matching for a d-subset sigma matches
each dummy node l_{m+h} in sigma to its own right node r_h and routes the
remaining right nodes through the stack.  A linkage completion forces every
stack layer to be linkage; the converse holds for stacks whose layers
cohere (closure), since completion covectors mix adjacent layers.

The combinatorial Stiefel map sends a graph to its transversal matroid,
whose bases are the maximum-size left subsets matchable into the right
side; for a tope this is the partition matroid of the neighbour sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import core, fields
from .core import BipartiteGraph
from .errors import MatchfieldError, SizeCapError, TiedMinimumError


class MatchingStack:
    """Map (J, I) -> perfect matching on J ⊔ I, with optional lazy filler.

    Entries are stored sparsely; a filler(J, I) callback may synthesise
    missing entries on demand (used by the weight strategy).
    """

    def __init__(self, n: int, d: int, entries: dict, filler=None):
        self.n = n
        self.d = d
        self.entries = {
            (tuple(sorted(J)), tuple(sorted(I))): g for (J, I), g in entries.items()
        }
        self.filler = filler

    def matching(self, J: Iterable[int], I: Iterable[int]) -> BipartiteGraph:
        key = (tuple(sorted(J)), tuple(sorted(I)))
        if len(key[0]) != len(key[1]):
            raise MatchfieldError("|J| and |I| must agree")
        if key not in self.entries:
            if self.filler is None:
                raise MatchfieldError(f"no matching assigned to {key}")
            self.entries[key] = self.filler(key[0], key[1])
        return self.entries[key]

    def pairs(self):
        for k in range(self.n + 1):
            if k > self.d:
                break
            for J in core.subsets(self.n, k):
                for I in core.subsets(self.d, k):
                    yield (J, I)

    def materialize(self) -> None:
        for J, I in self.pairs():
            self.matching(J, I)

    def __eq__(self, other):
        if not isinstance(other, MatchingStack) or (self.n, self.d) != (other.n, other.d):
            return False
        self.materialize()
        other.materialize()
        return self.entries == other.entries

    def __repr__(self):
        return f"<MatchingStack ({self.n},{self.d})>"


def stack_from_trees(trees: Iterable[BipartiteGraph], n: int, d: int) -> MatchingStack:
    """Ensemble of a triangulation: every partial matching of the trees.

    The trees must cover all (J, I) pairs and agree; both hold for valid
    triangulations.
    """
    entries: dict = {}
    for g in trees:
        for key, m in core.contained_matchings(g).items():
            old = entries.get(key)
            if old is not None and old != m:
                raise MatchfieldError(f"trees disagree on the matching of {key}")
            entries[key] = m
    empty = BipartiteGraph(n, d, [])
    entries[((), ())] = empty
    stack = MatchingStack(n, d, entries)
    missing = [pair for pair in stack.pairs() if pair not in stack.entries]
    if missing:
        raise MatchfieldError(f"trees do not cover the pair {missing[0]}")
    return stack


# ---------------------------------------------------------------------------
# ensemble axioms


@dataclass(frozen=True)
class EnsembleReport:
    support_ok: bool
    closure_ok: bool
    left_linkage_ok: bool
    right_linkage_ok: bool
    witness: Optional[tuple] = None

    @property
    def ok(self):
        return (
            self.support_ok
            and self.closure_ok
            and self.left_linkage_ok
            and self.right_linkage_ok
        )

    def as_dict(self) -> dict:
        return {
            "support": self.support_ok,
            "closure": self.closure_ok,
            "left_linkage": self.left_linkage_ok,
            "right_linkage": self.right_linkage_ok,
            "witness": repr(self.witness) if self.witness else None,
        }


def _layer_field(stack: MatchingStack, I: tuple) -> fields.MatchingField:
    """Fixed-I layer as a matching field on L ⊔ I (right nodes relabelled)."""
    k = len(I)
    relabel = {i: t for t, i in enumerate(I, start=1)}
    assignment = {}
    for J in core.subsets(stack.n, k):
        m = stack.matching(J, I)
        assignment[J] = BipartiteGraph(
            stack.n, k, [(j, relabel[i]) for j, i in m.edges]
        )
    return fields.MatchingField(stack.n, k, assignment)


def _transpose_layer_field(stack: MatchingStack, J: tuple) -> fields.MatchingField:
    """Fixed-J layer as a matching field on R ⊔ J (sides swapped)."""
    k = len(J)
    relabel = {j: t for t, j in enumerate(J, start=1)}
    assignment = {}
    for I in core.subsets(stack.d, k):
        m = stack.matching(J, I)
        assignment[I] = BipartiteGraph(
            stack.d, k, [(i, relabel[j]) for j, i in m.edges]
        )
    return fields.MatchingField(stack.d, k, assignment)


def stack_left_linkage(stack: MatchingStack) -> tuple[bool, Optional[tuple]]:
    """Left linkage of every fixed-I layer."""
    for k in range(1, min(stack.n, stack.d) + 1):
        if k + 1 > stack.n:
            continue
        for I in core.subsets(stack.d, k):
            report = fields.is_linkage(_layer_field(stack, I))
            if not report.ok:
                return False, (I, report.failures[0].tau)
    return True, None


def stack_right_linkage(stack: MatchingStack) -> tuple[bool, Optional[tuple]]:
    for k in range(1, min(stack.n, stack.d) + 1):
        if k + 1 > stack.d:
            continue
        for J in core.subsets(stack.n, k):
            report = fields.is_linkage(_transpose_layer_field(stack, J))
            if not report.ok:
                return False, (J, report.failures[0].tau)
    return True, None


def validate_ensemble(stack: MatchingStack) -> EnsembleReport:
    """Support, closure and both linkage axioms, with the first witness."""
    support_ok, closure_ok = True, True
    witness = None
    try:
        for J, I in stack.pairs():
            m = stack.matching(J, I)
            if m.left_support() != J or m.right_support() != I or not core.is_matching(m):
                support_ok = False
                witness = ("support", J, I)
                break
    except MatchfieldError:
        support_ok = False
    if support_ok:
        for J, I in stack.pairs():
            m = stack.matching(J, I)
            for r in range(1, len(J)):
                for sub_edges in combinations(m.edges, r):
                    sub = BipartiteGraph(stack.n, stack.d, sub_edges)
                    key = (sub.left_support(), sub.right_support())
                    if stack.matching(*key) != sub:
                        closure_ok = False
                        witness = witness or ("closure", J, I, key)
                        break
                if not closure_ok:
                    break
            if not closure_ok:
                break
    left_ok, lw = stack_left_linkage(stack) if support_ok else (False, None)
    right_ok, rw = stack_right_linkage(stack) if support_ok else (False, None)
    witness = witness or (("left-linkage",) + lw if lw else None) or (
        ("right-linkage",) + rw if rw else None
    )
    return EnsembleReport(support_ok, closure_ok, left_ok, right_ok, witness)


# ---------------------------------------------------------------------------
# completion, extension, extraction


def completion(stack: MatchingStack) -> fields.MatchingField:
    """Matching field of the stack on m + d left nodes: dummy node l_{m+h}
    pairs with r_h whenever it lies in the subset."""
    m, d = stack.n, stack.d
    n = m + d
    assignment = {}
    for sigma in core.subsets(n, d):
        J = tuple(x for x in sigma if x <= m)
        dummy_rights = tuple(x - m for x in sigma if x > m)
        I = tuple(i for i in range(1, d + 1) if i not in dummy_rights)
        base = stack.matching(J, I)
        edges = list(base.edges) + [(m + h, h) for h in dummy_rights]
        assignment[sigma] = BipartiteGraph(n, d, edges)
    return fields.validate_matching_field(n, d, assignment)


def completion_linkage_check(stack: MatchingStack) -> tuple[bool, bool]:
    """Left linkage of the stack and of its completion.

    A linkage completion forces every stack layer to be linkage (deleting
    dummy leaves from a covector tree leaves a tree), so completion-linkage
    without stack-linkage is impossible and is asserted.  The converse needs
    the layers to cohere: a completion covector mixes entries of adjacent
    layers, so a stack violating closure can be layer-linkage while its
    completion is not.  For closed stacks (ensembles), both values agree.
    """
    stack_ok, _ = stack_left_linkage(stack)
    comp_ok = fields.is_linkage(completion(stack)).ok
    if comp_ok and not stack_ok:
        raise MatchfieldError(
            "completion is linkage but a stack layer is not; "
            "deleting dummy leaves should have preserved the trees"
        )
    return stack_ok, comp_ok


def extraction(stack: MatchingStack) -> fields.MatchingField:
    """Keep the pairs with I = R: one matching per d-subset of L."""
    if stack.n < stack.d:
        raise MatchfieldError("extraction needs n >= d")
    full = tuple(range(1, stack.d + 1))
    assignment = {
        J: stack.matching(J, full) for J in core.subsets(stack.n, stack.d)
    }
    return fields.validate_matching_field(stack.n, stack.d, assignment)


def _lex_min_matching(n, d, J, I):
    edges = list(zip(J, I))
    return BipartiteGraph(n, d, edges)


def extend(
    field: fields.MatchingField,
    strategy: str = "lexicographic-min",
    weights: Optional[Sequence[Sequence]] = None,
) -> MatchingStack:
    """Extend a field to a stack: pairs with I = R take the field's matchings,
    all others are filled by the strategy.

    lexicographic-min pairs the h-th smallest element of J with the h-th
    smallest of I; from-weights uses the exact-rational minimal matching of
    the given matrix (ties raise).
    """
    n, d = field.n, field.d
    entries = {}
    full = tuple(range(1, d + 1))
    for sigma, m in field.items():
        entries[(sigma, full)] = m
    if strategy == "lexicographic-min":
        def filler(J, I):
            return _lex_min_matching(n, d, J, I)
    elif strategy == "from-weights":
        if weights is None:
            raise MatchfieldError("from-weights needs a weight matrix")
        rat = [[Fraction(x) for x in row] for row in weights]

        def filler(J, I):
            best, tied = fields._min_assignment(J, rat, I)
            if tied is not None:
                raise TiedMinimumError(
                    (J, I),
                    BipartiteGraph(n, d, list(zip(J, best))),
                    BipartiteGraph(n, d, list(zip(J, tied))),
                )
            return BipartiteGraph(n, d, list(zip(J, best)))
    else:
        raise MatchfieldError(f"unknown strategy {strategy!r}")
    return MatchingStack(n, d, entries, filler=filler)


# ---------------------------------------------------------------------------
# transversal matroids


@dataclass(frozen=True)
class TransversalMatroid:
    ground: int
    rank: int
    bases: frozenset

    def as_dict(self) -> dict:
        return {
            "ground": self.ground,
            "rank": self.rank,
            "bases": sorted(list(b) for b in self.bases),
        }


def _has_perfect_left_matching(g: BipartiteGraph, J: Sequence[int]) -> bool:
    """Augmenting-path search: can J be matched injectively into R?"""
    match_r: dict[int, int] = {}

    def augment(j, seen):
        for i in g.left_neighbors(j):
            if i in seen:
                continue
            seen.add(i)
            if i not in match_r or augment(match_r[i], seen):
                match_r[i] = j
                return True
        return False

    return all(augment(j, set()) for j in J)


def transversal_matroid(g: BipartiteGraph, cap: int = 12) -> TransversalMatroid:
    """Matroid on the left nodes whose independent sets are the matchable
    subsets; bases are stored explicitly (desk scale)."""
    if g.n > cap:
        raise SizeCapError(f"transversal_matroid capped at n <= {cap}")
    rank = 0
    for size in range(min(g.n, g.d), -1, -1):
        if any(
            _has_perfect_left_matching(g, J) for J in core.subsets(g.n, size)
        ):
            rank = size
            break
    bases = frozenset(
        J for J in core.subsets(g.n, rank) if _has_perfect_left_matching(g, J)
    )
    return TransversalMatroid(g.n, rank, bases)


def check_basis_exchange(m: TransversalMatroid) -> bool:
    for b1 in m.bases:
        for b2 in m.bases:
            for x in set(b1) - set(b2):
                ok = any(
                    tuple(sorted(set(b1) - {x} | {y})) in m.bases
                    for y in set(b2) - set(b1)
                )
                if not ok:
                    return False
    return True


def stiefel_image(graphs: Iterable[BipartiteGraph]) -> list[TransversalMatroid]:
    """Transversal matroid of every graph in the collection, in order."""
    return [transversal_matroid(g) for g in graphs]


def stiefel_image_of_field(field: fields.MatchingField) -> list[TransversalMatroid]:
    """Stiefel image of the maximal tope linkage covectors (the covectors on
    tau = [n] of the thickness n-1 tope fields), keyed order: by type."""
    covectors = fields.maximal_tope_covectors(field)
    return [transversal_matroid(covectors[v]) for v in sorted(covectors)]


# ---------------------------------------------------------------------------
# compatible right submatchings


@dataclass(frozen=True)
class SubmatchingReport:
    ok: bool
    witness: Optional[tuple] = None  # (J, I, kind, data)


def right_submatching_check(
    field: fields.MatchingField, max_left: Optional[int] = None
) -> SubmatchingReport:
    """For every left subset J and right subset I with |I| = |J| + 1, the
    union of the existing submatchings of field matchings on J ⊔ I' (I'
    ranging over the |J|-subsets of I) must be a forest whose contained
    |J|-matchings are all compatible with the field.

    max_left caps |J| (default: no cap beyond d - 1).
    """
    n, d = field.n, field.d
    cap = min(d - 1, max_left if max_left is not None else d - 1)
    all_matchings = [m for _, m in field.items()]
    for size in range(1, cap + 1):
        for J in core.subsets(n, size):
            for I in core.subsets(d, size + 1):
                union = BipartiteGraph.from_mask(n, d, 0)
                pieces = {}
                for I_sub in combinations(I, size):
                    sub = _field_submatching(field, J, I_sub)
                    if sub is not None:
                        pieces[I_sub] = sub
                        union = union.union(sub)
                if not pieces:
                    continue
                cycle = core.find_cycle(union)
                if cycle is not None:
                    return SubmatchingReport(False, (J, I, "cycle", tuple(cycle)))
                for key, m in core.contained_matchings(union).items():
                    if len(key[0]) != size:
                        continue
                    for other in all_matchings:
                        ok, _ = core.is_compatible(m, other)
                        if not ok:
                            return SubmatchingReport(
                                False, (J, I, "incompatible", (m, other))
                            )
    return SubmatchingReport(True)


def _field_submatching(field, J, I_sub):
    """Unique submatching of a field matching on J ⊔ I_sub, if any exists."""
    found = None
    for _, m in field.items():
        edges = [(j, i) for j, i in m.edges if j in J and i in I_sub]
        if len(edges) != len(J):
            continue
        sub = BipartiteGraph(field.n, field.d, edges)
        if sub.left_support() != J or sub.right_support() != tuple(I_sub):
            continue
        if found is not None and found != sub:
            raise MatchfieldError(f"field matchings disagree on ({J}, {I_sub})")
        found = sub
    return found


# ---------------------------------------------------------------------------
# serialization


def stack_key(J, I) -> str:
    return f"J:{core.subset_key(J)}|I:{core.subset_key(I)}"


def parse_stack_key(key: str):
    j_part, i_part = key.split("|")
    J = core.parse_subset_key(j_part[2:]) if j_part[2:] else ()
    I = core.parse_subset_key(i_part[2:]) if i_part[2:] else ()
    return J, I


def stack_to_json_dict(stack: MatchingStack) -> dict:
    stack.materialize()
    return {
        "n": stack.n,
        "d": stack.d,
        "matchings": {
            stack_key(J, I): [list(e) for e in g.edges]
            for (J, I), g in sorted(stack.entries.items())
        },
    }


def stack_from_json_dict(data: dict) -> MatchingStack:
    n, d = data["n"], data["d"]
    entries = {}
    for key, edges in data["matchings"].items():
        J, I = parse_stack_key(key)
        entries[(J, I)] = BipartiteGraph(n, d, [tuple(e) for e in edges])
    return MatchingStack(n, d, entries)
