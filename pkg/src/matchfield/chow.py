"""Chow covectors of a matching field and their lattice-point bijection.

For every (n-d+1)-subset rho of the left nodes, the Chow covector is the
graph of the map sending j in rho to the right partner of lj in the matching
on (L minus rho) union {j}.  For linkage fields the right degree vectors of
the covectors hit every lattice point of (n-d+1)*Delta_{d-1} exactly once;
the resulting bijection phi: rho -> lattice point determines the field.

Reconstruction inverts phi by recursion on n.  For a fixed left node j and
right node i, the degree pairs of the covectors containing the edge (lj, ri)
form a *combinatorial sector*, computed by a sweep over the levels of the
i-th right coordinate: the unique pair at the top level (v_i = n-d+1) seeds
the sector, and a pair at level h joins when some already-admitted pair sits
at rdv v + e_i - e_k.  Removing the sector edge from each pair produces the
degree pairs of the covectors of the field with lj deleted, which the
recursion resolves; re-attaching (lj, ri) rebuilds every covector through j.

Chow covectors are also the minimal transversals to the field: graphs
meeting every matching, minimal under inclusion.  A Berge-style blocker
computation provides that independent description at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import core, fields
from .core import BipartiteGraph
from .errors import (
    InconsistentCollectionError,
    InconsistentPhiError,
    MatchfieldError,
    NotLinkageError,
    SizeCapError,
)


def chow_by_definition(field: fields.MatchingField, rho: Iterable[int]) -> BipartiteGraph:
    """Covector of rho: edge (j, i) where i is lj's partner in the matching on
    (L minus rho) + j.  Works for any matching field, linkage or not."""
    rho = tuple(sorted(rho))
    n, d = field.n, field.d
    if len(rho) != n - d + 1:
        raise MatchfieldError(f"rho must have size {n - d + 1}, got {len(rho)}")
    complement = [x for x in range(1, n + 1) if x not in rho]
    edges = []
    for j in rho:
        sigma = tuple(sorted(complement + [j]))
        (i,) = field.matching(sigma).left_neighbors(j)
        edges.append((j, i))
    return BipartiteGraph(n, d, edges)


def chow_by_intersection(
    ta: fields.TopeArrangement, v: Sequence[int]
) -> BipartiteGraph:
    """Covector with right degree vector v from the maximal topes.

    Intersect the topes with right degree vector v + 1_{[d] minus i} over the
    i with v_i > 0; coordinates with v_i = 0 contribute no tope, and instead
    every ri-edge is deleted from the result."""
    v = tuple(v)
    n, d = ta.n, ta.d
    if len(v) != d or sum(v) != n - d + 1 or any(x < 0 for x in v):
        raise MatchfieldError(f"{v} is not a lattice point of {n - d + 1}Δ_{d - 1}")
    current: Optional[BipartiteGraph] = None
    for i in range(1, d + 1):
        if v[i - 1] == 0:
            continue
        # tope rdv v + 1_{[d] minus i} is keyed by the lattice point v - e_i
        point = tuple(x - (1 if t == i else 0) for t, x in enumerate(v, start=1))
        tope = ta.tope(point)
        current = tope if current is None else current.intersection(tope)
    assert current is not None  # sum v = n - d + 1 >= 1 forces a positive entry
    drop = []
    for i in range(1, d + 1):
        if v[i - 1] == 0:
            drop.extend((j, i) for j in current.right_neighbors(i))
    return current.without_edges(drop)


class ChowCollection:
    """All covectors of a linkage field, with the degree-vector bijection."""

    def __init__(self, n: int, d: int, covectors: dict):
        self.n = n
        self.d = d
        self.covectors = {tuple(sorted(r)): g for r, g in covectors.items()}
        self._validate()

    def _validate(self) -> None:
        n, d = self.n, self.d
        expected = list(core.subsets(n, n - d + 1))
        if sorted(self.covectors) != sorted(expected):
            raise InconsistentCollectionError("keys must be the (n-d+1)-subsets")
        for rho, g in self.covectors.items():
            if g.left_support() != rho or any(deg > 1 for deg in g.left_degrees()):
                raise InconsistentCollectionError(f"covector at {rho} has wrong support")
        rdvs = sorted(g.right_degrees() for g in self.covectors.values())
        if rdvs != core.simplex_lattice_points(n - d + 1, d):
            raise InconsistentCollectionError(
                "right degree vectors do not biject onto the lattice points"
            )

    def covector(self, rho: Iterable[int]) -> BipartiteGraph:
        return self.covectors[tuple(sorted(rho))]

    def items(self):
        return sorted(self.covectors.items())

    def by_rdv(self) -> dict[tuple, BipartiteGraph]:
        return {g.right_degrees(): g for g in self.covectors.values()}

    def phi(self) -> "PhiMap":
        return PhiMap(
            self.n,
            self.d,
            {rho: g.right_degrees() for rho, g in self.covectors.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, ChowCollection)
            and (self.n, self.d) == (other.n, other.d)
            and self.covectors == other.covectors
        )

    def __repr__(self):
        return f"<ChowCollection ({self.n},{self.d}) with {len(self.covectors)} covectors>"


class PhiMap:
    """Bijection from (n-d+1)-subsets to lattice points of (n-d+1)*Delta."""

    def __init__(self, n: int, d: int, mapping: dict):
        self.n = n
        self.d = d
        self.mapping = {tuple(sorted(r)): tuple(v) for r, v in mapping.items()}

    def validate_bijective(self) -> None:
        expected = list(core.subsets(self.n, self.n - self.d + 1))
        if sorted(self.mapping) != sorted(expected):
            raise InconsistentPhiError("phi keys must be the (n-d+1)-subsets")
        if sorted(self.mapping.values()) != core.simplex_lattice_points(
            self.n - self.d + 1, self.d
        ):
            raise InconsistentPhiError("phi values must biject onto the lattice points")

    def items(self):
        return sorted(self.mapping.items())

    def __eq__(self, other):
        return (
            isinstance(other, PhiMap)
            and (self.n, self.d) == (other.n, other.d)
            and self.mapping == other.mapping
        )

    def __repr__(self):
        return f"<PhiMap ({self.n},{self.d})>"


def chow_collection(field: fields.MatchingField) -> ChowCollection:
    """All covectors of a linkage field; the rdv bijection is certified."""
    fields.require_linkage(field)
    covectors = {
        rho: chow_by_definition(field, rho)
        for rho in core.subsets(field.n, field.n - field.d + 1)
    }
    return ChowCollection(field.n, field.d, covectors)


def field_from_chow(cc: ChowCollection) -> fields.MatchingField:
    """Rebuild the field: the tope with right degree vector v is the union of
    the covectors at v - 1_{[d] minus i}; its maximal matchings give the
    field."""
    n, d = cc.n, cc.d
    by_rdv = cc.by_rdv()
    assignment: dict = {}
    for point in core.simplex_lattice_points(n - d, d):
        v = core.vector_sum(point, core.all_ones(d))
        tope: Optional[BipartiteGraph] = None
        for i in range(1, d + 1):
            rdv = tuple(x - (0 if t == i else 1) for t, x in enumerate(v, start=1))
            cov = by_rdv.get(rdv)
            if cov is None:
                raise InconsistentCollectionError(f"no covector with rdv {rdv}")
            tope = cov if tope is None else tope.union(cov)
        if tope.left_degrees() != core.all_ones(n):
            raise InconsistentCollectionError(f"union at {v} is not a maximal tope")
        neighbor_sets = [tope.right_neighbors(i) for i in range(1, d + 1)]
        for choice in fields._product(neighbor_sets):
            sigma = tuple(sorted(choice))
            m = BipartiteGraph(n, d, list(zip(choice, range(1, d + 1))))
            old = assignment.get(sigma)
            if old is not None and old != m:
                raise InconsistentCollectionError(f"conflicting matchings on {sigma}")
            assignment[sigma] = m
    field = fields.validate_matching_field(n, d, assignment)
    return field


# ---------------------------------------------------------------------------
# transversals (the blocker description)


def is_transversal(g: BipartiteGraph, field: fields.MatchingField) -> bool:
    """True when g shares an edge with every matching of the field."""
    return all(g.mask & m.mask for _, m in field.items())


def minimal_transversals(
    field: fields.MatchingField, cap: tuple[int, int] = (7, 3)
) -> set[BipartiteGraph]:
    """All inclusion-minimal transversals, by Berge multiplication.

    Exponential oracle; sizes are capped (default n <= 7, d <= 3).
    """
    n, d = field.n, field.d
    if n > cap[0] or d > cap[1]:
        raise SizeCapError(f"minimal_transversals capped at {cap}")
    minimal: list[int] = [0]
    for _, m in sorted(field.items()):
        hyper = m.mask
        fresh: list[int] = []
        for h in minimal:
            if h & hyper:
                fresh.append(h)
            else:
                for b in _mask_bits(hyper):
                    fresh.append(h | (1 << b))
        minimal = _minimize(fresh)
    return {BipartiteGraph.from_mask(n, d, mask) for mask in minimal}


def _mask_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _minimize(masks: list[int]) -> list[int]:
    masks = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for m in masks:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


# ---------------------------------------------------------------------------
# combinatorial sectors and reconstruction


@dataclass(frozen=True)
class SectorImage:
    """Degree pairs of the collection members where lj is a leaf on ri."""

    j: int
    i: int
    members: frozenset


def sector(collection: dict, j: int, i: int) -> SectorImage:
    """Members of an rdv-keyed collection containing (lj, ri) with lj of
    degree 1, reported by their (left, right) degree-vector pairs."""
    members = []
    for _, g in sorted(collection.items()):
        if (j, i) in g and g.left_degrees()[j - 1] == 1:
            members.append((g.left_degrees(), g.right_degrees()))
    return SectorImage(j, i, frozenset(members))


def _sector_sweep(pairs_by_rdv: dict, member_rdvs: set, i: int, seed_rdv: tuple, d: int):
    """Level sweep computing one combinatorial sector.

    pairs_by_rdv: rdv -> pair for the whole input; member_rdvs: rdvs of the
    pairs with the relevant left coordinate equal to 1.  Returns the admitted
    rdvs.  A pair at level h = v_i is admitted when some admitted pair sits at
    v + e_i - e_k; the unique pair at the top level seeds the sweep.
    """
    if seed_rdv not in pairs_by_rdv:
        raise InconsistentPhiError(f"no member with extreme rdv {seed_rdv}")
    if seed_rdv not in member_rdvs:
        return set()
    admitted = {seed_rdv}
    top = seed_rdv[i - 1]
    by_level: dict[int, list[tuple]] = {}
    for rdv in member_rdvs:
        by_level.setdefault(rdv[i - 1], []).append(rdv)
    for h in range(top - 1, -1, -1):
        for rdv in sorted(by_level.get(h, [])):
            for k in range(1, d + 1):
                if k == i or rdv[k - 1] == 0:
                    continue
                up = list(rdv)
                up[i - 1] += 1
                up[k - 1] -= 1
                if tuple(up) in admitted:
                    admitted.add(rdv)
                    break
    return admitted


def reconstruct_chow_from_phi(phi: PhiMap, n: int, d: int) -> ChowCollection:
    """Invert phi: rebuild every covector from the subset -> lattice point
    bijection of a linkage field.

    Raises InconsistentPhiError when the input comes from no linkage field:
    the result is certified by rebuilding the field from the covectors and
    checking that its collection reproduces the input exactly.
    """
    if (phi.n, phi.d) != (n, d):
        raise MatchfieldError("phi dimensions disagree")
    phi.validate_bijective()
    memo: dict = {}
    labels = tuple(range(1, n + 1))
    mapping = {frozenset(rho): v for rho, v in phi.mapping.items()}
    covectors = _reconstruct_chow(mapping, labels, d, memo)
    out = {
        tuple(sorted(rho)): BipartiteGraph(n, d, edges)
        for rho, edges in covectors.items()
    }
    try:
        collection = ChowCollection(n, d, out)
        if collection.phi().mapping != phi.mapping:
            raise InconsistentPhiError("reconstruction does not reproduce phi")
        # certificate: the collection must belong to an actual linkage field
        field = field_from_chow(collection)
        if chow_collection(field) != collection:
            raise InconsistentPhiError("covectors do not belong to any field")
    except (InconsistentCollectionError, NotLinkageError) as exc:
        raise InconsistentPhiError(str(exc)) from exc
    return collection


def _reconstruct_chow(mapping, labels, d, memo):
    """mapping: frozenset(rho) -> rdv over the left label set `labels`.

    Returns frozenset(rho) -> tuple of edges ((j, i) with original labels).
    """
    key = labels
    if key in memo:
        return memo[key]
    n = len(labels)
    if n == d:
        out = {}
        for rho, rdv in mapping.items():
            if len(rho) != 1 or sum(rdv) != 1:
                raise InconsistentPhiError("bad base-case pair")
            (j,) = tuple(rho)
            i = rdv.index(1) + 1
            out[rho] = ((j, i),)
        memo[key] = out
        return out

    by_rdv = {v: rho for rho, v in mapping.items()}
    if len(by_rdv) != len(mapping):
        raise InconsistentPhiError("right projection is not injective")
    covectors: dict = {}
    for j in labels:
        member_rdvs = {v for rho, v in mapping.items() if j in rho}
        sectors = {}
        assigned: dict = {}
        for i in range(1, d + 1):
            seed = tuple((n - d + 1) if t == i else 0 for t in range(1, d + 1))
            admitted = _sector_sweep(by_rdv, member_rdvs, i, seed, d)
            sectors[i] = admitted
            for rdv in admitted:
                if rdv in assigned:
                    raise InconsistentPhiError(
                        f"rdv {rdv} admitted to two sectors of {j}"
                    )
                assigned[rdv] = i
        if set(assigned) != member_rdvs:
            raise InconsistentPhiError(f"sectors do not cover all pairs through {j}")
        # deletion: remove lj and its sector edge from every member
        sub_labels = tuple(x for x in labels if x != j)
        sub_mapping = {}
        for rdv, i in assigned.items():
            rho = by_rdv[rdv]
            sub_rho = frozenset(rho - {j})
            sub_rdv = tuple(x - (1 if t == i else 0) for t, x in enumerate(rdv, start=1))
            if any(x < 0 for x in sub_rdv) or sub_rho in sub_mapping:
                raise InconsistentPhiError("deletion is not a valid phi map")
            sub_mapping[sub_rho] = sub_rdv
        sub_covectors = _reconstruct_chow(sub_mapping, sub_labels, d, memo)
        for rdv, i in assigned.items():
            rho = by_rdv[rdv]
            edges = sub_covectors[frozenset(rho - {j})] + ((j, i),)
            edges = tuple(sorted(edges))
            old = covectors.get(rho)
            if old is not None and old != edges:
                raise InconsistentPhiError(f"branches disagree on covector {set(rho)}")
            covectors[rho] = edges
    if len(covectors) != len(mapping):
        raise InconsistentPhiError("not every covector was reconstructed")
    memo[key] = covectors
    return covectors


def collection_to_json_dict(cc: ChowCollection) -> dict:
    return {
        "n": cc.n,
        "d": cc.d,
        "covectors": {
            core.subset_key(rho): [list(e) for e in g.edges] for rho, g in cc.items()
        },
    }


def collection_from_json_dict(data: dict) -> ChowCollection:
    n, d = data["n"], data["d"]
    return ChowCollection(
        n,
        d,
        {
            core.parse_subset_key(key): BipartiteGraph(n, d, [tuple(e) for e in edges])
            for key, edges in data["covectors"].items()
        },
    )


def phi_to_json_dict(phi: PhiMap) -> dict:
    return {
        "n": phi.n,
        "d": phi.d,
        "phi": {core.subset_key(rho): list(v) for rho, v in phi.items()},
    }


def phi_from_json_dict(data: dict) -> PhiMap:
    return PhiMap(
        data["n"],
        data["d"],
        {core.parse_subset_key(k): tuple(v) for k, v in data["phi"].items()},
    )
