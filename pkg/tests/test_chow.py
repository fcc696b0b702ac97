"""Chow covectors: both constructions, the bijection, transversality,
sectors, and reconstruction from the phi map."""

import pytest

from matchfield import (
    InconsistentPhiError,
    NotLinkageError,
    SizeCapError,
    chow_by_definition,
    chow_by_intersection,
    chow_collection,
    field_from_chow,
    is_transversal,
    minimal_transversals,
    reconstruct_chow_from_phi,
    sector,
    simplex_lattice_points,
    subsets,
    tope_arrangement,
)
from matchfield.chow import PhiMap, phi_from_json_dict, phi_to_json_dict
from matchfield.randgen import seeded_coherent_field

from conftest import field_from_words, graph


REFERENCE_PHI = {
    (1, 2, 4): (3, 0),
    (1, 3, 4): (2, 1),
    (1, 2, 3): (1, 2),
    (2, 3, 4): (0, 3),
}


class TestByDefinition:
    def test_reference_covectors(self, field_42):
        assert set(chow_by_definition(field_42, (1, 2, 4)).edges) == {
            (1, 1),
            (2, 1),
            (4, 1),
        }
        assert set(chow_by_definition(field_42, (1, 3, 4)).edges) == {
            (1, 1),
            (4, 1),
            (3, 2),
        }

    def test_square_field(self):
        f = field_from_words(2, 2, {(1, 2): "21"})
        assert chow_by_definition(f, (1,)).edges == ((1, 2),)
        assert chow_by_definition(f, (2,)).edges == ((2, 1),)

    def test_wrong_rho_size(self, field_42):
        with pytest.raises(Exception):
            chow_by_definition(field_42, (1, 2))


class TestByIntersection:
    def test_matches_definition(self, field_42):
        ta = tope_arrangement(field_42)
        cc = chow_collection(field_42)
        by_rdv = cc.by_rdv()
        for v in simplex_lattice_points(3, 2):
            assert chow_by_intersection(ta, v) == by_rdv[v]

    @pytest.mark.parametrize(
        "v,expected",
        [
            ((2, 1), {(1, 1), (4, 1), (3, 2)}),
            ((3, 0), {(1, 1), (2, 1), (4, 1)}),
            ((0, 3), {(2, 2), (3, 2), (4, 2)}),
        ],
    )
    def test_reference_values(self, field_42, v, expected):
        ta = tope_arrangement(field_42)
        assert set(chow_by_intersection(ta, v).edges) == expected


class TestCollection:
    def test_reference_phi(self, field_42):
        cc = chow_collection(field_42)
        assert cc.phi().mapping == REFERENCE_PHI

    def test_nonregular_field_bijection(self, field_63):
        cc = chow_collection(field_63)
        assert len(cc.covectors) == 15
        assert sorted(g.right_degrees() for g in cc.covectors.values()) == (
            simplex_lattice_points(4, 3)
        )

    def test_square_field(self):
        f = field_from_words(2, 2, {(1, 2): "21"})
        cc = chow_collection(f)
        assert set(cc.covectors) == {(1,), (2,)}

    def test_non_linkage_rejected(self, field_43):
        with pytest.raises(NotLinkageError):
            chow_collection(field_43)


class TestFieldFromChow:
    def test_union_gives_tope(self, field_42):
        cc = chow_collection(field_42)
        by_rdv = cc.by_rdv()
        union = by_rdv[(2, 1)].union(by_rdv[(1, 2)])
        assert set(union.edges) == {(1, 1), (4, 1), (2, 2), (3, 2)}

    def test_round_trip(self, field_42, field_53, field_63):
        for field in (field_42, field_53, field_63):
            assert field_from_chow(chow_collection(field)) == field

    def test_square_round_trip(self):
        f = field_from_words(2, 2, {(1, 2): "21"})
        assert field_from_chow(chow_collection(f)) == f

    def test_coherent_round_trip(self):
        field, _, _ = seeded_coherent_field(5, 3, 20240521)
        assert field_from_chow(chow_collection(field)) == field


class TestTransversals:
    def test_examples(self, field_42):
        assert is_transversal(graph(4, 2, [(1, 1), (2, 1), (4, 1)]), field_42)
        assert not is_transversal(graph(4, 2, [(1, 1)]), field_42)

    def test_minimal_transversals_are_chow(self, field_42):
        cc = chow_collection(field_42)
        assert minimal_transversals(field_42) == set(cc.covectors.values())

    def test_cap(self, field_42):
        with pytest.raises(SizeCapError):
            minimal_transversals(field_42, cap=(3, 2))


class TestSector:
    def test_reference(self, field_42):
        cc = chow_collection(field_42)
        image = sector(cc.by_rdv(), 4, 2)
        assert {v for _, v in image.members} == {(0, 3)}

    def test_empty_sector(self, field_63):
        cc = chow_collection(field_63)
        assert not sector(cc.by_rdv(), 1, 2).members

    def test_isolated_everywhere(self):
        collection = {(1, 0): graph(2, 2, [(1, 1)]), (0, 1): graph(2, 2, [(1, 2)])}
        assert not sector(collection, 2, 1).members


class TestReconstruction:
    def test_reference(self, field_42):
        cc = chow_collection(field_42)
        rebuilt = reconstruct_chow_from_phi(cc.phi(), 4, 2)
        assert rebuilt == cc

    def test_square_base_case(self):
        f = field_from_words(2, 2, {(1, 2): "21"})
        cc = chow_collection(f)
        assert reconstruct_chow_from_phi(cc.phi(), 2, 2) == cc

    def test_flip_graph_field(self, field_53):
        cc = chow_collection(field_53)
        assert reconstruct_chow_from_phi(cc.phi(), 5, 3) == cc

    def test_nonregular_field(self, field_63):
        cc = chow_collection(field_63)
        assert reconstruct_chow_from_phi(cc.phi(), 6, 3) == cc

    def test_random_coherent_round_trip(self):
        field, _, _ = seeded_coherent_field(6, 3, 77)
        cc = chow_collection(field)
        assert reconstruct_chow_from_phi(cc.phi(), 6, 3) == cc

    def test_non_bijective_phi_rejected(self, field_42):
        mapping = dict(chow_collection(field_42).phi().mapping)
        mapping[(1, 2, 3)] = mapping[(1, 2, 4)]
        with pytest.raises(InconsistentPhiError):
            reconstruct_chow_from_phi(PhiMap(4, 2, mapping), 4, 2)

    def test_realizable_swap_finds_the_other_field(self, field_42):
        # swapping two values of this bijection lands on the phi map of a
        # different linkage field, which the reconstruction must find
        mapping = dict(chow_collection(field_42).phi().mapping)
        mapping[(1, 2, 3)], mapping[(1, 2, 4)] = (
            mapping[(1, 2, 4)],
            mapping[(1, 2, 3)],
        )
        rebuilt = reconstruct_chow_from_phi(PhiMap(4, 2, mapping), 4, 2)
        other = field_from_chow(rebuilt)
        assert other != field_42
        assert chow_collection(other) == rebuilt

    def test_scrambled_phi_detected(self, field_63):
        # swap two values: still bijective, but from no linkage field
        mapping = dict(chow_collection(field_63).phi().mapping)
        keys = sorted(mapping)
        a, b = keys[0], keys[5]
        mapping[a], mapping[b] = mapping[b], mapping[a]
        with pytest.raises(InconsistentPhiError):
            reconstruct_chow_from_phi(PhiMap(6, 3, mapping), 6, 3)

    @pytest.mark.parametrize("n", [4, 5])
    def test_exhaustive_small_width_decision(self, n):
        # enumerate every (n,2) matching field; the linkage ones have
        # pairwise-distinct phi maps, and the reconstruction decides every
        # bijection correctly (at width two, each one is realisable)
        import itertools

        from matchfield import BipartiteGraph
        from matchfield.fields import MatchingField, is_linkage

        sigmas = list(subsets(n, 2))
        linkage_phis = {}
        for choice in itertools.product((0, 1), repeat=len(sigmas)):
            assignment = {}
            for sigma, flip in zip(sigmas, choice):
                a, b = sigma
                assignment[sigma] = BipartiteGraph(n, 2, [(a, 1 + flip), (b, 2 - flip)])
            f = MatchingField(n, 2, assignment)
            if is_linkage(f).ok:
                cc = chow_collection(f)
                key = frozenset(cc.phi().mapping.items())
                assert key not in linkage_phis
                linkage_phis[key] = cc

        rhos = list(subsets(n, n - 1))
        points = simplex_lattice_points(n - 1, 2)
        for perm in itertools.permutations(points):
            mapping = dict(zip(rhos, perm))
            key = frozenset(mapping.items())
            rebuilt = reconstruct_chow_from_phi(PhiMap(n, 2, mapping), n, 2)
            assert key in linkage_phis and rebuilt == linkage_phis[key]

    def test_deletion_restriction(self, field_42):
        # stripping lj from the covectors through lj gives the collection of
        # the field with lj deleted
        from matchfield.fields import subfield_delete_left

        cc = chow_collection(field_42)
        for j in range(1, 5):
            label_map = {x: (x if x < j else x - 1) for x in range(1, 5) if x != j}
            expected = {
                tuple(sorted(label_map[x] for x in rho if x != j)): g.without_edges(
                    [(j, i) for i in (1, 2)]
                ).relabel_left(3, label_map)
                for rho, g in cc.items()
                if j in rho
            }
            sub = chow_collection(subfield_delete_left(field_42, j))
            assert expected == dict(sub.covectors)


class TestPhiJson:
    def test_round_trip(self, field_42):
        phi = chow_collection(field_42).phi()
        assert phi_from_json_dict(phi_to_json_dict(phi)) == phi
