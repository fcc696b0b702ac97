"""Shared fixtures: the small reference fields and tree sets used throughout.

Matchings are written as words: position i of the word holds the left node
matched to ri.
"""

import pytest

from matchfield import BipartiteGraph, validate_matching_field
from matchfield.triang import extract_field_from_trees


def graph(n, d, edges):
    return BipartiteGraph(n, d, edges)


def matching_from_word(n, d, word):
    return BipartiteGraph(n, d, [(int(ch), pos) for pos, ch in enumerate(word, start=1)])


def field_from_words(n, d, words):
    assignment = {
        sigma: matching_from_word(n, d, word) for sigma, word in words.items()
    }
    return validate_matching_field(n, d, assignment)


FIELD_42_WORDS = {
    (1, 2): "12",
    (1, 3): "13",
    (1, 4): "14",
    (2, 3): "23",
    (2, 4): "42",
    (3, 4): "43",
}

# (4,2)-tope field of type (2,1): the 1-amalgamation of the field above
TOPES_42 = {
    (1, 2, 3): [(1, 1), (2, 1), (3, 2)],
    (1, 2, 4): [(1, 1), (4, 1), (2, 2)],
    (1, 3, 4): [(1, 1), (4, 1), (3, 2)],
    (2, 3, 4): [(2, 1), (4, 1), (3, 2)],
}

# linkage covectors of the (4,2) field, plus the tope covector of TOPES_42
COVECTORS_42 = {
    (1, 2, 3): [(1, 1), (2, 1), (2, 2), (3, 2)],
    (1, 2, 4): [(1, 1), (4, 1), (2, 2), (4, 2)],
    (1, 3, 4): [(1, 1), (4, 1), (4, 2), (3, 2)],
    (2, 3, 4): [(2, 1), (4, 1), (2, 2), (3, 2)],
}
TOPE_COVECTOR_42 = [(1, 1), (2, 1), (4, 1), (2, 2), (3, 2)]

# (4,3) field with pairwise compatible matchings that is not linkage
FIELD_43_WORDS = {
    (1, 2, 3): "123",
    (1, 2, 4): "124",
    (1, 3, 4): "413",
    (2, 3, 4): "234",
}

# interior trees of a non-regular subdivision; their matchings form a
# (6,3) linkage field that is polyhedral but not coherent
INTERIOR_TREES_63 = [
    [(1, 1), (2, 1), (1, 3), (2, 2), (4, 2), (3, 3), (5, 3), (6, 3)],
    [(1, 1), (2, 1), (3, 1), (2, 2), (4, 2), (3, 3), (5, 3), (6, 3)],
    [(1, 1), (6, 2), (3, 1), (2, 2), (4, 2), (3, 3), (5, 3), (6, 3)],
    [(1, 1), (2, 1), (4, 2), (6, 2), (3, 1), (4, 1), (5, 3), (6, 3)],
    [(1, 1), (2, 1), (3, 1), (2, 2), (4, 2), (6, 2), (5, 3), (6, 3)],
    [(1, 1), (2, 2), (3, 1), (5, 2), (4, 2), (3, 3), (5, 3), (6, 2)],
]

# linkage covectors of a (6,4) field whose tope covectors are mutually
# incompatible; nodes 1..4 act as dummies, 5 and 6 carry the structure
COVECTOR_TREES_64 = [
    [(1, 1), (2, 2), (3, 3), (4, 4), (5, 1), (5, 2), (5, 3), (5, 4)],
    [(1, 1), (2, 2), (3, 3), (4, 4), (6, 1), (6, 2), (6, 3), (6, 4)],
    [(1, 1), (2, 2), (3, 3), (5, 4), (5, 1), (6, 2), (5, 3), (6, 4)],
    [(1, 1), (2, 2), (6, 3), (4, 4), (6, 1), (5, 2), (5, 3), (6, 4)],
    [(1, 1), (6, 2), (3, 3), (4, 4), (5, 1), (5, 2), (6, 3), (5, 4)],
    [(6, 1), (2, 2), (3, 3), (4, 4), (5, 1), (6, 2), (5, 3), (6, 4)],
]

# (5,3) linkage field whose flip graph decomposes into five linkage trees
FIELD_53_WORDS = ["321", "142", "521", "341", "351", "541", "342", "523", "542", "543"]


@pytest.fixture(scope="session")
def field_42():
    return field_from_words(4, 2, FIELD_42_WORDS)


@pytest.fixture(scope="session")
def tope_field_42(field_42):
    from matchfield import i_amalgamation

    return i_amalgamation(field_42, 1)


@pytest.fixture(scope="session")
def field_43():
    return field_from_words(4, 3, FIELD_43_WORDS)


@pytest.fixture(scope="session")
def field_53():
    words = {tuple(sorted(int(c) for c in w)): w for w in FIELD_53_WORDS}
    return field_from_words(5, 3, words)


@pytest.fixture(scope="session")
def trees_63():
    return [BipartiteGraph(6, 3, t) for t in INTERIOR_TREES_63]


@pytest.fixture(scope="session")
def field_63(trees_63):
    return extract_field_from_trees(trees_63, 6, 3)


@pytest.fixture(scope="session")
def covector_trees_64():
    return [BipartiteGraph(6, 4, t) for t in COVECTOR_TREES_64]


@pytest.fixture(scope="session")
def field_64(covector_trees_64):
    return extract_field_from_trees(covector_trees_64, 6, 4)


@pytest.fixture(scope="session")
def extended_24(field_64):
    """Extended (2,4) arrangement violating the hexagon axiom: strip the
    dummy matching from the maximal topes of the (6,4) field."""
    from matchfield.fields import extended_arrangement_by_stripping

    return extended_arrangement_by_stripping(field_64, [(1, 1), (2, 2), (3, 3), (4, 4)])


def exhaustive_compatibility(g1, g2):
    """Independent oracle for the alternating-cycle test: search all pairs of
    edge-disjoint perfect matchings on common node sets, one inside g1 minus
    g2, one inside g2 minus g1."""
    from matchfield.core import contained_matchings

    only1 = g1.difference(g2)
    only2 = g2.difference(g1)
    m1 = contained_matchings(only1)
    m2 = contained_matchings(only2)
    for key in set(m1) & set(m2):
        return False, key
    return True, None
