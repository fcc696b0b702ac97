"""Matching fields, tope fields, linkage, amalgamation and tope arrangements.

An (n, d)-matching field assigns to every d-subset sigma of the left nodes a
perfect matching on sigma ⊔ R.  A tope field of type v = (v1..vd) assigns to
every k-subset (k = sum v) a tope whose right degree vector is v.  The field
is *linkage* when the union of the assignments over every (k+1)-subset tau is
a tree, the *linkage covector* of tau; inside it each right node ri has
degree vi + 1.

The i-amalgamation extracts from each covector the unique tope of type
v + e_i, producing a tope field one thicker; iterating up to thickness n
yields one maximal tope per positive right degree vector of sum n.  Keyed by
right degree vector minus the all-ones vector, these form the tope
arrangement of the field, a bijection onto the lattice points of
(n-d)*Delta_{d-1}, and the field can be recovered from the arrangement by
collecting the maximal matchings of its topes.

Extended arrangements additionally carry a graph for every lattice point of
n*Delta_{d-1} (isolated right nodes allowed at the boundary) and are where
the trianguloid axioms T1-T4 are checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from . import core
from .core import BipartiteGraph
from .errors import (
    MatchfieldError,
    MissingSubsetError,
    NotAMatchingError,
    NotLinkageError,
    TiedMinimumError,
    WrongSupportError,
)


class TopeField:
    """Assignment of one tope of fixed type to every k-subset of left nodes."""

    def __init__(self, n: int, d: int, type_vector: Sequence[int], assignment: dict):
        self.n = n
        self.d = d
        self.type_vector = tuple(type_vector)
        self.thickness = sum(self.type_vector)
        self.assignment = {tuple(sorted(s)): g for s, g in assignment.items()}

    def tope(self, sigma: Iterable[int]) -> BipartiteGraph:
        return self.assignment[tuple(sorted(sigma))]

    def subsets(self):
        return core.subsets(self.n, self.thickness)

    def graphs(self):
        return self.assignment.values()

    def items(self):
        return self.assignment.items()

    def __eq__(self, other):
        return (
            isinstance(other, TopeField)
            and (self.n, self.d, self.type_vector) == (other.n, other.d, other.type_vector)
            and self.assignment == other.assignment
        )

    def __hash__(self):
        return hash((self.n, self.d, self.type_vector, frozenset(self.assignment.items())))

    def __repr__(self):
        return f"<TopeField ({self.n},{self.d}) type {self.type_vector}>"


class MatchingField(TopeField):
    """Tope field of type (1,..,1): one perfect matching per d-subset."""

    def __init__(self, n: int, d: int, assignment: dict):
        super().__init__(n, d, core.all_ones(d), assignment)

    def matching(self, sigma: Iterable[int]) -> BipartiteGraph:
        return self.tope(sigma)

    def __repr__(self):
        return f"<MatchingField ({self.n},{self.d})>"


def validate_matching_field(n: int, d: int, assignment: dict) -> MatchingField:
    """Check a raw subset -> graph map and wrap it as a MatchingField.

    Raises MissingSubsetError, NotAMatchingError or WrongSupportError with the
    offending subset.
    """
    cleaned = {}
    for sigma, graph in assignment.items():
        cleaned[tuple(sorted(sigma))] = graph
    for sigma in core.subsets(n, d):
        graph = cleaned.get(sigma)
        if graph is None:
            raise MissingSubsetError(sigma)
        if graph.n != n or graph.d != d:
            raise NotAMatchingError(sigma, f"graph for {sigma} has wrong ambient size")
        if graph.right_degrees() != core.all_ones(d) or any(
            deg > 1 for deg in graph.left_degrees()
        ):
            raise NotAMatchingError(sigma)
        if graph.left_support() != sigma:
            raise WrongSupportError(sigma, graph.left_support())
    extra = set(cleaned) - set(core.subsets(n, d))
    if extra:
        raise WrongSupportError(min(extra), None)
    return MatchingField(n, d, cleaned)


def validate_tope_field(n: int, d: int, type_vector: Sequence[int], assignment: dict) -> TopeField:
    v = tuple(type_vector)
    if len(v) != d or any(x < 1 for x in v) or sum(v) > n:
        raise MatchfieldError(f"invalid type vector {v} for ({n}, {d})")
    k = sum(v)
    cleaned = {tuple(sorted(s)): g for s, g in assignment.items()}
    for sigma in core.subsets(n, k):
        graph = cleaned.get(sigma)
        if graph is None:
            raise MissingSubsetError(sigma)
        if graph.right_degrees() != v or any(deg > 1 for deg in graph.left_degrees()):
            raise NotAMatchingError(sigma, f"value for {sigma} is not a tope of type {v}")
        if graph.left_support() != sigma:
            raise WrongSupportError(sigma, graph.left_support())
    return TopeField(n, d, v, cleaned)


# ---------------------------------------------------------------------------
# linkage


@dataclass(frozen=True)
class CovectorResult:
    """Union of the topes over a (k+1)-subset: a tree on success."""

    tau: tuple[int, ...]
    graph: BipartiteGraph
    cycle: Optional[tuple[tuple[int, int], ...]]  # None iff the union is a tree

    @property
    def ok(self) -> bool:
        return self.cycle is None


def linkage_covector(field: TopeField, tau: Iterable[int]) -> CovectorResult:
    """Union of the field's topes over the k-subsets of tau (|tau| = k + 1)."""
    tau = tuple(sorted(tau))
    if len(tau) != field.thickness + 1:
        raise MatchfieldError(
            f"tau must have size {field.thickness + 1}, got {len(tau)}"
        )
    union = BipartiteGraph.from_mask(field.n, field.d, 0)
    for drop in tau:
        sigma = tuple(x for x in tau if x != drop)
        union = union.union(field.tope(sigma))
    cycle = core.find_cycle(union)
    return CovectorResult(tau, union, tuple(cycle) if cycle else None)


@dataclass(frozen=True)
class LinkageReport:
    ok: bool
    failures: tuple[CovectorResult, ...]


def is_linkage(field: TopeField) -> LinkageReport:
    """Check the tree condition for every (k+1)-subset; collect all failures."""
    if field.thickness >= field.n:
        return LinkageReport(True, ())  # no (k+1)-subsets; vacuously linkage
    failures = []
    for tau in core.subsets(field.n, field.thickness + 1):
        res = linkage_covector(field, tau)
        if not res.ok:
            failures.append(res)
    return LinkageReport(not failures, tuple(failures))


def is_linkage_pairwise(field: MatchingField) -> bool:
    """Independent formulation over pairs of d-subsets.

    For distinct sigma, sigma' there must be some j' in sigma' minus sigma
    such that swapping j' for the sigma-partner of its sigma'-partner changes
    the matching only at that right node.
    """
    sigmas = list(core.subsets(field.n, field.d))
    for sigma, sigma_p in permutations(sigmas, 2):
        m = field.matching(sigma)
        m_p = field.matching(sigma_p)
        found = False
        for j_p in sigma_p:
            if j_p in sigma:
                continue
            (i,) = m_p.left_neighbors(j_p)
            (j,) = m.right_neighbors(i)
            swapped = tuple(sorted(set(sigma) - {j} | {j_p}))
            m_s = field.matching(swapped)
            if m_s.difference(m).right_support() == (i,) and m.difference(
                m_s
            ).right_support() == (i,):
                found = True
                break
        if not found:
            return False
    return True


def require_linkage(field: TopeField) -> None:
    report = is_linkage(field)
    if not report.ok:
        first = report.failures[0]
        raise NotLinkageError(first.tau, first.cycle)


# ---------------------------------------------------------------------------
# coherent fields from exact rational weights


def _min_assignment(rows: Sequence[int], weights, columns: Sequence[int]):
    """Unique minimal bijection rows -> columns under exact weights.

    Exhaustive over |rows|! bijections; raises TiedMinimumError if two
    distinct bijections share the minimum.
    """
    best = None
    best_cost = None
    tied = None
    for perm in permutations(columns):
        cost = sum(weights[j - 1][i - 1] for j, i in zip(rows, perm))
        if best_cost is None or cost < best_cost:
            best, best_cost, tied = perm, cost, None
        elif cost == best_cost and perm != best:
            tied = perm
    if tied is not None:
        return best, tied
    return best, None


def coherent_field(weights: Sequence[Sequence]) -> MatchingField:
    """Matching field of the weight-minimal matchings of a generic matrix.

    Weights are exact rationals (or ints); a tie on any subset raises
    TiedMinimumError with the two optimal matchings.
    """
    n = len(weights)
    d = len(weights[0])
    weights = [[Fraction(x) for x in row] for row in weights]
    assignment = {}
    columns = tuple(range(1, d + 1))
    for sigma in core.subsets(n, d):
        best, tied = _min_assignment(sigma, weights, columns)
        if tied is not None:
            first = BipartiteGraph(n, d, list(zip(sigma, best)))
            second = BipartiteGraph(n, d, list(zip(sigma, tied)))
            raise TiedMinimumError(sigma, first, second)
        assignment[sigma] = BipartiteGraph(n, d, list(zip(sigma, best)))
    return MatchingField(n, d, assignment)


def _column_functions(sigma, counts):
    """All maps sigma -> columns hitting column i exactly counts[i] times."""
    if not sigma:
        if all(c == 0 for c in counts):
            yield ()
        return
    j = sigma[0]
    for i, c in enumerate(counts, start=1):
        if c:
            reduced = list(counts)
            reduced[i - 1] -= 1
            for rest in _column_functions(sigma[1:], reduced):
                yield ((j, i),) + rest


def coherent_tope_field(weights: Sequence[Sequence], type_vector: Sequence[int]) -> TopeField:
    """Tope field of the weight-minimal column assignments with multiplicity v.

    Equivalent to duplicating column i of the matrix v_i times and taking the
    coherent matching field of the widened matrix; only the column pattern is
    compared, so copy ties are harmless and within a column the increasing
    convention applies implicitly.
    """
    n = len(weights)
    d = len(weights[0])
    v = tuple(type_vector)
    if any(x < 1 for x in v):
        raise MatchfieldError(f"type vector {v} must be positive")
    k = sum(v)
    if k > n:
        raise MatchfieldError(f"thickness {k} exceeds {n}")
    weights = [[Fraction(x) for x in row] for row in weights]
    assignment = {}
    for sigma in core.subsets(n, k):
        best = None
        best_cost = None
        tied = None
        for func in _column_functions(sigma, v):
            cost = sum(weights[j - 1][i - 1] for j, i in func)
            if best_cost is None or cost < best_cost:
                best, best_cost, tied = func, cost, None
            elif cost == best_cost and set(func) != set(best):
                tied = func
        if tied is not None:
            raise TiedMinimumError(
                sigma, BipartiteGraph(n, d, best), BipartiteGraph(n, d, tied)
            )
        assignment[sigma] = BipartiteGraph(n, d, best)
    return TopeField(n, d, v, assignment)


def increasing_splitting(tf: TopeField) -> MatchingField:
    """Split right node ri into v_i copies; within each tope the neighbours of
    ri go to increasing copies in increasing index order.  Returns an (n, k)
    matching field on the flattened copy nodes."""
    v = tf.type_vector
    k = tf.thickness
    offset = [0]
    for x in v:
        offset.append(offset[-1] + x)
    assignment = {}
    for sigma, tope in tf.items():
        edges = []
        for i in range(1, tf.d + 1):
            for t, j in enumerate(sorted(tope.right_neighbors(i)), start=1):
                edges.append((j, offset[i - 1] + t))
        assignment[sigma] = BipartiteGraph(tf.n, k, edges)
    return MatchingField(tf.n, k, assignment)


def collapse_split_graph(g: BipartiteGraph, type_vector: Sequence[int]) -> BipartiteGraph:
    """Inverse of the splitting on a single graph: merge the copy nodes back."""
    v = tuple(type_vector)
    lookup = {}
    col = 0
    for i, count in enumerate(v, start=1):
        for _ in range(count):
            col += 1
            lookup[col] = i
    return BipartiteGraph(g.n, len(v), [(j, lookup[i]) for j, i in g.edges])


# ---------------------------------------------------------------------------
# amalgamation


def i_amalgamation(tf: TopeField, i: int) -> TopeField:
    """Tope field of type v + e_i extracted from the linkage covectors.

    Each (k+1)-subset must produce a tree; failures raise NotLinkageError with
    the offending tau and a cycle, so non-linkage inputs fail on the first
    union actually touched rather than after a global check.
    """
    if not (1 <= i <= tf.d):
        raise MatchfieldError(f"right index {i} out of range")
    if tf.thickness >= tf.n:
        raise MatchfieldError("tope field already has maximal thickness")
    assignment = {}
    for tau in core.subsets(tf.n, tf.thickness + 1):
        res = linkage_covector(tf, tau)
        if not res.ok:
            raise NotLinkageError(tau, res.cycle)
        assignment[tau] = core.contained_tope(res.graph, i)
    new_type = core.vector_sum(tf.type_vector, core.unit_vector(tf.d, i))
    return TopeField(tf.n, tf.d, new_type, assignment)


def amalgamation_order(d: int, target: Sequence[int], start: Sequence[int]) -> list[int]:
    """Canonical order: for i ascending, repeat i (target_i - start_i) times."""
    order = []
    for i in range(1, d + 1):
        order.extend([i] * (target[i - 1] - start[i - 1]))
    return order


def tope_field_of_type(
    field: TopeField, target: Sequence[int], order: Optional[Sequence[int]] = None
) -> TopeField:
    """Iterated amalgamation from `field` up to the given type vector."""
    target = tuple(target)
    if len(target) != field.d or any(
        t < s for t, s in zip(target, field.type_vector)
    ):
        raise MatchfieldError(f"target {target} not reachable from {field.type_vector}")
    if sum(target) > field.n:
        raise MatchfieldError(f"target {target} exceeds thickness {field.n}")
    if order is None:
        order = amalgamation_order(field.d, target, field.type_vector)
    current = field
    for i in order:
        current = i_amalgamation(current, i)
    if current.type_vector != target:
        raise MatchfieldError(f"order {list(order)} does not reach {target}")
    return current


def maximal_tope(
    field: TopeField, v: Sequence[int], order: Optional[Sequence[int]] = None
) -> BipartiteGraph:
    """The unique maximal tope with right degree vector v compatible with the
    field, built by iterated amalgamation (canonically: ascending i)."""
    v = tuple(v)
    if any(x < 1 for x in v) or sum(v) != field.n:
        raise MatchfieldError(f"target {v} is not positive with sum {field.n}")
    tf = tope_field_of_type(field, v, order)
    return tf.tope(range(1, field.n + 1))


class TopeArrangement:
    """Compatible maximal topes keyed by lattice points of (n-d)*Delta_{d-1}."""

    def __init__(self, n: int, d: int, topes: dict, check: bool = True):
        self.n = n
        self.d = d
        self.topes = {tuple(p): g for p, g in topes.items()}
        if check:
            self.validate()

    def validate(self) -> None:
        points = core.simplex_lattice_points(self.n - self.d, self.d)
        if sorted(self.topes) != points:
            raise MatchfieldError("arrangement keys are not the lattice points")
        ones = core.all_ones(self.d)
        for point, tope in self.topes.items():
            if tope.right_degrees() != core.vector_sum(point, ones):
                raise MatchfieldError(f"tope at {point} has wrong right degrees")
            if tope.left_degrees() != core.all_ones(self.n):
                raise MatchfieldError(f"tope at {point} is not maximal")
        items = sorted(self.topes.items())
        for (p1, t1), (p2, t2) in combinations(items, 2):
            ok, _ = core.is_compatible(t1, t2)
            if not ok:
                raise MatchfieldError(f"topes at {p1} and {p2} are incompatible")
        check_sector_monotonicity(self.topes)

    def tope(self, point: Sequence[int]) -> BipartiteGraph:
        return self.topes[tuple(point)]

    def items(self):
        return sorted(self.topes.items())

    def __eq__(self, other):
        return (
            isinstance(other, TopeArrangement)
            and (self.n, self.d) == (other.n, other.d)
            and self.topes == other.topes
        )

    def __repr__(self):
        return f"<TopeArrangement ({self.n},{self.d}) with {len(self.topes)} topes>"


def check_sector_monotonicity(graphs: dict) -> None:
    """For rdv-adjacent members G at a and H at a + e_p - e_q, the rq-edges of
    H must lie in G and the rp-edges of G must lie in H."""
    for point, g in graphs.items():
        d = len(point)
        for p in range(1, d + 1):
            for q in range(1, d + 1):
                if p == q or point[q - 1] == 0:
                    continue
                shifted = list(point)
                shifted[p - 1] += 1
                shifted[q - 1] -= 1
                h = graphs.get(tuple(shifted))
                if h is None:
                    continue
                for j in h.right_neighbors(q):
                    if (j, q) not in g:
                        raise MatchfieldError(
                            f"sector violation: edge ({j},{q}) of {tuple(shifted)} "
                            f"missing at {point}"
                        )
                for j in g.right_neighbors(p):
                    if (j, p) not in h:
                        raise MatchfieldError(
                            f"sector violation: edge ({j},{p}) of {point} "
                            f"missing at {tuple(shifted)}"
                        )


def tope_arrangement(field: MatchingField) -> TopeArrangement:
    """Maximal tope for every lattice point of (n-d)*Delta_{d-1}."""
    n, d = field.n, field.d
    ones = core.all_ones(d)
    cache: dict[tuple, TopeField] = {ones: field}

    def field_for(target):
        # reuse the canonical-order prefix chain
        if target in cache:
            return cache[target]
        prev = None
        for i in range(d, 0, -1):
            if target[i - 1] > 1:
                prev = list(target)
                prev[i - 1] -= 1
                step = i
                break
        tf = i_amalgamation(field_for(tuple(prev)), step)
        cache[target] = tf
        return tf

    topes = {}
    for point in core.simplex_lattice_points(n - d, d):
        v = core.vector_sum(point, ones)
        topes[point] = field_for(v).tope(range(1, n + 1))
    return TopeArrangement(n, d, topes)


def field_from_arrangement(ta: TopeArrangement) -> MatchingField:
    """Collect the maximal (size d) matchings of the topes; one per d-subset."""
    assignment: dict = {}
    for _, tope in ta.items():
        neighbor_sets = [tope.right_neighbors(i) for i in range(1, ta.d + 1)]
        for choice in _product(neighbor_sets):
            sigma = tuple(sorted(choice))
            m = BipartiteGraph(ta.n, ta.d, list(zip(choice, range(1, ta.d + 1))))
            old = assignment.get(sigma)
            if old is not None and old != m:
                raise MatchfieldError(f"conflicting matchings on {sigma}")
            assignment[sigma] = m
    field = validate_matching_field(ta.n, ta.d, assignment)
    require_linkage(field)
    return field


def _product(pools):
    if not pools:
        yield ()
        return
    for x in pools[0]:
        for rest in _product(pools[1:]):
            yield (x,) + rest


def subfield_delete_left(field: MatchingField, j: int) -> MatchingField:
    """Induced field on L minus lj: keep the subsets avoiding j, relabel."""
    label_map = {old: new for new, old in enumerate(
        [x for x in range(1, field.n + 1) if x != j], start=1
    )}
    assignment = {}
    for sigma, m in field.items():
        if j in sigma:
            continue
        assignment[tuple(label_map[x] for x in sigma)] = m.relabel_left(
            field.n - 1, label_map
        )
    return MatchingField(field.n - 1, field.d, assignment)


def maximal_tope_covectors(field: MatchingField) -> dict[tuple, BipartiteGraph]:
    """Linkage covectors of the thickness n-1 tope fields, keyed by the type.

    These are the trees the maximal topes are extracted from: one covector on
    tau = [n] for every positive type vector of sum n - 1.
    """
    n, d = field.n, field.d
    out = {}
    if n - 1 < d:
        return out
    for point in core.simplex_lattice_points(n - 1 - d, d):
        v = core.vector_sum(point, core.all_ones(d))
        tf = tope_field_of_type(field, v)
        res = linkage_covector(tf, range(1, n + 1))
        if not res.ok:
            raise NotLinkageError(res.tau, res.cycle)
        out[v] = res.graph
    return out


# ---------------------------------------------------------------------------
# extended arrangements and trianguloid axioms


class ExtendedTopeArrangement:
    """One graph per lattice point of n*Delta_{d-1}; boundary points carry
    isolated right nodes."""

    def __init__(self, n: int, d: int, graphs: dict):
        self.n = n
        self.d = d
        self.graphs = {tuple(p): g for p, g in graphs.items()}
        points = core.simplex_lattice_points(n, d)
        if sorted(self.graphs) != points:
            raise MatchfieldError("extended arrangement must cover all lattice points")

    def graph(self, point: Sequence[int]) -> BipartiteGraph:
        return self.graphs[tuple(point)]

    def items(self):
        return sorted(self.graphs.items())


@dataclass(frozen=True)
class AxiomResult:
    ok: bool
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class TrianguloidReport:
    right_degrees: AxiomResult  # T1
    left_cover: AxiomResult  # T2
    sector_inclusion: AxiomResult  # T3
    hexagon: AxiomResult  # T4

    @property
    def pre_trianguloid(self) -> bool:
        return self.right_degrees.ok and self.left_cover.ok and self.sector_inclusion.ok

    @property
    def trianguloid(self) -> bool:
        return self.pre_trianguloid and self.hexagon.ok

    def as_dict(self) -> dict:
        def one(res):
            return {"ok": res.ok, "witness": _jsonable(res.witness)}

        return {
            "T1": one(self.right_degrees),
            "T2": one(self.left_cover),
            "T3": one(self.sector_inclusion),
            "T4": one(self.hexagon),
        }


def _jsonable(x):
    if x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, frozenset):
        return sorted(x)
    if isinstance(x, BipartiteGraph):
        return [list(e) for e in x.edges]
    return repr(x)


def trianguloid_check(eta: ExtendedTopeArrangement) -> TrianguloidReport:
    """Evaluate the four trianguloid axioms, reporting the first violation of
    each.  T4 (hexagon): whenever the graphs at c+ei+ej and c+ej+ek disagree
    on the neighbourhood of rj, the graphs at c+ei+ej and c+ei+ek must agree
    on ri and those at c+ei+ek and c+ej+ek must agree on rk."""
    n, d = eta.n, eta.d

    t1 = AxiomResult(True)
    for point, g in eta.items():
        if g.right_degrees() != point:
            t1 = AxiomResult(False, (point, g))
            break

    t2 = AxiomResult(True)
    for point, g in eta.items():
        if any(deg == 0 for deg in g.left_degrees()):
            t2 = AxiomResult(False, (point, g))
            break

    t3 = AxiomResult(True)
    try:
        check_sector_monotonicity(eta.graphs)
    except MatchfieldError as exc:
        t3 = AxiomResult(False, (str(exc),))

    t4 = AxiomResult(True)
    ones = core.all_ones(d)
    units = [core.unit_vector(d, i) for i in range(1, d + 1)]

    def nb(point, r):
        return set(eta.graph(point).right_neighbors(r))

    for c in core.simplex_lattice_points(n - 2, d) if n >= 2 else []:
        for i, j, k in permutations(range(1, d + 1), 3):
            a_ij = core.vector_sum(c, core.vector_sum(units[i - 1], units[j - 1]))
            a_jk = core.vector_sum(c, core.vector_sum(units[j - 1], units[k - 1]))
            a_ik = core.vector_sum(c, core.vector_sum(units[i - 1], units[k - 1]))
            if nb(a_ij, j) == nb(a_jk, j):
                continue
            if nb(a_ij, i) != nb(a_ik, i) or nb(a_ik, k) != nb(a_jk, k):
                t4 = AxiomResult(False, (c, frozenset((i, j, k))))
                break
        if not t4.ok:
            break
    return TrianguloidReport(t1, t2, t3, t4)


def extended_arrangement_by_stripping(
    field: MatchingField, dummy_edges: Iterable[tuple[int, int]]
) -> ExtendedTopeArrangement:
    """Extended arrangement recovered from a pointed field.

    The field must be a completion: every maximal tope contains the given
    dummy matching (one left node per right node).  Stripping it and
    relabelling the remaining left nodes yields the extended arrangement
    whose completion is the field's own tope arrangement.
    """
    dummy = sorted(dummy_edges)
    if [i for _, i in dummy] != list(range(1, field.d + 1)):
        raise MatchfieldError("dummy edges must cover each right node once")
    dummy_left = {j for j, _ in dummy}
    if len(dummy_left) != field.d:
        raise MatchfieldError("dummy left nodes must be distinct")
    keep = [j for j in range(1, field.n + 1) if j not in dummy_left]
    label_map = {old: new for new, old in enumerate(keep, start=1)}
    m = field.n - field.d
    graphs = {}
    ones = core.all_ones(field.d)
    for point in core.simplex_lattice_points(m, field.d):
        tope = maximal_tope(field, core.vector_sum(point, ones))
        stripped = tope.without_edges(dummy)
        if len(stripped) != len(tope) - field.d:
            raise MatchfieldError(
                f"maximal tope at {point} does not contain the dummy matching"
            )
        if set(stripped.left_support()) - set(keep):
            raise MatchfieldError("dummy left nodes carry extra edges")
        graphs[point] = stripped.relabel_left(m, label_map)
    return ExtendedTopeArrangement(m, field.d, graphs)


# ---------------------------------------------------------------------------
# serialization


def field_to_json_dict(field: TopeField) -> dict:
    data = {
        "n": field.n,
        "d": field.d,
        "matchings": {
            core.subset_key(sigma): [list(e) for e in g.edges]
            for sigma, g in field.items()
        },
    }
    if field.type_vector != core.all_ones(field.d):
        data["type"] = list(field.type_vector)
    return data


def field_from_json_dict(data: dict) -> TopeField:
    n, d = data["n"], data["d"]
    assignment = {
        core.parse_subset_key(key): BipartiteGraph(n, d, [tuple(e) for e in edges])
        for key, edges in data["matchings"].items()
    }
    if "type" in data and tuple(data["type"]) != core.all_ones(d):
        return validate_tope_field(n, d, tuple(data["type"]), assignment)
    return validate_matching_field(n, d, assignment)


def arrangement_to_json_dict(ta: TopeArrangement) -> dict:
    return {
        "n": ta.n,
        "d": ta.d,
        "topes": {
            core.subset_key(point): [list(e) for e in g.edges] for point, g in ta.items()
        },
    }


def arrangement_from_json_dict(data: dict) -> TopeArrangement:
    n, d = data["n"], data["d"]
    topes = {
        core.parse_subset_key(key): BipartiteGraph(n, d, [tuple(e) for e in edges])
        for key, edges in data["topes"].items()
    }
    return TopeArrangement(n, d, topes)


def extended_to_json_dict(eta: ExtendedTopeArrangement) -> dict:
    return {
        "n": eta.n,
        "d": eta.d,
        "graphs": {
            core.subset_key(point): [list(e) for e in g.edges] for point, g in eta.items()
        },
    }


def extended_from_json_dict(data: dict) -> ExtendedTopeArrangement:
    n, d = data["n"], data["d"]
    graphs = {
        core.parse_subset_key(key): BipartiteGraph(n, d, [tuple(e) for e in edges])
        for key, edges in data["graphs"].items()
    }
    return ExtendedTopeArrangement(n, d, graphs)
