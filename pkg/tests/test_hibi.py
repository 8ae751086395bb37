from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toric_loci.cone import face_lattice
from toric_loci.errors import InputError, ResourceError
from toric_loci.gorenstein import non_gorenstein_locus
from toric_loci.hibi import (
    build_cone,
    complete_subsets,
    component_face,
    dist,
    face_from_quotient,
    formula_locus_report,
    ideal_vector,
    is_graded,
    locus_dimension,
    make_quotient,
    minimal_nongraded_complete,
    mp_locus_dimension,
    mp_tuple_satisfies,
    order_polytope_edges,
    quotient_from_face,
    rank,
    satisfying_tuples,
)
from toric_loci.posets import BOTTOM, TOP, Poset, random_poset

CHAIN_PLUS_POINT = Poset(["p1", "p2", "p3"], [("p2", "p1")])
BOWTIE = Poset(list("abcde"), [("a", "b"), ("b", "c"), ("c", "e"), ("a", "d"), ("d", "e")])
CHAIN2 = Poset(["a", "b"], [("a", "b")])


def random_posets(max_n=6):
    return st.tuples(st.integers(0, max_n), st.randoms(use_true_random=False)).map(
        lambda t: random_poset(t[0], random.Random(t[1].random()))
    )


# -- oracles ---------------------------------------------------------------

def brute_complete(P: Poset) -> set[frozenset]:
    bar = P.bar
    E = bar.elements
    out = set()
    for r in range(2, len(E) + 1):
        for S in itertools.combinations(E, r):
            S = set(S)
            convex = all(c in S for a in S for b in S for c in E if bar.leq(a, c) and bar.leq(c, b))
            # connected through comparabilities inside S
            seen, todo = set(), [next(iter(S))]
            while todo:
                x = todo.pop()
                if x in seen:
                    continue
                seen.add(x)
                todo += [y for y in S if y not in seen and bar.comparable(x, y)]
            if convex and seen == S:
                out.add(frozenset(S))
    return out


def brute_graded(poset: Poset, subset) -> bool:
    """Solve psi(a) - psi(b) = 1 over the covers of the induced order by linear algebra."""
    S = list(subset)
    idx = {x: i for i, x in enumerate(S)}
    rows = []
    for a in S:
        for b in S:
            if poset.lt(a, b) and not any(poset.lt(a, c) and poset.lt(c, b) for c in S):
                r = [0] * len(S)
                r[idx[a]], r[idx[b]] = 1, -1
                rows.append(r)
    if not rows:
        return True
    M = np.array(rows, dtype=float)
    Mb = np.hstack([M, np.ones((len(rows), 1))])
    return np.linalg.matrix_rank(M) == np.linalg.matrix_rank(Mb)


def saturated_chain_lengths(P: Poset, a, b) -> list[int]:
    bar = P.bar
    covers = {}
    for x, y in bar.covers:
        covers.setdefault(x, []).append(y)

    def walk(x):
        if x == b:
            return [0]
        return [1 + n for y in covers.get(x, []) if bar.leq(y, b) for n in walk(y)]

    return walk(a)


# -- posets ------------------------------------------------------------------

def test_poset_validation():
    with pytest.raises(InputError):
        Poset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(InputError):
        Poset(["a"], [("a", "z")])
    with pytest.raises(InputError):
        Poset(["a", "a"])
    with pytest.raises(InputError):
        Poset([TOP])


def test_bar_and_covers():
    bar = CHAIN_PLUS_POINT.bar
    assert bar.elements == (BOTTOM, "p1", "p2", "p3", TOP)
    assert set(bar.covers) == {(BOTTOM, "p2"), ("p2", "p1"), ("p1", TOP), (BOTTOM, "p3"), ("p3", TOP)}


# -- the cone ------------------------------------------------------------------

def test_chain_plus_point_cone():
    c = build_cone(CHAIN_PLUS_POINT)
    assert len(c.facet_normals) == 5 and len(c.rays) == 6
    counts = [len(face_lattice(c).of_dimension(k)) for k in range(5)]
    assert counts == [1, 6, 9, 5, 1]
    assert ideal_vector(CHAIN_PLUS_POINT, ["p2"]) in c.rays
    with pytest.raises(InputError):
        ideal_vector(CHAIN_PLUS_POINT, ["p1"])


def test_quotient_face_round_trip():
    for P in [CHAIN_PLUS_POINT, BOWTIE, CHAIN2, Poset(["x", "y"])]:
        for f in face_lattice(build_cone(P)).faces:
            q = quotient_from_face(P, f)
            assert len(q.blocks) == f.dimension + 1
            assert face_from_quotient(P, q) == f
            complete = {A.members for A in complete_subsets(P)}
            assert all(len(b) < 2 or b in complete for b in q.blocks)


def test_bad_quotients_rejected():
    with pytest.raises(InputError):
        # {-inf, inf} is not convex
        make_quotient(CHAIN_PLUS_POINT, [[BOTTOM, TOP], ["p1"], ["p2"], ["p3"]])
    with pytest.raises(InputError):
        make_quotient(CHAIN_PLUS_POINT, [[BOTTOM], ["p1", "p3"], ["p2"], [TOP]])  # not connected
    with pytest.raises(InputError):
        make_quotient(CHAIN_PLUS_POINT, [[BOTTOM, "p2"], ["p2", "p1"], ["p3", TOP]])  # overlap
    q = make_quotient(CHAIN_PLUS_POINT, [[BOTTOM], ["p1", "p2", "p3", TOP]])
    assert face_from_quotient(CHAIN_PLUS_POINT, q).dimension == 1


def test_edges_match_face_lattice():
    for P in [CHAIN_PLUS_POINT, BOWTIE, Poset(list("abc"))]:
        e = sorted(f.active_normals for f, _ in order_polytope_edges(P))
        assert e == sorted(f.active_normals for f in face_lattice(build_cone(P)).of_dimension(2))


# -- complete subsets and grading -----------------------------------------------

def test_complete_subset_counts():
    assert len(complete_subsets(CHAIN2)) == 6
    # {-inf, a}, {a, inf}, {-inf, a, inf}
    assert len(complete_subsets(Poset(["a"]))) == 3


@given(random_posets(5))
def test_complete_subsets_brute_force(P):
    assert {A.members for A in complete_subsets(P)} == brute_complete(P)


@given(random_posets(6))
def test_grading_by_linear_algebra(P):
    bar = P.bar
    assert is_graded(bar) == brute_graded(bar, bar.elements)
    for A in complete_subsets(P)[:40]:
        assert is_graded(bar, A.members) == brute_graded(bar, A.members)


def test_grading_examples():
    assert is_graded(Poset(list("abcd"), [("a", "b"), ("b", "c"), ("c", "d")]))
    assert not is_graded(CHAIN_PLUS_POINT.bar)
    assert not is_graded(BOWTIE)


def test_minimal_nongraded_examples():
    assert [A.members for A in minimal_nongraded_complete(CHAIN_PLUS_POINT)] == [frozenset(CHAIN_PLUS_POINT.bar.elements)]
    assert [A.members for A in minimal_nongraded_complete(BOWTIE)] == [frozenset("abcde")]
    assert minimal_nongraded_complete(Poset(list("ab"), [("a", "b")])) == []
    assert locus_dimension(CHAIN_PLUS_POINT) == 0
    assert locus_dimension(BOWTIE) == 2


def test_component_face_dimension():
    A = minimal_nongraded_complete(BOWTIE)[0]
    f = component_face(BOWTIE, A)
    assert f.dimension == len(BOWTIE) - len(A) + 2


def test_cap():
    with pytest.raises(ResourceError):
        complete_subsets(CHAIN_PLUS_POINT, cap=4)
    with pytest.raises(ResourceError):
        satisfying_tuples(Poset([f"x{i}" for i in range(9)]))


# -- rank, dist, tuples ------------------------------------------------------------

def test_rank_dist_chain_plus_point():
    assert rank(CHAIN_PLUS_POINT, BOTTOM, TOP) == 3
    assert dist(CHAIN_PLUS_POINT, BOTTOM, TOP) == 2
    with pytest.raises(InputError):
        rank(CHAIN_PLUS_POINT, "p1", "p3")


@given(random_posets(5))
def test_rank_dist_brute_force(P):
    bar = P.bar
    for a in bar.elements:
        for b in bar.elements:
            if bar.leq(a, b):
                lens = saturated_chain_lengths(P, a, b)
                assert rank(P, a, b) == max(lens)
                assert dist(P, a, b) == min(lens)


def test_single_pair_tuple():
    assert mp_tuple_satisfies(CHAIN_PLUS_POINT, [BOTTOM], [TOP])
    assert not mp_tuple_satisfies(CHAIN_PLUS_POINT, ["p2"], ["p1"])
    with pytest.raises(InputError):
        mp_tuple_satisfies(CHAIN_PLUS_POINT, ["p2"], ["p2"])


@given(random_posets(4))
def test_satisfying_tuples_brute_force(P):
    bar = P.bar
    E = bar.elements
    want = set()
    for u in range(1, len(E) // 2 + 1):
        for seq in itertools.permutations(E, 2 * u):
            a, b = list(seq[0::2]), list(seq[1::2])
            if min(E.index(x) for x in a) != E.index(a[0]):
                continue
            if all(bar.lt(a[i], b[i]) and bar.lt(a[(i + 1) % u], b[i]) for i in range(u)):
                if mp_tuple_satisfies(P, a, b):
                    want.add((tuple(a), tuple(b)))
    assert set(satisfying_tuples(P)) == want


@given(random_posets(6))
def test_three_routes_agree(P):
    formula = formula_locus_report(P)
    pipeline = non_gorenstein_locus(build_cone(P))
    assert formula.locus_dimension == pipeline.locus_dimension
    assert [f.active_normals for f in formula.maximal_contributing_faces] == [
        f.active_normals for f in pipeline.maximal_contributing_faces
    ]
    assert mp_locus_dimension(P) == pipeline.locus_dimension
    assert (pipeline.locus_dimension is None) == P.is_pure()
