"""The ten acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line (shown in the pytest terminal
summary and printed to stdout).  Run ``python3 tests/test_acceptance.py`` to
get just the ten lines.
"""
from __future__ import annotations

import functools
import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from _corpus import ACCEPTANCE_LINES, poset_corpus, segre_sweep, spec_gorenstein
from toric_loci.cone import Cone, face_lattice
from toric_loci.gorenstein import (
    contributing_flags,
    default_height,
    f_one,
    in_radical,
    non_gorenstein_locus,
    trace_generators_bounded,
)
from toric_loci.hibi import (
    build_cone,
    locus_dimension,
    mp_locus_dimension,
    order_polytope_edges,
    order_polytope_vertices,
    quotient_from_face,
    radical_member_mp,
)
from toric_loci.lattice import IntegerMatrix, determinant, dot, hnf, solve_affine_lattice
from toric_loci.posets import BOTTOM, TOP, Poset
from toric_loci.segre import analyze_secant, closed_form_dimension

# fibres (top, middle, bottom) of the nine edges of Q(P) for p2 < p1, p3 isolated
CHAIN_PLUS_POINT_TABLE = [
    ({TOP, "p1", "p2"}, {"p3"}, {BOTTOM}),
    ({TOP, "p1", "p3"}, {"p2"}, {BOTTOM}),
    ({TOP, "p3"}, {"p1", "p2"}, {BOTTOM}),
    ({"p1", TOP}, {"p2"}, {"p3", BOTTOM}),
    ({TOP}, {"p1", "p2"}, {"p3", BOTTOM}),
    ({"p1", TOP}, {"p3"}, {"p2", BOTTOM}),
    ({"p3", TOP}, {"p1"}, {"p2", BOTTOM}),
    ({TOP}, {"p1"}, {"p3", "p2", BOTTOM}),
    ({TOP}, {"p3"}, {"p1", "p2", BOTTOM}),
]


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)


def _dim(d):
    return -1 if d is None else d


# -- cached corpus computations -------------------------------------------

@functools.lru_cache(maxsize=None)
def poset_results(P: Poset) -> tuple:
    cone = build_cone(P)
    return locus_dimension(P), non_gorenstein_locus(cone).locus_dimension


def planar_wide_cone() -> Cone:
    return Cone.from_generators([(2, 1), (-2, 1)], 2)


@functools.lru_cache(maxsize=None)
def secant_analyses() -> dict:
    return {k: analyze_secant(k) for k in segre_sweep()}


# -- criteria -------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    c = planar_wide_cone()
    zero = c.zero_face
    sl = f_one(c, zero)
    problems = []
    if sorted(c.facet_normals) != [(-1, 2), (1, 2)]:
        problems.append(f"facet normals {c.facet_normals}")
    if sl.rational_point() != (Fraction(0), Fraction(1, 2)):
        problems.append(f"rational point {sl.rational_point()}")
    if solve_affine_lattice(sl.equations, sl.rhs) is not None:
        problems.append("F[1] has a lattice point")
    rep = non_gorenstein_locus(c)
    if rep.locus_dimension != 0 or [f.dimension for f in rep.maximal_contributing_faces] != [0]:
        problems.append(f"locus {rep}")
    dt = time.perf_counter() - t0
    ok = not problems and dt < 1
    return ok, f"planar cone, zero face: F[1] = (0, 1/2), no lattice point, locus dim {rep.locus_dimension} ({dt:.3f}s) {problems or ''}"


def criterion_2():
    t0 = time.perf_counter()
    P = Poset(["p1", "p2", "p3"], [("p2", "p1")])
    edges = face_lattice(build_cone(P)).of_dimension(2)  # 1-dim faces of Q(P)
    got = sorted(sorted(map(sorted, quotient_from_face(P, f).blocks)) for f in edges)
    want = sorted(sorted(map(sorted, row)) for row in CHAIN_PLUS_POINT_TABLE)
    also = sorted(sorted(map(sorted, q.blocks)) for _, q in order_polytope_edges(P))
    dt = time.perf_counter() - t0
    ok = len(edges) == 9 and got == want and also == want and dt < 1
    return ok, f"p2 < p1 plus p3: {len(edges)} edges of Q(P), fibre table {'matches' if got == want else 'differs'} ({dt:.3f}s)"


def criterion_3():
    t0 = time.perf_counter()
    corpus = poset_corpus()
    bad = [P for P in corpus if (poset_results(P)[1] is None) != P.is_pure()]
    dt = time.perf_counter() - t0
    return not bad and dt < 300, f"Gorenstein iff pure: {len(corpus)} posets, {len(bad)} mismatches ({dt:.1f}s)"


def criterion_4():
    t0 = time.perf_counter()
    corpus = poset_corpus()
    bad = []
    radical_checked = 0
    for P in corpus:
        formula, pipeline = poset_results(P)
        if formula != pipeline:
            bad.append((P, "formula", formula, pipeline))
            continue
        if len(P) <= 5:
            cone = build_cone(P)
            rep = non_gorenstein_locus(cone)
            for v in order_polytope_vertices(P):
                radical_checked += 1
                if radical_member_mp(P, v) != in_radical(cone, v, rep):
                    bad.append((P, "radical", v))
            if mp_locus_dimension(P) != pipeline:
                bad.append((P, "tuple dimension", mp_locus_dimension(P), pipeline))
    dt = time.perf_counter() - t0
    return not bad and dt < 600, (
        f"formula = cone pipeline = tuple test: {len(corpus)} posets, "
        f"{radical_checked} vertex memberships, {len(bad)} mismatches ({dt:.1f}s) {bad[:3] or ''}"
    )


def criterion_5():
    corpus = poset_corpus()
    checked = 0
    bad = []
    for P in corpus:
        d = poset_results(P)[1]
        if d is not None:
            checked += 1
            if len(P) + 1 - d < 4:
                bad.append(P)
    return not bad, f"codimension >= 4: {checked} non-Gorenstein posets, {len(bad)} violations"


def criterion_6():
    corpus = poset_corpus()
    bad = []
    for P in corpus:
        d = poset_results(P)[1]
        comps_pure = all(P.induced(c).is_pure() for c in P.components())
        if (_dim(d) <= 0) != comps_pure:
            bad.append(P)
    return not bad, f"dim <= 0 iff components pure: {len(corpus)} posets, {len(bad)} mismatches"


def criterion_7():
    t0 = time.perf_counter()
    res = secant_analyses()
    dim_bad = [(k, a.report.locus_dimension, a.closed_form) for k, a in res.items() if not a.match]
    list_bad = [k for k, a in res.items() if a.report.gorenstein != spec_gorenstein(k)]
    formula_bad = [k for k in res if (closed_form_dimension(k) is None) != spec_gorenstein(k)]
    dt = time.perf_counter() - t0
    ok = not dim_bad and not list_bad and not formula_bad and dt < 600
    return ok, (
        f"Segre secants: {len(res)} cases, Gorenstein list mismatches {len(list_bad) + len(formula_bad)}, "
        f"dimension mismatches {len(dim_bad)} ({dt:.1f}s) "
        + (" ".join(f"{k}:{c}!={f}" for k, c, f in dim_bad) if dim_bad else "")
    )


def _criterion_cones() -> list[Cone]:
    cones = [planar_wide_cone()]
    cones += [build_cone(P) for P in poset_corpus()]
    cones.append(build_cone(Poset(["p1", "p2", "p3"], [("p2", "p1")])))
    cones += [a.working_cone for a in secant_analyses().values()]
    return cones


def criterion_8():
    t0 = time.perf_counter()
    pairs = violations = 0
    cones = list(dict.fromkeys(_criterion_cones()))
    for c in cones:
        lat = face_lattice(c)
        flags = contributing_flags(c, exhaustive=True)
        for i, ups in enumerate(lat.upper_covers):
            for j in ups:
                pairs += 1
                if flags[j] and not flags[i]:
                    violations += 1
    dt = time.perf_counter() - t0
    return violations == 0, f"contribution inherited by subfaces: {len(cones)} cones, {pairs} cover pairs, {violations} violations ({dt:.1f}s)"


def criterion_9():
    t0 = time.perf_counter()
    cones = [c for c in dict.fromkeys(_criterion_cones()) if c.ambient_rank <= 5]
    violations = []
    n_gens = 0
    for c in cones:
        ell = default_height(c)
        bound = 4 * max(dot(ell, r) for r in c.rays)
        rep = non_gorenstein_locus(c)
        gens = trace_generators_bounded(c, bound)
        n_gens += len(gens)
        for m in gens:
            if not in_radical(c, m, rep):
                violations.append((c, m))
        if rep.gorenstein and not any(not any(m.exponent) for m in gens):
            violations.append((c, "zero exponent missing"))
    dt = time.perf_counter() - t0
    return not violations, f"trace generators in the radical: {len(cones)} cones, {n_gens} generators, {len(violations)} violations ({dt:.1f}s)"


def _minors_gcd(rows, r):
    m, n = len(rows), len(rows[0])
    g = 0
    for I in itertools.combinations(range(m), r):
        for J in itertools.combinations(range(n), r):
            g = np.gcd(g, abs(_perm_det([[rows[i][j] for j in J] for i in I])))
    return int(g)


def _perm_det(M) -> int:
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        p = 1
        for i in range(n):
            p *= M[i][perm[i]]
        total += -p if inv % 2 else p
    return total


def _qrank(rows) -> int:
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float))) if rows and rows[0] else 0


def criterion_10():
    t0 = time.perf_counter()
    rng = random.Random(7)
    hnf_bad = 0
    for _ in range(1000):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        H, U = hnf(A)
        if (IntegerMatrix.from_rows(A, n) @ U) != H or abs(determinant(U)) != 1:
            hnf_bad += 1
    R = 6
    dio_bad = 0
    for _ in range(1000):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
        if rng.random() < 0.5:
            x0 = [rng.randint(-3, 3) for _ in range(n)]
            b = [sum(a * x for a, x in zip(row, x0)) for row in A]
        else:
            b = [rng.randint(-8, 8) for _ in range(m)]
        sol = solve_affine_lattice(A, b)
        An = np.array(A)
        grid = np.array(list(itertools.product(range(-R, R + 1), repeat=n)))
        box = grid[np.all(grid @ An.T == np.array(b), axis=1)]
        # determinantal divisor criterion: rank and gcd of top minors agree
        r = _qrank(A)
        Ab = [row + [bi] for row, bi in zip(A, b)]
        rb = _qrank(Ab)
        exact = r == rb and (r == 0 or _minors_gcd(A, r) == _minors_gcd(Ab, r))
        if len(box) and sol is None:
            dio_bad += 1
        elif (sol is not None) != exact:
            dio_bad += 1
        elif sol is not None:
            if [sum(a * x for a, x in zip(row, sol.witness)) for row in A] != b:
                dio_bad += 1
            elif any(any(sum(a * x for a, x in zip(row, k)) for row in A) for k in sol.kernel_basis):
                dio_bad += 1
            elif not all(sol.contains(tuple(int(v) for v in p)) for p in box):
                dio_bad += 1
            elif not sol.kernel_basis and max(map(abs, sol.witness)) <= R and not len(box):
                dio_bad += 1
    dt = time.perf_counter() - t0
    ok = hnf_bad == 0 and dio_bad == 0 and dt < 60
    return ok, f"lattice algebra: 1000 HNF ({hnf_bad} bad), 1000 Diophantine systems ({dio_bad} mismatches) ({dt:.1f}s)"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_acceptance_criterion(n):
    ok, detail = CRITERIA[n]()
    record(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        record(n, *CRITERIA[n]())
