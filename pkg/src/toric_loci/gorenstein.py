"""Non-Gorenstein loci of affine normal toric varieties.

Throughout, ``sigma_dual`` is the cone whose lattice points are the exponents
of the toric ring ``k[sigma_dual & M]``.  Its primitive facet normals are the
ray generators ``u_rho`` of the paired cone ``sigma``.

For a face ``F`` of ``sigma_dual`` the affine slice ``F[1]`` is cut out by
``<u_rho, x> = 1`` for every ``u_rho`` vanishing on ``F``.  The graded prime
of ``F`` contains the trace ideal of the canonical module exactly when that
slice has no lattice point; such faces are called *contributing* here.  The
non-Gorenstein locus is the union of the orbit closures of contributing
faces, so its components are the maximal contributing faces.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cone import Cone, Face, _double_description, face_lattice
from .errors import InputError
from .lattice import (
    AffineLatticeSolution,
    IntegerMatrix,
    LatticeVector,
    dot,
    has_integer_solution,
    rational_solve,
    solve_affine_lattice,
    vector,
)


@dataclass(frozen=True)
class AffineSlice:
    """The system ``<u_rho, x> = 1`` over the ray generators vanishing on a face."""

    equations: IntegerMatrix
    rhs: LatticeVector

    def lattice_points(self) -> AffineLatticeSolution | None:
        return solve_affine_lattice(self.equations, self.rhs)

    def has_lattice_point(self) -> bool:
        return has_integer_solution(self.equations, self.rhs)

    def rational_point(self) -> tuple[Fraction, ...] | None:
        return rational_solve(self.equations, self.rhs)


@dataclass(frozen=True)
class Monomial:
    exponent: LatticeVector


@dataclass(frozen=True)
class LocusReport:
    gorenstein: bool
    maximal_contributing_faces: tuple[Face, ...]
    locus_dimension: int | None
    gorenstein_on_punctured_spectrum: bool

    @classmethod
    def from_faces(cls, maximal: Iterable[Face]) -> "LocusReport":
        maximal = tuple(sorted(maximal, key=Face.sort_key))
        dim = max((f.dimension for f in maximal), default=None)
        return cls(not maximal, maximal, dim, dim is None or dim <= 0)

    def to_json(self) -> dict:
        return {
            "gorenstein": self.gorenstein,
            "locus_dimension": self.locus_dimension,
            "punctured_spectrum_gorenstein": self.gorenstein_on_punctured_spectrum,
            "maximal_faces": [
                {"active_normals": list(f.active_normals), "dimension": f.dimension}
                for f in self.maximal_contributing_faces
            ],
        }


def _check_pair(sigma_dual: Cone, face: Face | None = None) -> None:
    if not sigma_dual.is_full_dimensional:
        raise InputError(
            "the paired cone sigma is not pointed (sigma_dual is not full-dimensional); "
            "restrict sigma_dual to its span lattice first"
        )
    if face is not None and face.cone != sigma_dual:
        raise InputError("face does not belong to the given cone")


def f_one(sigma_dual: Cone, face: Face) -> AffineSlice:
    _check_pair(sigma_dual, face)
    rows = tuple(sigma_dual.facet_normals[j] for j in face.active_normals)
    return AffineSlice(IntegerMatrix(rows, sigma_dual.ambient_rank), (1,) * len(rows))


def face_contributes(sigma_dual: Cone, face: Face) -> bool:
    """True iff ``F[1]`` has no lattice point (the face lies in the locus)."""
    return not f_one(sigma_dual, face).has_lattice_point()


def contributing_flags(sigma_dual: Cone, exhaustive: bool = False) -> list[bool]:
    """Contribution flag of every face of ``face_lattice(sigma_dual)``.

    Contribution is inherited by subfaces (more equations, smaller slice), so
    faces are visited by increasing dimension and a face with a
    non-contributing facet is marked non-contributing without solving.
    ``exhaustive=True`` solves every face instead.
    """
    _check_pair(sigma_dual)
    lat = face_lattice(sigma_dual)
    low = lat.lower_covers
    flags: list[bool] = [False] * len(lat.faces)
    for i, f in enumerate(lat.faces):
        if not exhaustive and any(not flags[j] for j in low[i]):
            continue
        flags[i] = face_contributes(sigma_dual, f)
    return flags


def non_gorenstein_locus(sigma_dual: Cone) -> LocusReport:
    lat = face_lattice(sigma_dual)
    flags = contributing_flags(sigma_dual)
    maximal = [
        f for i, f in enumerate(lat.faces) if flags[i] and not any(flags[j] for j in lat.upper_covers[i])
    ]
    return LocusReport.from_faces(maximal)


def gorenstein_at_cone(sigma_rays: Iterable[Sequence[int]]) -> bool:
    """Is the orbit of ``sigma`` outside the locus?

    Equivalent to some ``m`` in ``M`` with ``<u_rho, m> = 1`` for every ray.
    """
    rays = [vector(r) for r in sigma_rays]
    if not rays:
        return True
    for r in rays:
        if not any(r):
            raise InputError("ray generators must be nonzero")
    return has_integer_solution(rays, [1] * len(rays))


def default_height(sigma_dual: Cone) -> LatticeVector:
    """Sum of the ray generators of ``sigma``; strictly positive on ``sigma_dual \\ 0``."""
    d = sigma_dual.ambient_rank
    return tuple(sum(n[i] for n in sigma_dual.facet_normals) for i in range(d))


def _polytope_box(A: Sequence[Sequence[int]], c: Sequence[int], dim: int) -> list[tuple[int, int]] | None:
    """Integer bounding box of the bounded polyhedron ``{x : A x >= c}``.

    Vertices come from the homogenised cone ``{(x, t) : A x - c t >= 0, t >= 0}``.
    Returns ``None`` if the polyhedron is empty.
    """
    hom = [tuple(a) + (-ci,) for a, ci in zip(A, c)] + [(0,) * dim + (1,)]
    rays, lin = _double_description(hom, dim + 1)
    if lin:
        raise InputError("polyhedron is unbounded")
    verts = []
    for r in rays:
        if r[-1] == 0:
            raise InputError("polyhedron is unbounded")
        verts.append([Fraction(x, r[-1]) for x in r[:-1]])
    if not verts:
        return None
    return [(math.ceil(min(v[i] for v in verts)), math.floor(max(v[i] for v in verts))) for i in range(dim)]


def bounded_lattice_points(A: Sequence[Sequence[int]], c: Sequence[int], dim: int, chunk: int = 1 << 18) -> list[LatticeVector]:
    """Lattice points of the bounded polyhedron ``{x : A x >= c}`` by box scan."""
    box = _polytope_box(A, c, dim)
    if box is None or any(lo > hi for lo, hi in box):
        return []
    An = np.array(A, dtype=np.int64).reshape(len(A), dim)
    cn = np.array(c, dtype=np.int64)
    axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in box]
    out: list[LatticeVector] = []
    # scan the first coordinates in Python, the rest vectorised
    split = 0
    size = 1
    for k in range(dim - 1, -1, -1):
        if size * len(axes[k]) > chunk:
            split = k + 1
            break
        size *= len(axes[k])
    tail = np.stack(np.meshgrid(*axes[split:], indexing="ij"), -1).reshape(-1, dim - split) if split < dim else np.zeros((1, 0), np.int64)
    for head in itertools.product(*(a.tolist() for a in axes[:split])):
        pts = np.concatenate([np.broadcast_to(np.array(head, np.int64), (len(tail), split)), tail], axis=1)
        ok = np.all(pts @ An.T >= cn, axis=1)
        out.extend(tuple(int(x) for x in p) for p in pts[ok])
    return out


def trace_generators_bounded(sigma_dual: Cone, bound: int, height: Sequence[int] | None = None) -> list[Monomial]:
    """Exponents ``m + m'`` with ``m`` in ``P_K``, ``m'`` in ``P_{-K}``, height ``<= bound``.

    ``P_K`` (all ``<u_rho, x> >= 1``) and ``P_{-K}`` (all ``>= -1``) hold the
    exponents of the canonical module and its dual.  The height is measured
    by ``height`` (default :func:`default_height`), which must be strictly
    positive on ``sigma_dual \\ 0``.  The output is a (possibly incomplete)
    set of monomials of the trace ideal, sorted by height then exponent.
    """
    if isinstance(bound, bool) or not isinstance(bound, int) or bound < 1:
        raise InputError("trace bound must be an integer >= 1")
    _check_pair(sigma_dual)
    if not sigma_dual.is_pointed:
        raise InputError("trace enumeration needs sigma full-dimensional (sigma_dual pointed)")
    d = sigma_dual.ambient_rank
    ell = tuple(height) if height is not None else default_height(sigma_dual)
    if any(dot(ell, r) <= 0 for r in sigma_dual.rays):
        raise InputError("height functional must be positive on every ray of sigma_dual")
    U = list(sigma_dual.facet_normals)
    # <ell, m> >= min over P_K, <ell, m'> >= min over P_{-K}: get them from the polytopes
    neg_ell = tuple(-x for x in ell)
    lo_k = _min_height(U, 1, ell, d)
    lo_mk = _min_height(U, -1, ell, d)
    if lo_k is None or lo_mk is None:
        return []
    pk = bounded_lattice_points(U + [neg_ell], [1] * len(U) + [-math.floor(bound - lo_mk)], d)
    pmk = bounded_lattice_points(U + [neg_ell], [-1] * len(U) + [-math.floor(bound - lo_k)], d)
    if not pk or not pmk:
        return []
    a = np.array(pk, dtype=np.int64)
    b = np.array(pmk, dtype=np.int64)
    ell_n = np.array(ell, dtype=np.int64)
    ha, hb = a @ ell_n, b @ ell_n
    found: set[LatticeVector] = set()
    for row, h in zip(a, ha):
        sel = b[hb <= bound - h]
        if len(sel):
            found.update(map(tuple, (sel + row).tolist()))
    return [Monomial(e) for e in sorted(found, key=lambda e: (dot(ell, e), e))]


def _min_height(U, level, ell, d) -> Fraction | None:
    """``min <ell, x>`` over ``{<u, x> >= level}`` via its vertices (pointed case)."""
    hom = [tuple(u) + (-level,) for u in U] + [(0,) * d + (1,)]
    rays, _ = _double_description(hom, d + 1)
    vals = [Fraction(dot(ell, r[:-1]), r[-1]) for r in rays if r[-1] > 0]
    return min(vals) if vals else None


def _as_exponent(w: Monomial | Sequence[int]) -> LatticeVector:
    return w.exponent if isinstance(w, Monomial) else vector(w)


def in_radical(sigma_dual: Cone, w: Monomial | Sequence[int], report: LocusReport | None = None) -> bool:
    """Is ``chi^w`` in the radical of the trace ideal?

    True iff ``w`` lies on no contributing face.  Pass a precomputed
    ``report`` to avoid recomputing the locus.
    """
    e = _as_exponent(w)
    if len(e) != sigma_dual.ambient_rank or not sigma_dual.contains(e):
        raise InputError(f"{e} is not a lattice point of sigma_dual")
    report = report or non_gorenstein_locus(sigma_dual)
    return not any(f.contains_point(e) for f in report.maximal_contributing_faces)
