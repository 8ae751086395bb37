"""Rational polyhedral cones with both descriptions, faces, and lineality.

A :class:`Cone` always carries its generators *and* its inequalities::

    C = cone(rays) + span(lineality) = {x : <n, x> >= 0 for n in facet_normals,
                                            <e, x>  = 0 for e in equations}

Conversions between the two go through a small exact double-description
routine (:func:`_double_description`).  Representations are canonical: rays
are primitive and lie in the orthogonal complement of the lineality space,
facet normals are primitive and lie in the linear span of the cone, subspace
bases are Hermite-reduced, and everything is sorted lexicographically.
Two cones are therefore equal exactly when their dataclasses compare equal.

Faces are identified by incidence bitmasks over the rays; see
:func:`face_lattice`.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError, InvariantError
from .lattice import (
    IntegerMatrix,
    LatticeVector,
    dot,
    kernel_basis,
    primitive,
    rank,
    solve_affine_lattice,
    vector,
)


def _double_description(
    inequalities: Sequence[LatticeVector], dim: int
) -> tuple[list[LatticeVector], list[LatticeVector]]:
    """Generators of ``{x in R^dim : A x >= 0}``.

    Returns ``(rays, lineality)``.  The rays are the extreme rays of the
    pointed part, taken inside the row space of ``A`` (the orthogonal
    complement of the lineality space), primitive and without repetition.
    The lineality basis is a saturated integer basis of ``ker A``.
    """
    A = [tuple(a) for a in inequalities if any(a)]
    lin_space = kernel_basis(IntegerMatrix(tuple(A), dim)) if A else [
        tuple(int(i == j) for j in range(dim)) for i in range(dim)
    ]
    if not A:
        return [], lin_space
    # Start from the row space of A, which meets ker A only in 0.
    if lin_space:
        lin = [list(v) for v in kernel_basis(IntegerMatrix(tuple(lin_space), dim))]
    else:
        lin = [[int(i == j) for j in range(dim)] for i in range(dim)]
    rays: list[list[int]] = []
    zeros: list[int] = []  # bitmask of processed inequalities tight at each ray

    for idx, a in enumerate(A):
        done = (1 << idx) - 1
        k = next((t for t, v in enumerate(lin) if dot(a, v)), None)
        if k is not None:
            b = lin.pop(k)
            ab = dot(a, b)
            if ab < 0:
                b = [-x for x in b]
                ab = -ab
            lin = [list(primitive([ab * x - dot(a, v) * y for x, y in zip(v, b)])) for v in lin]
            new_rays = []
            for r in rays:
                ar = dot(a, r)
                new_rays.append(list(primitive([ab * x - ar * y for x, y in zip(r, b)])) if ar else r)
            rays = new_rays + [list(primitive(b))]
            zeros = [z | (1 << idx) for z in zeros] + [done]
            continue

        vals = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        out_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        out_zeros = [zeros[i] for i in pos] + [zeros[i] | (1 << idx) for i in zer]
        for p in pos:
            zp = zeros[p]
            for q in neg:
                common = zp & zeros[q]
                adjacent = True
                for r, zr in enumerate(zeros):
                    if r != p and r != q and zr & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], -vals[q]
                new = primitive([vp * x + vq * y for x, y in zip(rays[q], rays[p])])
                out_rays.append(list(new))
                out_zeros.append(common | (1 << idx))
        rays, zeros = out_rays, out_zeros

    if lin:
        raise InvariantError("double description left a residual lineality space")
    return sorted({tuple(r) for r in rays}), lin_space


def _sorted_unique(vectors: Iterable[Sequence[int]]) -> tuple[LatticeVector, ...]:
    return tuple(sorted({tuple(v) for v in vectors}))


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone in ``R^ambient_rank`` with both descriptions."""

    ambient_rank: int
    rays: tuple[LatticeVector, ...]
    lineality: tuple[LatticeVector, ...] = ()
    facet_normals: tuple[LatticeVector, ...] = ()
    equations: tuple[LatticeVector, ...] = ()
    _masks: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for v in self.rays + self.lineality + self.facet_normals + self.equations:
            if len(v) != self.ambient_rank:
                raise InputError(f"vector {v} does not live in rank {self.ambient_rank}")
        for r in self.rays + self.lineality:
            if any(dot(e, r) for e in self.equations) or any(dot(n, r) < 0 for n in self.facet_normals):
                raise InvariantError(f"generator {r} violates the inequality description")
        object.__setattr__(
            self,
            "_masks",
            tuple(sum(1 << i for i, r in enumerate(self.rays) if dot(n, r) == 0) for n in self.facet_normals),
        )

    # -- construction ---------------------------------------------------
    @classmethod
    def from_generators(cls, generators: Iterable[Sequence[int]], ambient_rank: int) -> "Cone":
        gens = [vector(g) for g in generators]
        for g in gens:
            if len(g) != ambient_rank:
                raise InputError(f"generator {g} does not live in rank {ambient_rank}")
        normals, eqs = _double_description(gens, ambient_rank)
        return cls._from_inequality_data(normals, eqs, ambient_rank)

    @classmethod
    def from_inequalities(
        cls, inequalities: Iterable[Sequence[int]], ambient_rank: int, equations: Iterable[Sequence[int]] = ()
    ) -> "Cone":
        ineqs = [vector(a) for a in inequalities]
        eqs = [vector(e) for e in equations]
        for a in ineqs + eqs:
            if len(a) != ambient_rank:
                raise InputError(f"normal {a} does not live in rank {ambient_rank}")
        eqs2 = eqs + [tuple(-x for x in e) for e in eqs]
        rays, lin = _double_description(ineqs + eqs2, ambient_rank)
        gens = rays + lin + [tuple(-x for x in v) for v in lin]
        normals, eq_basis = _double_description(gens, ambient_rank)
        return cls(ambient_rank, _sorted_unique(rays), tuple(lin), _sorted_unique(normals), tuple(eq_basis))

    @classmethod
    def _from_inequality_data(cls, normals, eqs, ambient_rank) -> "Cone":
        dual_gens = list(normals) + list(eqs) + [tuple(-x for x in e) for e in eqs]
        rays, lin = _double_description(dual_gens, ambient_rank)
        return cls(ambient_rank, _sorted_unique(rays), tuple(lin), _sorted_unique(normals), tuple(eqs))

    # -- basic queries --------------------------------------------------
    @property
    def generators(self) -> tuple[LatticeVector, ...]:
        """Rays followed by ``+-`` lineality vectors: a generating set of the cone."""
        return self.rays + self.lineality + tuple(tuple(-x for x in v) for v in self.lineality)

    @property
    def dimension(self) -> int:
        return self.ambient_rank - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, x: Sequence[int]) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(n, x) >= 0 for n in self.facet_normals)

    def dual(self) -> "Cone":
        return Cone(self.ambient_rank, self.facet_normals, self.equations, self.rays, self.lineality)

    def _rays_on(self, normal_indices: Iterable[int]) -> int:
        m = (1 << len(self.rays)) - 1
        for j in normal_indices:
            m &= self._masks[j]
        return m

    def _active_on(self, mask: int) -> tuple[int, ...]:
        return tuple(j for j, m in enumerate(self._masks) if m & mask == mask)

    def face_from_normals(self, normal_indices: Iterable[int]) -> "Face":
        """Smallest face on which the given facet normals all vanish."""
        normal_indices = list(normal_indices)
        for j in normal_indices:
            if not 0 <= j < len(self.facet_normals):
                raise InputError(f"no facet normal with index {j}")
        self._require_pointed()
        mask = self._rays_on(normal_indices)
        return self._face(mask)

    def face_containing(self, points: Iterable[Sequence[int]]) -> "Face":
        """Smallest face containing the given points of the cone."""
        pts = [vector(p) for p in points]
        for p in pts:
            if not self.contains(p):
                raise InputError(f"{p} is not a point of the cone")
        act = [j for j, n in enumerate(self.facet_normals) if all(dot(n, p) == 0 for p in pts)]
        return self.face_from_normals(act)

    def _face(self, mask: int, dim: int | None = None) -> "Face":
        gens = tuple(i for i in range(len(self.rays)) if mask >> i & 1)
        if dim is None:
            dim = rank(self.rays[i] for i in gens)
        return Face(self, self._active_on(mask), gens, dim)

    def _require_pointed(self):
        if not self.is_pointed:
            raise InputError("face computations need a pointed cone; quotient the lineality space first")

    @property
    def top_face(self) -> "Face":
        self._require_pointed()
        return self._face((1 << len(self.rays)) - 1, self.dimension)

    @property
    def zero_face(self) -> "Face":
        self._require_pointed()
        return self._face(0, 0)

    def to_json(self) -> dict:
        return {
            "ambient_rank": self.ambient_rank,
            "rays": [list(r) for r in self.rays],
            "lineality": [list(v) for v in self.lineality],
            "inequalities": [list(n) for n in self.facet_normals],
            "equations": [list(e) for e in self.equations],
        }


@dataclass(frozen=True)
class Face:
    """A face of a pointed cone, stored by incidence index sets."""

    cone: Cone = field(repr=False)
    active_normals: tuple[int, ...]
    spanning_generators: tuple[int, ...]
    dimension: int

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.spanning_generators)

    @property
    def generators(self) -> tuple[LatticeVector, ...]:
        return tuple(self.cone.rays[i] for i in self.spanning_generators)

    def contains_point(self, x: Sequence[int]) -> bool:
        return self.cone.contains(x) and all(dot(self.cone.facet_normals[j], x) == 0 for j in self.active_normals)

    def __le__(self, other: "Face") -> bool:
        return self.cone == other.cone and set(self.active_normals) >= set(other.active_normals)

    def __lt__(self, other: "Face") -> bool:
        return self <= other and self.active_normals != other.active_normals

    def sort_key(self):
        return (self.dimension, self.active_normals)


@dataclass(frozen=True)
class FaceLattice:
    """All faces of a pointed cone, in canonical order, with cover relations."""

    cone: Cone
    faces: tuple[Face, ...]
    upper_covers: tuple[tuple[int, ...], ...]

    def index(self, face: Face) -> int:
        return self._by_active[face.active_normals]

    @functools.cached_property
    def _by_active(self) -> dict[tuple[int, ...], int]:
        return {f.active_normals: i for i, f in enumerate(self.faces)}

    @functools.cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        low: list[list[int]] = [[] for _ in self.faces]
        for i, ups in enumerate(self.upper_covers):
            for j in ups:
                low[j].append(i)
        return tuple(tuple(x) for x in low)

    def of_dimension(self, d: int) -> list[Face]:
        return [f for f in self.faces if f.dimension == d]


@functools.lru_cache(maxsize=128)
def face_lattice(c: Cone) -> FaceLattice:
    """Enumerate all faces of a pointed cone.

    Walks down from the top face: the facets of a face ``f`` are the
    inclusion-maximal proper intersections of ``f`` with facet incidence sets.
    """
    c._require_pointed()
    masks = c._masks
    top = (1 << len(c.rays)) - 1
    dims = {top: c.dimension}
    ups: dict[int, set[int]] = {top: set()}
    level = [top]
    while level:
        nxt: list[int] = []
        for f in level:
            if f == 0:
                continue
            cands = {f & m for m in masks if f & m != f}
            for g in cands:
                if any(h != g and g & h == g for h in cands):
                    continue
                if g in dims:
                    if dims[g] != dims[f] - 1:
                        raise InvariantError("face lattice is not graded")
                else:
                    dims[g] = dims[f] - 1
                    ups[g] = set()
                    nxt.append(g)
                ups[g].add(f)
        level = nxt
    if 0 in dims and dims[0] != 0:
        raise InvariantError("apex of a pointed cone must have dimension 0")
    faces = sorted((c._face(m, d) for m, d in dims.items()), key=Face.sort_key)
    pos = {f.mask: i for i, f in enumerate(faces)}
    upper = tuple(tuple(sorted(pos[g] for g in ups[f.mask])) for f in faces)
    return FaceLattice(c, tuple(faces), upper)


def faces(c: Cone) -> list[Face]:
    """All faces of ``c`` (zero face and ``c`` itself included), canonically ordered."""
    return list(face_lattice(c).faces)


def dualize(generators: Iterable[Sequence[int]], ambient_rank: int) -> Cone:
    """The dual cone ``{l : <l, g> >= 0 for all generators g}``.

    Its rays are the facet normals of ``cone(generators)`` (and its lineality
    their common orthogonal space), so ``dualize(dualize(G).generators)`` is
    ``cone(G)`` again.
    """
    return Cone.from_generators(generators, ambient_rank).dual()


def lineality(c: Cone) -> list[LatticeVector]:
    return list(c.lineality)


def quotient_by_lineality(c: Cone) -> tuple[Cone, IntegerMatrix]:
    """Push ``c`` to the quotient lattice ``Z^d / (lineality, saturated)``.

    Returns the pointed image cone and the surjective projection matrix whose
    kernel is the saturated lineality lattice.  A pointed cone comes back
    unchanged with the identity.
    """
    if c.is_pointed:
        return c, IntegerMatrix.identity(c.ambient_rank)
    P = IntegerMatrix(tuple(kernel_basis(IntegerMatrix(c.lineality, c.ambient_rank))), c.ambient_rank)
    images = [P.apply(r) for r in c.rays]
    return Cone.from_generators([primitive(v) for v in images if any(v)], P.nrows), P


def restrict_to_span(c: Cone) -> tuple[Cone, IntegerMatrix]:
    """Rewrite ``c`` in coordinates of the saturated lattice ``span(c) & Z^d``.

    Returns the full-dimensional image and the ``d x k`` basis matrix ``B``
    (columns span the lattice), so a point ``x`` has coordinates ``y`` with
    ``B y = x``.  Dual to :func:`quotient_by_lineality`: for a cone ``s``,
    ``restrict_to_span(s.dual())[0] == quotient_by_lineality(s)[0].dual()``.
    """
    if c.is_full_dimensional:
        return c, IntegerMatrix.identity(c.ambient_rank)
    basis = kernel_basis(IntegerMatrix(c.equations, c.ambient_rank))
    B = IntegerMatrix.from_columns(basis, c.ambient_rank)
    coords = [coordinates_in(B, r) for r in c.generators]
    return Cone.from_generators(coords, B.ncols), B


def coordinates_in(B: IntegerMatrix, x: Sequence[int]) -> LatticeVector:
    """Integer coordinates of ``x`` with respect to the columns of ``B``."""
    sol = solve_affine_lattice(B, x)
    if sol is None or sol.kernel_basis:
        raise InputError(f"{tuple(x)} is not uniquely expressible in the given lattice basis")
    return sol.witness
