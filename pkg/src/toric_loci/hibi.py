"""Hibi cones of finite posets and the poset side of their Gorenstein loci.

Coordinates: a function ``psi`` on ``P u {-inf, inf}`` with ``psi(inf) = 0``
is stored as the vector ``(psi(-inf), psi(p_1), ..., psi(p_n))`` with the
elements of ``P`` in their canonical order.  The Hibi cone ``C(P)`` is the
cone of order-reversing such functions; its facets are ``psi(a) >= psi(b)``
for the covers ``a < b`` of the extended poset, its rays are the indicator
vectors of order ideals (plus ``-inf``), i.e. the vertices of the order
polytope at height ``psi(-inf) = 1``.

Two independent descriptions of the non-Gorenstein locus live here:

* the complete-subset formula (:func:`minimal_nongraded_complete`,
  :func:`locus_dimension`), and
* the zig-zag tuple description with ranks and distances
  (:func:`satisfying_tuples`, :func:`radical_member_mp`).

Both are compared against the generic cone pipeline in
:mod:`toric_loci.gorenstein`.
"""
from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .cone import Cone, Face, face_lattice
from .errors import InputError, InvariantError, ResourceError
from .gorenstein import LocusReport
from .lattice import LatticeVector, rank as vector_rank, vector
from .posets import BOTTOM, TOP, Poset, _bits

DEFAULT_CAP = 20
DEFAULT_TUPLE_CAP = 9


@dataclass(frozen=True)
class CompleteSubset:
    """Connected, order-convex subset of the extended poset."""

    members: frozenset

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class QuotientPoset:
    """A partition of the extended poset into connected convex blocks.

    ``blocks`` are sorted by their first element in the extended order (so the
    block of ``-inf`` comes first); ``order`` holds the strict relations
    ``(i, j)`` between block indices, transitively closed.
    """

    base: Poset
    blocks: tuple[frozenset, ...]
    order: frozenset

    def block_of(self, element) -> int:
        for i, b in enumerate(self.blocks):
            if element in b:
                return i
        raise InputError(f"{element!r} is not in any block")

    def fibres(self) -> list[frozenset]:
        return list(self.blocks)


# -- cone ---------------------------------------------------------------

def psi_vector(P: Poset, values: dict) -> LatticeVector:
    """Coordinates of a function on the extended poset (``inf`` must map to 0)."""
    if values.get(TOP, 0) != 0:
        raise InputError("psi(inf) must be 0")
    return tuple(int(values.get(e, 0)) for e in (BOTTOM,) + P.elements)


def psi_values(P: Poset, psi: Sequence[int]) -> dict:
    if len(psi) != len(P) + 1:
        raise InputError(f"expected a vector of length {len(P) + 1}")
    out = dict(zip((BOTTOM,) + P.elements, psi))
    out[TOP] = 0
    return out


def _cover_normal(P: Poset, a_idx: int, b_idx: int) -> LatticeVector:
    """Normal of ``psi(a) - psi(b) >= 0``; extended index ``n + 1`` is ``inf``."""
    n = len(P)
    v = [0] * (n + 1)
    if a_idx <= n:
        v[a_idx] += 1
    if b_idx <= n:
        v[b_idx] -= 1
    return tuple(v)


def ideal_vector(P: Poset, ideal: Iterable[Hashable]) -> LatticeVector:
    """Order-polytope vertex of an order ideal: 1 on the ideal and on ``-inf``."""
    ideal = set(ideal)
    m = P.mask(ideal)
    for i in _bits(m):
        if P.below[i] & ~m:
            raise InputError(f"{sorted(ideal, key=str)} is not an order ideal")
    return (1,) + tuple(int(e in ideal) for e in P.elements)


@functools.lru_cache(maxsize=256)
def build_cone(P: Poset) -> Cone:
    n = len(P)
    rays = [(1,) + tuple(I >> i & 1 for i in range(n)) for I in P.order_ideals()]
    normals = [_cover_normal(P, a, b) for a, b in P.bar.cover_index_pairs]
    return Cone(n + 1, tuple(sorted(rays)), (), tuple(sorted(normals)), ())


@functools.lru_cache(maxsize=256)
def normal_covers(P: Poset) -> tuple[tuple, ...]:
    """The cover ``(a, b)`` of the extended poset behind each facet normal of ``build_cone(P)``."""
    by_normal = {_cover_normal(P, a, b): (a, b) for a, b in P.bar.cover_index_pairs}
    E = P.bar.elements
    return tuple((E[by_normal[v][0]], E[by_normal[v][1]]) for v in build_cone(P).facet_normals)


def order_polytope_vertices(P: Poset) -> list[LatticeVector]:
    return list(build_cone(P).rays)


def polytope_dimension(face: Face) -> int:
    """Dimension of the order-polytope face at height one (``-1`` for the apex)."""
    return face.dimension - 1


# -- faces and quotients ------------------------------------------------

def _block_masks(P: Poset, blocks: Iterable[Iterable[Hashable]]) -> list[int]:
    bar = P.bar
    masks = [bar.mask(b) for b in blocks]
    total = 0
    for m in masks:
        if m == 0:
            raise InputError("quotient blocks must be nonempty")
        if total & m:
            raise InputError("quotient blocks overlap")
        total |= m
    if total != bar.full_mask:
        raise InputError("quotient blocks must cover P u {-inf, inf}")
    for m in masks:
        if not bar.is_connected_mask(m):
            raise InputError(f"block {sorted(bar.labels(m), key=str)} is not connected")
        if not bar.is_convex_mask(m):
            raise InputError(f"block {sorted(bar.labels(m), key=str)} is not order-convex")
    return masks


def _quotient(P: Poset, masks: list[int]) -> QuotientPoset:
    bar = P.bar
    masks = sorted(masks, key=lambda m: (m & -m).bit_length())
    which = {}
    for k, m in enumerate(masks):
        for i in _bits(m):
            which[i] = k
    k = len(masks)
    rel = [set() for _ in range(k)]
    for a, b in bar.cover_index_pairs:
        if which[a] != which[b]:
            rel[which[a]].add(which[b])
    # transitive closure
    closure = []
    for s in range(k):
        seen, stack = set(), list(rel[s])
        while stack:
            t = stack.pop()
            if t not in seen:
                seen.add(t)
                stack.extend(rel[t])
        if s in seen:
            raise InputError("blocks do not form a quotient poset (induced order has a cycle)")
        closure.extend((s, t) for t in seen)
    return QuotientPoset(bar, tuple(bar.labels(m) for m in masks), frozenset(closure))


def make_quotient(P: Poset, blocks: Iterable[Iterable[Hashable]]) -> QuotientPoset:
    return _quotient(P, _block_masks(P, blocks))


def face_from_quotient(P: Poset, q: QuotientPoset | Iterable[Iterable[Hashable]]) -> Face:
    """The face of ``C(P)`` of functions constant on every block of ``q``."""
    if not isinstance(q, QuotientPoset):
        q = make_quotient(P, q)
    elif q.base != P.bar:
        raise InputError("quotient belongs to a different poset")
    else:
        q = make_quotient(P, q.blocks)
    cone = build_cone(P)
    covers = normal_covers(P)
    blocks = [set(b) for b in q.blocks]
    active = [j for j, (a, b) in enumerate(covers) if any(a in blk and b in blk for blk in blocks)]
    face = cone.face_from_normals(active)
    if face.dimension != len(q.blocks) - 1:
        raise InvariantError("face dimension does not match the number of blocks")
    return face


def quotient_from_face(P: Poset, face: Face) -> QuotientPoset:
    """The finest partition of the extended poset on which ``face`` is constant."""
    if face.cone != build_cone(P):
        raise InputError("face does not belong to the Hibi cone of this poset")
    bar = P.bar
    parent = list(range(len(bar)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    covers = normal_covers(P)
    for j in face.active_normals:
        a, b = covers[j]
        parent[find(bar.index[a])] = find(bar.index[b])
    groups: dict[int, int] = {}
    for i in range(len(bar)):
        groups[find(i)] = groups.get(find(i), 0) | 1 << i
    return _quotient(P, list(groups.values()))


def order_polytope_edges(P: Poset) -> list[tuple[Face, QuotientPoset]]:
    """Edges of ``Q(P)`` (2-dimensional faces of ``C(P)``) with their quotients.

    Candidate edges join ideals ``I < J`` with ``J - I`` connected in the Hasse
    diagram; each candidate is checked to span a face of dimension 2.
    """
    cone = build_cone(P)
    ideals = P.order_ideals()
    out = []
    for I in ideals:
        for J in ideals:
            if J != I and J & I == I and P.is_connected_mask(J & ~I):
                face = cone.face_containing([(1,) + tuple(I >> i & 1 for i in range(len(P))),
                                             (1,) + tuple(J >> i & 1 for i in range(len(P)))])
                if face.dimension != 2 or len(face.spanning_generators) != 2:
                    raise InvariantError("ideal pair does not span an edge of the order polytope")
                out.append((face, quotient_from_face(P, face)))
    out.sort(key=lambda fq: fq[0].sort_key())
    return out


# -- gradedness and complete subsets ------------------------------------

def _induced_cover_pairs(poset: Poset, mask: int) -> list[tuple[int, int]]:
    pairs = []
    for i in _bits(mask):
        strict = poset.below[i] & mask & ~(1 << i)
        lower = 0
        for j in _bits(strict):
            lower |= poset.below[j] & mask & ~(1 << j)
        pairs.extend((j, i) for j in _bits(strict & ~lower))
    return pairs


def _graded_mask(poset: Poset, mask: int) -> bool:
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in _bits(mask)}
    for a, b in _induced_cover_pairs(poset, mask):
        # psi(a) = psi(b) + 1
        adj[a].append((b, -1))
        adj[b].append((a, 1))
    psi: dict[int, int] = {}
    for s in adj:
        if s in psi:
            continue
        psi[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, step in adj[x]:
                want = psi[x] + step
                if y not in psi:
                    psi[y] = want
                    queue.append(y)
                elif psi[y] != want:
                    return False
    return True


def is_graded(poset: Poset, subset: Iterable[Hashable] | None = None) -> bool:
    """Does ``subset`` (default: all of ``poset``) with the induced order admit a grading?

    A grading drops by exactly one along every cover.
    """
    mask = poset.full_mask if subset is None else poset.mask(subset)
    return _graded_mask(poset, mask)


def _check_cap(P: Poset, cap: int) -> None:
    if len(P) + 2 > cap:
        raise ResourceError(f"extended poset has {len(P) + 2} elements, enumeration cap is {cap}")


def _complete_masks(P: Poset, cap: int = DEFAULT_CAP) -> list[int]:
    _check_cap(P, cap)
    bar = P.bar
    nb = bar.hasse_neighbours
    seen: set[int] = set()
    queue = deque()
    for a, b in bar.cover_index_pairs:
        m = (1 << a) | (1 << b)
        if m not in seen:
            seen.add(m)
            queue.append(m)
    while queue:
        S = queue.popleft()
        border = 0
        for i in _bits(S):
            border |= nb[i]
        border &= ~S
        for x in _bits(border):
            T = bar.convex_hull(S | (1 << x))
            if T not in seen:
                seen.add(T)
                queue.append(T)
    return sorted(seen, key=lambda m: (bin(m).count("1"), m))


def complete_subsets(P: Poset, cap: int = DEFAULT_CAP) -> list[CompleteSubset]:
    """All connected order-convex subsets of the extended poset with at least two elements."""
    bar = P.bar
    return [CompleteSubset(bar.labels(m)) for m in _complete_masks(P, cap)]


def _minimal_nongraded_masks(P: Poset, cap: int = DEFAULT_CAP) -> list[int]:
    bar = P.bar
    bad = [m for m in _complete_masks(P, cap) if not _graded_mask(bar, m)]
    return [m for m in bad if not any(o != m and o & m == o for o in bad)]


def minimal_nongraded_complete(P: Poset, cap: int = DEFAULT_CAP) -> list[CompleteSubset]:
    bar = P.bar
    return [CompleteSubset(bar.labels(m)) for m in _minimal_nongraded_masks(P, cap)]


def locus_dimension(P: Poset, cap: int = DEFAULT_CAP) -> int | None:
    """``max |P| - |A| + 2`` over non-graded complete ``A``; ``None`` if there is none."""
    sizes = [bin(m).count("1") for m in _minimal_nongraded_masks(P, cap)]
    return max((len(P) - s + 2 for s in sizes), default=None)


def component_face(P: Poset, A: CompleteSubset | Iterable[Hashable]) -> Face:
    """The face ``F_{phi_A}``: functions constant on ``A``, otherwise unconstrained."""
    members = A.members if isinstance(A, CompleteSubset) else frozenset(A)
    blocks = [members] + [{e} for e in P.bar.elements if e not in members]
    return face_from_quotient(P, blocks)


def formula_locus_report(P: Poset, cap: int = DEFAULT_CAP) -> LocusReport:
    """Locus report of ``C(P)`` built from the minimal non-graded complete subsets."""
    return LocusReport.from_faces(component_face(P, A) for A in minimal_nongraded_complete(P, cap))


# -- rank, distance and the zig-zag tuples ------------------------------

def _bar_index(P: Poset, x) -> int:
    bar = P.bar
    if x not in bar.index:
        raise InputError(f"{x!r} is not an element of the extended poset")
    return bar.index[x]


def _chain_lengths(P: Poset, a, b) -> tuple[int, int]:
    bar = P.bar
    i, j = _bar_index(P, a), _bar_index(P, b)
    if not bar.below[j] >> i & 1:
        raise InputError(f"{a!r} <= {b!r} does not hold")
    return _interval_lengths(bar, i, j)


@functools.lru_cache(maxsize=4096)
def _interval_lengths(bar: Poset, i: int, j: int) -> tuple[int, int]:
    """(longest, shortest) saturated chain from ``i`` up to ``j``."""
    interval = bar.above[i] & bar.below[j]
    ups = {x: [y for a, y in bar.cover_index_pairs if a == x and interval >> y & 1] for x in _bits(interval)}
    order = sorted(_bits(interval), key=lambda x: -bin(bar.below[x] & interval).count("1"))
    longest, shortest = {j: 0}, {j: 0}
    for x in order:
        if x == j:
            continue
        nxt = [y for y in ups[x] if y in longest]
        longest[x] = 1 + max(longest[y] for y in nxt)
        shortest[x] = 1 + min(shortest[y] for y in nxt)
    return longest[i], shortest[i]


def rank(P: Poset, a, b) -> int:
    """Length of the longest saturated chain from ``a`` to ``b`` in the extended poset."""
    return _chain_lengths(P, a, b)[0]


def dist(P: Poset, a, b) -> int:
    """Length of the shortest saturated chain from ``a`` to ``b`` in the extended poset."""
    return _chain_lengths(P, a, b)[1]


def mp_tuple_satisfies(P: Poset, a: Sequence[Hashable], b: Sequence[Hashable]) -> bool:
    """Check ``sum rank(a_i, b_i) > sum dist(a_{i+1}, b_i)`` (indices cyclic).

    Requires the zig-zag ``a_1 < b_1 > a_2 < ... > a_u < b_u > a_1`` of
    pairwise distinct elements; ``u = 1`` compares ``rank(a_1, b_1)`` with
    ``dist(a_1, b_1)``.
    """
    a, b = list(a), list(b)
    u = len(a)
    if u == 0 or len(b) != u:
        raise InputError("need equally many a's and b's, at least one of each")
    if len(set(a + b)) != 2 * u:
        raise InputError("tuple elements must be pairwise distinct")
    bar = P.bar
    for x in a + b:
        _bar_index(P, x)
    for i in range(u):
        nxt = a[(i + 1) % u]
        if not (bar.lt(a[i], b[i]) and bar.lt(nxt, b[i])):
            raise InputError(f"zig-zag comparabilities fail at position {i + 1}")
    lhs = sum(rank(P, a[i], b[i]) for i in range(u))
    rhs = sum(dist(P, a[(i + 1) % u], b[i]) for i in range(u))
    return lhs > rhs


def satisfying_tuples(P: Poset, cap: int = DEFAULT_TUPLE_CAP) -> list[tuple[tuple, tuple]]:
    """All zig-zag tuples of distinct elements satisfying the rank/distance inequality.

    Tuples are listed once per rotation class (``a_1`` is the smallest
    extended index among the a's).
    """
    if len(P) + 2 > cap:
        raise ResourceError(f"extended poset has {len(P) + 2} elements, tuple enumeration cap is {cap}")
    bar = P.bar
    n = len(bar)
    E = bar.elements
    strict_above = [bar.above[i] & ~(1 << i) for i in range(n)]
    strict_below = [bar.below[i] & ~(1 << i) for i in range(n)]
    L = {}
    for i in range(n):
        for j in _bits(strict_above[i]):
            L[i, j] = _interval_lengths(bar, i, j)
    out = []

    def extend(a_s, b_s, used, slack):
        # slack = sum rank(a_i, b_i) - sum dist(a_{i+1}, b_i) over closed steps
        last_a = a_s[-1]
        for bj in _bits(strict_above[last_a] & ~used):
            r = L[last_a, bj][0]
            first = a_s[0]
            if bar.below[bj] >> first & 1 and first != bj:
                total = slack + r - L[first, bj][1]
                if total > 0:
                    out.append((tuple(E[x] for x in a_s), tuple(E[x] for x in b_s + [bj])))
            for ak in _bits(strict_below[bj] & ~used & ~(1 << bj)):
                if ak <= first:
                    continue
                extend(a_s + [ak], b_s + [bj], used | (1 << bj) | (1 << ak), slack + r - L[ak, bj][1])

    for a1 in range(n):
        extend([a1], [], 1 << a1, 0)
    return out


def _tuple_member_masks(P: Poset, cap: int) -> list[int]:
    bar = P.bar
    sets = {bar.mask(a + b) for a, b in satisfying_tuples(P, cap)}
    return [m for m in sets if not any(o != m and o & m == o for o in sets)]


def radical_member_mp(P: Poset, psi: Sequence[int], cap: int = DEFAULT_TUPLE_CAP) -> bool:
    """Is ``chi^psi`` in the radical of the trace ideal, by the zig-zag description?

    True iff ``psi`` is non-constant on the elements of every satisfying
    tuple.  With no satisfying tuple every lattice point is a member.
    """
    psi = vector(psi)
    if len(psi) != len(P) + 1 or not build_cone(P).contains(psi):
        raise InputError(f"{psi} is not a lattice point of the Hibi cone")
    vals = psi_values(P, psi)
    E = P.bar.elements
    for m in _tuple_member_masks(P, cap):
        if len({vals[E[i]] for i in _bits(m)}) == 1:
            return False
    return True


def mp_locus_dimension(P: Poset, cap: int = DEFAULT_TUPLE_CAP) -> int | None:
    """Largest dimension of ``{psi in C(P) : psi constant on a satisfying tuple}``."""
    cone = build_cone(P)
    E = P.bar.elements
    best = None
    for m in _tuple_member_masks(P, cap):
        members = [E[i] for i in _bits(m)]
        on = [r for r in cone.rays if len({psi_values(P, r)[x] for x in members}) == 1]
        d = vector_rank(on)
        best = d if best is None else max(best, d)
    return best
