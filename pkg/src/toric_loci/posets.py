"""Finite posets stored as bitmask relations.

Elements are indexed ``0 .. n-1``; ``below[i]`` is the bitmask of all
``j <= i`` (``i`` included) and ``above[i]`` the mask of all ``j >= i``.
Only small posets (a few dozen elements) are in scope.
"""
from __future__ import annotations

import functools
import random
import re
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import InputError

BOTTOM = "-inf"
TOP = "inf"
SENTINELS = (BOTTOM, TOP)


def _natural_key(label):
    if isinstance(label, int):
        return (0, label, ())
    parts = re.split(r"(\d+)", str(label))
    return (1, 0, tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable finite partial order.

    ``Poset(elements, relations)`` takes arbitrary pairs ``(a, b)`` meaning
    ``a <= b``, closes them transitively and rejects cycles.  Elements are
    kept in natural label order (``p2`` before ``p10``).
    """

    def __init__(self, elements: Iterable[Hashable], relations: Iterable[Sequence[Hashable]] = ()):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            raise InputError("poset elements must be distinct")
        for e in elements:
            if e in SENTINELS:
                raise InputError(f"{e!r} is reserved for the adjoined bottom/top elements")
        self._init(sorted(elements, key=_natural_key), relations)

    @classmethod
    def _ordered(cls, elements: Sequence[Hashable], relations: Iterable[Sequence[Hashable]]) -> "Poset":
        """Build without label validation or reordering (internal use)."""
        obj = cls.__new__(cls)
        obj._init(list(elements), relations)
        return obj

    def _init(self, elements, relations):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        below = [1 << i for i in range(n)]
        for pair in relations:
            if len(pair) != 2:
                raise InputError(f"relation {pair!r} is not a pair")
            a, b = pair
            if a not in self.index or b not in self.index:
                raise InputError(f"relation {pair!r} mentions an unknown element")
            below[self.index[b]] |= 1 << self.index[a]
        # transitive closure (Warshall on bitmasks)
        for k in range(n):
            bk = below[k]
            for i in range(n):
                if below[i] >> k & 1:
                    below[i] |= bk
        for i in range(n):
            for j in _bits(below[i]):
                if j != i and below[j] >> i & 1:
                    raise InputError(
                        f"relations are not antisymmetric: {self.elements[i]!r} and {self.elements[j]!r}"
                    )
        above = [0] * n
        for i in range(n):
            for j in _bits(below[i]):
                above[j] |= 1 << i
        self.below = tuple(below)
        self.above = tuple(above)

    # -- basic structure ------------------------------------------------
    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"Poset({list(self.elements)!r}, {sorted(self.relations(strict=True), key=repr)!r})"

    def _key(self):
        return (self.elements, self.below)

    def __eq__(self, other):
        return isinstance(other, Poset) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def leq(self, a, b) -> bool:
        return bool(self.below[self.index[b]] >> self.index[a] & 1)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a, b) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def relations(self, strict: bool = False) -> set[tuple]:
        E = self.elements
        return {(E[j], E[i]) for i in range(len(E)) for j in _bits(self.below[i]) if not (strict and i == j)}

    @functools.cached_property
    def cover_masks(self) -> tuple[int, ...]:
        """``cover_masks[i]``: mask of the elements covered by ``i``."""
        out = []
        for i in range(len(self.elements)):
            strict = self.below[i] & ~(1 << i)
            lower = 0
            for j in _bits(strict):
                lower |= self.below[j] & ~(1 << j)
            out.append(strict & ~lower)
        return tuple(out)

    @functools.cached_property
    def cover_index_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((j, i) for i, m in enumerate(self.cover_masks) for j in _bits(m)))

    @property
    def covers(self) -> list[tuple]:
        """Hasse edges ``(a, b)`` with ``a`` covered by ``b``."""
        E = self.elements
        return [(E[a], E[b]) for a, b in self.cover_index_pairs]

    @functools.cached_property
    def hasse_neighbours(self) -> tuple[int, ...]:
        nb = [0] * len(self.elements)
        for a, b in self.cover_index_pairs:
            nb[a] |= 1 << b
            nb[b] |= 1 << a
        return tuple(nb)

    def mask(self, subset: Iterable[Hashable]) -> int:
        m = 0
        for e in subset:
            if e not in self.index:
                raise InputError(f"{e!r} is not an element of the poset")
            m |= 1 << self.index[e]
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in _bits(mask))

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def minimal_elements(self) -> list:
        return [e for i, e in enumerate(self.elements) if self.below[i] == 1 << i]

    def maximal_elements(self) -> list:
        return [e for i, e in enumerate(self.elements) if self.above[i] == 1 << i]

    # -- derived posets -------------------------------------------------
    @functools.cached_property
    def bar(self) -> "Poset":
        """``P`` with a new bottom ``-inf`` and top ``inf``; order ``(-inf, P..., inf)``."""
        rel = [(BOTTOM, e) for e in self.elements] + [(e, TOP) for e in self.elements] + [(BOTTOM, TOP)]
        rel += [(a, b) for a, b in self.relations(strict=True)]
        return Poset._ordered((BOTTOM,) + self.elements + (TOP,), rel)

    def induced(self, subset: Iterable[Hashable]) -> "Poset":
        keep = [e for e in self.elements if e in set(subset)]
        ks = set(keep)
        return Poset._ordered(keep, [(a, b) for a, b in self.relations(strict=True) if a in ks and b in ks])

    def components(self) -> list[frozenset]:
        seen = 0
        comps = []
        for i in range(len(self.elements)):
            if seen >> i & 1:
                continue
            comp = self._component_mask(i, self.full_mask)
            seen |= comp
            comps.append(self.labels(comp))
        return comps

    def _component_mask(self, start: int, within: int) -> int:
        comp = 1 << start
        frontier = comp
        nb = self.hasse_neighbours
        while frontier:
            new = 0
            for j in _bits(frontier):
                new |= nb[j]
            new &= within & ~comp
            comp |= new
            frontier = new
        return comp

    def is_connected_mask(self, mask: int) -> bool:
        if mask == 0:
            return False
        start = (mask & -mask).bit_length() - 1
        return self._component_mask(start, mask) == mask

    def is_convex_mask(self, mask: int) -> bool:
        return self.convex_hull(mask) == mask

    def convex_hull(self, mask: int) -> int:
        up = down = 0
        for i in _bits(mask):
            up |= self.above[i]
            down |= self.below[i]
        return up & down

    # -- chains ---------------------------------------------------------
    def maximal_chain_lengths(self) -> tuple[int, int] | None:
        """``(shortest, longest)`` length of inclusion-maximal chains, ``None`` if empty."""
        n = len(self.elements)
        if n == 0:
            return None
        shortest = [0] * n
        longest = [0] * n
        order = sorted(range(n), key=lambda i: -bin(self.below[i]).count("1"))
        ups = [0] * n
        for a, b in self.cover_index_pairs:
            ups[a] |= 1 << b
        for i in order:  # tops first
            if ups[i]:
                shortest[i] = 1 + min(shortest[j] for j in _bits(ups[i]))
                longest[i] = 1 + max(longest[j] for j in _bits(ups[i]))
        mins = [i for i in range(n) if self.below[i] == 1 << i]
        return min(shortest[i] for i in mins), max(longest[i] for i in mins)

    def is_pure(self) -> bool:
        lens = self.maximal_chain_lengths()
        return lens is None or lens[0] == lens[1]

    def order_ideals(self) -> list[int]:
        """All down-closed subsets, as bitmasks."""
        n = len(self.elements)
        out = [0]
        order = sorted(range(n), key=lambda i: bin(self.below[i]).count("1"))
        # extend ideals element by element in a linear extension
        for i in order:
            out += [I | (1 << i) for I in out if (self.below[i] & ~(1 << i)) & ~I == 0]
        return sorted(set(out))


# -- corpus generation --------------------------------------------------

def _labels(n: int) -> list[str]:
    return [f"p{i + 1}" for i in range(n)]


def _cover_digraph(P: Poset):
    import networkx as nx

    g = nx.DiGraph()
    g.add_nodes_from(range(len(P)))
    g.add_edges_from(P.cover_index_pairs)
    return g


def enumerate_posets(n: int) -> list[Poset]:
    """One representative per isomorphism class of posets on ``n`` elements.

    Each class arises by adjoining a new maximal element above an order ideal
    of a smaller poset; duplicates are removed by digraph isomorphism of the
    Hasse diagrams.
    """
    import networkx as nx

    if n < 0:
        raise InputError("poset size must be nonnegative")
    classes: list[Poset] = [Poset([])]
    for size in range(1, n + 1):
        labels = _labels(size)
        buckets: dict[tuple, list[tuple[Poset, object]]] = {}
        out: list[Poset] = []
        for Q in classes:
            base = [(labels[a], labels[b]) for a, b in Q.cover_index_pairs]
            for ideal in Q.order_ideals():
                new = labels[size - 1]
                rel = base + [(labels[j], new) for j in _bits(ideal)]
                P = Poset._ordered(labels, rel)
                g = _cover_digraph(P)
                key = (
                    len(P.cover_index_pairs),
                    tuple(sorted((g.in_degree(v), g.out_degree(v), bin(P.below[v]).count("1")) for v in g)),
                    nx.weisfeiler_lehman_graph_hash(g, iterations=3),
                )
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(g, h) for _, h in bucket):
                    continue
                bucket.append((P, g))
                out.append(P)
        classes = out
    return classes


def random_poset(n: int, rng: random.Random, density: float | None = None) -> Poset:
    """Random poset: orient a random graph along a random permutation, then close."""
    labels = _labels(n)
    p = rng.uniform(0.05, 0.6) if density is None else density
    perm = labels[:]
    rng.shuffle(perm)
    rel = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Poset(labels, rel)
