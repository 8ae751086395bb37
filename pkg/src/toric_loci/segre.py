"""Toric patches of the first secant variety of a Segre variety.

For ``k = (k_1 <= ... <= k_n)`` the patch is a trivial vector bundle of rank
``k_1 + ... + k_n`` over the affine toric variety of the cone ``sigma_dual``
in ``R^(1 + sum k)`` with coordinates ``(q_0, q^1_1, ..., q^n_{k_n})``::

    q^i_j >= 0,    q_0 - sum_j q^i_j >= 0  (each i),    sum_ij q^i_j - 2 q_0 >= 0.

The normals of these inequalities are written ``R^i_j``, ``L_i`` and ``S``.
For ``n = 2`` they satisfy ``L_1 + L_2 + S = 0``, so ``sigma_dual`` is not
full-dimensional; it is rewritten in its own span lattice before the face
search (equivalently, ``sigma`` is divided by its lineality space).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .cone import Cone, Face, restrict_to_span
from .errors import InputError, ResourceError
from .gorenstein import LocusReport, non_gorenstein_locus
from .lattice import LatticeVector, dot

DEFAULT_SUM_CAP = 10

GORENSTEIN_CASES_N3 = frozenset({(1, 1, 1), (1, 1, 3), (1, 3, 3), (3, 3, 3)})


@dataclass(frozen=True)
class SegreParams:
    k: tuple[int, ...]

    def __post_init__(self):
        k = tuple(self.k)
        if len(k) < 2:
            raise InputError("need at least two factors (n >= 2)")
        for x in k:
            if isinstance(x, bool) or not isinstance(x, int) or x < 1:
                raise InputError(f"factor dimensions must be positive integers, got {x!r}")
        object.__setattr__(self, "k", tuple(sorted(k)))

    @classmethod
    def parse(cls, text: str) -> "SegreParams":
        try:
            return cls(tuple(int(x) for x in text.split(",") if x.strip()))
        except ValueError as exc:
            raise InputError(f"cannot parse Segre parameters {text!r}: expected k1,k2,...,kn") from exc

    @property
    def n(self) -> int:
        return len(self.k)

    @property
    def ambient_rank(self) -> int:
        return 1 + sum(self.k)

    @property
    def bundle_rank(self) -> int:
        return sum(self.k)

    def coordinate(self, i: int, j: int) -> int:
        """Index of ``q^i_j`` (1-based ``i``, ``j``); ``q_0`` has index 0."""
        return 1 + sum(self.k[: i - 1]) + (j - 1)


def _params(p: SegreParams | Iterable[int]) -> SegreParams:
    return p if isinstance(p, SegreParams) else SegreParams(tuple(p))


def secant_normals(p: SegreParams | Iterable[int]) -> dict[str, LatticeVector]:
    """The vectors ``R^i_j``, ``L_i`` and ``S`` by name (``"R1_2"``, ``"L3"``, ``"S"``)."""
    p = _params(p)
    d = p.ambient_rank
    out: dict[str, LatticeVector] = {}
    for i in range(1, p.n + 1):
        for j in range(1, p.k[i - 1] + 1):
            v = [0] * d
            v[p.coordinate(i, j)] = 1
            out[f"R{i}_{j}"] = tuple(v)
    for i in range(1, p.n + 1):
        v = [0] * d
        v[0] = 1
        for j in range(1, p.k[i - 1] + 1):
            v[p.coordinate(i, j)] = -1
        out[f"L{i}"] = tuple(v)
    v = [1] * d
    v[0] = -2
    out["S"] = tuple(v)
    return out


def build_secant_cone(p: SegreParams | Iterable[int]) -> Cone:
    p = _params(p)
    return Cone.from_inequalities(secant_normals(p).values(), p.ambient_rank)


def closed_form_dimension(p: SegreParams | Iterable[int]) -> int | None:
    """Dimension of the non-Gorenstein locus of the toric patch; ``None`` if Gorenstein."""
    p = _params(p)
    k, n = p.k, p.n
    if n == 2 and (k[1] == k[0] or k[0] == 1):
        return None
    if n == 3 and k in GORENSTEIN_CASES_N3:
        return None
    if n == 5 and k[4] == 1:
        return None
    total = sum(k)
    if n >= 4 or (n == 3 and k[0] > 1):
        vals = [
            k[l] + k[m] + 1
            for l in range(n)
            for m in range(l + 1, n)
            if total - k[l] - k[m] != 3
        ]
        return max(vals) if vals else None
    if n == 3 and k[1] != 1:
        return k[1] + k[2] + 1
    return 0


def pair_face_dimension(p: SegreParams | Iterable[int]) -> int | None:
    """Locus dimension predicted by counting the faces ``S^perp & L_l^perp & L_m^perp``.

    Such a face is the cone over (facet of one simplex) x (facet of the other),
    so it has dimension ``k_l + k_m - 1``.  It contributes when the remaining
    ``k_i`` do not sum to 3 and, for ``n = 3``, the remaining ``R^i_1`` is a
    ray (``k_i != 1``).  For ``n = 2`` only the fixed point can contribute.
    Agrees with the face search on every case the test suite sweeps, but
    differs from :func:`closed_form_dimension` (see the README).
    """
    p = _params(p)
    k, n = p.k, p.n
    if n == 2:
        return None if k[0] == k[1] or k[0] == 1 else 0
    vals = []
    for l in range(n):
        for m in range(l + 1, n):
            rest = [k[i] for i in range(n) if i not in (l, m)]
            if sum(rest) == 3 or (n == 3 and rest[0] == 1):
                continue
            vals.append(k[l] + k[m] - 1)
    return max(vals) if vals else None


@dataclass(frozen=True)
class SecantAnalysis:
    params: SegreParams
    cone: Cone  # sigma_dual in the original coordinates
    working_cone: Cone  # full-dimensional cone the face search ran on
    report: LocusReport
    closed_form: int | None

    @property
    def match(self) -> bool:
        return self.report.locus_dimension == self.closed_form

    @property
    def gorenstein_match(self) -> bool:
        return self.report.gorenstein == (self.closed_form is None)

    def to_json(self) -> dict:
        out = self.report.to_json()
        out.update(
            {
                "k": list(self.params.k),
                "closed_form": self.closed_form,
                "match": self.match,
                "gorenstein_match": self.gorenstein_match,
                "pair_face_dimension": pair_face_dimension(self.params),
                "vector_bundle_rank": self.params.bundle_rank,
                "working_cone": self.working_cone.to_json(),
            }
        )
        return out


def analyze_secant(p: SegreParams | Iterable[int], cap: int = DEFAULT_SUM_CAP) -> SecantAnalysis:
    p = _params(p)
    if sum(p.k) > cap:
        raise ResourceError(f"sum of k is {sum(p.k)}, cap is {cap}")
    cone = build_secant_cone(p)
    working, _ = restrict_to_span(cone)
    return SecantAnalysis(p, cone, working, non_gorenstein_locus(working), closed_form_dimension(p))


def verify_secant(p: SegreParams | Iterable[int], cap: int = DEFAULT_SUM_CAP) -> bool:
    return analyze_secant(p, cap).match


def vanishing_normals(p: SegreParams | Iterable[int], face: Face) -> set[str]:
    """Names of the secant normals that vanish on every generator of ``face``."""
    named = secant_normals(p)
    gens = face.generators
    return {name for name, v in named.items() if all(dot(v, g) == 0 for g in gens)}
