from __future__ import annotations

import pytest

from _corpus import segre_sweep, spec_gorenstein
from toric_loci.cone import face_lattice
from toric_loci.errors import InputError, ResourceError
from toric_loci.gorenstein import contributing_flags
from toric_loci.segre import (
    SegreParams,
    analyze_secant,
    build_secant_cone,
    closed_form_dimension,
    pair_face_dimension,
    secant_normals,
    vanishing_normals,
    verify_secant,
)


def test_params():
    assert SegreParams((3, 1, 2)).k == (1, 2, 3)
    assert SegreParams.parse("2, 1").k == (1, 2)
    for bad in [(1,), (0, 1), (1, -2)]:
        with pytest.raises(InputError):
            SegreParams(bad)
    with pytest.raises(InputError):
        SegreParams.parse("1,x")


def test_cone_sizes():
    c = build_secant_cone((2, 2, 2))
    assert c.ambient_rank == 7
    assert len(secant_normals((2, 2, 2))) == 10
    assert len(c.facet_normals) == 10
    # n = 3 drops R^i_1 with k_i = 1
    c = build_secant_cone((1, 1, 1))
    assert c.ambient_rank == 4
    assert set(c.facet_normals) == {secant_normals((1, 1, 1))[x] for x in ("L1", "L2", "L3", "S")}


def test_n_two_has_degenerate_dual():
    c = build_secant_cone((1, 1))
    # L1 + L2 + S = 0: sigma has a rank-2 lineality space
    assert len(c.equations) == 2
    res = analyze_secant((2, 3))
    assert res.working_cone.is_full_dimensional
    assert res.report.locus_dimension == 0


def test_closed_form_examples():
    assert closed_form_dimension((1, 1, 1)) is None
    assert closed_form_dimension((2, 2, 2)) == 5
    assert closed_form_dimension((1, 2, 2)) == 5
    assert closed_form_dimension((1, 1, 1, 1)) == 3
    assert closed_form_dimension((1, 1, 2)) == 0
    assert closed_form_dimension((2, 3)) == 0


def test_gorenstein_list_reproduced():
    for k in segre_sweep():
        a = analyze_secant(k)
        assert a.report.gorenstein == spec_gorenstein(k), k
        assert a.gorenstein_match, k


def test_cap():
    with pytest.raises(ResourceError):
        analyze_secant((3, 4, 4))


@pytest.mark.parametrize("k", segre_sweep())
def test_face_search_matches_pair_face_count(k):
    assert analyze_secant(k).report.locus_dimension == pair_face_dimension(k)


@pytest.mark.parametrize("k", [k for k in segre_sweep() if len(k) >= 3])
def test_maximal_faces_structure(k):
    a = analyze_secant(k)
    for f in a.report.maximal_contributing_faces:
        v = vanishing_normals(k, f)
        ls = sorted(int(x[1:]) for x in v if x.startswith("L"))
        assert "S" in v and len(ls) == 2
        l, m = ls
        assert f.dimension == a.params.k[l - 1] + a.params.k[m - 1] - 1
    # positive-dimensional contributing faces all lie in S-perp
    flags = contributing_flags(a.working_cone, exhaustive=True)
    for f, flag in zip(face_lattice(a.working_cone).faces, flags):
        if flag and f.dimension > 0:
            assert "S" in vanishing_normals(k, f)


def test_verify_secant_gorenstein_cases():
    assert verify_secant((1, 1, 1))
    assert verify_secant((2, 3))
    assert verify_secant((1, 1, 1, 1, 1))


def test_report_json():
    doc = analyze_secant((1, 1, 1)).to_json()
    assert doc["gorenstein"] is True and doc["match"] is True
    assert doc["closed_form"] is None and doc["vector_bundle_rank"] == 3
