"""Tests for the section ring, Hilbert functions, and the isomorphism
verifier.

Oracle policy: lattice counts come from an independent inequality scan
against the explicit H-rep of each fixture (oracle_count), closed forms
(2j+1, (9j^2+9j+2)/2) cross-check the quadratic cases, and the fault
injections below corrupt one table entry to pin the mismatch accounting.
"""

import logging
from fractions import Fraction

import pytest

from tropmirror.lattice import Fan, hull, polytope_from_bundle
from tropmirror.floer import assemble_algebra, floer_group
from tropmirror.coordring import (
    IsomorphismReport,
    NonLatticePolytope,
    ehrhart_polynomial,
    eval_poly,
    hilbert_function,
    interior_counts,
    section_ring,
    serre_check,
    verify_isomorphism,
)

P2_FAN = Fan(((1, 0), (0, 1), (-1, -1)), ((0, 1), (0, 2), (1, 2)))
P1_FAN = Fan(((1,), (-1,)), ((0,), (1,)))
P1XP1_FAN = Fan(((1, 0), (0, 1), (-1, 0), (0, -1)), ((0, 1), (1, 2), (2, 3), (0, 3)))


def p2_Q():
    return polytope_from_bundle(P2_FAN, (1, 1, 1))


def p1_Q():
    return polytope_from_bundle(P1_FAN, (1, 1))


def oracle_count_p2(j, strict=False):
    count = 0
    for x in range(-2 * j - 1, j + 2):
        for y in range(-2 * j - 1, j + 2):
            if strict:
                count += x < j and y < j and x + y > -j
            else:
                count += x <= j and y <= j and x + y >= -j
    return count


# ---------------------------------------------------------------------------
# the ring
# ---------------------------------------------------------------------------

def test_p1_ring_bases_and_product():
    ring = section_ring(p1_Q(), 2)
    assert ring.bases[1] == ((-1,), (0,), (1,))
    assert ring.bases[2] == ((-2,), (-1,), (0,), (1,), (2,))
    assert ring.product(1, (1,), 1, (1,)) == (2, (2,))
    # unit acts trivially
    for j in (0, 1, 2):
        for m in ring.bases[j]:
            assert ring.product(0, (0,), j, m) == (j, m)


def test_p2_ring_dimensions():
    ring = section_ring(p2_Q(), 2)
    assert [ring.dimension(j) for j in range(3)] == [1, 10, 28]
    assert ring.dimension(1) == oracle_count_p2(1)
    assert ring.dimension(2) == oracle_count_p2(2)


def test_ring_product_commutes_and_associates():
    ring = section_ring(p1_Q(), 3)
    for m in ring.bases[1]:
        for mp in ring.bases[1]:
            assert ring.product(1, m, 1, mp) == ring.product(1, mp, 1, m)
            for mpp in ring.bases[1]:
                a = ring.product(2, ring.product(1, m, 1, mp)[1], 1, mpp)
                b = ring.product(1, m, 2, ring.product(1, mp, 1, mpp)[1])
                assert a == b


def test_truncation_is_flagged_not_fatal(caplog):
    ring = section_ring(p1_Q(), 1)
    with caplog.at_level(logging.INFO, logger="tropmirror.coordring"):
        assert ring.product(1, (1,), 1, (1,)) is None
    assert any("truncated" in r.message for r in caplog.records)


def test_non_lattice_polytope_warns():
    q = hull(((Fraction(1, 2), 0), (0, 1), (-1, -1)))
    with pytest.warns(NonLatticePolytope):
        ring = section_ring(q, 2)
    assert ring.dimension(1) >= 1  # still built


# ---------------------------------------------------------------------------
# Hilbert functions
# ---------------------------------------------------------------------------

def test_hilbert_fixtures():
    assert hilbert_function(p2_Q(), 3) == [1, 10, 28, 55]
    assert hilbert_function(p1_Q(), 3) == [1, 3, 5, 7]
    point = hull(((0, 0),))
    assert hilbert_function(point, 4) == [1, 1, 1, 1, 1]


def test_hilbert_matches_fitted_polynomial():
    Q = p2_Q()
    coeffs = ehrhart_polynomial(Q)
    assert coeffs == (1, Fraction(9, 2), Fraction(9, 2))
    values = hilbert_function(Q, 6)
    for j, v in enumerate(values):
        assert eval_poly(coeffs, j) == v
        assert v == oracle_count_p2(j) if j else v == 1


def test_interior_counts_shifted_by_reciprocity():
    Q = p2_Q()
    assert interior_counts(Q, 3) == [0, 1, 10, 28]
    coeffs = ehrhart_polynomial(Q)
    for j in range(1, 4):
        assert eval_poly(coeffs, -j) == interior_counts(Q, j)[j]


# ---------------------------------------------------------------------------
# the isomorphism
# ---------------------------------------------------------------------------

def test_isomorphism_p2():
    alg = assemble_algebra(p2_Q(), 3)
    ring = section_ring(p2_Q(), 3)
    report = verify_isomorphism(alg, ring)
    assert report.ok and report.verdict == "pass"
    assert not report.mismatches
    dims = [1, 10, 28, 55]
    expected_checks = sum(dims[j] * dims[k]
                          for j in range(4) for k in range(4) if j + k <= 3)
    assert report.products_checked == expected_checks
    js = report.to_json()
    assert js["verdict"] == "pass" and js["products_checked"] == expected_checks


def test_isomorphism_p1xp1():
    Q = polytope_from_bundle(P1XP1_FAN, (1, 1, 1, 1))
    report = verify_isomorphism(assemble_algebra(Q, 3), section_ring(Q, 3))
    assert report.ok
    assert [len(b) for b in section_ring(Q, 3).bases] == [1, 9, 25, 49]


def test_corrupted_table_yields_exactly_one_mismatch():
    alg = assemble_algebra(p2_Q(), 2)
    ring = section_ring(p2_Q(), 2)
    key = (0, 0)
    good = alg.products[(1, 1)][key]
    alg.products[(1, 1)][key] = (good + 1) % alg.dimension(2)
    report = verify_isomorphism(alg, ring)
    assert report.verdict == "fail"
    assert len(report.mismatches) == 1
    entry = dict(report.mismatches[0])
    assert entry["degrees"] == (1, 1)
    assert entry["p_index"] == 0 and entry["q_index"] == 0


def test_isomorphism_invariant_under_translation_and_gl():
    Qt = p2_Q().translate((1, -1))
    with pytest.warns(UserWarning):
        algt = assemble_algebra(Qt, 2)
    assert verify_isomorphism(algt, section_ring(Qt, 2)).ok

    # shear the fan by a unimodular matrix and rebuild everything
    M = ((1, 1), (0, 1))
    rays = tuple(
        (M[0][0] * r[0] + M[0][1] * r[1], M[1][0] * r[0] + M[1][1] * r[1])
        for r in P2_FAN.rays
    )
    fan = Fan(rays, P2_FAN.max_cones)
    Qg = polytope_from_bundle(fan, (1, 1, 1))
    assert verify_isomorphism(assemble_algebra(Qg, 2), section_ring(Qg, 2)).ok


def test_mismatched_truncations_rejected():
    with pytest.raises(ValueError):
        verify_isomorphism(assemble_algebra(p2_Q(), 2), section_ring(p2_Q(), 3))


# ---------------------------------------------------------------------------
# Serre checks
# ---------------------------------------------------------------------------

def test_serre_check_p2():
    report = serre_check(p2_Q(), 4)
    assert report.ok
    for row in report.rows:
        r = dict(row)
        assert r["refine"] == r["dilate"] == r["reciprocity"]
        assert r["refine"] == oracle_count_p2(r["j"], strict=True)
    assert "transposition" in report.note


def test_serre_check_p1():
    report = serre_check(p1_Q(), 3)
    assert report.ok
    r2 = dict(report.rows[1])
    assert r2["j"] == 2 and r2["dilate"] == 3  # interior of [-2,2] is {-1,0,1}


def test_serre_check_consistent_with_floer_groups():
    Q = p2_Q()
    report = serre_check(Q, 4)
    for row in report.rows:
        r = dict(row)
        assert floer_group(Q, 0, -r["j"]).dimension == r["refine"]
