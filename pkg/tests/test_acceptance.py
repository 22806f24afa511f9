"""Acceptance suite: one test per criterion, every check exact (integer
dimensions, polynomial identities), one PASS line printed per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines."""

import pytest

from qacm.cli import classify_pairs, seeded_line_values
from qacm.mf import (MFPair, SAMPLE_POINTS, cokernel_hilbert, determinant,
                     is_linear_matrix, partner_from_adjugate, rank_at_point,
                     ulrich_example_matrix, verify_mf)
from qacm.monomials import Form
from qacm.plane import (cohomology as plane_cohomology, euler_char as
                        plane_euler_char, ci_from_line_points, ideals_match,
                        make_extension_bundle, recover_subscheme)
from qacm.quadric import (RankOneSheaf, acm_check, coh_table,
                          collinear_extension_kernel, diagonal_gluing,
                          gluing_variation_report, global_generation_surjective,
                          h0, h1, h2, point_extension_kernel,
                          rank_one_cohomology, split_pair_kernel)

x, y = Form.variable(4, "x"), Form.variable(4, "y")


def _ok(n, text):
    print(f"ACCEPTANCE criterion {n}: PASS - {text}")


def test_criterion_1_distinguished_factorization():
    """det N = x^2 y^2; linear adjugate partner; N*B = xy*I; rank 2 on X at 8
    sample points and 4 off X; h0 = 0, 4, 12 at t = -1, 0, 1."""
    n = ulrich_example_matrix(1)
    assert determinant(n) == (x * y) ** 2
    b = partner_from_adjugate(n)
    assert is_linear_matrix(b)
    assert verify_mf(MFPair(n, b, x * y))
    on_x = [(pt, locus) for pt, locus in SAMPLE_POINTS if locus != "off"]
    off_x = [(pt, locus) for pt, locus in SAMPLE_POINTS if locus == "off"]
    assert len(on_x) == 8 and len(off_x) == 4
    assert all(rank_at_point(n, pt) == 2 for pt, _ in on_x)
    assert all(rank_at_point(n, pt) == 4 for pt, _ in off_x)
    assert [cokernel_hilbert(n, t) for t in (-1, 0, 1)] == [0, 4, 12]
    _ok(1, "det, partner, ranks at 12 sample points, h0 = 0/4/12")


def test_criterion_2_ulrich_uniqueness(classify_report):
    """Exactly the two point-extension rows are Ulrich in the c_max = 6 scan."""
    rows = classify_report["rows"]
    ulrich_rows = [r for r in rows if r["ulrich"]]
    assert len(ulrich_rows) == 2
    assert all(r["kind"] == "point_ext" for r in ulrich_rows)
    assert all(not r["ulrich"] for r in rows if r["kind"] == "split")
    assert all(not r["ulrich"] for r in rows if r["kind"] == "collinear_ext")
    _ok(2, f"{len(rows)} scan rows, exactly 2 Ulrich, both point-extension")


def test_criterion_3_collinear_family_acm(classify_report):
    """h1(K(t)) = 0 at every window twist for every (c,k) with
    0 <= k < c <= 2k+2, c <= 6; the fast and full h1 routes agree at every
    twist (h1() raises an internal error on any disagreement)."""
    rows = [r for r in classify_report["rows"] if r["kind"] == "collinear_ext"]
    assert [(r["c"], r["k"]) for r in rows] == classify_pairs(6)
    assert all(r["acm"] for r in rows)
    # recompute one window explicitly to show the table really is checked
    k = collinear_extension_kernel(3, 2, [((1, 9), 1)])
    rep = acm_check(k)
    assert all(row.h1 == 0 for row in rep.table.rows)
    _ok(3, f"{len(rows)} (c,k) pairs aCM over their windows, dual h1 routes equal")


def test_criterion_4_oracle_equivalence():
    """Closed-form h0/h1 of collinear ideal sheaves equals the brute-force
    point-condition computation for z <= 6, d in [-1, 10], exactly."""
    from test_plane import oracle_h0_collinear, oracle_h1_collinear
    from qacm.plane import make_ci_ideal
    cases = 0
    for z in range(1, 7):
        pts = [((1, 3 * i + 1), 1) for i in range(z)]
        ci = ci_from_line_points(pts)
        sheaf = make_ci_ideal(ci.f1, ci.f2, 0, points=ci.points)
        for d in range(-1, 11):
            assert plane_cohomology(sheaf, 0, d) == oracle_h0_collinear(pts, d)
            assert plane_cohomology(sheaf, 1, d) == oracle_h1_collinear(pts, d)
            cases += 1
    assert cases == 72
    _ok(4, f"{cases} (z, d) cases, Koszul route == point-condition oracle")


def test_criterion_5_recovery_evidence(classify_report):
    """recover round-trips for every scanned (c,k) with c <= 2k, and 10
    distinct seeded subschemes of equal degree give 10 distinct ideals."""
    rows = [r for r in classify_report["rows"]
            if r["kind"] == "collinear_ext" and r["c"] <= 2 * r["k"]]
    assert rows and all(r["recover"] == "ok" for r in rows)
    # ten distinct seeded Z of degree 2 at (c, k) = (4, 2)
    recovered, seen_points = [], []
    seed = 0
    while len(recovered) < 10:
        vals = tuple(seeded_line_values(seed, 2))
        seed += 1
        if vals in seen_points:
            continue
        seen_points.append(vals)
        g = make_extension_bundle(4, 2, ci_from_line_points([((1, r), 1) for r in vals]),
                                  h="auto")
        rec = recover_subscheme(g)
        assert ideals_match(rec, g.ci, 4)
        recovered.append(rec)
    distinct = all(not ideals_match(a, b, 4)
                   for i, a in enumerate(recovered) for b in recovered[i + 1:])
    assert distinct
    _ok(5, f"{len(rows)} scan rows round-trip; 10 seeded subschemes give 10 distinct ideals")


def test_criterion_6_rank_one_classification():
    """h1 = 0 for all extensions with (a, b) in [-4, 4]^2 on both sides; h0
    matches the additivity formula; the (-1, 0) table is the structure sheaf."""
    from qacm.monomials import P2, cohomology_dim
    for side in (1, 2):
        for a in range(-4, 5):
            for b in range(-4, 5):
                r = RankOneSheaf(side, a, b)
                for t in range(-5, 6):
                    assert rank_one_cohomology(r, 1, t) == 0
                    assert rank_one_cohomology(r, 0, t) == (
                        cohomology_dim(P2, 0, a + t) + cohomology_dim(P2, 0, b + t))
    ox = RankOneSheaf(2, -1, 0)
    assert [rank_one_cohomology(ox, 0, t) for t in range(0, 4)] == [1, 4, 9, 16]
    assert rank_one_cohomology(ox, 2, -2) == 1
    _ok(6, "162 extensions x 11 twists: h1 = 0 and additive h0; (-1,0) is O_X")


def test_criterion_7_structural_invariants(classify_report):
    """chi additivity on every constructed kernel sheaf; Serre duality of the
    extension side; global generation of 0-regular instances; diagonal-gluing
    invariance."""
    # chi additivity on every scan row (recomputed here on fresh objects)
    kernels = [split_pair_kernel(c) for c in (0, 2, 5)]
    kernels += [point_extension_kernel(1), point_extension_kernel(2)]
    for (c, k) in classify_pairs(6):
        pts = [((1, r), 1) for r in seeded_line_values(0, c - k)]
        kernels.append(collinear_extension_kernel(c, k, pts))
    for kern in kernels:
        lo, hi = acm_check(kern).window
        for t in range(lo, hi + 1):
            line_chi = (kern.c + t + 1) + (t + 1)
            assert (h0(kern, t) - h1(kern, t) + h2(kern, t)
                    == plane_euler_char(kern.split, t)
                    + plane_euler_char(kern.other, t) - line_chi)
    # Serre duality across the window for the non-split sides
    for (c, k) in [(3, 1), (4, 2), (5, 3)]:
        g = make_extension_bundle(c, k, ci_from_line_points(
            [((1, r), 1) for r in seeded_line_values(0, c - k)]), h="auto")
        for t in range(-c - 8, 6):
            assert plane_cohomology(g, 1, t) == plane_cohomology(g, 1, -c - 3 - t)
    # 0-regular => globally generated, on the point pair and three others
    zero_regular = [point_extension_kernel(1),
                    collinear_extension_kernel(2, 1, [((1, 5), 1)]),
                    collinear_extension_kernel(3, 1, [((1, 1), 1), ((1, 2), 1)]),
                    collinear_extension_kernel(3, 2, [((1, 7), 1)])]
    for kern in zero_regular:
        assert h1(kern, -1) == 0 and h2(kern, -2) == 0
        assert global_generation_surjective(kern)
    # diagonal-gluing invariance of tables
    base = collinear_extension_kernel(3, 1, [((1, 1), 1), ((1, 2), 1)])
    rows = gluing_variation_report(base, [diagonal_gluing(2, 3), diagonal_gluing(-1, 5)],
                                   -8, 4)
    assert all(r.equal_to_identity for r in rows)
    _ok(7, f"chi additivity on {len(kernels)} kernels; duality; global generation; gluing invariance")


def test_criterion_8_boundary_rows(classify_report):
    """c = 2k+2 rows exist, carry the boundary flag, agree internally between
    the two h1 routes, and log h0(G(-k-1)) without asserting a value."""
    rows = [r for r in classify_report["rows"] if r.get("boundary")]
    expected = [(c, k) for (c, k) in classify_pairs(6) if c == 2 * k + 2]
    assert [(r["c"], r["k"]) for r in rows] == expected and rows
    assert all("h0_g_minus_k_minus_1" in r for r in rows)
    # recompute one boundary row: building the full table exercises the
    # fast/full h1 agreement at every twist (internal error otherwise)
    c, k = expected[0]
    kern = collinear_extension_kernel(
        c, k, [((1, r), 1) for r in seeded_line_values(0, c - k)])
    lo, hi = acm_check(kern).window
    table = coh_table(kern, lo, hi)
    logged = plane_cohomology(kern.other, 0, -k - 1)
    assert logged == rows[0]["h0_g_minus_k_minus_1"]
    _ok(8, f"{len(rows)} boundary rows flagged, internally consistent, "
           f"h0(G(-k-1)) logged (= {logged} at (c,k)=({c},{k}))")
