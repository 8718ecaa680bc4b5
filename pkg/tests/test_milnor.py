"""Tests for local intersection numbers, Milnor numbers, non-degeneracy,
polar curves and the per-prime equality checker."""

from fractions import Fraction

import pytest
import sympy

from singcurve.errors import TruncationUnstable
from singcurve.field import field_ctx
from singcurve.invariants import INF, intersect_param, intersect_tree, mu_bar
from singcurve.milnor import check_conjecture, is_nd_face, is_nnd, \
    local_intersection, milnor_number, polar_intersection
from singcurve.newton import newton_polygon
from singcurve.poly import BiPoly, mul_unit_truncated, parse_poly

from curves import EX1, EX2, four_lines

QQ = field_ctx(0)


def _q(text):
    return parse_poly(text, QQ)


def _f(text, p):
    return parse_poly(text, field_ctx(p))


def test_local_intersection_basics():
    assert local_intersection(_q("x"), _q("y")).value == 1
    assert local_intersection(_q("x^2 - y^3"), _q("x^3 - y^2")).value == 4
    assert local_intersection(_q("y^2"), _q("y^3")).value == INF


def test_local_intersection_fences():
    zero = BiPoly(QQ)
    assert local_intersection(zero, _q("x")).value == INF
    assert local_intersection(zero, _q("1 + x")).value == 0
    assert local_intersection(_q("1 + y"), _q("x^2 - y^3")).value == 0
    # common factor through the origin, detected before any reduction
    f = _q("(x - y)(x + y^2)")
    g = _q("(x - y)(y + x^3)")
    assert local_intersection(f, g).value == INF


def test_local_intersection_symmetry():
    pairs = [("x^2 - y^3", "x^3 - y^2"), ("x", "y - x^2"),
             ("x^2 - y^5", "y^2 - x^5"), ("x + y", "x y")]
    for a, b in pairs:
        assert local_intersection(_q(a), _q(b)).value == \
            local_intersection(_q(b), _q(a)).value


def test_local_intersection_axioms_spot():
    g = _q("x^2 - y^3")
    h = _q("x^3 - y^2")
    base = local_intersection(g, h).value
    # adding a monomial multiple of g to h changes nothing
    assert local_intersection(g, h + g * _q("7 x y^2")).value == base
    # additive over products
    h2 = _q("y - x^3")
    prod = local_intersection(g, h * h2).value
    assert prod == base + local_intersection(g, h2).value
    # unit factors are invisible
    assert local_intersection(g, h * _q("1 + x + 3 y")).value == base
    assert local_intersection(g * _q("2 - y"), h).value == base


def test_local_intersection_matches_other_engines():
    pairs = [("x^2 - y^3", "x^3 - y^2"), ("x^2 - y^3", "y - x^2"),
             ("y - x^2", "y + x^2"), ("x^2 - y^3", "x^2 + y^3")]
    for a, b in pairs:
        f, g = _q(a), _q(b)
        v = local_intersection(f, g).value
        assert intersect_tree(f, g) == v
        assert intersect_param(f, g) == v


def test_local_intersection_mixed_contexts_rejected():
    from singcurve.errors import InternalError

    with pytest.raises(InternalError):
        local_intersection(_q("x"), _f("y", 5))


def test_milnor_cusp_over_q():
    assert milnor_number(_q("x^2 - y^3")) == 2


def test_milnor_ex1_table():
    table = {7: 156, 11: 156, 13: 156, 97: 156, 5: 157, 101: 157,
             3: 166, 2: INF}
    for p, want in table.items():
        assert milnor_number(_f(EX1, p)) == want, p


def test_milnor_ex2_table():
    table = {2: 133, 7: 105, 11: INF, 13: 104, 3: 102, 5: 102,
             17: 102, 113: 102}
    for p, want in table.items():
        assert milnor_number(_f(EX2, p)) == want, p


def test_milnor_ex1_with_unit():
    for p, want in ((2, 168), (3, 157)):
        ctx = field_ctx(p)
        f = parse_poly(EX1, ctx)
        u = parse_poly("1 + x + y + x y", ctx)
        assert milnor_number(f, unit=u) == want


def test_milnor_ex2_with_unit():
    # mu after a unit multiple depends on the unit; these are the stable
    # values for 1 + x + y + xy (the infinity at p=11 becomes finite)
    for p, want in ((2, 118), (3, 102), (7, 104), (11, 105), (13, 104),
                    (17, 102)):
        ctx = field_ctx(p)
        f = parse_poly(EX2, ctx)
        u = parse_poly("1 + x + y + x y", ctx)
        assert milnor_number(f, unit=u) == want, p


def test_milnor_truncation_unstable():
    with pytest.raises(TruncationUnstable):
        milnor_number(_q("x^2 - y^3"), unit=_q("1 + x"), trunc=3)
    assert milnor_number(_q("x^2 - y^3"), unit=_q("1 + x"), trunc=4) == 2


def test_mu_bar_is_unit_invariant():
    f = _f(EX2, 13)
    u = parse_poly("1 + x + y + x y", f.ctx)
    g = mul_unit_truncated(f, u, 60)
    assert mu_bar(g) == mu_bar(f) == 102


def test_nnd_examples():
    assert is_nnd(_f("x^2 y + x y^2", 3)) is False
    assert is_nnd(_f("x^2 - y^3", 5)) is True
    assert is_nnd(_f("x^2 - y^3", 7)) is True
    # vertex faces fail: x^2 at p=2, y^3 at p=3
    assert is_nnd(_f("x^2 + y^3", 2)) is False
    assert is_nnd(_f("x^2 - y^3", 3)) is False


def test_nd_face_edge_cases():
    # the single compact edge of the cusp is non-degenerate at every p;
    # only the vertex tests can fail
    for p in (2, 3, 5, 7):
        f = _f("x^2 + y^3", p)
        pg = newton_polygon(f)
        assert len(pg.faces) == 1
        assert is_nd_face(f, pg.faces[0]) is True
    # degenerate edge: three lines sharing (1,1) as a jacobian zero mod 3,
    # and 3 divides the face level N as the theory predicts
    f = _f("x^2 y + x y^2", 3)
    pg = newton_polygon(f)
    face = pg.faces[0]
    assert is_nd_face(f, face) is False
    assert face.N % 3 == 0


def test_polar_intersection_cusp():
    F7 = field_ctx(7)
    f = parse_poly("x^2 - y^3", F7)
    r = polar_intersection(f, F7.one, F7.zero)
    assert r == {"polar": 4, "expected": 4, "equal": True, "skipped": False}


def test_polar_intersection_ex1():
    F7 = field_ctx(7)
    f = parse_poly(EX1, F7)
    r = polar_intersection(f, F7.zero, F7.one)
    assert r["polar"] == 163
    assert r["expected"] == 163
    assert r["equal"] is True and r["skipped"] is False


def test_polar_intersection_smooth():
    F7 = field_ctx(7)
    f = parse_poly("y + x^2", F7)
    r = polar_intersection(f, F7.zero, F7.one)
    assert r == {"polar": 1, "expected": 1, "equal": True, "skipped": False}


def test_polar_intersection_skips_when_branch_tangency_divides_p():
    F2 = field_ctx(2)
    f = parse_poly(EX1, F2)
    r = polar_intersection(f, F2.zero, F2.one)
    assert r["skipped"] is True
    assert r["equal"] is None


def test_check_conjecture_ex1_all_primes_to_101():
    f = _q(EX1)
    primes = list(sympy.primerange(2, 102))
    reps = check_conjecture(f, primes)
    assert [r.p for r in reps] == primes
    assert all(r.skipped is None for r in reps)
    assert all(r.consistent for r in reps)
    off = [r.p for r in reps if not r.equal]
    assert off == [2, 3, 5, 101]
    by_p = {r.p: r for r in reps}
    assert by_p[2].mu == INF
    assert by_p[3].mu == 166
    assert by_p[5].mu == 157
    assert by_p[101].mu == 157
    assert by_p[7].mu == 156 and by_p[7].mu_bar == 156
    assert by_p[7].m_abs == 155
    assert sorted(by_p[7].n_values) == [8, 12, 24, 50, 100, 101, 202]


def test_check_conjecture_ex2():
    f = _q(EX2)
    reps = check_conjecture(f, [2, 3, 5, 7, 11, 13, 17, 113])
    assert all(r.consistent for r in reps)
    off = [r.p for r in reps if not r.equal]
    assert off == [2, 7, 11, 13]
    by_p = {r.p: r for r in reps}
    assert by_p[2].m_abs == 103
    assert sorted(by_p[2].n_values) == [11, 15, 26, 29, 30, 44, 58]
    assert by_p[3].m_abs == 101
    assert sorted(by_p[3].n_values) == [11, 14, 26, 28, 44]
    assert by_p[11].mu == INF
    assert by_p[113].shortcut is True
    assert by_p[113].mu == 102


def test_check_conjecture_shortcut_verified():
    reps = check_conjecture(_q(EX2), [113], verify_shortcut=True)
    assert reps[0].shortcut is True
    assert reps[0].mu == 102 and reps[0].equal is True


def test_check_conjecture_four_lines():
    for a, p in (((1, 2, 3, 4), 11), ((0, 0, 0, 1), 7), ((0, 0, 0, 0), 5),
                 ((1, 1, 1, 1), 2), ((0, 0, 0, 1), 2)):
        f = _q(four_lines(a))
        rep = check_conjecture(f, [p])[0]
        assert rep.skipped is None
        assert rep.consistent, (a, p)


def test_check_conjecture_skips():
    # x^2 + 5 y^3 is reduced over Q but a square times a unit mod 5
    reps = check_conjecture(_q("x^2 + 5 y^3"), [5, 7])
    assert reps[0].skipped == "not reduced mod p"
    assert reps[1].skipped is None and reps[1].consistent
    # every coefficient divisible by 2
    reps = check_conjecture(_q("2 x + 2 y^2"), [2])
    assert reps[0].skipped == "vanishes mod p"
    # rational coefficient with denominator 2
    f = BiPoly(QQ, {(2, 0): Fraction(1, 2), (0, 3): Fraction(-1)})
    reps = check_conjecture(f, [2, 3])
    assert reps[0].skipped == "denominator divisible by p"
    assert reps[1].skipped is None


def test_conj_report_to_dict():
    rep = check_conjecture(_q(EX2), [11, 113])
    d0 = rep[0].to_dict()
    assert d0["mu"] == "infinity"
    assert d0["equal"] is False and d0["consistent"] is True
    d1 = rep[1].to_dict()
    assert d1["mu"] == 102 and d1["shortcut"] is True
