"""Newton polygon construction and face factorization."""

import random
from fractions import Fraction

import pytest

from singcurve.errors import Char0IrreducibleRemainder, ZeroPolynomial
from singcurve.field import field_ctx
from singcurve.newton import face_factorization, newton_polygon
from singcurve.poly import BiPoly, parse_poly

from curves import EX1, EX2

QQ = field_ctx(0)


def test_cusp_polygon():
    np_ = newton_polygon(parse_poly("x^2 - y^3", QQ))
    assert np_.i0 == 0 and np_.j0 == 0
    assert np_.vertices == [(0, 3), (2, 0)]
    assert len(np_.faces) == 1
    f = np_.faces[0]
    assert (f.p, f.q, f.N, f.K) == (3, 2, 6, 1)


def test_ex1_polygon_and_face():
    f = parse_poly(EX1, QQ)
    np_ = newton_polygon(f)
    assert np_.vertices == [(0, 12), (8, 0)]
    assert np_.i0 == 0 and np_.j0 == 0
    face = np_.faces[0]
    assert (face.p, face.q, face.N, face.K) == (3, 2, 24, 4)
    ff = face_factorization(f, face)
    assert ff.ctx is QQ
    assert ff.roots == [(Fraction(1), 4)]
    assert (ff.a, ff.b) == (0, 0)
    assert ff.lead == 1


def test_ex2_polygon():
    f = parse_poly(EX2, QQ)
    np_ = newton_polygon(f)
    assert np_.vertices == [(0, 14), (2, 10), (6, 4), (11, 0)]
    assert [(fc.p, fc.q, fc.N) for fc in np_.faces] == [(2, 1, 14), (3, 2, 26), (4, 5, 44)]
    assert [fc.K for fc in np_.faces] == [2, 2, 1]


def test_ex2_faces_char_not_2():
    f11 = field_ctx(11)
    f = parse_poly(EX2, f11)
    np_ = newton_polygon(f)
    s1 = face_factorization(f, np_.faces[0])
    assert sorted(s1.roots) == [(1, 1), (10, 1)]
    assert (s1.a, s1.b) == (0, 10)
    s2 = face_factorization(f, np_.faces[1])
    assert s2.roots == [(1, 2)]
    assert (s2.a, s2.b) == (2, 4)
    s3 = face_factorization(f, np_.faces[2])
    assert s3.roots == [(1, 1)]
    assert (s3.a, s3.b) == (6, 0)


def test_ex2_face_char_2():
    f2 = field_ctx(2)
    f = parse_poly(EX2, f2)
    np_ = newton_polygon(f)
    assert np_.vertices == [(0, 14), (2, 10), (6, 4), (11, 0)]
    s1 = face_factorization(f, np_.faces[0])
    assert s1.roots == [(1, 2)]


def test_monomial_times_unit_has_no_faces():
    f = parse_poly("x^2 y (1 + x + y)", QQ)
    np_ = newton_polygon(f)
    assert np_.faces == []
    assert (np_.i0, np_.j0) == (2, 1)
    assert np_.vertices == [(2, 1)]


def test_polygon_uses_full_support():
    # the x-multiple keeps its own exponent: i0 = 1 and the face sees it
    f = parse_poly("x y^5 + x^4 y + x^2 y^2 + x^4", QQ)
    np_ = newton_polygon(f)
    assert np_.i0 == 1 and np_.j0 == 0
    # support (1,5),(4,1),(2,2),(4,0): hull (1,5),(2,2),(4,0)
    assert np_.vertices == [(1, 5), (2, 2), (4, 0)]


def test_json_dict():
    f = parse_poly(EX1, QQ)
    d = newton_polygon(f).to_json_dict()
    assert d == {"i0": 0, "j0": 0, "vertices": [[0, 12], [8, 0]],
                 "faces": [{"p": 3, "q": 2, "N": 24}]}


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomial):
        newton_polygon(BiPoly.zero(QQ))


def test_face_needs_extension():
    f11 = field_ctx(11)
    f = parse_poly("x^2 - 2 y^2", f11)  # 2 is not a square mod 11
    np_ = newton_polygon(f)
    ff = face_factorization(f, np_.faces[0])
    assert ff.ctx.order == 121
    assert len(ff.roots) == 2
    for mu, nu in ff.roots:
        assert nu == 1
        assert ff.ctx.mul(mu, mu) == ff.ctx.from_int(2)


def test_face_char0_irrational_raises():
    f = parse_poly("x^2 - 2 y^2", QQ)
    np_ = newton_polygon(f)
    with pytest.raises(Char0IrreducibleRemainder):
        face_factorization(f, np_.faces[0])


def _face_poly_terms(f, face):
    out = {}
    for (i, j), v in f.c.items():
        if face.p * i + face.q * j == face.N:
            out[(i, j)] = v
    return out


@pytest.mark.parametrize("ctx", [field_ctx(5), field_ctx(2), field_ctx(13), QQ],
                         ids=repr)
def test_polygon_invariants_and_face_reconstruction(ctx):
    rng = random.Random(59)
    for _ in range(30):
        f = BiPoly(ctx)
        for _ in range(rng.randrange(2, 8)):
            k = (rng.randrange(8), rng.randrange(8))
            v = ctx.rand_elem(rng)
            if ctx.characteristic == 0:
                v = Fraction(rng.randint(-4, 4))
            if not ctx.is_zero(v):
                f.c[k] = v
        if f.is_zero():
            continue
        np_ = newton_polygon(f)
        assert np_.i0 == min(i for i, _ in f.c)
        assert np_.j0 == min(j for _, j in f.c)
        for v in np_.vertices:
            assert v in f.c
        slopes = []
        import math
        for face in np_.faces:
            assert math.gcd(face.p, face.q) == 1
            slopes.append(Fraction(face.p, face.q))
            for (i, j) in f.c:
                assert face.p * i + face.q * j >= face.N
        assert slopes == sorted(slopes, reverse=True)
        assert len(set(slopes)) == len(slopes)
        for face in np_.faces:
            try:
                ff = face_factorization(f, face)
            except Char0IrreducibleRemainder:
                continue
            c2 = ff.ctx
            rebuilt = BiPoly.monomial(c2, ff.a, ff.b, ff.lead)
            for mu, nu in ff.roots:
                lin = BiPoly(c2, {(face.q, 0): c2.one, (0, face.p): c2.neg(mu)})
                rebuilt = rebuilt * lin ** nu
            want = BiPoly(c2, {k: ff.embed(v)
                               for k, v in _face_poly_terms(f, face).items()})
            assert rebuilt == want
