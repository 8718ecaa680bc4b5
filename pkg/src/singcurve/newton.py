"""Newton polygon and face factorization.

The polygon is the lower-left convex hull of the support of f (as given, not
divided by x^i0 y^j0).  A compact face with primitive normal (p, q) lies on
the line p*X + q*Y = N; faces are listed top to bottom, so p/q strictly
decreases.  The terms of f on a face collapse to a univariate polynomial T
via u = x^q / y^p, whose nonzero roots are the face roots.
"""

import math

from .errors import InternalError, ZeroPolynomial, ZeroRoot
from .field import adjoin_splitting


class Face:
    __slots__ = ("p", "q", "N", "top", "bot", "K")

    def __init__(self, p, q, N, top, bot, K):
        self.p = p
        self.q = q
        self.N = N
        self.top = top
        self.bot = bot
        self.K = K

    def __repr__(self):
        return f"Face(p={self.p}, q={self.q}, N={self.N})"

    def __eq__(self, other):
        return (isinstance(other, Face) and (self.p, self.q, self.N, self.top, self.bot)
                == (other.p, other.q, other.N, other.top, other.bot))


class NewtonPolygon:
    __slots__ = ("i0", "j0", "vertices", "faces")

    def __init__(self, i0, j0, vertices, faces):
        self.i0 = i0
        self.j0 = j0
        self.vertices = vertices
        self.faces = faces

    def to_json_dict(self):
        return {
            "i0": self.i0,
            "j0": self.j0,
            "vertices": [list(v) for v in self.vertices],
            "faces": [{"p": f.p, "q": f.q, "N": f.N} for f in self.faces],
        }

    def __repr__(self):
        return f"NewtonPolygon(vertices={self.vertices})"


def _cross(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def newton_polygon(f):
    if f.is_zero():
        raise ZeroPolynomial("Newton polygon of the zero polynomial")
    supp = f.c.keys()
    i0 = min(i for i, _ in supp)
    j0 = min(j for _, j in supp)
    by_i = {}
    for i, j in supp:
        if i not in by_i or j < by_i[i]:
            by_i[i] = j
    stair = []
    for i in sorted(by_i):
        j = by_i[i]
        if not stair or j < stair[-1][1]:
            stair.append((i, j))
    hull = []
    for pt in stair:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    faces = []
    for (i1, j1), (i2, j2) in zip(hull, hull[1:]):
        di, dj = i2 - i1, j1 - j2
        g = math.gcd(di, dj)
        p, q = dj // g, di // g
        faces.append(Face(p, q, p * i1 + q * j1, (i1, j1), (i2, j2), g))
    return NewtonPolygon(i0, j0, hull, faces)


class FaceFactorization:
    """Terms of f on one face, as x^a y^b * lead * prod (x^q - mu_i y^p)^nu_i.

    roots live in ctx (possibly an extension of f's context); embed maps old
    coefficients into it.
    """

    __slots__ = ("face", "a", "b", "lead", "roots", "ctx", "embed")

    def __init__(self, face, a, b, lead, roots, ctx, embed):
        self.face = face
        self.a = a
        self.b = b
        self.lead = lead
        self.roots = roots
        self.ctx = ctx
        self.embed = embed


def face_factorization(f, face):
    """Factor the face polynomial of f on the given face.

    Over finite fields the context is extended as needed; over Q a nonlinear
    irreducible remainder raises Char0IrreducibleRemainder.
    """
    ctx = f.ctx
    i1, j1 = face.top
    j2 = face.bot[1]
    T = [f.coeff(i1 + s * face.q, j1 - s * face.p) for s in range(face.K + 1)]
    if ctx.is_zero(T[0]) or ctx.is_zero(T[-1]):
        raise InternalError("face endpoints must be support points")
    ctx2, embed, roots = adjoin_splitting(T, ctx)
    for mu, _ in roots:
        if ctx2.is_zero(mu):
            raise ZeroRoot("face polynomial root at zero")
    nsum = sum(nu for _, nu in roots)
    if face.N != face.p * i1 + face.q * j2 + face.p * face.q * nsum:
        raise InternalError("face value identity violated")
    return FaceFactorization(face, i1, j2, embed(T[-1]), roots, ctx2, embed)
