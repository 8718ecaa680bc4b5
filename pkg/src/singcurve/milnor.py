"""Milnor numbers through local intersection of the partials, Newton
non-degeneracy tests, polar curves, and the equality checker mu = 1 - M.

The local intersection routine is a characteristic-free reduction: strip
monomial factors (each x costs the y-order of the partner and vice versa),
then cancel leading terms of the restrictions to y = 0 until a variable
splits off.  Infinity is fenced up front by one gcd, so the loop always
terminates.
"""

from .errors import InternalError, TruncationUnstable
from .field import field_ctx, uni_deg, uni_divmod, uni_gcd, uni_trim
from .invariants import INF, rho, tree_mu_bar
from .newton import newton_polygon
from .poly import BiPoly, gcd_bipoly, mul_unit_truncated, partials
from .tree import build_tree, build_tree_multi, minimalize, tree_multiplicity, \
    vertex_report


class LocalMult:
    """Local intersection number at the origin; value may be math.inf."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __eq__(self, other):
        if isinstance(other, LocalMult):
            return self.value == other.value
        return self.value == other

    def __repr__(self):
        return f"LocalMult({self.value})"


def _vanishes(f):
    return f.is_zero() or f.ctx.is_zero(f.coeff(0, 0))


def _ord_of(ctx, coeffs):
    return next((k for k, c in enumerate(coeffs) if not ctx.is_zero(c)), None)


def _clip(f, n):
    """Drop total degree >= n; second value says whether anything fell."""
    kept = {k: v for k, v in f.c.items() if k[0] + k[1] < n}
    if len(kept) == len(f.c):
        return f, False
    return BiPoly(f.ctx, kept), True


def _sub_mul_clip(g, f, q, n):
    """g - q(x)*f keeping total degree < n; flags dropped terms."""
    ctx = g.ctx
    out = dict(g.c)
    dropped = False
    for k, c in enumerate(q):
        if ctx.is_zero(c):
            continue
        c = ctx.neg(c)
        for (i, j), v in f.c.items():
            i2 = i + k
            if i2 + j >= n:
                dropped = True
                continue
            key = (i2, j)
            w = ctx.add(out.get(key, ctx.zero), ctx.mul(c, v))
            if ctx.is_zero(w):
                out.pop(key, None)
            else:
                out[key] = w
    return BiPoly(ctx, out), dropped


def _reduce_pair(f, g, n):
    """One reduction round with every intermediate cut at total degree n.

    Terms of degree >= n perturb the pair without changing the value as
    long as the value still to be collected stays under n, so the result
    is certified when (value - acc at the first cut) < n.  Returns None
    when that fails and the caller should double n.  A common-branch
    signal (an axis dividing both, or one argument a multiple of the
    other) is a certified infinity in a run that never cut anything.
    """
    ctx = f.ctx
    acc = 0
    base = None  # acc when truncation first bit, None while the run is exact
    f, fc = _clip(f, n)
    g, gc = _clip(g, n)
    if fc or gc:
        base = 0
    if f.is_zero() or g.is_zero():
        return None
    while True:
        # keeps infinite pairs from spinning: acc <= value in exact runs,
        # so a finite value still certifies once n outgrows it; clipped
        # runs live until the certificate itself is dead
        if acc >= n and (base is None or acc - base >= n):
            return None
        if not _vanishes(f) or not _vanishes(g):
            return acc if base is None or acc - base < n else None
        for first in (True, False):
            h = f if first else g
            other = g if first else f
            a, b = h.x_mult(), h.y_mult()
            if a or b:
                for mult, rest in ((a, other.subs_x0()), (b, other.subs_y0())):
                    if not mult:
                        continue
                    o = _ord_of(ctx, rest)
                    if o is None:
                        # an axis divides both: proof of a common branch
                        # when nothing was cut, inconclusive otherwise
                        return INF if base is None else None
                    acc += mult * o
                h = h.div_monomial(a, b)
                if first:
                    f = h
                else:
                    g = h
        if not _vanishes(f) or not _vanishes(g):
            return acc if base is None or acc - base < n else None
        fr = f.subs_y0()
        gr = g.subs_y0()
        if len(fr) > len(gr):
            f, g, fr, gr = g, f, gr, fr
        # cancel g's whole y=0 restriction down to a remainder in one pass
        q, _ = uni_divmod(ctx, gr, fr)
        g, dropped = _sub_mul_clip(g, f, q, n)
        if dropped and base is None:
            base = acc
        if g.is_zero():
            # g was a multiple of f: a common branch in the exact run
            return INF if base is None else None


_REDUCE_START = 32


def local_intersection(g, h):
    """Intersection multiplicity of g and h at the origin.

    Certified rounds come first; a finite value can never certify when the
    pair shares a branch, so the expensive exact gcd runs only if no round
    certifies below the Bezout bound deg(g)*deg(h), and then only to tell
    infinity from a logic fault.
    """
    if g.ctx != h.ctx:
        raise InternalError("mixed coefficient contexts")
    if g.is_zero() or h.is_zero():
        other = h if g.is_zero() else g
        return LocalMult(INF if _vanishes(other) else 0)
    if not _vanishes(g) or not _vanishes(h):
        return LocalMult(0)
    bound = max(i + j for i, j in g.c) * max(i + j for i, j in h.c)
    n = _REDUCE_START
    while True:
        v = _reduce_pair(g, h, n)
        if v is not None:
            return LocalMult(v)
        if n > bound:
            d = gcd_bipoly(g, h)
            if d.c and min(i + j for i, j in d.c) > 0:
                return LocalMult(INF)
            raise InternalError(
                "reduction failed to certify beyond the Bezout bound")
        n *= 2


def milnor_number(f, unit=None, trunc=None):
    """dim of the Jacobian quotient, as i(f_x, f_y); math.inf when the
    partials share a factor through the origin.

    With a unit the number is computed for unit*f truncated at total degree
    trunc (default 2*(1 - M) + 4) and recomputed two degrees higher; a
    disagreement raises TruncationUnstable.
    """
    if unit is None:
        return local_intersection(*partials(f)).value
    if trunc is None:
        trunc = 2 * tree_mu_bar(build_tree(f)) + 4
    first = local_intersection(
        *partials(mul_unit_truncated(f, unit, trunc))).value
    second = local_intersection(
        *partials(mul_unit_truncated(f, unit, trunc + 2))).value
    if first != second:
        raise TruncationUnstable(
            f"mu {first} at degree {trunc} but {second} at {trunc + 2}")
    return first


# ---------------------------------------------------------------------------
# Newton non-degeneracy


def _face_system_roots(f, face):
    """True when the partials of the face part share a nonzero root."""
    ctx = f.ctx
    k = face.K
    i1, j1 = face.top
    a = [ctx.zero] * (k + 1)
    b = [ctx.zero] * (k + 1)
    for s in range(k + 1):
        c = f.coeff(i1 + s * face.q, j1 - s * face.p)
        a[s] = ctx.mul_int(c, i1 + s * face.q)
        b[s] = ctx.mul_int(c, j1 - s * face.p)
    a = uni_trim(ctx, a)
    b = uni_trim(ctx, b)
    if not a and not b:
        return True
    if not a:
        g = b
    elif not b:
        g = a
    else:
        g = uni_gcd(ctx, a, b)
    lead = _ord_of(ctx, g)
    return uni_deg(g) - lead >= 1


def is_nd_face(f, face):
    """No common torus zero of the face part's partials."""
    return not _face_system_roots(f, face)


def _vertex_degenerate(ctx, i, j):
    return ctx.is_zero(ctx.mul_int(ctx.one, i)) and \
        ctx.is_zero(ctx.mul_int(ctx.one, j))


def is_nnd(f):
    """Newton non-degenerate: every compact face, vertices included,
    passes the torus test."""
    pg = newton_polygon(f)
    ctx = f.ctx
    for (i, j) in pg.vertices:
        if _vertex_degenerate(ctx, i, j):
            return False
    return all(is_nd_face(f, face) for face in pg.faces)


# ---------------------------------------------------------------------------
# polar curves


def polar_intersection(f, a, b):
    """i(f, b f_x - a f_y) against -M + i(f, ax + by), both engines.

    The identity needs every branch to meet the line with multiplicity
    prime to the characteristic; when that fails the comparison is reported
    as skipped rather than asserted.
    """
    ctx = f.ctx
    if ctx.is_zero(a) and ctx.is_zero(b):
        raise InternalError("the line needs a nonzero coefficient")
    fx, fy = partials(f)
    polar = fx.scale(b) + fy.scale(ctx.neg(a))
    lhs = local_intersection(f, polar).value
    line = BiPoly(ctx, {(1, 0): a, (0, 1): b})
    t = build_tree_multi([f, line])
    la = [n.nid for n in t.arrows("branch") if n.owner == 1]
    per_branch = [rho(t, n.nid, la[0])
                  for n in t.arrows("branch") if n.owner == 0]
    i_line = sum(per_branch)
    p = ctx.characteristic
    skipped = any(p and v % p == 0 for v in per_branch)
    mf = tree_multiplicity(build_tree(f)).M
    rhs = -mf + i_line
    return {"polar": lhs, "expected": rhs,
            "equal": None if skipped else lhs == rhs, "skipped": skipped}


# ---------------------------------------------------------------------------
# the equality checker


class ConjReport:
    """Per-prime comparison of mu with 1 - M against the divisor test."""

    __slots__ = ("p", "m_abs", "n_values", "divides", "mu", "mu_bar",
                 "equal", "consistent", "shortcut", "skipped")

    def __init__(self, p, skipped=None):
        self.p = p
        self.skipped = skipped
        self.m_abs = None
        self.n_values = None
        self.divides = None
        self.mu = None
        self.mu_bar = None
        self.equal = None
        self.consistent = None
        self.shortcut = False

    def to_dict(self):
        mu = self.mu
        if mu == INF:
            mu = "infinity"
        return {"p": self.p, "skipped": self.skipped, "M_abs": self.m_abs,
                "N_values": self.n_values, "divides": self.divides,
                "mu": mu, "mu_bar": self.mu_bar, "equal": self.equal,
                "consistent": self.consistent, "shortcut": self.shortcut}

    def __repr__(self):
        if self.skipped:
            return f"ConjReport(p={self.p}, skipped={self.skipped!r})"
        return (f"ConjReport(p={self.p}, mu={self.mu}, mu_bar={self.mu_bar},"
                f" consistent={self.consistent})")


def _reduce_mod(f, p):
    ctx = field_ctx(p)
    out = BiPoly(ctx)
    for k, v in f.c.items():
        if v.denominator % p == 0:
            return None, "denominator divisible by p"
        w = ctx.div(ctx.from_int(v.numerator), ctx.from_int(v.denominator))
        if not ctx.is_zero(w):
            out.c[k] = w
    if out.is_zero():
        return None, "vanishes mod p"
    return out, None


def check_conjecture(f, primes, verify_shortcut=False):
    """One report per prime: reduce f, compare mu with 1 - M, and test
    the divisibility criterion p | N_v on the minimal tree."""
    from .poly import reduced_check

    reports = []
    for p in primes:
        fp, why = _reduce_mod(f, p)
        if fp is None:
            reports.append(ConjReport(p, skipped=why))
            continue
        ok, _ = reduced_check(fp)
        if not ok:
            reports.append(ConjReport(p, skipped="not reduced mod p"))
            continue
        rep = ConjReport(p)
        t = build_tree(fp, check=False)
        m = tree_multiplicity(t).M
        rep.m_abs = abs(m)
        rep.n_values = vertex_report(minimalize(t))
        rep.divides = any(v % p == 0 for v in rep.n_values)
        rep.mu_bar = 1 - m
        if p > -m + fp.ord() and not verify_shortcut:
            rep.shortcut = True
            rep.mu = rep.mu_bar
        else:
            rep.shortcut = p > -m + fp.ord()
            rep.mu = milnor_number(fp)
            if rep.shortcut and rep.mu != rep.mu_bar:
                raise InternalError(
                    f"shortcut bound violated at p={p}: mu={rep.mu}")
        rep.equal = rep.mu == rep.mu_bar
        rep.consistent = rep.equal == (not rep.divides)
        reports.append(rep)
    return reports
