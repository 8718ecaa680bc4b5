"""Independent brute-force oracles used to pin expected values.

Everything here is deliberately naive (exhaustive scans, sympy, direct
series substitution) and shares no code with the library's own algorithms.
"""

import sympy
from sympy import GF, Poly, symbols

X, Y, U, T = symbols("x y u t")


def brute_roots(ctx, coeffs):
    """Roots in ctx of a coefficient list, with multiplicities, by scanning."""
    from singcurve.field import uni_deg, uni_eval, uni_quo

    out = []
    for e in ctx.elements():
        m = 0
        f = list(coeffs)
        while uni_deg(f) >= 1 and ctx.is_zero(uni_eval(ctx, f, e)):
            f = uni_quo(ctx, f, [ctx.neg(e), ctx.one])
            m += 1
        if m:
            out.append((e, m))
    return out


def sympy_factor_fp(coeffs, p):
    """Multiset of (coeff tuple, mult) for the monic factorization over GF(p)."""
    poly = Poly(list(reversed(coeffs)), U, domain=GF(p))
    _, factors = poly.factor_list()
    out = []
    for fac, m in factors:
        monic = fac.monic()
        cs = [int(c) % p for c in reversed(monic.all_coeffs())]
        out.append((tuple(cs), m))
    return sorted(out)


def _sym_coeff(c):
    if isinstance(c, int):
        return sympy.Integer(c)
    return sympy.Rational(c.numerator, c.denominator)


def sympy_bipoly(d, p):
    """Build a sympy Poly in (x, y) from a coefficient dict over GF(p) or QQ."""
    expr = sum(_sym_coeff(c) * X**i * Y**j for (i, j), c in d.items())
    dom = GF(p) if p else "QQ"
    return Poly(expr, X, Y, domain=dom)


def resultant_order(fd, gd, p):
    """ord_x Res_y(f, g), or None when the oracle's preconditions fail.

    Valid as the local intersection number at the origin when the only common
    solution of f(0, y) = g(0, y) = 0 is y = 0 and one of the leading
    y-coefficients does not vanish at x = 0.
    """
    f = sympy_bipoly(fd, p)
    g = sympy_bipoly(gd, p)
    fl = Poly(f, Y).LC()
    gl = Poly(g, Y).LC()
    if sympy.simplify(fl.subs(X, 0) if hasattr(fl, "subs") else fl) == 0 and \
       sympy.simplify(gl.subs(X, 0) if hasattr(gl, "subs") else gl) == 0:
        return None
    f0 = Poly(f.as_expr().subs(X, 0), Y, domain=f.domain)
    g0 = Poly(g.as_expr().subs(X, 0), Y, domain=g.domain)
    if f0.is_zero or g0.is_zero:
        return None
    common = f0.gcd(g0)
    # the only shared root on x = 0 must be y = 0
    if common.degree() > 0:
        quot, rem = common.div(Poly(Y**common.degree(), Y, domain=common.domain))
        if not rem.is_zero or not quot.is_ground:
            return None
    res = sympy.resultant(f.as_expr(), g.as_expr(), Y)
    rp = Poly(res, X, domain=f.domain)
    if rp.is_zero:
        return None
    coeffs = rp.all_coeffs()[::-1]
    o = 0
    while coeffs[o] == 0:
        o += 1
    return o


def series_order(fd, phi, psi, p, trunc):
    """ord_t f(phi(t), psi(t)) via direct sympy substitution mod t^trunc."""
    expr = sum(int(c) * X**i * Y**j for (i, j), c in fd.items())
    s = expr.subs({X: phi, Y: psi})
    s = sympy.expand(s)
    poly = Poly(s, T)
    coeffs = poly.all_coeffs()[::-1]
    for o, c in enumerate(coeffs):
        cv = c % p if p else c
        if cv != 0 and o < trunc:
            return o
    return None


def semigroup_from_generators(gens, bound):
    """All semigroup elements <= bound generated by gens (with 0)."""
    reach = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for g in gens:
            w = v + g
            if w <= bound and w not in reach:
                reach.add(w)
                frontier.append(w)
    return sorted(reach)


def tree_path(tree, src, dst):
    """Unique path src -> dst as a list of (node id, eid) steps, dst last."""
    prev = {src: None}
    stack = [src]
    while stack:
        nid = stack.pop()
        if nid == dst:
            break
        for eid, other, _, _ in tree.neighbors(nid):
            if other not in prev:
                prev[other] = (nid, eid)
                stack.append(other)
    path = []
    cur = dst
    while prev[cur] is not None:
        nid, eid = prev[cur]
        path.append((cur, eid))
        cur = nid
    path.reverse()
    return path


def rho_bar_path(tree, src, alpha):
    """Product over chain vertices on the path of their off-path decorations.

    The path runs from src to the arrow alpha; src itself counts as on the
    path, arrow endpoints do not contribute.
    """
    path = tree_path(tree, src, alpha)
    on_path = {eid for _, eid in path}
    out = 1
    for nid in [src] + [n for n, _ in path]:
        node = tree.nodes[nid]
        if node.kind != "vertex":
            continue
        for eid, _, dself, _ in tree.neighbors(nid):
            if eid not in on_path:
                out *= dself
    return out


def multiplicity_sum_check(tree):
    """N_v == sum of rho_bar(v, alpha) over branch arrows, for every v in
    V union A0.  Returns the list of offending node ids (empty when clean)."""
    branches = [n.nid for n in tree.arrows("branch")]
    bad = []
    for n in list(tree.vertices()) + list(tree.arrows("zero")):
        got = sum(rho_bar_path(tree, n.nid, a) for a in branches)
        if got != n.N:
            bad.append(n.nid)
    return bad
