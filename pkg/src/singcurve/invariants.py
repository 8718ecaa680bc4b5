"""Invariants read off the Newton tree: decoration path products, delta and
the expected Milnor number, intersection multiplicities (combinatorial and
by power series), Zariski sequences, branch semigroups, and the area check.

Path products use the convention that a product over an empty vertex set is
1, so smooth branches and arrow-to-arrow paths need no special cases.
Infinite intersection numbers are returned as math.inf.
"""

import math

from .errors import (DisconnectedNodes, InternalError, NotIrreducible,
                     NotIrreducibleBranchShape, ParityViolation,
                     PrecisionExhausted)
from .hn import hn_map, transform_with_map
from .poly import gcd_bipoly, partials
from .tree import build_tree, build_tree_multi, minimalize, tree_multiplicity

INF = math.inf

PRECISION_CAP = 1 << 14


# ---------------------------------------------------------------------------
# path products


def _tree_path(t, a, b):
    """Unique path a -> b as (node id list, set of edge ids)."""
    parent = {a: None}
    stack = [a]
    while stack and b not in parent:
        cur = stack.pop()
        for eid, other, _, _ in t.neighbors(cur):
            if other not in parent:
                parent[other] = (cur, eid)
                stack.append(other)
    if b not in parent:
        raise DisconnectedNodes(f"no path from {a} to {b}")
    nodes, eids = [b], set()
    while parent[nodes[-1]] is not None:
        prev, eid = parent[nodes[-1]]
        eids.add(eid)
        nodes.append(prev)
    nodes.reverse()
    return nodes, eids


def _off_path_product(t, nid, eids):
    acc = 1
    for eid, _, dec, _ in t.neighbors(nid):
        if eid not in eids:
            acc *= dec
    return acc


def rho(t, v, w):
    """Product of off-path decorations over the interior vertices of the
    path from v to w.  Arrowheads never contribute."""
    nodes, eids = _tree_path(t, v, w)
    acc = 1
    for nid in nodes[1:-1]:
        acc *= _off_path_product(t, nid, eids)
    return acc


def rho_bar(t, v, w):
    """Like rho but v's own off-path decorations are included as well."""
    nodes, eids = _tree_path(t, v, w)
    acc = 1
    for nid in nodes[1:-1]:
        acc *= _off_path_product(t, nid, eids)
    if t.nodes[v].kind == "vertex":
        acc *= _off_path_product(t, v, eids)
    return acc


# ---------------------------------------------------------------------------
# delta, expected Milnor number, area check


def tree_delta(t):
    """(-M + r) / 2 from an already built tree."""
    m = tree_multiplicity(t).M
    r = t.branch_count()
    if (r - m) % 2:
        raise ParityViolation(f"-M + r = {r - m} is odd")
    return (r - m) // 2


def tree_mu_bar(t):
    return 1 - tree_multiplicity(t).M


def delta(f):
    return tree_delta(build_tree(f))


def mu_bar(f):
    """1 - M, the value the Milnor number takes in characteristic zero."""
    return tree_mu_bar(build_tree(f))


def _twice_area(pts):
    s = 0
    for k in range(len(pts)):
        x1, y1 = pts[k]
        x2, y2 = pts[(k + 1) % len(pts)]
        s += x1 * y2 - x2 * y1
    return abs(s)


def area_identity(f):
    """-M against the closed-region area sum over all polygons of the
    recursion.  Returns {"lhs", "rhs", "equal"}; equal is a theorem, so
    False signals a bug rather than bad input."""
    t = build_tree(f)
    m = tree_multiplicity(t).M
    rhs = 0
    for ev in t.events:
        if ev[0] == "root":
            hull = ev[1].vertices
            b = hull[0][1]
            a = hull[-1][0]
            pts = [(0, 0), (0, b)] + list(hull) + [(a, 0)]
            rhs += _twice_area(pts) - a - b
        else:
            _, n_loc, pg = ev
            hull = pg.vertices
            a = hull[-1][0]
            pts = [(n_loc, 0)] + [(n_loc + i, j) for i, j in hull]
            pts.append((n_loc + a, 0))
            rhs += _twice_area(pts) - a
    return {"lhs": -m, "rhs": rhs, "equal": -m == rhs}


# ---------------------------------------------------------------------------
# Zariski sequences and the branch semigroup


class ZariskiSeq:
    """Characteristic sequence (v_0..v_r) with its gcd descent d_k,
    multipliers n_k = d_(k-1)/d_k and conductor c."""

    __slots__ = ("vs", "d", "n", "c")

    def __init__(self, vs):
        vs = tuple(int(v) for v in vs)
        if not vs or min(vs) < 1:
            raise InternalError(f"bad characteristic sequence {vs}")
        d = [vs[0]]
        for v in vs[1:]:
            d.append(math.gcd(d[-1], v))
        if d[-1] != 1:
            raise InternalError(f"sequence gcd {d[-1]} is not 1")
        for k in range(len(d) - 1):
            if d[k] <= d[k + 1]:
                raise InternalError(f"gcd chain does not descend at {k}")
        n = [0] + [d[k - 1] // d[k] for k in range(1, len(d))]
        for k in range(1, len(vs) - 1):
            if n[k] * vs[k] >= vs[k + 1]:
                raise InternalError(f"growth axiom fails at {k}")
        c = 1 - vs[0]
        for k in range(1, len(vs)):
            c += (n[k] - 1) * vs[k]
        self.vs = vs
        self.d = tuple(d)
        self.n = tuple(n)
        self.c = c

    def __repr__(self):
        return f"ZariskiSeq({list(self.vs)}, c={self.c})"


def zariski_sequence(t, arrow=None):
    """Characteristic sequence of the branch ending in the given arrow.

    The tree is minimalized first; arrow ids survive that.  With arrow
    omitted the tree must have exactly one branch.  v_0 and v_1 come from
    the two dead ends of the first vertex, later v_i from the single dead
    end of each vertex along the path.
    """
    tm = minimalize(t)
    branches = [a.nid for a in tm.arrows("branch")]
    if arrow is None:
        if len(branches) != 1:
            raise NotIrreducibleBranchShape(
                f"tree has {len(branches)} branches, pass the arrow")
        arrow = branches[0]
    elif arrow not in tm.nodes or tm.nodes[arrow].kind != "branch":
        raise NotIrreducibleBranchShape(f"{arrow} is not a branch arrow")

    nbrs = tm.neighbors(arrow)
    if len(nbrs) != 1:
        raise InternalError("arrowhead with valency != 1")
    _, cur, _, _ = nbrs[0]
    if tm.nodes[cur].kind != "vertex":
        # smooth branch, its minimal tree has no vertices at all
        return ZariskiSeq((1,))

    chain = []
    prev = arrow
    while True:
        dead, fwd = [], []
        for eid, other, dec, _ in tm.neighbors(cur):
            if other == prev:
                continue
            kind = tm.nodes[other].kind
            if kind == "zero":
                dead.append(dec)
            elif kind == "branch":
                raise NotIrreducibleBranchShape("second branch on the path")
            else:
                fwd.append(other)
        if not fwd:
            if len(dead) != 2:
                raise NotIrreducibleBranchShape(
                    f"chain end carries {len(dead)} dead ends")
            chain.append((tm.nodes[cur].N, dead))
            break
        if len(fwd) != 1 or len(dead) != 1:
            raise NotIrreducibleBranchShape("branch path is not a chain")
        chain.append((tm.nodes[cur].N, dead))
        prev, cur = cur, fwd[0]

    chain.reverse()
    n1, dd = chain[0]
    hi, lo = max(dd), min(dd)
    if n1 % hi or n1 % lo:
        raise InternalError("dead-end decoration does not divide N")
    vs = [n1 // hi, n1 // lo]
    for nk, dead in chain[1:]:
        if nk % dead[0]:
            raise InternalError("dead-end decoration does not divide N")
        vs.append(nk // dead[0])
    return ZariskiSeq(vs)


def conductor(s):
    return s.c


def _semigroup_table(s):
    reach = [False] * max(s.c, 1)
    reach[0] = True
    for k in range(1, len(reach)):
        reach[k] = any(k >= g and reach[k - g] for g in s.vs)
    return reach


def semigroup_membership(s, n):
    """n in <v_0..v_r>, decided by a table up to the conductor."""
    if n < 0:
        return False
    if n >= s.c:
        return True
    return _semigroup_table(s)[n]


def semigroup_gaps(s):
    """Sorted list of the gaps; there are exactly delta of them."""
    reach = _semigroup_table(s)
    return [k for k in range(1, s.c) if not reach[k]]


# ---------------------------------------------------------------------------
# truncated power series over a coefficient context


def _ser_zero(ctx, n):
    return [ctx.zero] * n


def _ser_mul(ctx, a, b, n):
    out = [ctx.zero] * n
    add, mul, is_zero = ctx.add, ctx.mul, ctx.is_zero
    for i, ai in enumerate(a):
        if i >= n:
            break
        if is_zero(ai):
            continue
        for j in range(min(n - i, len(b))):
            bj = b[j]
            if not is_zero(bj):
                out[i + j] = add(out[i + j], mul(ai, bj))
    return out


def _ser_pow(ctx, a, e, n):
    out = [ctx.zero] * n
    out[0] = ctx.one
    base = a
    while e:
        if e & 1:
            out = _ser_mul(ctx, out, base, n)
        e >>= 1
        if e:
            base = _ser_mul(ctx, base, base, n)
    return out


def _ser_inv(ctx, a, n):
    inv0 = ctx.inv(a[0])
    out = [ctx.zero] * n
    out[0] = inv0
    for k in range(1, n):
        s = ctx.zero
        for i in range(1, min(k, len(a) - 1) + 1):
            if not ctx.is_zero(a[i]) and not ctx.is_zero(out[k - i]):
                s = ctx.add(s, ctx.mul(a[i], out[k - i]))
        out[k] = ctx.neg(ctx.mul(inv0, s))
    return out


def _ser_order(ctx, a):
    return next((k for k, c in enumerate(a) if not ctx.is_zero(c)), None)


def _ser_eval_row(ctx, cols, phi, n):
    """sum of cols[i] * phi^i via Horner over the present exponents."""
    acc = [ctx.zero] * n
    prev = None
    for i in sorted(cols, reverse=True):
        if prev is not None:
            acc = _ser_mul(ctx, acc, _ser_pow(ctx, phi, prev - i, n), n)
        acc[0] = ctx.add(acc[0], cols[i])
        prev = i
    if prev:
        acc = _ser_mul(ctx, acc, _ser_pow(ctx, phi, prev, n), n)
    return acc


def _ser_eval(g, phi, psi, n):
    """g(phi(t), psi(t)) mod t^n, Horner in both variables.

    Both series must vanish at t = 0; that lets monomials of total degree
    at least n be skipped, since they only feed orders at or above n.
    """
    ctx = g.ctx
    if (phi and not ctx.is_zero(phi[0])) or (psi and not ctx.is_zero(psi[0])):
        raise InternalError("series substitution needs ord >= 1 arguments")
    rows = {}
    for (i, j), v in g.c.items():
        if i + j < n:
            rows.setdefault(j, {})[i] = v
    acc = [ctx.zero] * n
    prev = None
    for j in sorted(rows, reverse=True):
        if prev is not None:
            acc = _ser_mul(ctx, acc, _ser_pow(ctx, psi, prev - j, n), n)
        row = _ser_eval_row(ctx, rows[j], phi, n)
        acc = [ctx.add(a, b) for a, b in zip(acc, row)]
        prev = j
    if prev:
        acc = _ser_mul(ctx, acc, _ser_pow(ctx, psi, prev, n), n)
    return acc


def _trunc_total(f, n):
    """Drop the monomials of total degree at least n."""
    r = f.__class__(f.ctx)
    r.c = {k: v for k, v in f.c.items() if k[0] + k[1] < n}
    return r


# ---------------------------------------------------------------------------
# branch parametrization


class Parametrization:
    """Truncated series pair (phi(t), psi(t)) with f(phi, psi) = 0 mod t^T."""

    __slots__ = ("phi", "psi", "trunc", "ctx")

    def __init__(self, phi, psi, trunc, ctx):
        self.phi = phi
        self.psi = psi
        self.trunc = trunc
        self.ctx = ctx

    def orders(self):
        """(ord phi, ord psi), None for a series that is zero so far."""
        return (_ser_order(self.ctx, self.phi),
                _ser_order(self.ctx, self.psi))

    def __repr__(self):
        o1, o2 = self.orders()
        return f"Parametrization(ord phi={o1}, ord psi={o2}, T={self.trunc})"


def _lift_steps(steps, src, value, apply_step):
    guard = 0
    cur = src
    while True:
        done = True
        for s, embed, dst in steps:
            if cur == s:
                value = apply_step(value, embed, dst)
                cur = dst
                done = False
                break
        if done:
            return cur, value
        guard += 1
        if guard > len(steps) + 1:
            raise InternalError("embedding walk does not terminate")


def _lift_elem(steps, src, v, target):
    cur, v = _lift_steps(steps, src, v, lambda x, emb, d: emb(x))
    if cur != target:
        raise InternalError("coefficient lift missed the target field")
    return v


def _lift_poly(steps, f, target):
    cur, f = _lift_steps(steps, f.ctx, f,
                         lambda g, emb, d: g.map_coeffs(emb, d))
    if cur != target:
        raise InternalError("polynomial lift missed the target field")
    return f


def _solve_smooth(w, n):
    """Series s with w(t, s(t)) = 0 mod t^n, for w of Y-order one at X=0."""
    ctx = w.ctx
    order = _ser_order(ctx, w.subs_x0())
    if order != 1:
        raise InternalError(f"chart curve has Y-order {order}, wanted 1")
    wy = partials(w)[1]
    s = [ctx.zero] * n
    prec = 1
    while prec < n:
        # each Newton round doubles the valid order, so work at the
        # precision the round is about to reach
        prec = min(2 * prec, n)
        ident = [ctx.zero] * prec
        ident[1] = ctx.one
        cur = s[:prec]
        val = _ser_eval(w, ident, cur, prec)
        der = _ser_eval(wy, ident, cur, prec)
        corr = _ser_mul(ctx, val, _ser_inv(ctx, der, prec), prec)
        for k in range(prec):
            s[k] = ctx.sub(cur[k], corr[k])
    ident = [ctx.zero] * n
    if n > 1:
        ident[1] = ctx.one
    if _ser_order(ctx, _ser_eval(w, ident, s, n)) is not None:
        raise InternalError("Newton iteration failed to converge")
    return s


def _maps_to_arrow(t, aid):
    """HN maps along the path from the root to the given branch arrow,
    with all roots lifted into the tree's final coefficient field."""
    node = t.nodes[aid]
    steps = t.meta["steps"]
    ctx = t.meta["ctx"]
    if "axis" in node.aux:
        return None, node.aux["axis"]
    specs = []
    cidx = node.aux["chain"]
    while cidx is not None:
        rec = t.chains[cidx]
        if rec["map"] is not None:
            specs.append(rec["map"])
        cidx = t.chain_of[rec["parent"]] if rec["parent"] is not None else None
    specs.reverse()
    specs.append((node.aux["p"], node.aux["q"], node.aux["mu"],
                  node.aux["ctx"]))
    maps = []
    for p, q, mu, mctx in specs:
        maps.append(hn_map(p, q, _lift_elem(steps, mctx, mu, ctx), ctx))
    return maps, None


def _parametrize_arrow(f, t, aid, n):
    ctx = t.meta["ctx"]
    maps, axis = _maps_to_arrow(t, aid)
    if axis is not None:
        if t.vertices():
            raise InternalError("axis branch on a tree with vertices")
        phi, psi = _ser_zero(ctx, n), _ser_zero(ctx, n)
        if n > 1:
            if axis == "x":
                psi[1] = ctx.one
            else:
                phi[1] = ctx.one
        return Parametrization(phi, psi, n, ctx)
    h = _trunc_total(_lift_poly(t.meta["steps"], f, ctx), n)
    for m in maps:
        if not h.c:
            raise PrecisionExhausted("precision too low for the chart chain")
        _, h = transform_with_map(h, m)
        h = _trunc_total(h, n)
    if not h.c:
        raise PrecisionExhausted("precision too low for the chart chain")
    psi = _solve_smooth(h, n)
    phi = _ser_zero(ctx, n)
    if n > 1:
        phi[1] = ctx.one
    for m in reversed(maps):
        shift = list(psi)
        shift[0] = ctx.add(shift[0], m.mu_bar)
        xa = _ser_mul(ctx, _ser_pow(ctx, phi, m.p, n),
                      _ser_pow(ctx, shift, m.A, n), n)
        ya = _ser_mul(ctx, _ser_pow(ctx, phi, m.q, n),
                      _ser_pow(ctx, shift, m.B, n), n)
        phi, psi = xa, ya
    res = _ser_eval(_lift_poly(t.meta["steps"], f, ctx), phi, psi, n)
    if _ser_order(ctx, res) is not None:
        raise InternalError("parametrization does not annihilate the curve")
    return Parametrization(phi, psi, n, ctx)


def parametrize_branch(f, terms=64):
    """Parametrization of an irreducible f to the given precision."""
    t = build_tree(f)
    arrows = t.arrows("branch")
    if len(arrows) != 1:
        raise NotIrreducible(f"{len(arrows)} branches")
    return _parametrize_arrow(f, t, arrows[0].nid, max(int(terms), 2))


# ---------------------------------------------------------------------------
# intersection multiplicities


def _vanishes_at_origin(f):
    return f.is_zero() or f.ctx.is_zero(f.coeff(0, 0))


def _common_through_origin(f, g):
    if f.is_zero() or g.is_zero():
        return _vanishes_at_origin(f) and _vanishes_at_origin(g)
    d = gcd_bipoly(f, g)
    return d.ord() > 0 if len(d.c) else False


def intersect_tree(f, g):
    """Intersection number at the origin from the tree of f*g; math.inf
    when f and g share a component through the origin."""
    if f.ctx != g.ctx:
        raise InternalError("mixed coefficient contexts")
    if not _vanishes_at_origin(f) or not _vanishes_at_origin(g):
        return 0
    if _common_through_origin(f, g):
        return INF
    t = build_tree_multi([f, g])
    fa = [a.nid for a in t.arrows("branch") if a.owner == 0]
    ga = [a.nid for a in t.arrows("branch") if a.owner == 1]
    return sum(rho(t, a, b) for a in fa for b in ga)


def intersect_param(f, g, terms=None):
    """ord_t g(phi, psi) along the branch of f, doubling the precision
    until the order certificate (order < T/2) holds."""
    if f.ctx != g.ctx:
        raise InternalError("mixed coefficient contexts")
    if not _vanishes_at_origin(f) or not _vanishes_at_origin(g):
        return 0
    if _common_through_origin(f, g):
        return INF
    t = build_tree(f)
    arrows = t.arrows("branch")
    if len(arrows) != 1:
        raise NotIrreducible(f"{len(arrows)} branches")
    if terms is None:
        expected = intersect_tree(f, g)
        n = 16
        while n < 4 * expected:
            n *= 2
    else:
        n = max(int(terms), 4)
    ctx = t.meta["ctx"]
    gl = _lift_poly(t.meta["steps"], g, ctx)
    while n <= PRECISION_CAP:
        try:
            par = _parametrize_arrow(f, t, arrows[0].nid, n)
        except PrecisionExhausted:
            n *= 2
            continue
        order = _ser_order(ctx, _ser_eval(gl, par.phi, par.psi, n))
        if order is not None and 2 * order < n:
            return order
        n *= 2
    raise PrecisionExhausted(
        f"no stable order below precision {PRECISION_CAP}")


def delta_additivity_check(factors):
    """delta of the product against sum of deltas plus pairwise
    intersections."""
    t = build_tree_multi(factors)
    total = tree_delta(t)
    acc = sum(delta(f) for f in factors)
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            it = intersect_tree(factors[i], factors[j])
            if it == INF:
                return False
            acc += it
    return total == acc
