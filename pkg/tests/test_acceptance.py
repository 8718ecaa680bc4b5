"""End-to-end expectations, one numbered test per acceptance check.

Run with -v to get a pass/fail line per check.  Everything here is
frozen to exact values; nothing is tolerance-based.
"""

import math

from singcurve.field import field_ctx
from singcurve.milnor import check_conjecture, milnor_number
from singcurve.poly import parse_poly
from singcurve.tree import build_tree, tree_multiplicity

import test_properties as props
from curves import EX1, EX2, four_lines

QQ = field_ctx(0)

INF = math.inf

FOUR_LINES_GENERIC = [
    ((1, 2, 3, 4), 9),
    ((0, 0, 1, 2), 13),
    ((0, 0, 0, 1), 15),
    ((0, 0, 0, 0), 17),
]

FOUR_LINES_CHAR2 = [
    ((1, 1, 1, 1), 20),
    ((0, 1, 1, 1), 11),
    ((0, 0, 1, 1), 20),
    ((0, 0, 0, 1), 19),
    ((0, 0, 0, 0), 20),
]


def _mu(text, p, unit=None):
    ctx = field_ctx(p)
    u = parse_poly(unit, ctx) if unit else None
    return milnor_number(parse_poly(text, ctx), unit=u)


def test_01_ex1_tree_decorations_and_multiplicity():
    t = build_tree(parse_poly(EX1, QQ))
    vs = sorted(t.vertices(), key=lambda n: int(n.nid[1:]))
    assert [v.N for v in vs] == [24, 100, 202]
    assert [tuple(sorted((v.q, v.p))) for v in vs] == \
        [(2, 3), (2, 25), (2, 101)]
    m = tree_multiplicity(t).M
    assert abs(m) == 155 and m == -155


def test_02_ex1_milnor_table():
    table = {7: 156, 11: 156, 13: 156, 97: 156,
             5: 157, 101: 157, 3: 166, 2: INF}
    for p, want in table.items():
        assert _mu(EX1, p) == want, p


def test_03_ex1_with_unit():
    unit = "1 + x + y + x y"
    assert _mu(EX1, 2, unit) == 168
    assert _mu(EX1, 3, unit) == 157


def test_04_ex2_multiplicity_and_milnor_table():
    for p, want in [(2, 103), (3, 101), (7, 101), (13, 101), (113, 101)]:
        m = tree_multiplicity(build_tree(parse_poly(EX2, field_ctx(p)))).M
        assert abs(m) == want, p
    table = {2: 133, 7: 105, 11: INF, 13: 104,
             3: 102, 5: 102, 17: 102, 113: 102}
    for p, want in table.items():
        assert _mu(EX2, p) == want, p


def test_05_four_lines_family():
    for a, want in FOUR_LINES_GENERIC:
        f = parse_poly(four_lines(a), field_ctx(11))
        mu = milnor_number(f)
        assert mu == want, (a, 11)
        assert mu == 1 - tree_multiplicity(build_tree(f)).M, (a, 11)
    assert _mu(four_lines((0, 0, 0, 1)), 7) == 17
    assert _mu(four_lines((0, 0, 0, 0)), 5) == 20
    for a, want in FOUR_LINES_CHAR2:
        assert _mu(four_lines(a), 2) == want, (a, 2)


def test_06_equality_iff_no_divisor_on_all_pairs():
    sweeps = [
        (EX1, [2, 3, 5, 7, 11, 13, 97, 101]),
        (EX2, [2, 3, 5, 7, 11, 13, 17, 113]),
        (four_lines((1, 2, 3, 4)), [11]),
        (four_lines((0, 0, 1, 2)), [11]),
        (four_lines((0, 0, 0, 1)), [2, 7, 11]),
        (four_lines((0, 0, 0, 0)), [2, 5, 11]),
        (four_lines((1, 1, 1, 1)), [2]),
        (four_lines((0, 1, 1, 1)), [2]),
        (four_lines((0, 0, 1, 1)), [2]),
    ]
    for text, primes in sweeps:
        for rep in check_conjecture(parse_poly(text, QQ), primes):
            assert rep.skipped is None, (text, rep.p)
            assert rep.consistent, (text, rep.p)


def test_07_random_property_suite():
    props.test_corpus_size()
    props.test_parity_and_minimalization_of_m()
    props.test_vertex_n_is_a_rho_bar_sum()
    props.test_area_identity_holds()
    props.test_deligne_inequality()
    props.test_zariski_axioms_conductor_and_gap_count()
    props.test_intersection_engines_agree_on_branch_pairs()
    props.test_rho_survives_minimalization()
    props.test_delta_additivity()


def test_08_shortcut_prime_bound():
    props.test_shortcut_prime_gives_expected_mu()
