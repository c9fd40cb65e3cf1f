import random

import pytest

from hermite_ct.diffop import (
    DiffOp, PlaceSplit, adjoint, apply, clear_denominators, content_normalize,
    integer_roots, local_data_finite, local_data_infinity, nonunit_integer_values,
    op_mul, poly_normalize, right_divmod, singular_places,
)
from hermite_ct.field import ParamField
from hermite_ct.parser import parse_diffop, parse_xrat
from hermite_ct.polys import XPoly, XRat

from conftest import INTRO, random_op, random_xrat

Q = ParamField()
K = ParamField(["n", "p"])


def op(text, field=Q):
    return parse_diffop(text, field)


def xp(text, field=Q):
    return parse_xrat(text, field).num


def s_poly(cs, field=Q):
    return XPoly(field, cs)


def test_apply_basic():
    M = op("x^2*Dx^2 + Dx + 3")
    R = parse_xrat("1/x", Q)
    assert apply(M, R) == parse_xrat("2/x - 1/x^2 + 3/x", Q)


def test_composition_semantics():
    assert op("Dx*x") == op("x*Dx + 1")
    assert op_mul(op("Dx"), op("x")) == op("x*Dx + 1")


def test_compose_and_adjoint_properties():
    rng = random.Random(3)
    for _ in range(25):
        A = random_op(rng, Q, r=rng.randint(0, 2), d=2)
        B = random_op(rng, Q, r=rng.randint(0, 2), d=2)
        R = random_xrat(rng, Q, 3)
        assert apply(op_mul(A, B), R) == apply(A, apply(B, R))
        assert adjoint(adjoint(A)) == A
        assert adjoint(op_mul(A, B)) == op_mul(adjoint(B), adjoint(A))


def test_adjoint_example():
    # (x*Dx)* = -Dx*x = -x*Dx - 1
    assert adjoint(op("x*Dx")) == op("-x*Dx - 1")


def test_right_divmod():
    rng = random.Random(7)
    for _ in range(15):
        C = random_op(rng, Q, r=rng.randint(0, 4), d=2)
        L = random_op(rng, Q, r=rng.randint(1, 2), d=2)
        quo, rem = right_divmod(C, L)
        assert quo * L + rem == C
        assert not rem or rem.order < L.order


def test_poly_normalize_minimal_factors():
    M1 = op("(1/x)*Dx")
    MQ, Qp = poly_normalize(M1)
    assert Qp == xp("x^2")
    assert MQ.has_polynomial_coefficients
    M2 = op("Dx*(1/x)")
    MQ2, Q2 = poly_normalize(M2)
    assert Q2 == xp("x")
    assert MQ2 == op("Dx")


def test_poly_normalize_image_equality():
    rng = random.Random(11)
    M = op("(1/(x+1))*Dx^2 + (x/(x-2))*Dx + 1/x")
    MQ, Qp = poly_normalize(M)
    assert MQ.has_polynomial_coefficients
    for _ in range(10):
        R = random_xrat(rng, Q, 3)
        assert apply(MQ, R) == apply(M, R * XRat(Qp))


def test_poly_normalize_identity_on_polynomial_operators(m_intro):
    MQ, Qp = poly_normalize(m_intro)
    assert MQ == m_intro and Qp.is_one()


def test_content_normalize(m_intro):
    M2 = m_intro.scale_left(XRat.constant(m_intro.field, 6))
    N, scale = content_normalize(M2)
    assert N.lc().num.lc().is_one()
    assert N == M2.scale_left(XRat.constant(M2.field, scale))


def test_clear_denominators():
    L = clear_denominators(op("Dx + 1/(x^2-1)"))
    assert L == op("(x^2-1)*Dx + 1")


def test_local_data_intro(m_intro):
    P = xp("x-1", K)
    ld = local_data_finite(m_intro, P)
    assert ld.shift == -1
    assert [str(c) for c in ld.indicial] == ["0", "-1", "2"]
    assert local_data_finite(m_intro, xp("x", K)).shift == -2
    inf = local_data_infinity(m_intro)
    assert inf.shift == -2
    assert inf.indicial == XPoly(K, [K.gen("p") ** 2])


def test_local_data_x10():
    M = op("x^10*Dx")
    ld = local_data_finite(M, xp("x"))
    assert ld.shift == 9
    assert ld.at(5) == XPoly(Q, [5])
    inf = local_data_infinity(M)
    assert inf.shift == -9
    assert integer_roots(XPoly(Q, [0, 1])) == [0]


def _val(R, P):
    return R.num.valuation(P) - R.den.valuation(P)


def test_finite_expansion_matches_definition():
    rng = random.Random(21)
    checked = 0
    for _ in range(20):
        M = random_op(rng, Q, d=3)
        P = xp("x-%d" % rng.randint(-3, 3))
        ld = local_data_finite(M, P)
        for s in range(1, 5):
            image = apply(M, XRat(XPoly(Q, [1]), P ** s))
            lead = XRat(ld.at_neg(s))
            rest = image - lead * XRat(XPoly(Q, [1]), P ** (s - ld.shift)) \
                if s - ld.shift >= 0 else image - lead * XRat(P ** (ld.shift - s))
            if rest:
                assert _val(rest, P) > -s + ld.shift
            if lead:
                assert _val(image, P) == -s + ld.shift
                checked += 1
    assert checked > 20


def test_finite_expansion_quadratic_place():
    M = op("(x^2+1)^2*Dx^2 + x*Dx + 5")
    P = xp("x^2+1")
    ld = local_data_finite(M, P)
    for s in range(1, 4):
        image = apply(M, XRat(XPoly(Q, [1]), P ** s))
        top = (image * XRat(P ** (s - ld.shift)))
        # top is regular at P and congruent to ind_P(-s) modulo P
        assert top.den.gcd(P).degree == 0
        assert (top.num - top.den * ld.at_neg(s)) % P == XPoly(Q, [])


def test_infinity_expansion_matches_definition():
    rng = random.Random(22)
    for _ in range(20):
        M = random_op(rng, Q, d=3)
        inf = local_data_infinity(M)
        for s in range(0, 6):
            image = apply(M, XRat(XPoly.monomial(Q, s))).num
            e = s - inf.shift
            expected = XPoly.monomial(Q, e, inf.at_neg(s)) if e >= 0 else XPoly(Q, [])
            diff = image - expected
            assert not diff or diff.degree < e


def test_place_split():
    M = op("x^2*(x-1)*Dx")
    with pytest.raises(PlaceSplit) as info:
        local_data_finite(M, xp("x^2-x"))
    g = info.value.divisor.monic()
    assert g == xp("x")


def test_local_data_rejects_bad_places():
    M = op("x*Dx")
    with pytest.raises(ValueError):
        local_data_finite(M, xp("x^2"))
    with pytest.raises(ValueError):
        local_data_finite(op("(1/x)*Dx"), xp("x"))


def test_singular_places():
    M = op("x^2*(x^2+1)*Dx + 1")
    assert set(map(str, singular_places(M))) == {"x", "x^2 + 1"}


def test_integer_roots_examples():
    q = s_poly([6, -11, -3, 2])  # (s-3)(s+2)(2s-1)
    assert q == s_poly([-3, 1]) * s_poly([2, 1]) * s_poly([-1, 2])
    assert integer_roots(q) == [-2, 3]
    n = K.gen("n")
    qk = XPoly(K, [2 * n, -(n + 2), 1])  # (s-n)(s-2)
    assert integer_roots(qk) == [2]
    assert integer_roots(XPoly(Q, [1, 0, 1])) == []
    with pytest.raises(ValueError):
        integer_roots(XPoly(Q, []))


def test_integer_roots_modulo_place():
    P = xp("x^2-4")
    coeffs = [-xp("x^2"), XPoly(Q, []), XPoly(Q, [1])]  # s^2 - x^2 = s^2 - 4 mod P
    assert integer_roots(coeffs, P) == [-2, 2]
    coeffs = [-xp("x"), XPoly(Q, [1])]  # s - x vanishes at no integer mod P
    assert integer_roots(coeffs, P) == []


def test_integer_roots_brute_force():
    rng = random.Random(5)
    for _ in range(40):
        cs = [rng.randint(-20, 20) for _ in range(rng.randint(2, 5))]
        if not any(cs[1:]):
            continue
        q = XPoly(Q, cs)
        expected = [s for s in range(-400, 401) if not q(Q(s))]
        assert integer_roots(q) == expected


def test_nonunit_values_linear_and_quadratic():
    P = xp("x^2-4*x+3")  # roots 1 and 3
    lead = [-xp("x"), XPoly(Q, [1])]  # s - x
    out = nonunit_integer_values(lead, P)
    assert [s for s, _ in out] == [1, 3]
    assert [g.monic() for _, g in out] == [xp("x-1"), xp("x-3")]
    P1 = xp("x-2")
    out1 = nonunit_integer_values(lead, P1)
    assert [s for s, _ in out1] == [2]


def test_nonunit_values_with_parameters():
    P = xp("x^2+n^2", K)
    n = K.gen("n")
    lead = [XPoly(K, [-3]), XPoly(K, [1])]  # s - 3, unit except at s = 3
    assert [s for s, _ in nonunit_integer_values(lead, P)] == [3]
    lead2 = [XPoly(K, [n, 0, 1]).scale(-1) * 0 + xp("x^2", K), XPoly(K, [n ** 2])]
    # x^2 + n^2*s = n^2*(s - 1) mod P
    assert [s for s, _ in nonunit_integer_values(lead2, P)] == [1]
