import random

import pytest
from hypothesis import given, settings, strategies as st

from hermite_ct.field import ParamField
from hermite_ct.parser import parse_xrat
from hermite_ct.polys import (
    XPoly, XRat, ZeroDivisor, eval_params, invert_mod, padic_digits,
    partial_fraction, squarefree_factorization, xpoly_xgcd,
)

Q = ParamField()
K = ParamField(["t"])


def xp(text, field=Q):
    R = parse_xrat(text, field)
    assert R.is_polynomial()
    return R.num


coeff_lists = st.lists(st.integers(-6, 6), min_size=1, max_size=6)


def poly(cs, field=Q):
    return XPoly(field, cs)


@settings(max_examples=80, deadline=None)
@given(coeff_lists, coeff_lists)
def test_divmod(a, b):
    A, B = poly(a), poly(b)
    if not B:
        return
    q, r = divmod(A, B)
    assert q * B + r == A
    assert not r or r.degree < B.degree


@settings(max_examples=80, deadline=None)
@given(coeff_lists, coeff_lists)
def test_xgcd(a, b):
    A, B = poly(a), poly(b)
    if not A and not B:
        return
    g, u, v = xpoly_xgcd(A, B)
    assert u * A + v * B == g
    assert g.lc() == Q.one
    assert not (A % g) and not (B % g)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=3))
def test_squarefree_factorization(roots):
    x = XPoly.x(Q)
    p = XPoly(Q, [3])
    for a, m in roots:
        p = p * (x - a) ** m
    facs = squarefree_factorization(p)
    prod = XPoly(Q, [1])
    for f, m in facs:
        assert f.lc() == Q.one
        assert f.gcd(f.derivative()).degree == 0
        prod = prod * f ** m
    assert prod == p.monic()
    for i, (f, _) in enumerate(facs):
        for g, _ in facs[i + 1:]:
            assert f.gcd(g).degree == 0


def test_squarefree_with_parameters():
    p = xp("(x-t)^2*(x^2+t)", K)
    assert squarefree_factorization(p) == [(xp("x^2+t", K), 1), (xp("x-t", K), 2)]


def test_padic_digits():
    P = xp("x^2+1")
    A = xp("x^5 + 3*x + 2")
    poly_part, digits = padic_digits(A, P, 2)
    total = XRat(poly_part)
    for s, U in digits.items():
        assert U.degree < P.degree
        total = total + XRat(U, P ** s)
    assert total == XRat(A, P ** 2)


def test_partial_fraction_reconstructs():
    rng = random.Random(5)
    for _ in range(20):
        P1, P2 = xp("x-1"), xp("x^2+x+1")
        num = XPoly(Q, [rng.randint(-5, 5) for _ in range(7)])
        R = XRat(num, P1 ** 2 * P2 ** 2)
        poly_part, parts = partial_fraction(R, [(P1, 2), (P2, 2)])
        total = XRat(poly_part)
        for P, digits in parts.items():
            for s, U in digits.items():
                assert U.degree < P.degree
                total = total + XRat(U, P ** s)
        assert total == R


def test_invert_mod():
    P = xp("x^3-2")
    U = xp("x+1")
    V = invert_mod(U, P)
    assert (U * V) % P == XPoly(Q, [1])
    with pytest.raises(ZeroDivisionError):
        invert_mod(P, P)


def test_invert_mod_zero_divisor():
    P = xp("x^2-1")
    with pytest.raises(ZeroDivisor) as info:
        invert_mod(xp("x-1"), P)
    assert info.value.divisor.monic() == xp("x-1")


def test_xrat_normal_form():
    R = XRat(xp("2*x^2-2"), xp("4*x-4"))
    assert R.den.lc() == Q.one
    assert R == parse_xrat("(x+1)/2", Q)
    assert R.num.gcd(R.den).degree == 0


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists, coeff_lists)
def test_xrat_derivative_rules(a, b, c, d):
    if not poly(b) or not poly(d):
        return
    R, S = XRat(poly(a), poly(b)), XRat(poly(c), poly(d))
    assert (R * S).derivative() == R.derivative() * S + R * S.derivative()
    assert (R + S).derivative() == R.derivative() + S.derivative()


def test_eval_params():
    R = parse_xrat("(x+t)/(x-t)", K)
    assert eval_params(R, [2]) == parse_xrat("(x+2)/(x-2)", Q)
    from hermite_ct.field import BadPoint
    with pytest.raises(BadPoint):
        eval_params(parse_xrat("1/(t*x+1)", K), [0])
