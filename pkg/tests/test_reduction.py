import random
import time

import pytest
from sympy import Poly, Symbol, factor_list

from hermite_ct.diffop import DiffOp, apply, local_data_finite, local_data_infinity
from hermite_ct.field import ParamField
from hermite_ct.parser import parse_diffop, parse_xrat
from hermite_ct.polys import XPoly, XRat, partial_fraction
from hermite_ct.reduction import (
    ExcBasis, ExceptionalLimitError, Reducer, brute_force_preimage,
    canonical_form, default_shell, exceptional_basis, quotient_dimension_bound,
    rho, shell_transform, span_rank, weak_reduce,
)

from conftest import INTRO, random_op, random_xrat

Q = ParamField()
K = ParamField(["n", "p"])


def op(text, field=Q):
    return parse_diffop(text, field)


def xr(text, field=Q):
    return parse_xrat(text, field)


@pytest.fixture(scope="module")
def intro():
    return Reducer(parse_diffop(INTRO, K))


def test_intro_canonical_forms(intro):
    assert intro(xr("1", K)) == xr("1", K)
    assert intro(xr("x", K)) == xr("x", K)
    assert intro(xr("x^2", K)) == xr("x/p + (n^2+p^2)/p^2", K)
    assert intro(xr("p^2*x^2 - p*x - n^2 - p^2", K)) == XRat.zero(K)
    assert intro(xr("p*x^2 + (n-1)*x - p", K)) == xr("n*x + n^2/p", K)
    assert intro.exc.dimension == 0


def test_intro_certificates(intro):
    res = intro.canonical_form(xr("x^2", K))
    assert res.certificate == XRat.constant(K, K.gen("p") ** -2)
    R = apply(intro.M, xr("1/(x-3)", K))
    assert intro(R) == XRat.zero(K)


def test_weak_reduce_fixed_point():
    M = op("(x^2+1)*Dx + 10*x")
    R = xr("1/(x^2+1)^5")
    res = weak_reduce(R, M)
    assert res.reduced == R
    assert res.certificate == XRat.zero(Q)


def test_weak_reduce_exact_derivative():
    res = weak_reduce(xr("1/x^2"), op("Dx"))
    assert res.reduced == XRat.zero(Q)
    assert res.certificate == xr("-1/x")
    assert weak_reduce(XRat.zero(Q), op("Dx")).certificate == XRat.zero(Q)


def test_exceptional_x10():
    exc = exceptional_basis(op("x^10*Dx"))
    assert exc.pivots() == list(range(9))
    assert exc.basis() == [XRat(XPoly.monomial(Q, d)) for d in range(9)]
    assert rho(exc, xr("x^9 + x^3")) == xr("x^9")


def test_exceptional_trivial_cases(intro):
    assert exceptional_basis(op("Dx")).dimension == 0
    assert intro.exc.dimension == 0


def test_exceptional_preimages():
    M = op("x^10*Dx")
    red = Reducer(M)
    for w, pre in zip(red.exc.generators, red.exc.preimages):
        # generators are H(M(g)) and M(pre) = w for the normalized operator
        assert apply(red.op, pre) == w


def test_rho_single_pivot():
    row = XPoly(Q, [1, 1])
    exc = ExcBasis([XRat(row)], [XRat.zero(Q)], XPoly(Q, [1]), {1: (row, XRat.zero(Q))})
    assert rho(exc, xr("x")) == xr("-1")
    assert rho(exc, xr("x+1")) == XRat.zero(Q)


def test_rho_kills_generators_and_is_idempotent():
    red = Reducer(op("x^10*Dx"))
    for w in red.exc.generators:
        assert rho(red.exc, w) == XRat.zero(Q)
    rng = random.Random(2)
    for _ in range(10):
        R = random_xrat(rng, Q, 6)
        once = rho(red.exc, R)
        assert rho(red.exc, once) == once
        assert span_rank(red.exc.generators + [R - once]) == span_rank(red.exc.generators)


def test_quotient_dimension_bound(intro):
    assert quotient_dimension_bound(intro.M, parse_xrat("x^2-1", K).num) == 8
    assert quotient_dimension_bound(op("Dx"), xr("x").num) == 2
    assert quotient_dimension_bound(op("x^10*Dx"), xr("x").num) == 12


def test_brute_force_preimage(intro):
    assert brute_force_preimage(op("Dx"), xr("-1/x^2"), 2) == xr("1/x")
    assert brute_force_preimage(op("Dx"), xr("1/x"), 4) is None
    U = brute_force_preimage(intro.M, xr("p^2*x^2 - p*x - n^2 - p^2", K), 0)
    assert U == xr("1", K)


def test_exc_cap():
    with pytest.raises(ExceptionalLimitError):
        Reducer(op("x^40*Dx"), exc_cap=10)
    assert Reducer(op("x^40*Dx")).exc.dimension == 39


def test_zero_operator_rejected():
    with pytest.raises(ValueError):
        Reducer(DiffOp(Q, []))


def test_rational_coefficient_operator_certificates():
    M = op("(1/x)*Dx + 1/x^2")
    red = Reducer(M)
    rng = random.Random(8)
    for _ in range(10):
        R = random_xrat(rng, Q, 3)
        res = red.canonical_form(R)
        assert R == res.reduced + apply(M, res.certificate)
        assert red(apply(M, R)) == XRat.zero(Q)


def test_parameter_operator_properties():
    M = op("(x^2 - n)*Dx + p*x + 1", K)
    red = Reducer(M)
    rng = random.Random(9)
    for _ in range(8):
        R = random_xrat(rng, K, 3)
        res = red.canonical_form(R)
        assert R == res.reduced + apply(M, res.certificate)
        assert red(res.reduced) == res.reduced
        assert red(apply(M, R)) == XRat.zero(K)


def test_split_cascade():
    # the shift at x = 0 differs from the one at x = 1
    M = op("x^2*(x-1)*Dx + x")
    red = Reducer(M)
    for R in [xr("1/(x^2-x)^3"), xr("(x+5)/(x*(x-1))^2"), xr("1/(x^3-x^2)")]:
        res = red.canonical_form(R)
        assert R == res.reduced + apply(M, res.certificate)
        assert red(apply(M, R)) == XRat.zero(Q)


# -- support property of the weak reduction, over Q --------------------------

_X = Symbol("x")


def _irreducible_factors(P):
    coeffs = [c.to_rat() for c in reversed(P.coeffs)]
    _, facs = factor_list(Poly(coeffs, _X))
    out = []
    for f, m in facs:
        cs = [int(c) if c == int(c) else c for c in reversed(Poly(f, _X).all_coeffs())]
        from fractions import Fraction
        out.append((XPoly(Q, [Fraction(str(c)) for c in cs]).monic(), m))
    return out


def _check_support(red, reduced):
    poly, parts = partial_fraction(reduced, _irreducible_factors(reduced.den)) \
        if reduced.den.degree > 0 else (reduced.num, {})
    for P, digits in parts.items():
        ld = local_data_finite(red.op, P)
        for s in digits:
            k = s + ld.shift
            assert k <= 0 or not ld.at_neg(k), (P, s)
    inf = local_data_infinity(red.op)
    for s, c in enumerate(poly.coeffs):
        if c:
            k = s + inf.shift
            assert k < 0 or not inf.at_neg(k), s


def test_weak_reduce_support_property():
    rng = random.Random(31)
    for _ in range(15):
        M = random_op(rng, Q, d=3)
        red = Reducer(M)
        for _ in range(3):
            R = random_xrat(rng, Q, 5)
            res = red.weak_reduce(R)
            assert R == res.reduced + apply(M, res.certificate)
            _check_support(red, res.reduced)


def test_certificate_and_canonical_properties():
    rng = random.Random(41)
    for _ in range(15):
        M = random_op(rng, Q)
        red = Reducer(M)
        R = random_xrat(rng, Q, 4)
        res = red.canonical_form(R)
        assert R == res.reduced + apply(M, res.certificate)
        assert red(res.reduced) == res.reduced
        assert red(apply(M, R)) == XRat.zero(Q)


def test_zero_form_has_brute_force_preimage():
    cases = [
        (op("Dx"), xr("(2*x)/(x^2+1)^2")),
        (op("x^10*Dx"), xr("x^9")),
        (op("(x^2+1)*Dx + 10*x"), xr("(x^2+1)^-4*x")),
    ]
    for M, R in cases:
        red = Reducer(M)
        U = brute_force_preimage(M, R, 4)
        if red(R) == XRat.zero(Q):
            assert U is not None and apply(M, U) == R
    assert Reducer(op("Dx"))(xr("1/x")) != XRat.zero(Q)


# -- shell ---------------------------------------------------------------------

def test_identity_shell_matches_plain(intro):
    sh = shell_transform(intro.M, XRat.one(K), XRat.one(K))
    for text in ["1", "x", "x^2", "1/(x-1)"]:
        assert sh(xr(text, K)) == intro(xr(text, K))


def test_default_shell_first_order():
    M = op("(x-1)*Dx + 3")
    assert default_shell(M) == xr("(x-1)^-3")
    sh = shell_transform(M)
    assert sh.L == op("(x-1)*Dx")


def test_shell_canonical_properties():
    M = op("(x-1)*Dx + 3")
    sh = shell_transform(M)
    rng = random.Random(12)
    for _ in range(20):
        R = random_xrat(rng, Q, 3)
        assert sh(apply(M, R)) == XRat.zero(Q)
        res = sh.canonical_form(R)
        assert R == res.reduced + apply(M, res.certificate)


def test_shell_requires_both_factors():
    with pytest.raises(ValueError):
        shell_transform(op("Dx"), A=XRat.one(Q))


def test_span_rank():
    assert span_rank([xr("x"), xr("2*x"), xr("1/x")]) == 2
    assert span_rank([]) == 0


def test_brute_force_preimage_of_polynomial():
    assert brute_force_preimage(op("Dx"), xr("x^5"), 0) == xr("x^6/6")
    assert brute_force_preimage(op("x*Dx - 3"), xr("x^3"), 0) is None
