"""
Canonical, parseable text for field elements, polynomials, rational
functions, operators and telescopers.

Output is deterministic: parameter polynomials are printed in decreasing
graded-lex order with integer coefficients, x-polynomials by decreasing
degree, operators by decreasing order.
"""

from math import gcd as igcd, lcm as ilcm

from sympy import QQ

__all__ = [
    "format_kelem", "format_xpoly", "format_xrat", "format_diffop",
    "format_spoly", "format_telescoper", "format_monomial", "print_canonical",
]


def _integral_pair(k):
    """Numerator and denominator of a K element with coprime integer coefficients."""
    num, den = k.num, k.den
    denoms = [int(QQ.denom(c)) for c in num.coeffs()] + [int(QQ.denom(c)) for c in den.coeffs()]
    a = ilcm(*denoms) if denoms else 1
    n_terms = [(m, int(QQ.numer(c * a))) for m, c in num.terms()]
    d_terms = [(m, int(QQ.numer(c * a))) for m, c in den.terms()]
    g = 0
    for _, c in n_terms + d_terms:
        g = igcd(g, c)
    g = g or 1
    n_terms = [(m, c // g) for m, c in n_terms]
    d_terms = [(m, c // g) for m, c in d_terms]
    return n_terms, d_terms


def _format_monomial(names, exps):
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts)


def _format_terms(names, terms):
    """Compact signed sum of integer-coefficient parameter terms."""
    if not terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(terms):
        mono = _format_monomial(names, m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = "%d*%s" % (mag, mono)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("-" if c < 0 else "+") + body)
    return "".join(out)


def _is_unit_term(terms):
    return len(terms) == 1 and not any(terms[0][0]) and terms[0][1] == 1


def _names(k):
    return k.field.names or ("_t",)


def _coeff_parts(k):
    """(negative, numerator text, denominator text or None, numerator is 1)."""
    names = _names(k)
    n_terms, d_terms = _integral_pair(k)
    negative = n_terms[0][1] < 0
    if negative:
        n_terms = [(m, -c) for m, c in n_terms]
    unit = _is_unit_term(n_terms)
    ntext = _format_terms(names, n_terms)
    if len(n_terms) > 1:
        ntext = "(%s)" % ntext
    dtext = None
    if not _is_unit_term(d_terms):
        dtext = _format_terms(names, d_terms)
        if len(d_terms) > 1 or "*" in dtext:
            dtext = "(%s)" % dtext
    return negative, ntext, dtext, unit


def format_kelem(k):
    if not k:
        return "0"
    names = _names(k)
    n_terms, d_terms = _integral_pair(k)
    ntext = _format_terms(names, n_terms)
    if _is_unit_term(d_terms):
        return ntext
    if len(n_terms) > 1:
        ntext = "(%s)" % ntext
    dtext = _format_terms(names, d_terms)
    if len(d_terms) > 1 or "*" in dtext:
        dtext = "(%s)" % dtext
    return "%s/%s" % (ntext, dtext)


def _term(k, symbol):
    """Signed text for k * symbol, symbol may be empty."""
    negative, ntext, dtext, unit = _coeff_parts(k)
    if symbol:
        body = symbol if unit else "%s*%s" % (ntext, symbol)
    else:
        body = ntext
    if dtext is not None:
        body = "%s/%s" % (body, dtext)
    return negative, body


def _join(terms):
    if not terms:
        return "0"
    out = []
    for i, (negative, body) in enumerate(terms):
        if i == 0:
            out.append(("-" if negative else "") + body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)


def _power(sym, k):
    if k == 0:
        return ""
    if k == 1:
        return sym
    return "%s^%d" % (sym, k)


def format_xpoly(p, var="x"):
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c:
            terms.append(_term(c, _power(var, k)))
    return _join(terms)


def _nterms(p):
    return sum(1 for c in p.coeffs if c)


def _single_term_negative(p):
    c = p.coeffs[-1]
    return _coeff_parts(c)[0]


def format_xrat(R, var="x"):
    if R.den.degree == 0:
        return format_xpoly(R.num, var)
    num = format_xpoly(R.num, var)
    if _nterms(R.num) > 1:
        num = "(%s)" % num
    den = format_xpoly(R.den, var)
    if _nterms(R.den) > 1:
        den = "(%s)" % den
    return "%s/%s" % (num, den)


def _operator_term(c, sym, var):
    """Signed text for c * sym where c is an XRat and sym may be empty."""
    if c.den.degree == 0 and _nterms(c.num) == 1:
        k = c.num.degree
        negative, body = _term(c.num.coeffs[k], _power(var, k))
        if sym:
            body = sym if body == "1" else "%s*%s" % (body, sym)
        return negative, body
    negative = _single_term_negative(c.num)
    if negative:
        c = -c
    text = format_xrat(c, var)
    if c.den.degree == 0:
        text = "(%s)" % text
    elif _nterms(c.num) == 1:
        text = "(%s)" % text
    body = "%s*%s" % (text, sym) if sym else text
    return negative, body


def _format_opsum(coeffs, sym, var):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c:
            terms.append(_operator_term(c, _power(sym, i), var))
    return _join(terms)


def format_diffop(L, var="x", dname=None):
    return _format_opsum(L.coeffs, dname or "D" + var, var)


def format_spoly(coeffs, var="x", sym="s"):
    """Polynomial in ``sym`` whose coefficients are XPoly/XRat/K elements."""
    from .polys import XPoly, XRat
    conv = []
    for c in coeffs:
        if isinstance(c, XRat):
            conv.append(c)
        elif isinstance(c, XPoly):
            conv.append(XRat(c))
        else:
            field = c.field
            conv.append(XRat(XPoly(field, [c])))
    return _format_opsum(conv, sym, var)


def format_monomial(mono, names):
    return _format_monomial(names, mono)


def format_telescoper(T, names=None):
    """Telescoper printed by decreasing monomial order."""
    names = names or T.names
    terms = []
    for mono, c in T.sorted_terms(descending=True):
        terms.append(_term(c, _format_monomial(names, mono)))
    return _join(terms)


def print_canonical(obj, var="x", names=None):
    from .diffop import DiffOp
    from .field import KElem
    from .polys import XPoly, XRat
    from .telescoper import Telescoper
    if isinstance(obj, XRat):
        return format_xrat(obj, var)
    if isinstance(obj, XPoly):
        return format_xpoly(obj, var)
    if isinstance(obj, DiffOp):
        return format_diffop(obj, var)
    if isinstance(obj, KElem):
        return format_kelem(obj)
    if isinstance(obj, Telescoper):
        return format_telescoper(obj, names)
    raise TypeError("cannot print %r" % type(obj).__name__)
