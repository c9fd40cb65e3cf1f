"""
Linear differential operators sum c_i(x) Dx^i over K(x), and their local
data (shift and indicial polynomial) at finite places and at infinity.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd as igcd, lcm as ilcm

from sympy import QQ, Poly, Symbol, divisors

from .field import BadPoint, KElem
from .polys import XPoly, XRat, squarefree_factorization, xpoly_xgcd

__all__ = [
    "DiffOp", "LocalDataFinite", "LocalDataInfinity", "PlaceSplit",
    "apply", "adjoint", "op_mul", "right_remainder", "poly_normalize",
    "content_normalize", "local_data_finite", "local_data_infinity",
    "integer_roots", "nonunit_integer_values", "singular_places",
]


def _as_xrat(field, c):
    if isinstance(c, XRat):
        return c
    if isinstance(c, XPoly):
        return XRat(c)
    return XRat(XPoly(field, [c]))


class DiffOp:
    """Operator c_0 + c_1 Dx + ... + c_r Dx^r with coefficients in K(x)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        coeffs = [_as_xrat(field, c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def dx(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def scalar(cls, field, c):
        return cls(field, [c])

    @property
    def order(self):
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    @property
    def has_polynomial_coefficients(self):
        return all(c.is_polynomial() for c in self.coeffs)

    def polys(self):
        """Coefficients as XPoly; only valid for polynomial operators."""
        if not self.has_polynomial_coefficients:
            raise ValueError("operator has rational coefficients")
        return [c.num for c in self.coeffs]

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return XRat.zero(self.field)

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        from .printer import format_diffop
        return format_diffop(self)

    def _coerce(self, other):
        if isinstance(other, DiffOp):
            return other
        if isinstance(other, (int, Fraction, KElem, XPoly, XRat)):
            return DiffOp(self.field, [other])
        return NotImplemented

    def __neg__(self):
        return DiffOp(self.field, [-c for c in self.coeffs])

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp(self.field, [self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return op_mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return op_mul(other, self)

    def __pow__(self, n):
        result = DiffOp(self.field, [1])
        for _ in range(n):
            result = op_mul(result, self)
        return result

    def scale_left(self, c):
        """Left multiplication by a rational function."""
        c = _as_xrat(self.field, c)
        return DiffOp(self.field, [c * a for a in self.coeffs])

    def map_coeffs(self, fn):
        return DiffOp(self.field, [c.map_coeffs(fn) for c in self.coeffs])

    def __call__(self, R):
        return apply(self, R)


def apply(M, R):
    """M(R) = sum c_i * (i-th derivative of R)."""
    R = _as_xrat(M.field, R)
    total = XRat.zero(M.field)
    deriv = R
    for i, c in enumerate(M.coeffs):
        if i:
            deriv = deriv.derivative()
            if not deriv:
                break
        if c:
            total = total + c * deriv
    return total


def _derivatives(c, n):
    out = [c]
    for _ in range(n):
        out.append(out[-1].derivative())
    return out


def op_mul(A, B):
    """Composition A*B, using Dx^i b = sum binom(i,k) b^(k) Dx^(i-k)."""
    field = A.field
    if not A or not B:
        return DiffOp(field, [])
    out = [XRat.zero(field)] * (A.order + B.order + 1)
    bders = [_derivatives(b, A.order) for b in B.coeffs]
    for i, a in enumerate(A.coeffs):
        if not a:
            continue
        for j, ders in enumerate(bders):
            for k in range(i + 1):
                d = ders[k]
                if d:
                    out[i - k + j] = out[i - k + j] + a * d * comb(i, k)
    return DiffOp(field, out)


def adjoint(L):
    """L* = sum (-Dx)^i c_i."""
    field = L.field
    if not L:
        return L
    out = [XRat.zero(field)] * (L.order + 1)
    for i, c in enumerate(L.coeffs):
        if not c:
            continue
        ders = _derivatives(c, i)
        sign = -1 if i % 2 else 1
        for k in range(i + 1):
            d = ders[i - k]
            if d:
                out[k] = out[k] + d * (sign * comb(i, k))
    return DiffOp(field, out)


def right_divmod(C, L):
    """(Q, B) with C = Q*L + B and order(B) < order(L)."""
    if not L:
        raise ZeroDivisionError("right division by the zero operator")
    field = C.field
    quo = DiffOp(field, [])
    rem = C
    lc_inv = L.lc().inverse()
    while rem and rem.order >= L.order:
        k = rem.order - L.order
        q = DiffOp(field, [XRat.zero(field)] * k + [rem.lc() * lc_inv])
        quo = quo + q
        rem = rem - op_mul(q, L)
    return quo, rem


def right_remainder(C, L):
    return right_divmod(C, L)[1]


def poly_normalize(M):
    """Return (M*Q, Q) with M*Q polynomial; Q = lcm of the denominators of M*."""
    if not M:
        raise ValueError("cannot normalize the zero operator")
    field = M.field
    Q = XPoly(field, [1])
    if M.has_polynomial_coefficients:
        return M, Q
    for c in adjoint(M).coeffs:
        if c.den.degree > 0:
            Q = (Q * c.den).exact_div(Q.gcd(c.den))
    MQ = op_mul(M, DiffOp(field, [XRat(Q)]))
    assert MQ.has_polynomial_coefficients
    return MQ, Q


def content_normalize(M):
    """Scale a polynomial operator by a K element so that lc(p_r) = 1.

    Returns (normalized operator, scale) with normalized = scale * M.
    """
    lc = M.lc().num.lc()
    scale = lc.inverse()
    return DiffOp(M.field, [c * scale for c in M.coeffs]), scale


def clear_denominators(M):
    """Left-multiply by the lcm of the coefficient denominators."""
    field = M.field
    D = XPoly(field, [1])
    for c in M.coeffs:
        if c.den.degree > 0:
            D = (D * c.den).exact_div(D.gcd(c.den))
    if D.degree == 0:
        return M
    return M.scale_left(XRat(D))


# -- local data -----------------------------------------------------------

class PlaceSplit(ArithmeticError):
    """The shift differs between roots of a place; ``divisor`` splits it."""

    def __init__(self, divisor):
        super().__init__("place must be split")
        self.divisor = divisor


@dataclass(frozen=True)
class LocalDataFinite:
    """Shift and indicial polynomial of M at a squarefree place P.

    ``indicial[j]`` is the coefficient of s^j in ind_P(s), reduced mod P.
    For s > 0, M(P^-s) = ind_P(-s) P^(-s+shift) + O(P^(-s+shift+1)).
    """
    place: XPoly
    shift: int
    indicial: tuple

    def at(self, s):
        """ind_P(s) mod P for an integer s."""
        P = self.place
        acc = XPoly(P.field, [])
        for c in reversed(self.indicial):
            acc = acc * s + c
        return acc % P

    def at_neg(self, s):
        return self.at(-s)


@dataclass(frozen=True)
class LocalDataInfinity:
    """M(x^s) = ind(-s) x^(s - shift) (1 + o(1)); ``indicial`` is ind(s) over K."""
    shift: int
    indicial: XPoly

    def at(self, s):
        return self.indicial(self.indicial.field(s))

    def at_neg(self, s):
        return self.at(-s)


def _falling(field, i):
    """s(s-1)...(s-i+1) as an XPoly in s."""
    out = XPoly(field, [1])
    for j in range(i):
        out = out * XPoly(field, [-j, 1])
    return out


def _negate_variable(coeffs):
    return tuple(c if j % 2 == 0 else -c for j, c in enumerate(coeffs))


def local_data_finite(M, P):
    """Shift and indicial polynomial at the monic squarefree place P.

    Expands M(P^-s) symbolically in s.  Raises :class:`PlaceSplit` when the
    leading P-adic coefficient vanishes identically at some but not all
    roots of P.
    """
    if not M.has_polynomial_coefficients:
        raise ValueError("local data needs polynomial coefficients")
    if P.degree < 1:
        raise ValueError("place must have positive degree")
    if P.gcd(P.derivative()).degree > 0:
        raise ValueError("place is not squarefree")
    field = M.field
    zero = XPoly(field, [])
    dP = P.derivative()
    r = M.order
    ps = M.polys()
    Ppow = [XPoly(field, [1])]
    for _ in range(r):
        Ppow.append(Ppow[-1] * P)
    # a[k] is the coefficient of P^(-s-k) in Dx^i(P^-s), as a list over powers of s
    a = [[XPoly(field, [1])]]
    N = {}

    def accumulate(p_i, a):
        for k, sp in enumerate(a):
            for j, c in enumerate(sp):
                if c:
                    N[j] = N.get(j, zero) + p_i * c * Ppow[r - k]

    for i in range(r + 1):
        if i:
            new = []
            for k in range(i + 1):
                acc = [c.derivative() for c in a[k]] if k < len(a) else []
                if k >= 1:
                    prev = a[k - 1]
                    # -(s + k - 1) * P' * prev
                    shifted = [zero] + [c * dP for c in prev]
                    const = [c * dP * (k - 1) for c in prev]
                    n = max(len(acc), len(shifted), len(const))
                    acc = [(acc[j] if j < len(acc) else zero)
                           - (shifted[j] if j < len(shifted) else zero)
                           - (const[j] if j < len(const) else zero) for j in range(n)]
                new.append(acc)
            a = new
        if ps[i]:
            accumulate(ps[i], a)
    N = {j: c for j, c in N.items() if c}
    if not N:
        raise ArithmeticError("M(P^-s) vanishes identically")
    v = min(c.valuation(P) for c in N.values())
    Pv = P ** v
    deg = max(N)
    lead = []
    for j in range(deg + 1):
        c = N.get(j)
        lead.append(c.exact_div(Pv) % P if c is not None else zero)
    while lead and not lead[-1]:
        lead.pop()
    g = P
    for c in lead:
        if c:
            g = g.gcd(c)
            if g.degree == 0:
                break
    if g.degree > 0:
        raise PlaceSplit(g)
    return LocalDataFinite(P, v - r, _negate_variable(tuple(lead)))


def local_data_infinity(M):
    """Shift and indicial polynomial at infinity."""
    if not M:
        raise ValueError("zero operator")
    if not M.has_polynomial_coefficients:
        raise ValueError("local data needs polynomial coefficients")
    field = M.field
    ps = M.polys()
    best = max(p.degree - i for i, p in enumerate(ps) if p)
    lead = XPoly(field, [])
    for i, p in enumerate(ps):
        if p and p.degree - i == best:
            lead = lead + _falling(field, i).scale(p.lc())
    ind = XPoly(field, _negate_variable(lead.coeffs))
    return LocalDataInfinity(-best, ind)


def singular_places(M):
    """Monic squarefree factors of the leading coefficient (Yun's factors)."""
    if not M:
        raise ValueError("zero operator")
    lc = M.lc()
    if not lc.is_polynomial():
        raise ValueError("operator must have polynomial coefficients")
    return [P for P, _ in squarefree_factorization(lc.num)]


# -- integer roots ----------------------------------------------------------

def _mpoly_lcm(ring, polys):
    acc = ring.one
    for p in polys:
        if p != ring.one:
            acc = acc.lcm(p)
    return acc


def _scalar_polys(kcoeffs):
    """Split a polynomial in s over K into polynomials over Q, one per
    parameter monomial, whose common integer roots are its integer roots."""
    kcoeffs = [c for c in kcoeffs]
    nonzero = [c for c in kcoeffs if c]
    if not nonzero:
        return []
    ring = nonzero[0].field.ring
    D = _mpoly_lcm(ring, [c.den for c in nonzero])
    nums = [c.num * D.exquo(c.den) if c else ring.zero for c in kcoeffs]
    by_mono = {}
    for j, p in enumerate(nums):
        for m, c in p.terms():
            by_mono.setdefault(m, [QQ(0)] * len(nums))[j] = c
    out = []
    for m in sorted(by_mono):
        out.append([Fraction(int(QQ.numer(c)), int(QQ.denom(c))) for c in by_mono[m]])
    return out


def _int_roots_q(coeffs):
    """Integer roots of a nonzero polynomial over Q (coefficients low first)."""
    den = ilcm(*[c.denominator for c in coeffs])
    ints = [int(c * den) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    if not ints:
        raise ValueError("zero polynomial has every integer as a root")
    roots = set()
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        roots.add(0)
    ints = ints[low:]
    if len(ints) == 1:
        return roots
    a0, an = ints[0], ints[-1]
    bound = 1 + max(abs(Fraction(c, an)) for c in ints[:-1])
    if bound < 10000:
        cands = [d for d in range(1, int(bound) + 1) if a0 % d == 0]
    else:
        cands = [d for d in divisors(abs(a0)) if d <= bound]

    def value(s):
        acc = 0
        for c in reversed(ints):
            acc = acc * s + c
        return acc

    for d in cands:
        for s in (d, -d):
            if value(s) == 0:
                roots.add(s)
    return roots


def integer_roots(q, modulus=None):
    """Sorted integers s with q(s) = 0.

    ``q`` is either an XPoly in s over K, or (with ``modulus`` = P) a
    sequence of XPoly giving the coefficients of s^j in K[x]/(P).
    Candidates come from exact coefficient splitting over Q; each one is
    confirmed by substitution.
    """
    if modulus is None:
        kpolys = [list(q.coeffs)]
    else:
        coeffs = [c % modulus for c in q]
        width = modulus.degree
        kpolys = [[c[l] for c in coeffs] for l in range(width)]
    scalar = []
    for kp in kpolys:
        scalar.extend(_scalar_polys(kp))
    if not scalar:
        raise ValueError("integer roots of the zero polynomial")
    scalar.sort(key=lambda cs: (len([c for c in cs if c]), len(cs)))
    cands = _int_roots_q(scalar[0])
    for sp in scalar[1:]:
        if not cands:
            break
        cands = {s for s in cands if sum(c * s ** j for j, c in enumerate(sp)) == 0}
    out = []
    for s in sorted(cands):
        if modulus is None:
            ok = not q(q.field(s))
        else:
            acc = XPoly(modulus.field, [])
            for c in reversed(coeffs):
                acc = acc * s + c
            ok = not (acc % modulus)
        if ok:
            out.append(s)
    return out


def nonunit_integer_values(lead, P, rng=None, tries=2):
    """Integers s for which sum_j lead[j] s^j is not invertible mod P.

    Returns a sorted list of (s, g) where g = gcd(lead(s), P) has positive
    degree (g = P means lead(s) = 0 mod P).  Candidates are the integer
    roots of the norm Res_x(P, lead(s, x)) at random specializations of
    the parameters; every candidate is checked exactly.
    """
    field = P.field
    if P.degree == 1:
        alpha = -P.coeffs[0]
        q = XPoly(field, [c(alpha) for c in lead])
        if not q:
            raise ValueError("indicial polynomial vanishes at the place")
        cands = integer_roots(q)
    else:
        rng = rng or random.Random(0)
        cands = None
        good = 0
        attempts = 0
        X, S = Symbol("x"), Symbol("s")
        while good < (1 if field.ngens == 0 else tries):
            attempts += 1
            if attempts > 50:
                raise ArithmeticError("no good specialization point found")
            point = [rng.randint(-97, 97) for _ in range(field.ngens)]
            try:
                Pb = [c.evaluate(point) for c in P.coeffs]
                Lb = [[c.evaluate(point) for c in lj.coeffs] for lj in lead]
            except BadPoint:
                continue
            Pp = Poly({(k, 0): QQ(v.numerator, v.denominator) for k, v in enumerate(Pb) if v},
                      X, S, domain=QQ)
            terms = {}
            for j, cs in enumerate(Lb):
                for k, v in enumerate(cs):
                    if v:
                        terms[(k, j)] = QQ(v.numerator, v.denominator)
            if not terms:
                continue
            Lp = Poly(terms, X, S, domain=QQ)
            res = Pp.resultant(Lp)
            res = Poly(res, S) if not isinstance(res, Poly) else res
            rc = res.all_coeffs()[::-1] if res.free_symbols else [res.as_expr()]
            rc = [Fraction(int(QQ.numer(QQ.convert(c))), int(QQ.denom(QQ.convert(c)))) for c in rc]
            if not any(rc):
                continue
            good += 1
            roots = _int_roots_q(rc) if len([c for c in rc if c]) and len(rc) > 1 else set()
            cands = roots if cands is None else cands & roots
        cands = sorted(cands)
    out = []
    for s in cands:
        acc = XPoly(field, [])
        for c in reversed(lead):
            acc = acc * s + c
        acc = acc % P
        g = P if not acc else xpoly_xgcd(acc, P, want_cofactors=False)[0]
        if g.degree > 0:
            out.append((s, g))
    return out
