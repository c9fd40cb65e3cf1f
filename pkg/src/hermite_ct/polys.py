"""
Dense univariate polynomials and rational functions in the main variable x
with coefficients in a parameter field K, together with the rational
algorithms built on them: extended gcd, squarefree factorization,
P-adic partial fractions and modular inversion.
"""

from fractions import Fraction

from sympy import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from .field import KElem, ParamField

__all__ = [
    "XPoly", "XRat", "ZeroDivisor", "xpoly_xgcd", "squarefree_factorization",
    "partial_fraction", "padic_digits", "invert_mod", "eval_params",
]


class ZeroDivisor(ArithmeticError):
    """Raised by :func:`invert_mod` when the argument is a zero divisor.

    ``divisor`` is a monic proper factor of the modulus.
    """

    def __init__(self, divisor):
        super().__init__("zero divisor modulo a composite place")
        self.divisor = divisor


class XPoly:
    """Polynomial in x over K, coefficients stored lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        self.field = field
        coeffs = [field(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def _raw(cls, field, coeffs):
        # coeffs already KElem, trailing zeros already stripped
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = coeffs
        return obj

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def monomial(cls, field, degree, c=1):
        return cls(field, [field.zero] * degree + [field(c)])

    @classmethod
    def x(cls, field):
        return cls.monomial(field, 1)

    # -- basic data -----------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def __eq__(self, other):
        if isinstance(other, XPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, KElem)):
            return self == XPoly(self.field, [other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        from .printer import format_xpoly
        return format_xpoly(self)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, XPoly):
            return other
        if isinstance(other, (int, Fraction, KElem)):
            return XPoly(self.field, [other])
        return NotImplemented

    def __neg__(self):
        return XPoly._raw(self.field, tuple(-c for c in self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        while out and not out[-1]:
            out.pop()
        return XPoly._raw(self.field, tuple(out))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, KElem)):
            return self.scale(self.field(other))
        if not isinstance(other, XPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return XPoly._raw(self.field, ())
        if len(b) == 1:
            return self.scale(b[0])
        if len(a) == 1:
            return other.scale(a[0])
        zero = self.field.zero
        out = [zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] = out[i + j] + ca * cb
        while out and not out[-1]:
            out.pop()
        return XPoly._raw(self.field, tuple(out))

    __rmul__ = __mul__

    def scale(self, c):
        c = self.field(c)
        if not c:
            return XPoly._raw(self.field, ())
        if c.is_one():
            return self
        return XPoly._raw(self.field, tuple(x * c for x in self.coeffs))

    def shift_degree(self, k):
        """Multiply by x**k (k >= 0)."""
        if not self.coeffs or k == 0:
            return self
        return XPoly._raw(self.field, (self.field.zero,) * k + self.coeffs)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = XPoly(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return XPoly._raw(self.field, ()), self
        inv = other.lc().inverse()
        quo = [self.field.zero] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db]
            if not c:
                continue
            q = c * inv
            quo[k] = q
            for j in range(db):
                if bc[j]:
                    rem[k + j] = rem[k + j] - q * bc[j]
            rem[k + db] = self.field.zero
        while rem and not rem[-1]:
            rem.pop()
        while quo and not quo[-1]:
            quo.pop()
        return XPoly._raw(self.field, tuple(quo)), XPoly._raw(self.field, tuple(rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other):
        return not (other % self)

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(self.lc().inverse())

    def derivative(self):
        return XPoly._raw(self.field, tuple(
            c * i for i, c in enumerate(self.coeffs) if i > 0)) if len(self.coeffs) > 1 \
            else XPoly._raw(self.field, ())

    def __call__(self, value):
        """Horner evaluation at a K element, XPoly or XRat."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        if acc is None:
            return self.field.zero
        return acc

    def map_coeffs(self, fn):
        return XPoly(self.field, [fn(c) for c in self.coeffs])

    def gcd(self, other):
        """Monic gcd in K[x].

        Computed in Q[x, t1..te] after clearing parameter denominators;
        a Euclidean remainder sequence over K suffers from coefficient
        swell as soon as there are parameters.
        """
        if not self or not other:
            if not self and not other:
                raise ValueError("gcd of two zero polynomials")
            return (self or other).monic()
        if self.degree == 0 or other.degree == 0:
            return XPoly._raw(self.field, (self.field.one,))
        ring = _xring(self.field)
        g = _to_xring(self, ring).gcd(_to_xring(other, ring))
        return _from_xring(g, self.field).monic()

    def valuation(self, P):
        """Largest v with P**v dividing self (self must be nonzero)."""
        if not self:
            raise ValueError("valuation of zero")
        v = 0
        a = self
        while True:
            q, r = divmod(a, P)
            if r:
                return v
            a, v = q, v + 1


_XRINGS = {}


def _xring(field):
    ring = _XRINGS.get(field)
    if ring is None:
        names = ("_x",) + tuple(str(g) for g in field.ring.gens)
        ring = _XRINGS[field] = PolyRing(names, QQ, lex)
    return ring


def _to_xring(p, ring):
    """p with parameter denominators cleared, as an element of Q[x, t]."""
    field = p.field
    D = field.ring.one
    for c in p.coeffs:
        if c and c.den != field.ring.one:
            D = D.lcm(c.den)
    terms = {}
    for k, c in enumerate(p.coeffs):
        if c:
            num = c.num * D.exquo(c.den) if c.den != D else c.num
            for m, a in num.terms():
                terms[(k,) + m] = a
    return ring.from_dict(terms)


def _from_xring(g, field):
    by_degree = {}
    for m, a in g.terms():
        by_degree.setdefault(m[0], {})[m[1:]] = a
    top = max(by_degree)
    coeffs = [field.from_polys(field.ring.from_dict(by_degree[k])) if k in by_degree
              else field.zero for k in range(top + 1)]
    return XPoly._raw(field, tuple(coeffs))


class XRat:
    """Rational function num/den in K(x) with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, normalize=True):
        field = num.field
        if den is None:
            den = XPoly._raw(field, (field.one,))
            normalize = False
        if normalize:
            if not den:
                raise ZeroDivisionError("rational function with zero denominator")
            if not num:
                den = XPoly._raw(field, (field.one,))
            elif den.degree > 0:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lc = den.lc()
            if not lc.is_one():
                inv = lc.inverse()
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @classmethod
    def constant(cls, field, c):
        return cls(XPoly(field, [c]))

    @classmethod
    def zero(cls, field):
        return cls(XPoly(field, []))

    @classmethod
    def one(cls, field):
        return cls(XPoly(field, [1]))

    @classmethod
    def x(cls, field):
        return cls(XPoly.x(field))

    @property
    def field(self):
        return self.num.field

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return self.den.degree == 0

    def is_constant(self):
        return self.den.degree == 0 and self.num.degree <= 0

    def __eq__(self, other):
        if isinstance(other, XRat):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, KElem, XPoly)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        from .printer import format_xrat
        return format_xrat(self)

    def _coerce(self, other):
        if isinstance(other, XRat):
            return other
        if isinstance(other, XPoly):
            return XRat(other)
        if isinstance(other, (int, Fraction, KElem)):
            return XRat(XPoly(self.field, [other]))
        return NotImplemented

    def __neg__(self):
        return XRat(-self.num, self.den, False)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if self.den.degree == 0:
                return XRat(self.num + other.num)
            return XRat(self.num + other.num, self.den)
        if other.den.degree == 0:
            return XRat(self.num + other.num * self.den, self.den, False)
        if self.den.degree == 0:
            return XRat(self.num * other.den + other.num, other.den, False)
        g = self.den.gcd(other.den)
        if g.degree == 0:
            return XRat(self.num * other.den + other.num * self.den,
                        self.den * other.den, False)
        b1 = self.den.exact_div(g)
        d1 = other.den.exact_div(g)
        return XRat(self.num * d1 + other.num * b1, b1 * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, KElem)):
            c = self.field(other)
            if not c:
                return XRat.zero(self.field)
            return XRat(self.num.scale(c), self.den, False)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return XRat.zero(self.field)
        if self.den.degree == 0 and other.den.degree == 0:
            return XRat(self.num * other.num)
        return XRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return XRat(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, KElem)):
            return self * self.field(other).inverse()
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return XRat(self.num ** n, self.den ** n, False)

    def derivative(self):
        if self.den.degree == 0:
            return XRat(self.num.derivative())
        num = self.num.derivative() * self.den - self.num * self.den.derivative()
        return XRat(num, self.den * self.den)

    def map_coeffs(self, fn):
        """Apply a K-automorphism coefficient-wise (e.g. a parameter shift)."""
        return XRat(self.num.map_coeffs(fn), self.den.map_coeffs(fn))

    def poly_part(self):
        return divmod(self.num, self.den)[0]


# -- algorithms ----------------------------------------------------------

def xpoly_xgcd(a, b, want_cofactors=True):
    """Return (g, u, v) with g monic, g = u*a + v*b and g | a, g | b."""
    field = a.field
    zero = XPoly(field, [])
    one = XPoly(field, [1])
    if not a and not b:
        raise ValueError("gcd of two zero polynomials")
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        if want_cofactors:
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
    inv = r0.lc().inverse()
    if want_cofactors:
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)
    return r0.scale(inv), None, None


def squarefree_factorization(p):
    """Yun's algorithm: list of (monic squarefree factor, multiplicity).

    Factors are pairwise coprime and the product of factor**mult equals p
    up to a unit of K.
    """
    if not p:
        raise ValueError("squarefree factorization of zero")
    if p.degree <= 0:
        return []
    f = p.monic()
    df = f.derivative()
    a0 = f.gcd(df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = b.gcd(d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def padic_digits(A, P, m):
    """Expand A / P**m as poly_part + sum_{s=1..m} U_s / P**s.

    Returns (poly_part, {s: U_s}) with deg U_s < deg P and zero digits
    omitted.
    """
    quo, rem = divmod(A, P ** m) if m > 0 else (A, XPoly(A.field, []))
    digits = {}
    s = m
    while rem and s > 0:
        rem, d = divmod(rem, P)
        if d:
            digits[s] = d
        s -= 1
    if rem:
        raise ArithmeticError("P-adic expansion did not terminate")
    return quo, digits


def partial_fraction(R, factors):
    """Split R into its polynomial part and polar parts per factor.

    ``factors`` is a list of (P, m) with pairwise coprime monic squarefree
    P such that den(R) divides prod P**m.  The result is
    ``(poly_part, {P: {s: U_s}})`` where R = poly_part + sum U_s / P**s.
    """
    field = R.field
    num, den = R.num, R.den
    full = XPoly(field, [1])
    for P, m in factors:
        full = full * P ** m
    scale, r = divmod(full, den)
    if r:
        raise ValueError("inconsistent factorization for partial fractions")
    num = num * scale
    poly, rem = divmod(num, full)
    parts = {}
    if not rem:
        return poly, parts
    if len(factors) == 1:
        P, m = factors[0]
        _, digits = padic_digits(rem, P, m)
        if digits:
            parts[P] = digits
        return poly, parts
    for P, m in factors:
        F = P ** m
        G = full.exact_div(F)
        g, u, _ = xpoly_xgcd(G, F)
        if g.degree > 0:
            raise ValueError("factors are not pairwise coprime")
        A = (rem * u) % F
        if A:
            _, digits = padic_digits(A, P, m)
            if digits:
                parts[P] = digits
    return poly, parts


def invert_mod(U, P):
    """Inverse of U modulo the squarefree polynomial P.

    Raises :class:`ZeroDivisor` carrying a monic proper divisor of P when U
    is a nonzero zero divisor, and ``ZeroDivisionError`` when U = 0 mod P.
    """
    U = U % P
    if not U:
        raise ZeroDivisionError("inverse of zero modulo P")
    g, u, _ = xpoly_xgcd(U, P)
    if g.degree > 0:
        raise ZeroDivisor(g)
    return u % P


def eval_params(obj, point):
    """Specialize the parameters of a K element, XPoly or XRat at ``point``.

    Polynomials and rational functions come back over Q (a parameter field
    without parameters).  Raises :class:`~hermite_ct.field.BadPoint` when a
    denominator vanishes.
    """
    if isinstance(obj, KElem):
        return obj.evaluate(point)
    base = ParamField(())
    if isinstance(obj, XPoly):
        return XPoly(base, [c.evaluate(point) for c in obj.coeffs])
    if isinstance(obj, XRat):
        from .field import BadPoint
        num = eval_params(obj.num, point)
        den = eval_params(obj.den, point)
        if not den:
            raise BadPoint("denominator vanishes at %r" % (point,))
        if den.degree < obj.den.degree:
            raise BadPoint("denominator drops degree at %r" % (point,))
        return XRat(num, den)
    raise TypeError("cannot specialize %r" % type(obj).__name__)
