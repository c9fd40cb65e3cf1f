"""
The parameter field K = Q(t1, ..., te).

Elements are kept as reduced fractions of sparse multivariate polynomials
over Q.  The polynomial arithmetic itself (including multivariate gcd) is
delegated to sympy's sparse ``PolyRing``; this module only fixes the
normal form and the conversions used elsewhere in the package.
"""

from fractions import Fraction

from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

__all__ = ["ParamField", "KElem", "BadPoint", "to_rat"]


class BadPoint(ZeroDivisionError):
    """A specialization of the parameters hits a vanishing denominator."""


def to_rat(value):
    """Convert an int / Fraction / sympy rational to a ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def _qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(value)


class ParamField:
    """The field Q(t1, ..., te).

    Parameter names are sorted so that the graded-lex order used for
    canonical signs and printing does not depend on declaration order.
    """

    _dummy = "_t"

    def __init__(self, names=()):
        names = tuple(sorted(set(names)))
        for name in names:
            if not name.isidentifier():
                raise ValueError("bad parameter name %r" % (name,))
        self.names = names
        self.ring = PolyRing(names or (self._dummy,), QQ, grlex)
        self.zero = KElem(self, self.ring.zero, self.ring.one, False)
        self.one = KElem(self, self.ring.one, self.ring.one, False)

    def __eq__(self, other):
        return isinstance(other, ParamField) and self.names == other.names

    def __hash__(self):
        return hash(("ParamField", self.names))

    def __repr__(self):
        return "ParamField(%r)" % (self.names,)

    @property
    def ngens(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def gen(self, name):
        return KElem(self, self.ring.gens[self.index(name)], self.ring.one, False)

    def __call__(self, value):
        if isinstance(value, KElem):
            if value.field != self:
                raise TypeError("element of a different parameter field")
            return value
        return KElem(self, self.ring(_qq(value)), self.ring.one, False)

    def from_polys(self, num, den=None):
        return KElem(self, num, self.ring.one if den is None else den)


class KElem:
    """Normalized fraction num/den of parameter polynomials.

    Invariants: gcd(num, den) = 1 and den is monic for graded-lex order
    (so in particular its leading coefficient is positive).
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den, normalize=True):
        self.field = field
        if normalize:
            if not den:
                raise ZeroDivisionError("zero denominator in parameter field")
            if not num:
                num, den = field.ring.zero, field.ring.one
            elif den != field.ring.one:
                g, num, den = num.cofactors(den)
                lc = den.LC
                if lc != 1:
                    num = num.quo_ground(lc)
                    den = den.monic()
        self.num = num
        self.den = den

    # -- coercion -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, KElem):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    # -- predicates -----------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == self.field.ring.one and self.den == self.field.ring.one

    def is_constant(self):
        return self.num.is_ground and self.den.is_ground

    def is_polynomial(self):
        return self.den == self.field.ring.one

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic -----------------------------------------------------

    def __neg__(self):
        return KElem(self.field, -self.num, self.den, False)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        one = self.field.ring.one
        if self.den == one and other.den == one:
            return KElem(self.field, self.num + other.num, one, False)
        if self.den == other.den:
            return KElem(self.field, self.num + other.num, self.den)
        if other.den == one:
            return KElem(self.field, self.num + other.num * self.den, self.den, False)
        if self.den == one:
            return KElem(self.field, self.num * other.den + other.num, other.den, False)
        return KElem(self.field, self.num * other.den + other.num * self.den,
                     self.den * other.den)

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
        if not self.num or not other.num:
            return self.field.zero
        one = self.field.ring.one
        if self.den == one and other.den == one:
            return KElem(self.field, self.num * other.num, one, False)
        if other.num.is_ground and other.den == one:
            return KElem(self.field, self.num * other.num, self.den, False)
        if self.num.is_ground and self.den == one:
            return KElem(self.field, other.num * self.num, other.den, False)
        # cross cancellation keeps the final gcd small
        g1, a, d = self.num.cofactors(other.den)
        g2, c, b = other.num.cofactors(self.den)
        num, den = a * c, b * d
        lc = den.LC
        if lc != 1:
            num, den = num.quo_ground(lc), den.monic()
        return KElem(self.field, num, den, False)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in parameter field")
        num, den = self.den, self.num
        lc = den.LC
        if lc != 1:
            num, den = num.quo_ground(lc), den.monic()
        return KElem(self.field, num, den, False)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return KElem(self.field, self.num ** n, self.den ** n, False)

    # -- parameter actions ----------------------------------------------

    def shift(self, name, by=1):
        """Substitute t -> t + by for the parameter ``name``."""
        ring = self.field.ring
        gen = ring.gens[self.field.index(name)]
        target = gen + by
        return KElem(self.field, self.num.compose(gen, target), self.den.compose(gen, target))

    def diff(self, name):
        """Partial derivative with respect to the parameter ``name``."""
        gen = self.field.ring.gens[self.field.index(name)]
        if self.den == self.field.ring.one:
            return KElem(self.field, self.num.diff(gen), self.den, False)
        num = self.num.diff(gen) * self.den - self.num * self.den.diff(gen)
        return KElem(self.field, num, self.den ** 2)

    def evaluate(self, point):
        """Specialize every parameter; ``point`` is a sequence or mapping."""
        field = self.field
        if isinstance(point, dict):
            values = [point[name] for name in field.names]
        else:
            values = list(point)
        if len(values) != field.ngens:
            raise ValueError("expected %d parameter values" % field.ngens)
        ring = field.ring
        if field.ngens:
            subs = [(g, _qq(v)) for g, v in zip(ring.gens, values)]
        else:
            subs = [(ring.gens[0], QQ(0))]
        den = to_rat(self.den.evaluate(subs))
        if den == 0:
            raise BadPoint("denominator vanishes at %r" % (values,))
        return to_rat(self.num.evaluate(subs)) / den

    def to_rat(self):
        """The value of a constant element as a ``Fraction``."""
        if not self.is_constant():
            raise ValueError("element depends on the parameters")
        return to_rat(self.num.LC if self.num else QQ(0)) / to_rat(self.den.LC)

    # -- printing -------------------------------------------------------

    def __repr__(self):
        from .printer import format_kelem
        return format_kelem(self)

    __str__ = __repr__
