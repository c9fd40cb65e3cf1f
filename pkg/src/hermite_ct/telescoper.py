"""
Creative telescoping by reduction: an FGLM-style walk over monomials in
the auxiliary operators, finding K-linear relations between canonical
forms.
"""

import random
from dataclasses import dataclass, field as dc_field
from math import gcd as igcd, lcm as ilcm

from sympy import QQ

from .diffop import adjoint
from .field import BadPoint
from .linalg import rank, solve
from .oresys import initial_F, lambda_map
from .polys import XPoly, XRat
from .reduction import Reducer, shell_transform

__all__ = [
    "ORDERS", "order_key", "Telescoper", "TelescopingBasis", "telescope",
    "linear_relation", "monomial_succ", "verify_basis", "divides",
]

DEFAULT_MAX_DEGREE = 20


def _grevlex(mono):
    return (sum(mono),) + tuple(-e for e in mono)


def _deglex(mono):
    return (sum(mono),) + tuple(reversed(mono))


ORDERS = {"grevlex": _grevlex, "deglex": _deglex}


def order_key(order):
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError("unknown monomial order %r" % (order,)) from None


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def monomial_succ(order, frontier):
    """Smallest monomial of the frontier for the given order."""
    if not frontier:
        raise ValueError("empty frontier")
    return min(frontier, key=order_key(order))


class Telescoper:
    """Element sum c_mu mu of K<D_1, ..., D_e>."""

    def __init__(self, terms, names, order="grevlex"):
        self.terms = {tuple(m): c for m, c in terms.items() if c}
        self.names = tuple(names)
        self.order = order

    def sorted_terms(self, descending=True):
        key = order_key(self.order)
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]), reverse=descending)

    def leading_monomial(self):
        return self.sorted_terms()[0][0]

    def normalized(self):
        """Parameter-polynomial coefficients, content 1, positive leading sign."""
        if not self.terms:
            return self
        coeffs = list(self.terms.values())
        ring = coeffs[0].field.ring
        field = coeffs[0].field
        D = ring.one
        for c in coeffs:
            if c.den != ring.one:
                D = D.lcm(c.den)
        nums = [c.num * D.exquo(c.den) for c in coeffs]
        g = ring.zero
        for p in nums:
            g = p if not g else g.gcd(p)
        nums = [p.exquo(g) for p in nums]
        dens = [int(QQ.denom(c)) for p in nums for c in p.coeffs()]
        scale = ilcm(*dens)
        nums = [p * scale for p in nums]
        content = 0
        for p in nums:
            for c in p.coeffs():
                content = igcd(content, int(QQ.numer(c)))
        nums = [p.quo_ground(content) for p in nums]
        terms = dict(zip(self.terms, nums))
        lead = self.leading_monomial()
        if terms[lead].LC < 0:
            terms = {m: -p for m, p in terms.items()}
        return Telescoper({m: field.from_polys(p) for m, p in terms.items()},
                          self.names, self.order)

    def __eq__(self, other):
        return isinstance(other, Telescoper) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        from .printer import format_telescoper
        return format_telescoper(self)


@dataclass
class TelescopingBasis:
    G: list
    Q: list
    R: list
    status: str
    F: dict = dc_field(default_factory=dict)
    computations: dict = dc_field(default_factory=dict)
    diagnostics: list = dc_field(default_factory=list)


def _common_numerators(rats):
    field = rats[0].field
    D = XPoly(field, [1])
    for R in rats:
        if R:
            D = (D * R.den).exact_div(D.gcd(R.den))
    return [(R.num * D).exact_div(R.den) if R else XPoly(field, []) for R in rats]


def _specialized_rank_check(matrix, rhs, rng):
    """True when a random specialization proves the system inconsistent."""
    field = None
    for row in matrix:
        for c in row:
            field = c.field
            break
        if field:
            break
    if field is None or not matrix[0]:
        return False
    for _ in range(3):
        point = [rng.randint(-1000, 1000) for _ in range(field.ngens)]
        try:
            A = [[c.evaluate(point) for c in row] for row in matrix]
            b = [c.evaluate(point) for c in rhs]
        except BadPoint:
            continue
        ra = rank(A)
        if ra < len(matrix[0]):
            return False
        return rank([row + [v] for row, v in zip(A, b)]) > ra
    return False


def linear_relation(candidates, target, rng=None):
    """Coefficients a with target = sum a_j candidates[j], or None."""
    target = target if isinstance(target, XRat) else XRat(target)
    field = target.field
    if not candidates:
        return [] if not target else None
    if not target:
        return [field.zero] * len(candidates)
    nums = _common_numerators(list(candidates) + [target])
    width = max(p.degree for p in nums if p) + 1
    matrix = [[nums[j][d] for j in range(len(candidates))] for d in range(width)]
    rhs = [nums[-1][d] for d in range(width)]
    rng = rng or random.Random(0)
    if _specialized_rank_check(matrix, rhs, rng):
        return None
    return solve(matrix, rhs)


def telescope(cd, specs=None, order="grevlex", first_only=False,
              max_degree=DEFAULT_MAX_DEGREE, shell=False, seed=0, reducer=None):
    """Gröbner basis of the telescoping ideal, walking monomials in increasing order."""
    specs = list(specs if specs is not None else cd.specs)
    key = order_key(order)
    e = len(specs)
    names = [s.name for s in specs]
    Lstar = adjoint(cd.L)
    if reducer is None:
        reducer = shell_transform(Lstar, seed=seed) if shell else Reducer(Lstar, seed=seed)
    rng = random.Random(seed)
    one = tuple([0] * e)
    F = {one: initial_F(cd, reducer)}
    count = {one: 1}
    frontier = {one}
    Q, R, G = [], [], []
    status = "complete"
    while frontier:
        mu = min(frontier, key=key)
        frontier.discard(mu)
        if any(divides(r, mu) for r in R):
            continue
        if sum(mu) > max_degree:
            status = "degree-capped"
            break
        if mu != one:
            i = next(i for i in range(e) if mu[i] > 0 and _down(mu, i) in Q)
            F[mu] = reducer.canonical_form(lambda_map(i, F[_down(mu, i)], cd)).reduced
            count[mu] = count.get(mu, 0) + 1
        rel = linear_relation([F[nu] for nu in Q], F[mu], rng)
        if rel is not None:
            terms = {mu: cd.L.field.one}
            for nu, a in zip(Q, rel):
                if a:
                    terms[nu] = -a
            G.append(Telescoper(terms, names, order).normalized())
            R.append(mu)
            if first_only:
                status = "first-found"
                break
        else:
            Q.append(mu)
            for i in range(e):
                frontier.add(_up(mu, i))
    return TelescopingBasis(G, Q, R, status, F, count)


def _down(mu, i):
    return mu[:i] + (mu[i] - 1,) + mu[i + 1:]


def _up(mu, i):
    return mu[:i] + (mu[i] + 1,) + mu[i + 1:]


def verify_basis(B, Fs):
    """Exact check of every relation plus the Gröbner staircase structure."""
    for T in B.G:
        total = None
        for mono, c in T.terms.items():
            if mono not in Fs:
                return False
            term = Fs[mono] * c
            total = term if total is None else total + term
        if total is not None and total:
            return False
    leads = [T.leading_monomial() for T in B.G]
    if sorted(leads) != sorted(tuple(r) for r in B.R):
        return False
    for a in B.R:
        for b in B.R:
            if a != b and divides(a, b):
                return False
    for q in B.Q:
        if any(divides(r, q) for r in B.R):
            return False
    return True
