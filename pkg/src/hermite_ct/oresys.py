"""
D-finite inputs: Ore actions on the parameters, scalar and matrix
presentations of a module over K(x)<Dx, D_1, ..., D_e>, cyclic vectors and
the maps lambda_i used by creative telescoping.
"""

import logging
import random
from dataclasses import dataclass, field as dc_field

from .diffop import (
    DiffOp, adjoint, apply, clear_denominators, content_normalize,
    integer_roots, local_data_finite, local_data_infinity,
    nonunit_integer_values, PlaceSplit, right_remainder, singular_places,
)
from .linalg import nullspace, rank, solve
from .polys import XPoly, XRat

__all__ = [
    "OreSpec", "ScalarSystem", "MatrixSystem", "CyclicData",
    "CyclicVectorError", "sigma_delta", "cyclic_vector", "from_scalar",
    "lambda_map", "initial_F", "has_rational_solution",
]

log = logging.getLogger(__name__)

MAX_CYCLIC_TRIALS = 50


class CyclicVectorError(RuntimeError):
    pass


@dataclass(frozen=True)
class OreSpec:
    """One auxiliary operator: ``kind`` is "derivation" or "shift" in ``param``."""
    name: str
    kind: str
    param: str

    def __post_init__(self):
        if self.kind not in ("derivation", "shift"):
            raise ValueError("unknown Ore kind %r" % (self.kind,))

    def sigma(self, R):
        if self.kind == "derivation":
            return R
        return R.map_coeffs(lambda c: c.shift(self.param))

    def delta(self, R):
        if self.kind == "shift":
            return XRat.zero(R.field)
        d = lambda c: c.diff(self.param)
        num, den = R.num, R.den
        dn, dd = num.map_coeffs(d), den.map_coeffs(d)
        if not dd:
            return XRat(dn, den)
        return XRat(dn * den - num * dd, den * den)


def sigma_delta(i, R, specs):
    R = R if isinstance(R, XRat) else XRat(R)
    spec = specs[i]
    return spec.sigma(R), spec.delta(R)


@dataclass
class ScalarSystem:
    """f with L(f) = 0 and D_i(f) = rels[i](f)."""
    L: DiffOp
    rels: list
    specs: list
    f: DiffOp = None

    def __post_init__(self):
        if not self.L:
            raise ValueError("annihilator must be nonzero")
        if len(self.rels) != len(self.specs):
            raise ValueError("need one relation per Ore operator")


@dataclass
class MatrixSystem:
    """Action of Dx and each D_i on a basis b_1..b_r of the quotient module.

    Row convention: D(b_j) = sum_k A[j][k] b_k.  ``f`` holds coordinates.
    """
    dim: int
    dx: list
    ops: list
    specs: list
    f: list = None

    def __post_init__(self):
        r = self.dim
        mats = [self.dx] + list(self.ops)
        for A in mats:
            if len(A) != r or any(len(row) != r for row in A):
                raise ValueError("action matrices must be %d x %d" % (r, r))
        if len(self.ops) != len(self.specs):
            raise ValueError("need one matrix per Ore operator")
        if self.f is not None and len(self.f) != r:
            raise ValueError("f must have %d coordinates" % r)

    def apply_dx(self, v):
        r = self.dim
        return [v[k].derivative() + _dot(v, self.dx, k) for k in range(r)]

    def apply_op(self, i, v):
        spec = self.specs[i]
        sv = [spec.sigma(c) for c in v]
        return [spec.delta(v[k]) + _dot(sv, self.ops[i], k) for k in range(self.dim)]


def _dot(v, A, k):
    total = XRat.zero(v[0].field)
    for j, c in enumerate(v):
        if c and A[j][k]:
            total = total + c * A[j][k]
    return total


@dataclass
class CyclicData:
    gamma: list
    L: DiffOp
    B: list
    A_f: DiffOp
    specs: list
    _adj: dict = dc_field(default_factory=dict, repr=False)

    def adjoint_B(self, i):
        if i not in self._adj:
            self._adj[i] = adjoint(self.B[i])
        return self._adj[i]


def _solve_in_basis(vectors, target):
    """Coefficients c with sum c_j vectors[j] = target, or None."""
    r = len(target)
    matrix = [[vectors[j][k] for j in range(len(vectors))] for k in range(r)]
    return solve(matrix, target)


def _op_from_coords(field, coords):
    return DiffOp(field, coords)


def cyclic_vector(sys, seed=0):
    """Find a cyclic vector and express L, B_i, A_f in the cyclic basis."""
    r = sys.dim
    field = sys.dx[0][0].field
    zero, one = XRat.zero(field), XRat.one(field)
    rng = random.Random(seed)
    trials = [[one if k == j else zero for k in range(r)] for j in range(r)]
    while len(trials) < MAX_CYCLIC_TRIALS:
        coeffs = [rng.randint(-2, 2) for _ in range(r)]
        if any(coeffs):
            trials.append([one * c if c else zero for c in coeffs])
    for gamma in trials[:MAX_CYCLIC_TRIALS]:
        vs = [gamma]
        for _ in range(r):
            vs.append(sys.apply_dx(vs[-1]))
        if rank(vs[:r]) < r:
            continue
        c = _solve_in_basis(vs[:r], vs[r])
        L = DiffOp(field, [-a for a in c] + [one])
        L, _ = content_normalize(clear_denominators(L))
        B = []
        for i in range(len(sys.specs)):
            coords = _solve_in_basis(vs[:r], sys.apply_op(i, gamma))
            B.append(_op_from_coords(field, coords))
        f = sys.f if sys.f is not None else [one] + [zero] * (r - 1)
        A_f = _op_from_coords(field, _solve_in_basis(vs[:r], f))
        return CyclicData(gamma, L, B, A_f, list(sys.specs))
    raise CyclicVectorError("no cyclic vector among %d trials" % MAX_CYCLIC_TRIALS)


def from_scalar(sys):
    L = sys.L
    if not L.has_polynomial_coefficients:
        L = clear_denominators(L)
    L, _ = content_normalize(L)
    field = L.field
    B = [right_remainder(C, L) for C in sys.rels]
    f = sys.f if sys.f is not None else DiffOp(field, [1])
    A_f = right_remainder(f, L)
    if L.order >= 2 and has_rational_solution(L):
        log.warning("the annihilator has a rational solution; it may not be minimal")
    return CyclicData(None, L, B, A_f, list(sys.specs))


def lambda_map(i, R, cd):
    """lambda_i(R) = B_i*(sigma_i(R)) + delta_i(R)."""
    spec = cd.specs[i]
    R = R if isinstance(R, XRat) else XRat(R)
    return apply(cd.adjoint_B(i), spec.sigma(R)) + spec.delta(R)


def initial_F(cd, reducer):
    start = apply(adjoint(cd.A_f), XRat.one(cd.L.field))
    return reducer.canonical_form(start).reduced


def has_rational_solution(L, limit=60):
    """Whether L(y) = 0 has a nonzero solution in K(x).

    Pole orders at each singular place and the degree at infinity are
    bounded through the indicial polynomials; the remaining ansatz is
    solved exactly.  Returns False when the bounds exceed ``limit``.
    """
    field = L.field
    den = XPoly(field, [1])
    places = list(singular_places(L))
    while places:
        P = places.pop()
        try:
            ld = local_data_finite(L, P)
        except PlaceSplit as exc:
            g = exc.divisor.monic()
            places.extend([g, P.exact_div(g).monic()])
            continue
        neg = [c if j % 2 == 0 else -c for j, c in enumerate(ld.indicial)]
        orders = [s for s, _ in nonunit_integer_values(neg, P) if s > 0]
        if orders:
            den = den * P ** max(orders)
    inf = local_data_infinity(L)
    ind = inf.indicial
    if ind.degree <= 0:
        return False
    negind = XPoly(field, [c if j % 2 == 0 else -c for j, c in enumerate(ind.coeffs)])
    degs = integer_roots(negind)
    if not degs:
        return False
    top = max(degs) + den.degree
    if top < 0 or top > limit:
        return False
    images = [apply(L, XRat(XPoly.monomial(field, j), den)) for j in range(top + 1)]
    D = XPoly(field, [1])
    for im in images:
        if im:
            D = (D * im.den).exact_div(D.gcd(im.den))
    nums = [(im.num * D).exact_div(im.den) if im else XPoly(field, []) for im in images]
    width = max((p.degree for p in nums if p), default=0) + 1
    matrix = [[nums[j][d] for j in range(top + 1)] for d in range(width)]
    return bool(nullspace(matrix, top + 1))
