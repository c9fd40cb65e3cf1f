"""
Generalized Hermite reduction with respect to a linear differential
operator M: the weak reduction H, the exceptional space Exc_M = H(im M),
the projection rho along Exc_M and the resulting canonical form.

Every reduction returns a certificate U with R = reduced + M(U).
"""

import random
from dataclasses import dataclass, field as dc_field

from .diffop import (
    DiffOp, PlaceSplit, adjoint, apply, content_normalize, integer_roots,
    local_data_finite, local_data_infinity, nonunit_integer_values, op_mul,
    poly_normalize, singular_places,
)
from .linalg import solve
from .polys import (
    XPoly, XRat, ZeroDivisor, invert_mod, padic_digits, partial_fraction,
    squarefree_factorization,
)

__all__ = [
    "ReductionResult", "ExcBasis", "Reducer", "ShellReducer",
    "ExceptionalLimitError", "weak_reduce", "exceptional_basis", "rho",
    "canonical_form", "shell_transform", "default_shell",
    "brute_force_preimage", "quotient_dimension_bound", "span_rank",
]

DEFAULT_EXC_CAP = 400


class ExceptionalLimitError(RuntimeError):
    """Too many candidate generators for the exceptional space."""


@dataclass(frozen=True)
class ReductionResult:
    reduced: XRat
    certificate: XRat


@dataclass
class ExcBasis:
    """Exceptional space W = Q^-1 V with V given by echelon rows.

    ``echelon`` maps a pivot degree to (row, preimage) where row is monic of
    that degree and row / Q = M(preimage).
    """
    generators: list
    preimages: list
    Q: XPoly
    echelon: dict = dc_field(default_factory=dict)

    @property
    def dimension(self):
        return len(self.echelon)

    def pivots(self):
        return sorted(self.echelon)

    def basis(self):
        """Echelonized elements of the space, by increasing pivot degree."""
        return [XRat(self.echelon[d][0], self.Q) for d in self.pivots()]


def _from_digits(P, digits):
    """sum U_s / P^s as a rational function."""
    field = P.field
    if not digits:
        return XRat.zero(field)
    m = max(digits)
    num = XPoly(field, [])
    for s, U in digits.items():
        num = num + U * P ** (m - s)
    return XRat(num, P ** m)


def _split_factors(P, g):
    return [g.monic(), P.exact_div(g).monic()]


class Reducer:
    """Reduction context for a fixed operator.

    The operator is brought to polynomial coefficients (M*Q) and scaled to
    a monic leading coefficient; reductions are computed for that operator
    and certificates are translated back to the original one.
    """

    def __init__(self, M, exc_cap=DEFAULT_EXC_CAP, seed=0):
        if not M:
            raise ValueError("cannot reduce modulo the zero operator")
        self.M = M
        self.field = M.field
        opq, self.Q = poly_normalize(M)
        self.op, self.scale = content_normalize(opq)
        self.exc_cap = exc_cap
        self._rng = random.Random(seed)
        self._local = {}
        self._mono_images = {}
        self.infinity = local_data_infinity(self.op)
        self.places = []
        self.exc = self._build_exceptional()

    # -- local data ------------------------------------------------------

    def local_data(self, P):
        """Local data at P; raises PlaceSplit when P must be refined."""
        ld = self._local.get(P)
        if ld is None:
            ld = self._local[P] = local_data_finite(self.op, P)
        return ld

    def _to_original(self, U):
        if not U:
            return U
        return U * XRat(self.Q) * self.scale

    # -- weak reduction ----------------------------------------------------

    def _image_polar(self, V, P, k):
        """Numerator of op(V / P^k) over P^(k + r)."""
        r = self.op.order
        ps = self.op.polys()
        dP = P.derivative()
        A = V
        total = XPoly(self.field, [])
        m = k
        for i in range(r + 1):
            if i:
                A = A.derivative() * P - (A * dP) * m
                m += 1
            if ps[i]:
                total = total + ps[i] * A * P ** (r - i)
        return total

    def _image_monomial(self, k):
        img = self._mono_images.get(k)
        if img is None:
            field = self.field
            img = XPoly(field, [])
            for i, p in enumerate(self.op.polys()):
                if not p or i > k:
                    continue
                f = 1
                for j in range(i):
                    f *= k - j
                img = img + p.shift_degree(k - i) * f
            self._mono_images[k] = img
        return img

    def _reduce_place(self, P, digits, cert, kept, polys):
        """Reduce the polar part at P in place.

        Polynomial contributions are appended to ``polys``.  Raises
        PlaceSplit when P has to be refined; ``digits`` then holds the part
        still to be processed.
        """
        ld = self.local_data(P)
        r = self.op.order
        while digits:
            s = max(digits)
            U = digits[s]
            k = s + ld.shift
            c = ld.at_neg(k) if k > 0 else None
            if not c:
                kept[s] = U
                del digits[s]
                continue
            try:
                cinv = invert_mod(c, P)
            except ZeroDivisor as exc:
                raise PlaceSplit(exc.divisor)
            V = (U * cinv) % P
            cert[k] = cert.get(k, XPoly(self.field, [])) + V
            quo, img = padic_digits(self._image_polar(V, P, k), P, k + r)
            if quo:
                polys.append(-quo)
            for t, W in img.items():
                new = digits.get(t, XPoly(self.field, [])) - W
                if new:
                    digits[t] = new
                else:
                    digits.pop(t, None)
            assert s not in digits

    def _reduce_infinity(self, poly):
        ld = self.infinity
        field = self.field
        kept = XPoly(field, [])
        cert = [field.zero]
        while poly:
            s = poly.degree
            c = poly.lc()
            k = s + ld.shift
            ind = ld.at_neg(k) if k >= 0 else None
            if ind:
                a = c / ind
                if k >= len(cert):
                    cert.extend([field.zero] * (k + 1 - len(cert)))
                cert[k] = cert[k] + a
                poly = poly - self._image_monomial(k).scale(a)
            else:
                term = XPoly.monomial(field, s, c)
                kept = kept + term
                poly = poly - term
            assert not poly or poly.degree < s
        return kept, XPoly(field, cert)

    def _weak(self, R):
        """H_rat(R) with a certificate for the normalized operator."""
        field = self.field
        R = R if isinstance(R, XRat) else XRat(R)
        if not R:
            return XRat.zero(field), XRat.zero(field)
        factors = squarefree_factorization(R.den)
        poly, parts = partial_fraction(R, factors)
        work = list(parts.items())
        reduced = XRat.zero(field)
        certificate = XRat.zero(field)
        while work:
            P, digits = work.pop()
            cert, kept, polys = {}, {}, []
            try:
                self._reduce_place(P, digits, cert, kept, polys)
            except PlaceSplit as exc:
                pending = _from_digits(P, digits)
                m = max(digits)
                pieces = _split_factors(P, exc.divisor)
                extra, split = partial_fraction(pending, [(g, m) for g in pieces])
                poly = poly + extra
                work.extend(split.items())
            for q in polys:
                poly = poly + q
            reduced = reduced + _from_digits(P, kept)
            certificate = certificate + _from_digits(P, cert)
        kept, pcert = self._reduce_infinity(poly)
        return reduced + XRat(kept), certificate + XRat(pcert)

    def weak_reduce(self, R):
        red, cert = self._weak(R)
        return ReductionResult(red, self._to_original(cert))

    # -- exceptional space ---------------------------------------------------

    def _refined_places(self):
        todo = list(singular_places(self.op))
        out = []
        while todo:
            P = todo.pop()
            try:
                self.local_data(P)
            except PlaceSplit as exc:
                todo.extend(_split_factors(P, exc.divisor))
                continue
            out.append(P)
        out.sort(key=lambda P: (P.degree, repr(P)))
        return out

    def _exceptional_candidates(self):
        field = self.field
        cands = []
        self.places = self._refined_places()
        for P in self.places:
            ld = self.local_data(P)
            orders = set(range(1, ld.shift + 1))
            neg = [c if j % 2 == 0 else -c for j, c in enumerate(ld.indicial)]
            for s, _ in nonunit_integer_values(neg, P, self._rng):
                if s > 0:
                    orders.add(s)
            if len(cands) + len(orders) * P.degree > self.exc_cap:
                raise ExceptionalLimitError(
                    "more than %d exceptional candidates" % self.exc_cap)
            for s in sorted(orders):
                Ps = P ** s
                for j in range(P.degree):
                    cands.append(XRat(XPoly.monomial(field, j), Ps))
        ind = self.infinity.indicial
        if ind.degree > 0:
            neg = XPoly(field, [c if j % 2 == 0 else -c for j, c in enumerate(ind.coeffs)])
            roots = [s for s in integer_roots(neg) if s >= 0]
            if len(cands) + len(roots) > self.exc_cap:
                raise ExceptionalLimitError(
                    "more than %d exceptional candidates" % self.exc_cap)
            for s in roots:
                cands.append(XRat(XPoly.monomial(field, s)))
        return cands

    def _build_exceptional(self):
        field = self.field
        gens, pres = [], []
        for g in self._exceptional_candidates():
            red, cert = self._weak(apply(self.op, g))
            if red:
                gens.append(red)
                pres.append(g - cert)
        Q = XPoly(field, [1])
        for w in gens:
            Q = (Q * w.den).exact_div(Q.gcd(w.den))
        exc = ExcBasis(gens, pres, Q)
        for w, pre in zip(gens, pres):
            row = (w.num * Q).exact_div(w.den)
            self._insert_row(exc, row, pre)
        return exc

    @staticmethod
    def _insert_row(exc, row, pre):
        ech = exc.echelon
        while row and row.degree in ech:
            piv, ppre = ech[row.degree]
            a = row.lc()
            row = row - piv.scale(a)
            pre = pre - ppre * a
        if not row:
            return
        inv = row.lc().inverse()
        row = row.scale(inv)
        pre = pre * inv
        d = row.degree
        for e in list(ech):
            if e > d:
                other, opre = ech[e]
                a = other[d]
                if a:
                    ech[e] = (other - row.scale(a), opre - pre * a)
        ech[d] = (row, pre)

    # -- canonical form ------------------------------------------------------

    def _rho(self, R):
        return rho(self.exc, R, with_certificate=True)

    def canonical_form(self, R):
        R = R if isinstance(R, XRat) else XRat(R)
        red, cert = self._weak(R)
        if self.exc.echelon and red:
            red, c2 = self._rho(red)
            cert = cert + c2
        return ReductionResult(red, self._to_original(cert))

    def __call__(self, R):
        return self.canonical_form(R).reduced


def rho(exc, R, with_certificate=False):
    """Project R along the exceptional space.

    Gaussian elimination on the polynomial part of Q*R, from the top
    degree down.  With ``with_certificate`` returns (result, U) where
    R - result = M(U).
    """
    field = R.field
    R = R if isinstance(R, XRat) else XRat(R)
    cert = XRat.zero(field)
    if not exc.echelon or not R:
        return (R, cert) if with_certificate else R
    QR = R * XRat(exc.Q)
    A, rest = divmod(QR.num, QR.den)
    for d in sorted(exc.echelon, reverse=True):
        a = A[d]
        if a:
            row, pre = exc.echelon[d]
            A = A - row.scale(a)
            cert = cert + pre * a
    out = (XRat(A) + XRat(rest, QR.den)) * XRat(XPoly(field, [1]), exc.Q)
    return (out, cert) if with_certificate else out


def weak_reduce(R, M):
    return Reducer(M).weak_reduce(R)


def exceptional_basis(M):
    return Reducer(M).exc


def canonical_form(R, reducer):
    return reducer.canonical_form(R)


# -- shell preconditioner ------------------------------------------------------

class ShellReducer:
    """Canonical form R -> B [R/B]_L for M A = B L, with A = B here."""

    def __init__(self, M, A, B, exc_cap=DEFAULT_EXC_CAP, seed=0):
        field = M.field
        A = A if isinstance(A, XRat) else XRat(A)
        B = B if isinstance(B, XRat) else XRat(B)
        if not A or not B:
            raise ValueError("shell factors must be nonzero")
        self.M, self.A, self.B = M, A, B
        self.field = field
        L = op_mul(op_mul(DiffOp(field, [B.inverse()]), M), DiffOp(field, [A]))
        if op_mul(M, DiffOp(field, [A])) != op_mul(DiffOp(field, [B]), L):
            raise ArithmeticError("shell factorization check failed")
        self.L = L
        self.inner = Reducer(L, exc_cap=exc_cap, seed=seed)
        self.exc = self.inner.exc

    def canonical_form(self, R):
        R = R if isinstance(R, XRat) else XRat(R)
        res = self.inner.canonical_form(R / self.B)
        return ReductionResult(res.reduced * self.B, res.certificate * self.A)

    def weak_reduce(self, R):
        R = R if isinstance(R, XRat) else XRat(R)
        res = self.inner.weak_reduce(R / self.B)
        return ReductionResult(res.reduced * self.B, res.certificate * self.A)

    def __call__(self, R):
        return self.canonical_form(R).reduced


def default_shell(M, seed=0):
    """prod P^m_P, m_P the smallest negative integer root of ind_P (or 0)."""
    opq, _ = poly_normalize(M)
    op, _ = content_normalize(opq)
    field = M.field
    rng = random.Random(seed)
    shell = XRat.one(field)
    todo = list(singular_places(op))
    while todo:
        P = todo.pop()
        try:
            ld = local_data_finite(op, P)
        except PlaceSplit as exc:
            todo.extend(_split_factors(P, exc.divisor))
            continue
        vals = nonunit_integer_values(list(ld.indicial), P, rng)
        partial = [g for s, g in vals if s < 0 and g.degree < P.degree]
        if partial:
            todo.extend(_split_factors(P, partial[0]))
            continue
        negs = [s for s, g in vals if s < 0]
        if negs:
            shell = shell * XRat(P) ** min(negs)
    return shell


def shell_transform(M, A=None, B=None, **kw):
    if A is None and B is None:
        A = B = default_shell(M, kw.get("seed", 0))
    elif A is None or B is None:
        raise ValueError("give both shell factors or neither")
    return ShellReducer(M, A, B, **kw)


# -- oracles and bounds --------------------------------------------------------

def _common_numerators(rats):
    """Numerators of ``rats`` over their common denominator."""
    field = rats[0].field
    D = XPoly(field, [1])
    for R in rats:
        D = (D * R.den).exact_div(D.gcd(R.den))
    return [(R.num * D).exact_div(R.den) for R in rats]


def span_rank(rats):
    """Dimension over K of the span of rational functions."""
    from .linalg import rank
    rats = [R for R in rats if R]
    if not rats:
        return 0
    nums = _common_numerators(rats)
    width = max(p.degree for p in nums) + 1
    return rank([[p[d] for d in range(width)] for p in nums])


def brute_force_preimage(M, R, bound):
    """Search U with M(U) = R among U = N / (den(R) lc(M))^bound.

    deg N is at most bound + deg den(R) + max(-sigma_inf, 0) where sigma_inf
    is the shift at infinity, enlarged by deg R + sigma_inf so that
    polynomial preimages of large degree are reachable.  Returns None when
    no such U exists.
    """
    field = M.field
    R = R if isinstance(R, XRat) else XRat(R)
    opq, Q = poly_normalize(M)
    if not R:
        return XRat.zero(field)
    lc = opq.lc().num
    D = (R.den * lc) ** bound
    shift = local_data_infinity(opq).shift
    top = bound + R.den.degree + max(-shift, 0) + D.degree
    top += max(R.num.degree - R.den.degree + shift, 0)
    basis = [XRat(XPoly.monomial(field, j), D) for j in range(top + 1)]
    images = [apply(opq, b) for b in basis]
    nums = _common_numerators(images + [R])
    width = max(p.degree for p in nums if p) + 1 if any(nums) else 1
    matrix = [[nums[j][d] for j in range(len(basis))] for d in range(width)]
    rhs = [nums[-1][d] for d in range(width)]
    sol = solve(matrix, rhs)
    if sol is None:
        return None
    N = XPoly(field, sol)
    return XRat(N, D) * XRat(Q)


def quotient_dimension_bound(M, P):
    opq, _ = poly_normalize(M)
    d = max(p.degree for p in opq.polys() if p)
    return (P.degree + 1) * opq.order + d
