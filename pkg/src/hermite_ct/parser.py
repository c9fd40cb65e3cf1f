"""
Parser for problem files (.ct) and for the printed forms of rational
functions, operators and telescopers.

A problem file is a sequence of statements separated by newlines or ';'
(newlines inside brackets do not end a statement)::

    params p, n
    ore Dp = d/dp
    ore Sn = shift(n)
    var x
    L = (1-x^2)*Dx^2 - (2*p*x^2+3*x-2*p)*Dx - (p^2*x^2+3*p*x-n^2-p^2+1)
    rel Dp: -x
    rel Sn: ((x^2-1)*Dx + p*x^2 + (n+1)*x - p)/n
    reduce x^2 by (x^2-1)*Dx^2 + ...

Matrix presentations use ``dim r``, ``matrix Dx = [[..], ..]``, one
``matrix <ore> = ...`` per Ore operator and optionally ``f = [..]``.
"""

import re
from dataclasses import dataclass, field as dc_field

from .diffop import DiffOp, op_mul
from .field import ParamField
from .oresys import MatrixSystem, OreSpec, ScalarSystem
from .polys import XPoly, XRat

__all__ = [
    "ParseError", "Problem", "parse_problem", "parse_xrat", "parse_diffop",
    "parse_kelem", "parse_telescoper",
]


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = "" if line is None else "line %d, column %d: " % (line, col)
        super().__init__(where + message)


# -- lexer ------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()\[\],:;=])
""", re.VERBOSE)

_SUPERSCRIPTS = "⁰¹²³⁴⁵⁶⁷⁸⁹⁺⁻"


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, start = 1, 0
    pos = 0
    depth = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - start + 1
        if not m:
            ch = text[pos]
            if ch in _SUPERSCRIPTS:
                raise ParseError("unicode superscript %r; write powers with '^'" % ch, line, col)
            raise ParseError("unexpected character %r" % ch, line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            if depth == 0:
                tokens.append(Token("end", "\n", line, col))
            line += 1
            start = m.end()
        elif kind == "op":
            if value in "([":
                depth += 1
            elif value in ")]":
                depth = max(depth - 1, 0)
            if value == ";" and depth == 0:
                tokens.append(Token("end", ";", line, col))
            else:
                tokens.append(Token("op", value, line, col))
        elif kind in ("num", "id"):
            tokens.append(Token(kind, value, line, col))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - start + 1))
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


# -- expression syntax ----------------------------------------------------------

class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, kind, text=None):
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind, text=None, what=None):
        tok = self.peek()
        if not self.at(kind, text):
            shown = tok.text if tok.kind not in ("end", "eof") else "end of statement"
            raise ParseError("expected %s, found %r" % (what or text or kind, shown),
                             tok.line, tok.col)
        return self.next()

    # expr := term (('+'|'-') term)*
    def expr(self):
        node = self.term()
        while self.at("op", "+") or self.at("op", "-"):
            op = self.next()
            rhs = self.term()
            node = ("add" if op.text == "+" else "sub", node, rhs, op)
        return node

    # term := unary (('*'|'/') unary)*
    def term(self):
        node = self.unary()
        while self.at("op", "*") or self.at("op", "/"):
            op = self.next()
            rhs = self.unary()
            node = ("mul" if op.text == "*" else "div", node, rhs, op)
        if self.at("id") or self.at("num") or self.at("op", "("):
            tok = self.peek()
            if not (tok.kind == "id" and tok.text == "by"):
                raise ParseError("missing '*' between factors", tok.line, tok.col)
        return node

    def unary(self):
        if self.at("op", "-"):
            op = self.next()
            return ("neg", self.unary(), op)
        if self.at("op", "+"):
            self.next()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("op", "^"):
            op = self.next()
            sign = 1
            if self.at("op", "-"):
                self.next()
                sign = -1
            if self.at("op", "("):
                self.next()
                if self.at("op", "-"):
                    self.next()
                    sign = -sign
                exp = self.expect("num", what="integer exponent")
                self.expect("op", ")")
            else:
                exp = self.expect("num", what="integer exponent")
            if self.at("op", "^"):
                tok = self.peek()
                raise ParseError("chained '^' is ambiguous; use parentheses", tok.line, tok.col)
            return ("pow", base, sign * int(exp.text), op)
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            return ("num", int(tok.text), tok)
        if tok.kind == "id":
            self.next()
            return ("id", tok.text, tok)
        if self.at("op", "("):
            self.next()
            node = self.expr()
            self.expect("op", ")")
            return node
        shown = tok.text if tok.kind not in ("end", "eof") else "end of statement"
        raise ParseError("expected an expression, found %r" % shown, tok.line, tok.col)

    def vector(self):
        self.expect("op", "[")
        items = [self.expr()]
        while self.at("op", ","):
            self.next()
            items.append(self.expr())
        self.expect("op", "]")
        return items

    def matrix(self):
        self.expect("op", "[")
        rows = [self.vector()]
        while self.at("op", ","):
            self.next()
            rows.append(self.vector())
        self.expect("op", "]")
        return rows


def _identifiers(node):
    kind = node[0]
    if kind == "id":
        yield node[1], node[2]
    elif kind in ("add", "sub", "mul", "div"):
        yield from _identifiers(node[1])
        yield from _identifiers(node[2])
    elif kind in ("neg", "pow"):
        yield from _identifiers(node[1])


# -- evaluation -------------------------------------------------------------------

class _OpDomain:
    """Evaluates expressions to differential operators in Dx."""

    def __init__(self, field, var):
        self.field = field
        self.var = var
        self.dname = "D" + var

    def leaf(self, name, tok):
        field = self.field
        if name == self.var:
            return DiffOp(field, [XPoly.x(field)])
        if name == self.dname:
            return DiffOp.dx(field)
        if name in field.names:
            return DiffOp(field, [field.gen(name)])
        raise ParseError("undeclared identifier %r" % name, tok.line, tok.col)

    def num(self, n):
        return DiffOp(self.field, [n])

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return op_mul(a, b)

    def div(self, a, b, tok):
        if b.order > 0:
            raise ParseError("division by an expression containing %s" % self.dname,
                             tok.line, tok.col)
        if not b:
            raise ParseError("division by zero", tok.line, tok.col)
        return a.scale_left(b[0].inverse())

    def pow(self, a, k, tok):
        if k < 0:
            if a.order > 0:
                raise ParseError("negative power of an expression containing %s" % self.dname,
                                 tok.line, tok.col)
            if not a:
                raise ParseError("division by zero", tok.line, tok.col)
            return DiffOp(self.field, [a[0].inverse() ** (-k)])
        if a.order == 0:
            return DiffOp(self.field, [a[0] ** k])
        return a ** k


class _OreDomain:
    """Evaluates expressions to elements of K<D_1..D_e> (dicts mono -> K)."""

    def __init__(self, field, specs):
        self.field = field
        self.specs = list(specs)
        self.names = [s.name for s in specs]
        self.unit = tuple([0] * len(specs))

    def leaf(self, name, tok):
        if name in self.names:
            i = self.names.index(name)
            mono = tuple(1 if j == i else 0 for j in range(len(self.names)))
            return {mono: self.field.one}
        if name in self.field.names:
            return {self.unit: self.field.gen(name)}
        raise ParseError("undeclared identifier %r" % name, tok.line, tok.col)

    def num(self, n):
        return {self.unit: self.field(n)} if n else {}

    def add(self, a, b):
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, self.field.zero) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def neg(self, a):
        return {m: -c for m, c in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _mono_times_scalar(self, mono, c):
        """mono * c rewritten as sum c' mono' using D_i c = sigma(c) D_i + delta(c)."""
        result = {self.unit: c}
        for i, e in reversed(list(enumerate(mono))):
            spec = self.specs[i]
            for _ in range(e):
                new = {}
                for m, a in result.items():
                    if spec.kind == "shift":
                        parts = [(m, a.shift(spec.param), 1)]
                    else:
                        parts = [(m, a, 1), (m, a.diff(spec.param), 0)]
                    for mm, aa, up in parts:
                        if not aa:
                            continue
                        key = tuple(v + (1 if (j == i and up) else 0) for j, v in enumerate(mm))
                        new[key] = new.get(key, self.field.zero) + aa
                result = {m: a for m, a in new.items() if a}
        return result

    def mul(self, a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                for m, c in self._mono_times_scalar(m1, c2).items():
                    key = tuple(x + y for x, y in zip(m, m2))
                    out = self.add(out, {key: c1 * c})
        return out

    def div(self, a, b, tok):
        if set(b) - {self.unit} or not b:
            raise ParseError("can only divide by a nonzero parameter expression",
                             tok.line, tok.col)
        inv = b[self.unit].inverse()
        return {m: c * inv for m, c in a.items()}

    def pow(self, a, k, tok):
        if k < 0:
            a, k = self.div(self.num(1), a, tok), -k
        out = self.num(1)
        for _ in range(k):
            out = self.mul(out, a)
        return out


def _evaluate(node, dom):
    kind = node[0]
    if kind == "num":
        return dom.num(node[1])
    if kind == "id":
        return dom.leaf(node[1], node[2])
    if kind == "neg":
        return dom.neg(_evaluate(node[1], dom))
    if kind == "pow":
        return dom.pow(_evaluate(node[1], dom), node[2], node[3])
    a = _evaluate(node[1], dom)
    b = _evaluate(node[2], dom)
    if kind == "add":
        return dom.add(a, b)
    if kind == "sub":
        return dom.sub(a, b)
    if kind == "mul":
        return dom.mul(a, b)
    return dom.div(a, b, node[3])


def _node_token(node):
    return node[2] if node[0] in ("num", "id") else node[-1]


def _as_xrat(op, node, what):
    if op.order > 0:
        tok = _node_token(node)
        raise ParseError("%s must not contain the derivation" % what, tok.line, tok.col)
    return op[0]


# -- problems ------------------------------------------------------------------------

@dataclass
class Problem:
    params: list
    specs: list
    var: str
    field: ParamField
    L: DiffOp = None
    rels: dict = dc_field(default_factory=dict)
    f: object = None
    reductions: list = dc_field(default_factory=list)
    dim: int = None
    matrices: dict = dc_field(default_factory=dict)

    @property
    def is_matrix(self):
        return self.dim is not None

    def operator(self):
        """Operator for local data / exceptional queries."""
        if self.reductions:
            return self.reductions[0][1]
        if self.L is not None:
            return self.L
        raise ValueError("problem has neither a reduce statement nor an operator L")

    def system(self):
        if self.is_matrix:
            dname = "D" + self.var
            if dname not in self.matrices:
                raise ValueError("matrix system needs 'matrix %s = ...'" % dname)
            missing = [s.name for s in self.specs if s.name not in self.matrices]
            if missing:
                raise ValueError("no matrix given for %s" % ", ".join(missing))
            return MatrixSystem(self.dim, self.matrices[dname],
                                [self.matrices[s.name] for s in self.specs],
                                list(self.specs), self.f)
        if self.L is None:
            raise ValueError("telescoping needs an operator L or a matrix system")
        missing = [s.name for s in self.specs if s.name not in self.rels]
        if missing:
            raise ValueError("no relation given for %s" % ", ".join(missing))
        return ScalarSystem(self.L, [self.rels[s.name] for s in self.specs],
                            list(self.specs), self.f)


def parse_problem(text):
    tokens = tokenize(text)
    p = _Parser(tokens)
    params, specs, var = [], [], None
    declared = set()
    stmts = []

    def check_declared(node, allow_ore=False):
        for name, tok in _identifiers(node):
            if name in declared:
                continue
            if var is not None and name == "D" + var:
                continue
            if allow_ore and name in [s.name for s in specs]:
                continue
            raise ParseError("undeclared identifier %r" % name, tok.line, tok.col)

    def end_statement():
        tok = p.peek()
        if tok.kind not in ("end", "eof"):
            raise ParseError("unexpected %r at end of statement" % tok.text, tok.line, tok.col)
        if tok.kind == "end":
            p.next()

    while not p.at("eof"):
        if p.at("end"):
            p.next()
            continue
        head = p.expect("id", what="a statement keyword")
        kw = head.text
        if kw == "params":
            if stmts:
                raise ParseError("params must be declared before use", head.line, head.col)
            names = [p.expect("id", what="parameter name")]
            while p.at("op", ","):
                p.next()
                names.append(p.expect("id", what="parameter name"))
            for tok in names:
                if tok.text in declared:
                    raise ParseError("duplicate identifier %r" % tok.text, tok.line, tok.col)
                declared.add(tok.text)
                params.append(tok.text)
        elif kw == "var":
            tok = p.expect("id", what="variable name")
            if var is not None:
                raise ParseError("only one main variable is allowed", tok.line, tok.col)
            if tok.text in declared:
                raise ParseError("duplicate identifier %r" % tok.text, tok.line, tok.col)
            var = tok.text
            declared.add(var)
        elif kw == "ore":
            name = p.expect("id", what="operator name")
            if name.text in declared or name.text in [s.name for s in specs]:
                raise ParseError("duplicate identifier %r" % name.text, name.line, name.col)
            p.expect("op", "=")
            kind_tok = p.expect("id", what="'d/d<param>' or 'shift(<param>)'")
            if kind_tok.text == "d":
                p.expect("op", "/")
                target = p.expect("id", what="d<param>")
                if not target.text.startswith("d") or target.text[1:] not in params:
                    raise ParseError("expected d<param> with a declared parameter",
                                     target.line, target.col)
                specs.append(OreSpec(name.text, "derivation", target.text[1:]))
            elif kind_tok.text == "shift":
                p.expect("op", "(")
                target = p.expect("id", what="parameter")
                if target.text not in params:
                    raise ParseError("undeclared parameter %r" % target.text,
                                     target.line, target.col)
                p.expect("op", ")")
                specs.append(OreSpec(name.text, "shift", target.text))
            else:
                raise ParseError("unknown Ore operator kind %r" % kind_tok.text,
                                 kind_tok.line, kind_tok.col)
            if any(s.param == specs[-1].param for s in specs[:-1]):
                raise ParseError("parameter %r already has an Ore operator" % specs[-1].param,
                                 name.line, name.col)
        elif kw == "dim":
            tok = p.expect("num", what="dimension")
            stmts.append(("dim", int(tok.text), tok))
        elif kw == "matrix":
            name = p.expect("id", what="operator name")
            p.expect("op", "=")
            rows = p.matrix()
            for row in rows:
                for node in row:
                    check_declared(node)
            stmts.append(("matrix", name, rows))
        elif kw == "L":
            p.expect("op", "=")
            node = p.expr()
            check_declared(node)
            stmts.append(("L", node, head))
        elif kw == "rel":
            name = p.expect("id", what="Ore operator name")
            if name.text not in [s.name for s in specs]:
                raise ParseError("undeclared Ore operator %r" % name.text, name.line, name.col)
            p.expect("op", ":")
            node = p.expr()
            check_declared(node)
            stmts.append(("rel", name, node))
        elif kw == "f":
            p.expect("op", "=")
            if p.at("op", "["):
                items = p.vector()
                for node in items:
                    check_declared(node)
                stmts.append(("fvec", items, head))
            else:
                node = p.expr()
                check_declared(node)
                stmts.append(("f", node, head))
        elif kw == "reduce":
            R = p.expr()
            check_declared(R)
            by = p.expect("id", "by", what="'by'")
            M = p.expr()
            check_declared(M)
            stmts.append(("reduce", R, M, by))
        else:
            raise ParseError("unknown statement %r" % kw, head.line, head.col)
        end_statement()

    if var is None:
        raise ParseError("missing 'var' declaration")
    field = ParamField(params)
    prob = Problem(params, specs, var, field)
    dom = _OpDomain(field, var)
    for st in stmts:
        kind = st[0]
        if kind == "dim":
            if st[1] < 1:
                raise ParseError("dimension must be positive", st[2].line, st[2].col)
            prob.dim = st[1]
        elif kind == "matrix":
            name, rows = st[1], st[2]
            allowed = ["D" + var] + [s.name for s in specs]
            if name.text not in allowed:
                raise ParseError("matrix for unknown operator %r" % name.text, name.line, name.col)
            prob.matrices[name.text] = [[_as_xrat(_evaluate(n, dom), n, "matrix entries")
                                         for n in row] for row in rows]
        elif kind == "L":
            L = _evaluate(st[1], dom)
            if not L or L.order < 1:
                raise ParseError("L must have positive order", st[2].line, st[2].col)
            prob.L = L
        elif kind == "rel":
            name = st[1]
            if name.text in prob.rels:
                raise ParseError("duplicate relation for %r" % name.text, name.line, name.col)
            prob.rels[name.text] = _evaluate(st[2], dom)
        elif kind == "f":
            prob.f = _evaluate(st[1], dom)
        elif kind == "fvec":
            prob.f = [_as_xrat(_evaluate(n, dom), n, "coordinates of f") for n in st[1]]
        elif kind == "reduce":
            R = _as_xrat(_evaluate(st[1], dom), st[1], "the reduced function")
            M = _evaluate(st[2], dom)
            if not M:
                raise ParseError("cannot reduce by the zero operator", st[3].line, st[3].col)
            prob.reductions.append((R, M))
    if prob.dim is not None:
        for name, A in prob.matrices.items():
            if len(A) != prob.dim or any(len(row) != prob.dim for row in A):
                raise ParseError("matrix %s is not %d x %d" % (name, prob.dim, prob.dim))
        if isinstance(prob.f, DiffOp):
            raise ParseError("f must be a coordinate vector in a matrix system")
        if prob.f is not None and len(prob.f) != prob.dim:
            raise ParseError("f must have %d coordinates" % prob.dim)
    elif isinstance(prob.f, list):
        raise ParseError("coordinate vector f needs a matrix system")
    return prob


# -- standalone expressions ------------------------------------------------------------

def _parse_expr(text):
    p = _Parser(tokenize(text))
    node = p.expr()
    while p.at("end"):
        p.next()
    if not p.at("eof"):
        tok = p.peek()
        raise ParseError("unexpected %r" % tok.text, tok.line, tok.col)
    return node


def parse_diffop(text, field, var="x"):
    return _evaluate(_parse_expr(text), _OpDomain(field, var))


def parse_xrat(text, field, var="x"):
    node = _parse_expr(text)
    return _as_xrat(_evaluate(node, _OpDomain(field, var)), node, "expression")


def parse_kelem(text, field):
    R = parse_xrat(text, field, var="_x")
    if not R.is_constant():
        raise ParseError("expression depends on the variable")
    return R.num[0] if R.num else field.zero


def parse_telescoper(text, field, specs, order="grevlex"):
    from .telescoper import Telescoper
    terms = _evaluate(_parse_expr(text), _OreDomain(field, specs))
    return Telescoper(terms, [s.name for s in specs], order)
