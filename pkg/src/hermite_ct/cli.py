"""Command-line interface: hermite-ct {reduce,localdata,exceptional,telescope}."""

import argparse
import json
import logging
import sys

from .diffop import PlaceSplit, content_normalize, local_data_finite, local_data_infinity, poly_normalize
from .oresys import CyclicVectorError, MatrixSystem, cyclic_vector, from_scalar
from .parser import ParseError, parse_problem, parse_xrat
from .printer import format_diffop, format_monomial, format_spoly, format_telescoper, format_xpoly, format_xrat
from .reduction import DEFAULT_EXC_CAP, ExceptionalLimitError, Reducer, shell_transform
from .telescoper import DEFAULT_MAX_DEGREE, telescope

EXIT_OK, EXIT_INPUT, EXIT_INCOMPLETE, EXIT_LIMIT = 0, 1, 2, 3


class _Collect(logging.Handler):
    def __init__(self):
        super().__init__(logging.WARNING)
        self.messages = []

    def emit(self, record):
        self.messages.append(record.getMessage())


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _reducer(M, args):
    if getattr(args, "shell", False):
        return shell_transform(M, exc_cap=args.exc_cap, seed=args.seed)
    return Reducer(M, exc_cap=args.exc_cap, seed=args.seed)


def cmd_reduce(prob, args):
    if not prob.reductions:
        raise ValueError("no 'reduce' statement in the problem")
    results, lines = [], []
    reducers = {}
    for R, M in prob.reductions:
        red = reducers.get(M)
        if red is None:
            red = reducers[M] = _reducer(M, args)
        res = red.canonical_form(R)
        item = {"reduced": format_xrat(res.reduced, prob.var)}
        lines.append(item["reduced"])
        if args.certificate:
            item["certificate"] = format_xrat(res.certificate, prob.var)
            lines.append("certificate: " + item["certificate"])
        results.append(item)
    return "ok", results, lines, []


def _normalized_operator(prob):
    opq, _ = poly_normalize(prob.operator())
    return content_normalize(opq)[0]


def cmd_localdata(prob, args):
    op = _normalized_operator(prob)
    var = prob.var
    if args.place.strip() == "inf":
        ld = local_data_infinity(op)
        ind = format_spoly(list(ld.indicial.coeffs), var)
        item = {"place": "inf", "shift": ld.shift, "indicial": ind}
    else:
        R = parse_xrat(args.place, prob.field, var)
        if not R.is_polynomial() or R.num.degree < 1:
            raise ValueError("place must be a polynomial of positive degree")
        P = R.num.monic()
        try:
            ld = local_data_finite(op, P)
        except PlaceSplit as exc:
            g = exc.divisor.monic()
            raise ValueError("place %s must be split: factor %s has a different shift"
                             % (format_xpoly(P, var), format_xpoly(g, var)))
        ind = format_spoly(list(ld.indicial), var)
        item = {"place": format_xpoly(P, var), "shift": ld.shift, "indicial": ind}
    lines = ["place: %s" % item["place"], "shift: %d" % item["shift"],
             "indicial: %s" % item["indicial"]]
    return "ok", [item], lines, []


def cmd_exceptional(prob, args):
    red = Reducer(prob.operator(), exc_cap=args.exc_cap, seed=args.seed)
    basis = [format_xrat(w, prob.var) for w in red.exc.basis()]
    lines = ["dimension: %d" % len(basis)] + basis
    return "ok", basis, lines, []


def cmd_telescope(prob, args):
    system = prob.system()
    if isinstance(system, MatrixSystem):
        cd = cyclic_vector(system, seed=args.seed)
    else:
        cd = from_scalar(system)
    basis = telescope(cd, order=args.order, first_only=args.first_only,
                      max_degree=args.max_degree, shell=args.shell, seed=args.seed)
    names = [s.name for s in prob.specs]
    results = [format_telescoper(T) for T in basis.G]
    std = ", ".join(format_monomial(m, names) or "1" for m in basis.Q)
    diags = ["status: %s" % basis.status, "standard monomials: %s" % (std or "none")]
    return basis.status, results, list(results), diags


COMMANDS = {
    "reduce": cmd_reduce,
    "localdata": cmd_localdata,
    "exceptional": cmd_exceptional,
    "telescope": cmd_telescope,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="problem file (.ct)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--exc-cap", type=int, default=DEFAULT_EXC_CAP,
                        help="limit on exceptional-set candidates (default %(default)s)")

    parser = argparse.ArgumentParser(
        prog="hermite-ct",
        description="Generalized Hermite reduction and creative telescoping.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="canonical forms of 'reduce' statements")
    p.add_argument("--certificate", action="store_true", help="also print U with R - [R] = M(U)")
    p.add_argument("--shell", action="store_true", help="use the rational-factor preconditioner")

    p = sub.add_parser("localdata", parents=[common], help="shift and indicial polynomial")
    p.add_argument("--place", required=True, help="squarefree polynomial in the variable, or 'inf'")

    sub.add_parser("exceptional", parents=[common], help="basis of the exceptional space")

    p = sub.add_parser("telescope", parents=[common], help="telescopers of the system")
    p.add_argument("--order", choices=["grevlex", "deglex"], default="grevlex")
    p.add_argument("--first-only", action="store_true", help="stop at the first telescoper")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE,
                   help="total-degree cap (default %(default)s)")
    p.add_argument("--shell", action="store_true", help="use the rational-factor preconditioner")
    return parser


def _emit(args, status, results, lines, diags, out, err):
    if args.json:
        out.write(json.dumps({"status": status, "results": results, "diagnostics": diags},
                             indent=2, sort_keys=True) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")
        for d in diags:
            err.write(d + "\n")


def run_cli(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    handler = _Collect()
    root = logging.getLogger("hermite_ct")
    root.addHandler(handler)
    root.propagate = False
    try:
        try:
            prob = parse_problem(_read(args.file))
            status, results, lines, diags = COMMANDS[args.command](prob, args)
        except (ParseError, ValueError, OSError) as exc:
            _emit(args, "error", [], [], handler.messages + ["error: %s" % exc], out, err)
            return EXIT_INPUT
        except (ExceptionalLimitError, CyclicVectorError) as exc:
            _emit(args, "limit", [], [], handler.messages + ["error: %s" % exc], out, err)
            return EXIT_LIMIT
        diags = handler.messages + diags
        _emit(args, status, results, lines, diags, out, err)
        return EXIT_INCOMPLETE if status == "degree-capped" else EXIT_OK
    finally:
        root.removeHandler(handler)


def main():
    sys.exit(run_cli())
