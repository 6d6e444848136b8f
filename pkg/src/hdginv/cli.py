"""Command-line front end.

Matrices travel as UTF-8 JSON documents::

    {"order": 2, "rows": 2, "cols": 2,
     "components": {"0": [[1, 0], [0, 0]], "1": ..., "2": ..., "3": ...}}

Component keys are decimal bitmasks over the dual units.  Each component may
be nested rows or a flat row-major list.  Exit codes: 0 success, 2 the
requested inverse does not exist, 3 unreadable input, 4 shape or order
mismatch.
"""

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import dualmat, hyperdual, linsolve, norder, realmat
from .errors import (GInvError, Inconsistent, InverseMissing, NotGroupInvertible,
                     NotMPInvertible, OrderMismatch, ShapeMismatch)
from .norder import NOrderMatrix

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_NO_INVERSE = 2
EXIT_PARSE = 3
EXIT_MISMATCH = 4


class DocumentError(ValueError):
    """Malformed matrix document."""


class _UsageError(Exception):
    pass


def _number(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise DocumentError(f"non-numeric entry {v!r}")
    f = float(v)
    if not math.isfinite(f):
        raise DocumentError("entries must be finite")
    return f


def _component(raw, rows, cols, key):
    if not isinstance(raw, list):
        raise DocumentError(f"component {key} is not an array")
    if raw and all(isinstance(r, list) for r in raw):
        if len(raw) != rows or any(len(r) != cols for r in raw):
            raise DocumentError(f"component {key} is not {rows}x{cols}")
        flat = [e for r in raw for e in r]
    else:
        flat = raw
        if len(flat) != rows * cols:
            raise DocumentError(f"component {key} has {len(flat)} entries, "
                                f"expected {rows * cols}")
    return np.array([_number(v) for v in flat]).reshape(rows, cols)


def _count(doc, key, minimum):
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise DocumentError(f"{key!r} must be an integer >= {minimum}")
    return v


def parse_document(text):
    """Parse a JSON matrix document into an :class:`NOrderMatrix`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    order = _count(doc, "order", 0)
    if order > norder.MAX_ORDER:
        raise DocumentError(f"order {order} exceeds {norder.MAX_ORDER}")
    rows = _count(doc, "rows", 1)
    cols = _count(doc, "cols", 1)
    comps = doc.get("components")
    if not isinstance(comps, dict):
        raise DocumentError("'components' must be an object")
    expected = {str(s) for s in range(1 << order)}
    if set(comps) != expected:
        raise DocumentError(f"component keys must be exactly 0..{(1 << order) - 1}")
    stack = np.stack([_component(comps[str(s)], rows, cols, s)
                      for s in range(1 << order)])
    return NOrderMatrix(stack)


def _fmt(v):
    if v == 0.0 and math.copysign(1.0, v) < 0:
        return "-0.0"
    s = format(v, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _rows_json(m):
    return "[" + ", ".join("[" + ", ".join(_fmt(float(v)) for v in row) + "]"
                           for row in m) + "]"


def format_document(x):
    """Serialize any algebra matrix; numbers carry 17 significant digits."""
    comps = x.components
    parts = [f'    "{s}": {_rows_json(comps[s])}' for s in range(comps.shape[0])]
    body = ",\n".join(parts)
    return (f'{{\n  "order": {x.order},\n  "rows": {x.rows},\n  "cols": {x.cols},\n'
            f'  "components": {{\n{body}\n  }}\n}}\n')


def _real_doc(a):
    return format_document(NOrderMatrix.from_real(a))


def _load(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return parse_document(text)


def _as_order(x, order, what):
    if x.order != order:
        raise OrderMismatch(f"{what} needs an order-{order} document, got order {x.order}")
    if order == 0:
        return x.components[0]
    if order == 1:
        return x.to_dual()
    return x.to_hyperdual()


def _as_vector(x, what):
    if x.order != 2 or x.cols != 1:
        raise ShapeMismatch(f"{what} needs an order-2 single-column document")
    return linsolve.HyperDualVector(*x.components[:, :, 0])


def _vector_doc(v):
    return format_document(v.as_matrix())


def _inputs(args, count):
    paths = args.input or []
    if len(paths) not in count:
        want = " or ".join(str(c) for c in count)
        raise _UsageError(f"{args.command} expects {want} --input document(s)")
    return [_load(p) for p in paths]


class _Result:
    def __init__(self, document=None, lines=(), code=EXIT_OK, errors=()):
        self.document = document
        self.lines = list(lines)
        self.code = code
        self.errors = list(errors)


def _cmd_pinv(args, tol):
    (x,) = _inputs(args, (1,))
    return _Result(_real_doc(realmat.pinv(_as_order(x, 0, "pinv"), tol)))


def _cmd_ginv(args, tol):
    (x,) = _inputs(args, (1,))
    return _Result(_real_doc(realmat.group_inverse(_as_order(x, 0, "ginv"), tol)))


def _cmd_dggi(args, tol):
    (x,) = _inputs(args, (1,))
    return _Result(format_document(dualmat.dggi(_as_order(x, 1, "dggi"), tol)))


def _cmd_dmpgi(args, tol):
    (x,) = _inputs(args, (1,))
    value, variant = dualmat.dmpgi_select(_as_order(x, 1, "dmpgi"), tol)
    return _Result(format_document(value), errors=[f"variant: {variant}"])


def _cmd_mpdgi(args, tol):
    (x,) = _inputs(args, (1,))
    return _Result(format_document(dualmat.mpdgi(_as_order(x, 1, "mpdgi"), tol)))


def _cmd_canonical(args, tol):
    (x,) = _inputs(args, (1,))
    form = dualmat.canonical_form(_as_order(x, 1, "canonical"), tol)
    blocks = {"p": form.core.p, "p_inv": form.core.p_inv, "c": form.core.c,
              "b1": form.b1, "b2": form.b2, "b3": form.b3}
    # Empty blocks (rank 0 or full rank) serialize as [] or [[], ...].
    fields = [f'  "rank": {form.core.rank}']
    fields += [f'  "{k}": {_rows_json(m)}' for k, m in blocks.items()]
    return _Result("{\n" + ",\n".join(fields) + "\n}\n")


def _cmd_hdggi(args, tol):
    (x,) = _inputs(args, (1,))
    return _Result(format_document(hyperdual.hdggi(_as_order(x, 2, "hdggi"), tol)))


def _cmd_hdmpgi(args, tol):
    (x,) = _inputs(args, (1,))
    value, variant = hyperdual.hdmpgi_select(_as_order(x, 2, "hdmpgi"), tol)
    return _Result(format_document(value), errors=[f"variant: {variant}"])


def _cmd_nginv(args, tol):
    (x,) = _inputs(args, (1,))
    return _Result(format_document(norder.n_group_inverse(x, tol)))


def _cmd_orderlaw(args, tol):
    x, y = _inputs(args, (2,))
    report = hyperdual.order_law_check(_as_order(x, 2, "orderlaw"),
                                       _as_order(y, 2, "orderlaw"),
                                       kind=args.kind, tol=tol)
    return _Result(lines=report.lines())


def _cmd_solve(args, tol):
    docs = _inputs(args, (2,))
    a = _as_order(docs[0], 2, "solve")
    b = _as_vector(docs[1], "solve right-hand side")
    z = _as_vector(_load(args.z), "solve --z") if args.z else None
    return _Result(_vector_doc(linsolve.solve(a, b, z, tol)))


def _cmd_norm(args, tol):
    (x,) = _inputs(args, (1,))
    return _Result(lines=[f"hnorm: {_fmt(linsolve.hnorm(_as_vector(x, 'norm')))}"])


def _cmd_check(args, tol):
    (x,) = _inputs(args, (1,))
    a = _as_order(x, 2, "check")
    if args.kind == "group":
        report = hyperdual.hdggi_exists(a, tol)
    else:
        report = hyperdual.hdmpgi_exists(a, tol)
    return _Result(lines=report.lines(),
                   code=EXIT_OK if report.exists else EXIT_NO_INVERSE)


_COMMANDS = {
    "pinv": (_cmd_pinv, "Moore-Penrose inverse of a real matrix"),
    "ginv": (_cmd_ginv, "group inverse of a real matrix"),
    "dggi": (_cmd_dggi, "dual group inverse"),
    "dmpgi": (_cmd_dmpgi, "dual Moore-Penrose inverse"),
    "mpdgi": (_cmd_mpdgi, "the always-existing A+ - eps A+ A0 A+"),
    "canonical": (_cmd_canonical, "canonical block form of a dual matrix"),
    "hdggi": (_cmd_hdggi, "hyper-dual group inverse"),
    "hdmpgi": (_cmd_hdmpgi, "hyper-dual Moore-Penrose inverse"),
    "orderlaw": (_cmd_orderlaw, "forward/reverse order-law check for two matrices"),
    "nginv": (_cmd_nginv, "group inverse of an n-order dual matrix"),
    "solve": (_cmd_solve, "solve a hyper-dual system A x = b"),
    "norm": (_cmd_norm, "h-norm of a hyper-dual vector"),
    "check": (_cmd_check, "existence report for the hyper-dual inverse"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser():
    parser = _Parser(prog="hdginv", description=__doc__.split("\n")[0])
    parser.add_argument("--tol", type=float, default=1e-10,
                        help="relative tolerance for rank and zero tests (default 1e-10)")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log formula selection to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-i", "--input", action="append", metavar="PATH",
                       help="input document ('-' for stdin); repeat for two inputs")
        p.add_argument("-o", "--output", metavar="PATH",
                       help="write the result document here instead of stdout")
        p.add_argument("--tol", type=float, default=argparse.SUPPRESS)
        if name in ("orderlaw", "check"):
            p.add_argument("--kind", choices=("group", "mp"), default="group")
        if name == "solve":
            p.add_argument("--z", metavar="PATH",
                           help="free vector selecting a member of the solution family")
    return parser


def _emit(result, args, out, err):
    for line in result.errors:
        print(line, file=err)
    if result.document is not None:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(result.document)
        else:
            out.write(result.document)
    for line in result.lines:
        print(line, file=out)


def _failure_lines(exc):
    lines = [f"error: {exc}"]
    report = getattr(exc, "report", None)
    if report is not None:
        lines += report.lines()
    depth = getattr(exc, "depth", None)
    if depth is not None:
        lines.append(f"depth: {depth}")
    operand = getattr(exc, "operand", None)
    if operand is not None:
        lines.append(f"operand: {operand}")
    return lines


def run(argv=None, out=None, err=None):
    """Run the CLI and return its exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        tol = realmat.Tolerance(args.tol)
    except (_UsageError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    if args.verbose:
        logging.basicConfig(level=logging.INFO, stream=err,
                            format="%(name)s: %(message)s")
    handler = _COMMANDS[args.command][0]
    try:
        result = handler(args, tol)
    except _UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except DocumentError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except (NotGroupInvertible, NotMPInvertible, InverseMissing, Inconsistent) as exc:
        for line in _failure_lines(exc):
            print(line, file=err)
        return EXIT_NO_INVERSE
    except (ShapeMismatch, OrderMismatch) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_MISMATCH
    except GInvError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INTERNAL
    try:
        _emit(result, args, out, err)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=err)
        return EXIT_INTERNAL
    return result.code


def main():
    sys.exit(run())
