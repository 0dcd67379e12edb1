"""Command-line driver.

Exit codes: 0 success, 1 validation failure, 2 usage or parse error,
3 a square root outside the permitted field was needed.
"""

from __future__ import annotations

import argparse
import sys

from .catalog import (
    get_entry,
    make_cartan_w,
    make_duflo7,
    make_en,
    make_gn,
    make_heisenberg3,
    make_oscillator4,
    make_osp12_nilpotent,
    make_sl2_killing,
)
from .cohomology import (
    DualCochain,
    dual_cocycle_witness,
    hat_correspondence,
    is_coboundary_3,
    s_phi_isometry,
    supercyclic_witness,
)
from .core import LinearMap, Report, Subspace, SuperAlgebra, validate_superalgebra
from .decomposition import (
    central_isotropic_descent,
    duflo_filtration,
    extension_context_from_isotropic_ideal,
    isotropic_submodule,
    solvable_to_tstar,
)
from .extensions import ContextError, ExtensionContext, generalized_double_extension, odd_line_extension, tstar_extension
from .io import MatrixBlock, ModuleDocument, ParseError, cocycle_on, parse, parse_document, serialize_document
from .quadratic import QuadraticSuperAlgebra, validate_quadratic
from .scalars import FieldExtensionRequired, ScalarSyntaxError, field_session, parse_scalar

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_FIELD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _algebra(path: str):
    obj = parse(_read(path))
    if not isinstance(obj, (SuperAlgebra, QuadraticSuperAlgebra)):
        raise UsageError(f"{path} does not end with an algebra block")
    return obj


def _quadratic(path: str) -> QuadraticSuperAlgebra:
    obj = _algebra(path)
    if not isinstance(obj, QuadraticSuperAlgebra):
        raise UsageError(f"{path} has no form")
    return obj


def _vectors(text: str, n: int):
    out = []
    for part in text.split(";"):
        toks = part.replace(",", " ").split()
        if len(toks) != n:
            raise UsageError(f"vector {part!r} needs {n} coordinates")
        try:
            out.append(tuple(parse_scalar(t) for t in toks))
        except ScalarSyntaxError as e:
            raise UsageError(str(e)) from None
    return out


def _validation(obj) -> Report:
    if isinstance(obj, QuadraticSuperAlgebra):
        rep = validate_superalgebra(obj.alg)
        rep.extend(validate_quadratic(obj.alg, obj.form))
        return rep
    return validate_superalgebra(obj)


def _emit_checked(args, blocks, report: Report) -> int:
    """Write the document only when ``report`` passes."""
    if not report.ok:
        sys.stderr.write(report.table() + "\n")
        return EXIT_INVALID
    _write(args, serialize_document(blocks))
    return EXIT_OK


# -- subcommands ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    obj = _algebra(args.path)
    rep = _validation(obj)
    sp = obj.space
    print(f"dim {sp.dim} ({sp.even_dim}|{sp.odd_dim})")
    print(rep.table())
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_catalog(args) -> int:
    name = args.name
    builders = {
        "gn": lambda: make_gn(args.n or 2),
        "en": lambda: make_en(args.n or 2),
        "duflo7": make_duflo7,
        "heisenberg3": make_heisenberg3,
        "oscillator4": make_oscillator4,
        "sl2_killing": make_sl2_killing,
        "osp12_nilpotent": make_osp12_nilpotent,
        "cartan_W": lambda: make_cartan_w(args.n or 1),
    }
    if name in builders:
        obj = builders[name]()
    else:
        try:
            obj = get_entry(name).build()
        except ValueError as e:
            raise UsageError(str(e)) from None
    return _emit_checked(args, [("main", obj)], _validation(obj))


def cmd_tstar(args) -> int:
    g2 = _algebra(args.algebra)
    if isinstance(g2, QuadraticSuperAlgebra):
        g2 = g2.alg
    if args.cocycle == "zero":
        w = DualCochain.zero(g2)
    else:
        objs = parse_document(_read(args.cocycle))
        raw = list(objs.values())[-1]
        try:
            w = cocycle_on(raw, g2)
        except (ValueError, TypeError) as e:
            raise UsageError(str(e)) from None
    try:
        T = tstar_extension(g2, w)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_INVALID
    return _emit_checked(args, [("main", T)], _validation(T))


def cmd_dext(args) -> int:
    contexts = [o for o in parse_document(_read(args.path)).values() if isinstance(o, ExtensionContext)]
    if not contexts:
        raise UsageError("document has no context block")
    ctx = contexts[-1]
    g = generalized_double_extension(ctx)
    return _emit_checked(args, [("main", g)], _validation(g))


def cmd_oddext(args) -> int:
    objs = parse_document(_read(args.path))
    g1 = objs.get("g1")
    D = objs.get("D")
    X0 = objs.get("X0")
    if (
        not isinstance(g1, QuadraticSuperAlgebra)
        or not isinstance(D, MatrixBlock)
        or not isinstance(X0, MatrixBlock)
        or len(X0.rows) != 1
    ):
        raise UsageError("oddext needs blocks: algebra g1 (with form), matrix D, matrix X0 (one row)")
    g = odd_line_extension(g1.alg, g1.form, LinearMap(g1.space, g1.space, D.rows, 1), X0.rows[0])
    return _emit_checked(args, [("main", g)], _validation(g))


def cmd_decompose(args) -> int:
    g = _quadratic(args.algebra)
    if args.auto:
        descent = central_isotropic_descent(g)
        if descent is None:
            print("no homogeneous central isotropic line", file=sys.stderr)
            return EXIT_INVALID
        res = descent.decomposition
        print(f"central {descent.kind} line {descent.X}", file=sys.stderr)
    else:
        if not args.ideal:
            raise UsageError("decompose needs --ideal or --auto")
        I = Subspace.span(g.space, _vectors(args.ideal, g.dim))
        try:
            res = extension_context_from_isotropic_ideal(g, I)
        except ValueError as e:
            raise UsageError(str(e)) from None
    sys.stderr.write(res.report.table() + "\n")
    _write(args, serialize_document([("context", res.context), ("Pi", res.Pi), ("report", res.report)]))
    return EXIT_OK if res.report.ok else EXIT_INVALID


def cmd_solvable(args) -> int:
    g = _quadratic(args.algebra)
    try:
        out = solvable_to_tstar(g)
    except ValueError as e:
        raise UsageError(str(e)) from None
    sys.stderr.write(out.report.table() + "\n")
    if out.kind == "even":
        blocks = [("tstar", out.tstar), ("w", out.w), ("Pi", out.Pi), ("report", out.report)]
    else:
        blocks = [
            ("ambient", out.ambient),
            ("tstar", out.presentation.tstar),
            ("embedding", out.embedding),
            ("report", out.report),
        ]
    _write(args, serialize_document(blocks))
    return EXIT_OK if out.report.ok else EXIT_INVALID


def cmd_duflo(args) -> int:
    doc = parse(_read(args.path))
    if not isinstance(doc, ModuleDocument):
        raise UsageError("document does not end with a module block")
    rep = doc.rep
    if args.T:
        T = _vectors(args.T, rep.algebra.dim)[0]
        W = Subspace.span(rep.module_space, _vectors(args.W, rep.module_space.dim)) if args.W else None
        if W is None:
            raise UsageError("--T needs --W")
        res = duflo_filtration(rep, T, W)
        print(f"M = {res.M}")
        print(res.report.table())
        return EXIT_OK if res.report.ok else EXIT_INVALID
    if doc.form is None:
        raise UsageError("isotropic submodule search needs a module form")
    W = isotropic_submodule(rep.algebra, rep, doc.form)
    print("isotropic submodule:")
    for v in W.generators:
        print("  " + " ".join(str(x) for x in v))
    return EXIT_OK


def cmd_cocycle(args) -> int:
    g = _algebra(args.algebra)
    alg = g.alg if isinstance(g, QuadraticSuperAlgebra) else g

    def load(path):
        if path == "zero":
            return DualCochain.zero(alg)
        raw = list(parse_document(_read(path)).values())[-1]
        try:
            return cocycle_on(raw, alg)
        except (ValueError, TypeError) as e:
            raise UsageError(str(e)) from None

    w1 = load(args.cocycle)
    rep = Report("cocycle checks")
    wit = supercyclic_witness(w1)
    rep.add("supercyclic", wit is None, wit)
    wit = dual_cocycle_witness(w1)
    rep.add("cocycle", wit is None, wit)
    if rep.ok:
        w2 = load(args.against) if args.against else DualCochain.zero(alg)
        diff = hat_correspondence(w1) - hat_correspondence(w2)
        cb = is_coboundary_3(diff)
        rep.add("coboundary", cb.is_coboundary, None, "hat(w1) - hat(w2) is exact" if cb.is_coboundary else "not exact")
        if cb.is_coboundary:
            rep.add("s_phi isometry", s_phi_isometry(alg, w1, w2, cb.phi).is_isometry)
    print(rep.table())
    return EXIT_OK if rep.ok else EXIT_INVALID


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superquad", description="Quadratic Lie superalgebra toolkit")
    p.add_argument("--field-ext", type=int, default=None, metavar="d", help="permit Q(sqrt(d))")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", help="validate an algebra document")
    s.add_argument("path")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("catalog", help="write a named fixture")
    s.add_argument("name")
    s.add_argument("--n", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("tstar", help="T*-extension by a cocycle")
    s.add_argument("--algebra", required=True)
    s.add_argument("--cocycle", default="zero")
    s.add_argument("--out")
    s.set_defaults(func=cmd_tstar)

    s = sub.add_parser("dext", help="generalized double extension of a context document")
    s.add_argument("path")
    s.add_argument("--out")
    s.set_defaults(func=cmd_dext)

    s = sub.add_parser("oddext", help="extension by an odd line")
    s.add_argument("path")
    s.add_argument("--out")
    s.set_defaults(func=cmd_oddext)

    s = sub.add_parser("decompose", help="context from an isotropic ideal")
    s.add_argument("--algebra", required=True)
    s.add_argument("--ideal")
    s.add_argument("--auto", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("solvable-to-tstar", help="T*-presentation of a solvable algebra")
    s.add_argument("--algebra", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solvable)

    s = sub.add_parser("duflo-check", help="isotropic submodule or W_i filtration")
    s.add_argument("path")
    s.add_argument("--T")
    s.add_argument("--W")
    s.set_defaults(func=cmd_duflo)

    s = sub.add_parser("cocycle", help="cocycle, coboundary and S_phi checks")
    s.add_argument("--algebra", required=True)
    s.add_argument("--cocycle", required=True)
    s.add_argument("--against")
    s.set_defaults(func=cmd_cocycle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_USAGE
    try:
        session = field_session(args.field_ext, allow_activation=False)
        with session:
            return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FieldExtensionRequired as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FIELD
    except ContextError as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
