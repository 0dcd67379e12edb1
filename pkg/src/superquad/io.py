"""Canonical line-oriented text documents.

A document starts with ``lsa-document 1`` and holds ``begin <type> <id>`` /
``end`` blocks.  Block types: ``algebra``, ``cocycle``, ``context``,
``module``, ``matrix``, ``report``.  Every coefficient is written with
:func:`format_scalar`; parsing rejects anything that would not be written
back byte for byte.

Example::

    lsa-document 1
    begin algebra N
    name N
    field Q
    dims 1 1
    labels e x
    bracket 1 1 0=2
    end
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .cohomology import DualCochain
from .core import LinearMap, Report, Representation, SuperAlgebra, SuperSpace
from .extensions import ExtensionContext
from .quadratic import GramForm, QuadraticSuperAlgebra
from .scalars import QuadraticScalar, ScalarSyntaxError, format_scalar, parse_scalar

__all__ = [
    "FORMAT_HEADER",
    "MatrixBlock",
    "ModuleDocument",
    "ParseError",
    "parse",
    "parse_document",
    "serialize",
    "serialize_document",
]

FORMAT_HEADER = "lsa-document 1"
_LABEL_RE = re.compile(r"^[^\s=]+$")


class ParseError(ValueError):
    """Syntax or consistency error at a 1-based ``line`` and ``col``."""

    def __init__(self, line: int, col: int, msg: str):
        self.line, self.col, self.msg = line, col, msg
        super().__init__(f"line {line}, column {col}: {msg}")


@dataclass(frozen=True)
class ModuleDocument:
    rep: Representation
    form: GramForm | None = None


@dataclass(frozen=True)
class MatrixBlock:
    """A bare matrix read from a document; ``parity`` is None when not declared."""

    rows: tuple
    parity: int | None = None

    def as_map(self, domain: SuperSpace, codomain: SuperSpace) -> LinearMap:
        return LinearMap(domain, codomain, self.rows, self.parity)


# -- writing -----------------------------------------------------------------------------


def _field_of(values) -> str:
    ds = {v.d for v in values if isinstance(v, QuadraticScalar)}
    if len(ds) > 1:
        raise ValueError("values from two different quadratic fields")
    return f"Q_sqrt {ds.pop()}" if ds else "Q"


def _algebra_lines(alg: SuperAlgebra, form: GramForm | None, name: str | None) -> list[str]:
    n = alg.dim
    p = alg.space.parities
    values = [v for i in range(n) for j in range(n) for v in alg.table[i][j].values()]
    if form is not None:
        values += [v for row in form.matrix for v in row]
    for lab in alg.space.labels:
        if not _LABEL_RE.match(lab):
            raise ValueError(f"label {lab!r} cannot be serialized")
    out = [
        f"name {name if name is not None else alg.name}".rstrip(),
        f"field {_field_of(values)}",
        f"dims {alg.space.even_dim} {alg.space.odd_dim}",
        ("labels " + " ".join(alg.space.labels)).rstrip(),
    ]
    for i in range(n):
        for j in range(i, n):
            if i == j and p[i] == 0:
                continue
            terms = sorted(alg.table[i][j].items())
            if terms:
                out.append(f"bracket {i} {j} " + " ".join(f"{k}={format_scalar(v)}" for k, v in terms))
    if form is not None:
        for row in form.matrix:
            out.append("form-row " + " ".join(format_scalar(v) for v in row))
    return out


def _block(kind: str, ident: str, lines: list[str]) -> list[str]:
    return [f"begin {kind} {ident}", *lines, "end"]


def _cocycle_lines(w: DualCochain) -> list[str]:
    n = w.alg.dim
    out = [f"dim {n}"]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = w.tensor[i][j][k]
                if v != 0:
                    out.append(f"w {i} {j} {k} {format_scalar(v)}")
    return out


def _matrix_lines(M, kind="row") -> list[str]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    return [f"shape {rows} {cols}"] + [f"{kind} " + " ".join(format_scalar(v) for v in r) for r in M]


def serialize_document(blocks) -> str:
    """``blocks`` is a list of ``(id, object)`` pairs."""
    lines = [FORMAT_HEADER]
    for ident, obj in blocks:
        lines += _object_lines(ident, obj)
    return "\n".join(lines) + "\n"


def _object_lines(ident: str, obj) -> list[str]:
    if isinstance(obj, QuadraticSuperAlgebra):
        return _block("algebra", ident, _algebra_lines(obj.alg, obj.form, None))
    if isinstance(obj, SuperAlgebra):
        return _block("algebra", ident, _algebra_lines(obj, None, None))
    if isinstance(obj, DualCochain):
        return _block("cocycle", ident, _cocycle_lines(obj))
    if isinstance(obj, ExtensionContext):
        out = _block("algebra", f"{ident}.g1", _algebra_lines(obj.g1, obj.B1, None))
        out += _block("algebra", f"{ident}.g2", _algebra_lines(obj.g2, None, None))
        body = [f"g1 {ident}.g1", f"g2 {ident}.g2"]
        for a, m in enumerate(obj.phi):
            for r, row in enumerate(m.matrix):
                for c, v in enumerate(row):
                    if v != 0:
                        body.append(f"phi {a} {r} {c} {format_scalar(v)}")
        for a, row in enumerate(obj.psi):
            for b, vec in enumerate(row):
                for k, v in enumerate(vec):
                    if v != 0:
                        body.append(f"psi {a} {b} {k} {format_scalar(v)}")
        n2 = obj.g2.dim
        for i in range(n2):
            for j in range(n2):
                for k in range(n2):
                    v = obj.w.tensor[i][j][k]
                    if v != 0:
                        body.append(f"w {i} {j} {k} {format_scalar(v)}")
        if obj.gamma is not None:
            body += ["gamma-row " + " ".join(format_scalar(v) for v in r) for r in obj.gamma.matrix] or ["gamma-empty"]
        return out + _block("context", ident, body)
    if isinstance(obj, ModuleDocument):
        rep = obj.rep
        out = _block("algebra", f"{ident}.algebra", _algebra_lines(rep.algebra, None, None))
        sp = rep.module_space
        body = [f"algebra {ident}.algebra", f"dims {sp.even_dim} {sp.odd_dim}", ("labels " + " ".join(sp.labels)).rstrip()]
        for x, m in enumerate(rep.rho):
            for r, row in enumerate(m.matrix):
                for c, v in enumerate(row):
                    if v != 0:
                        body.append(f"rho {x} {r} {c} {format_scalar(v)}")
        if obj.form is not None:
            body += ["form-row " + " ".join(format_scalar(v) for v in r) for r in obj.form.matrix]
        return out + _block("module", ident, body)
    if isinstance(obj, LinearMap):
        return _object_lines(ident, MatrixBlock(obj.matrix, obj.parity))
    if isinstance(obj, MatrixBlock):
        head = [] if obj.parity is None else [f"parity {obj.parity}"]
        return _block("matrix", ident, head + _matrix_lines(obj.rows))
    if isinstance(obj, (tuple, list)) and all(isinstance(r, (tuple, list)) for r in obj):
        return _object_lines(ident, MatrixBlock(tuple(tuple(r) for r in obj)))
    if isinstance(obj, Report):
        body = [f"title {obj.title}".rstrip()] + ["check " + c.line() for c in obj.checks]
        return _block("report", ident, body)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize(obj, ident: str = "main") -> str:
    return serialize_document([(ident, obj)])


# -- reading -----------------------------------------------------------------------------


class _Line:
    def __init__(self, lineno: int, text: str):
        self.no = lineno
        self.text = text
        self.toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]

    def err(self, k: int, msg: str) -> ParseError:
        col = self.toks[k][1] if k < len(self.toks) else len(self.text) + 1
        return ParseError(self.no, col, msg)

    def int_at(self, k: int, lo: int = 0, hi: int | None = None) -> int:
        if k >= len(self.toks):
            raise self.err(k, "missing integer")
        tok = self.toks[k][0]
        if not re.fullmatch(r"-?(0|[1-9][0-9]*)", tok):
            raise self.err(k, f"expected an integer, got {tok!r}")
        v = int(tok)
        if v < lo or (hi is not None and v >= hi):
            raise self.err(k, f"integer {v} out of range")
        return v

    def scalar_at(self, k: int, tok: str | None = None, col_shift: int = 0):
        if tok is None:
            if k >= len(self.toks):
                raise self.err(k, "missing coefficient")
            tok = self.toks[k][0]
        try:
            return parse_scalar(tok)
        except ScalarSyntaxError as e:
            col = self.toks[k][1] + col_shift
            raise ParseError(self.no, col, str(e)) from None

    def expect_len(self, n: int):
        if len(self.toks) != n:
            raise self.err(min(n, len(self.toks)), f"expected {n} fields")


def _check_field(line: _Line, k: int, v, field_d):
    if isinstance(v, QuadraticScalar) and v.d != field_d:
        raise line.err(k, f"coefficient uses sqrt({v.d}) outside the declared field")
    return v


def _parse_field(line: _Line):
    if len(line.toks) == 2 and line.toks[1][0] == "Q":
        return None
    if len(line.toks) == 3 and line.toks[1][0] == "Q_sqrt":
        return line.int_at(2, lo=-(10 ** 12))
    raise line.err(1, "field must be 'Q' or 'Q_sqrt d'")


def _parse_algebra(lines: list[_Line], ident: str):
    name, field_d, dims, labels = None, None, None, None
    brackets = []
    form_rows = []
    seen = set()
    for ln in lines:
        key = ln.toks[0][0]
        if key in ("name", "field", "dims", "labels") and key in seen:
            raise ln.err(0, f"duplicate {key!r}")
        if key == "name":
            name = ln.text.strip()[len("name"):].strip()
        elif key == "field":
            field_d = _parse_field(ln)
        elif key == "dims":
            ln.expect_len(3)
            dims = (ln.int_at(1), ln.int_at(2))
        elif key == "labels":
            labels = tuple(t for t, _ in ln.toks[1:])
        elif key == "bracket":
            brackets.append(ln)
        elif key == "form-row":
            form_rows.append(ln)
        else:
            raise ln.err(0, f"unknown algebra field {key!r}")
        seen.add(key)
    anchor = lines[0] if lines else None
    if dims is None:
        raise ParseError(anchor.no if anchor else 0, 1, f"algebra {ident!r} lacks 'dims'")
    n = dims[0] + dims[1]
    if labels is not None and len(labels) not in (n,) and not (n == 0 and labels == ()):
        raise ParseError(anchor.no, 1, f"expected {n} labels")
    try:
        space = SuperSpace(dims[0], dims[1], labels or ())
    except ValueError as e:
        raise ParseError(anchor.no, 1, str(e)) from None
    p = space.parities
    br = {}
    last = None
    for ln in brackets:
        i = ln.int_at(1, 0, n)
        j = ln.int_at(2, 0, n)
        if i > j:
            raise ln.err(1, "records need i <= j")
        if i == j and p[i] == 0:
            raise ln.err(1, f"parity error: [e{i}, e{i}] vanishes for even e{i}")
        if last is not None and (i, j) <= last:
            raise ln.err(1, "bracket records out of canonical order")
        last = (i, j)
        terms = {}
        prev_k = -1
        if len(ln.toks) < 4:
            raise ln.err(3, "bracket record without terms")
        for t in range(3, len(ln.toks)):
            tok, col = ln.toks[t]
            m = re.fullmatch(r"(0|[1-9][0-9]*)=(\S+)", tok)
            if not m:
                raise ln.err(t, f"expected k=coeff, got {tok!r}")
            k = int(m.group(1))
            if k >= n:
                raise ln.err(t, f"index {k} out of range")
            if k <= prev_k:
                raise ln.err(t, "terms out of canonical order")
            prev_k = k
            v = _check_field(ln, t, ln.scalar_at(t, m.group(2), len(m.group(1)) + 1), field_d)
            if v == 0:
                raise ln.err(t, "zero coefficient must be omitted")
            if p[k] != (p[i] + p[j]) % 2:
                raise ln.err(t, f"parity error: e{k} cannot occur in [e{i}, e{j}]")
            terms[k] = v
        br[(i, j)] = terms
    alg = SuperAlgebra.from_brackets(space, br, name=name or "")
    if not form_rows:
        return alg
    if len(form_rows) != n:
        raise ParseError(form_rows[0].no, 1, f"form needs {n} rows")
    G = []
    for ln in form_rows:
        ln.expect_len(n + 1)
        G.append(tuple(_check_field(ln, t, ln.scalar_at(t), field_d) for t in range(1, n + 1)))
    return QuadraticSuperAlgebra(alg, GramForm(space, tuple(G)))


def _parse_cocycle(lines, ident, objects):
    n = None
    entries = {}
    for ln in lines:
        key = ln.toks[0][0]
        if key == "dim":
            ln.expect_len(2)
            n = ln.int_at(1)
        elif key == "w":
            if n is None:
                raise ln.err(0, "'dim' must come first")
            ln.expect_len(5)
            i, j, k = (ln.int_at(t, 0, n) for t in (1, 2, 3))
            entries[(i, j, k)] = ln.scalar_at(4)
        else:
            raise ln.err(0, f"unknown cocycle field {key!r}")
    if n is None:
        raise ParseError(lines[0].no if lines else 0, 1, "cocycle lacks 'dim'")
    return ("cocycle", n, entries)


def _lookup(objects, ln, k, kind):
    ref = ln.toks[k][0] if k < len(ln.toks) else None
    if ref not in objects:
        raise ln.err(k, f"unknown block reference {ref!r}")
    return objects[ref]


def _parse_context(lines, ident, objects):
    g1 = g2 = None
    phi_e, psi_e, w_e, gamma_rows = [], [], [], []
    for ln in lines:
        key = ln.toks[0][0]
        if key == "g1":
            g1 = _lookup(objects, ln, 1, "algebra")
        elif key == "g2":
            g2 = _lookup(objects, ln, 1, "algebra")
        elif key in ("phi", "psi", "w"):
            ln.expect_len(5)
            {"phi": phi_e, "psi": psi_e, "w": w_e}[key].append(ln)
        elif key == "gamma-row":
            gamma_rows.append(ln)
        elif key == "gamma-empty":
            gamma_rows = []
        else:
            raise ln.err(0, f"unknown context field {key!r}")
    if not isinstance(g1, QuadraticSuperAlgebra) or isinstance(g2, QuadraticSuperAlgebra) or g2 is None:
        raise ParseError(lines[0].no if lines else 0, 1, "context needs a quadratic g1 and a plain g2")
    n1, n2 = g1.dim, g2.dim
    phi = [[[0] * n1 for _ in range(n1)] for _ in range(n2)]
    for ln in phi_e:
        phi[ln.int_at(1, 0, n2)][ln.int_at(2, 0, n1)][ln.int_at(3, 0, n1)] = ln.scalar_at(4)
    psi = [[[0] * n1 for _ in range(n2)] for _ in range(n2)]
    for ln in psi_e:
        psi[ln.int_at(1, 0, n2)][ln.int_at(2, 0, n2)][ln.int_at(3, 0, n1)] = ln.scalar_at(4)
    w = [[[0] * n2 for _ in range(n2)] for _ in range(n2)]
    for ln in w_e:
        w[ln.int_at(1, 0, n2)][ln.int_at(2, 0, n2)][ln.int_at(3, 0, n2)] = ln.scalar_at(4)
    gamma = None
    if gamma_rows:
        gamma = GramForm(g2.space, tuple(tuple(ln.scalar_at(t) for t in range(1, n2 + 1)) for ln in gamma_rows))
    try:
        return ExtensionContext(
            g1.alg, g1.form, g2, tuple(tuple(tuple(r) for r in m) for m in phi), psi, DualCochain(g2, w), gamma
        )
    except ValueError as e:
        raise ParseError(lines[0].no, 1, str(e)) from None


def _parse_module(lines, ident, objects):
    alg = None
    dims, labels = None, ()
    rho_e, form_rows = [], []
    for ln in lines:
        key = ln.toks[0][0]
        if key == "algebra":
            alg = _lookup(objects, ln, 1, "algebra")
            if isinstance(alg, QuadraticSuperAlgebra):
                alg = alg.alg
        elif key == "dims":
            ln.expect_len(3)
            dims = (ln.int_at(1), ln.int_at(2))
        elif key == "labels":
            labels = tuple(t for t, _ in ln.toks[1:])
        elif key == "rho":
            ln.expect_len(5)
            rho_e.append(ln)
        elif key == "form-row":
            form_rows.append(ln)
        else:
            raise ln.err(0, f"unknown module field {key!r}")
    if alg is None or dims is None:
        raise ParseError(lines[0].no if lines else 0, 1, "module needs 'algebra' and 'dims'")
    space = SuperSpace(dims[0], dims[1], labels)
    m = space.dim
    rho = [[[0] * m for _ in range(m)] for _ in range(alg.dim)]
    for ln in rho_e:
        rho[ln.int_at(1, 0, alg.dim)][ln.int_at(2, 0, m)][ln.int_at(3, 0, m)] = ln.scalar_at(4)
    try:
        rep = Representation(alg, space, tuple(tuple(tuple(r) for r in M) for M in rho))
    except ValueError as e:
        raise ParseError(lines[0].no, 1, str(e)) from None
    form = None
    if form_rows:
        form = GramForm(space, tuple(tuple(ln.scalar_at(t) for t in range(1, m + 1)) for ln in form_rows))
    return ModuleDocument(rep, form)


def _parse_matrix(lines, ident, objects):
    parity, shape, rows = None, None, []
    for ln in lines:
        key = ln.toks[0][0]
        if key == "parity":
            if parity is not None or shape is not None:
                raise ln.err(0, "parity must come first and only once")
            parity = ln.int_at(1, 0, 2)
        elif key == "shape":
            shape = (ln.int_at(1), ln.int_at(2))
        elif key == "row":
            rows.append(tuple(ln.scalar_at(t) for t in range(1, len(ln.toks))))
        else:
            raise ln.err(0, f"unknown matrix field {key!r}")
    return ("matrix", parity, shape, tuple(rows))


def _parse_report(lines, ident, objects):
    rep = Report("")
    for ln in lines:
        key = ln.toks[0][0]
        if key == "title":
            rep.title = ln.text.strip()[len("title"):].strip()
        elif key == "check":
            if len(ln.toks) < 3 or ln.toks[1][0] not in ("PASS", "FAIL"):
                raise ln.err(1, "check needs PASS/FAIL and a name")
            rep.add(ln.toks[2][0], ln.toks[1][0] == "PASS", None, " ".join(t for t, _ in ln.toks[3:]))
        else:
            raise ln.err(0, f"unknown report field {key!r}")
    return rep


_PARSERS = {
    "algebra": lambda lines, ident, objects: _parse_algebra(lines, ident),
    "cocycle": _parse_cocycle,
    "context": _parse_context,
    "module": _parse_module,
    "matrix": _parse_matrix,
    "report": _parse_report,
}


def parse_document(text: str) -> dict:
    """All blocks of a document, keyed by id, in document order."""
    raw = text.split("\n")
    if raw and raw[-1] == "":
        raw = raw[:-1]
    if not raw or raw[0] != FORMAT_HEADER:
        raise ParseError(1, 1, f"document must start with {FORMAT_HEADER!r}")
    objects: dict = {}
    k = 1
    while k < len(raw):
        ln = _Line(k + 1, raw[k])
        if not ln.toks:
            raise ln.err(0, "blank line")
        if ln.toks[0][0] != "begin" or len(ln.toks) != 3:
            raise ln.err(0, "expected 'begin <type> <id>'")
        kind, ident = ln.toks[1][0], ln.toks[2][0]
        if kind not in _PARSERS:
            raise ln.err(1, f"unknown block type {kind!r}")
        if ident in objects:
            raise ln.err(2, f"duplicate block id {ident!r}")
        body = []
        k += 1
        while True:
            if k >= len(raw):
                raise ParseError(k, 1, f"block {ident!r} not closed")
            b = _Line(k + 1, raw[k])
            k += 1
            if b.toks and b.toks[0][0] == "end":
                b.expect_len(1)
                break
            if not b.toks:
                raise b.err(0, "blank line")
            body.append(b)
        obj = _PARSERS[kind](body, ident, objects)
        objects[ident] = _finish(obj, objects, ln)
    return objects


def _finish(obj, objects, ln):
    if isinstance(obj, tuple) and obj and obj[0] == "cocycle":
        _, n, entries = obj
        return ("cocycle-raw", n, entries)
    if isinstance(obj, tuple) and obj and obj[0] == "matrix":
        _, parity, shape, rows = obj
        if shape is None or len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise ln.err(0, "matrix rows do not match its shape")
        return MatrixBlock(rows, parity)
    return obj


def cocycle_on(raw, alg: SuperAlgebra) -> DualCochain:
    """Attach a parsed cocycle block to its algebra."""
    if isinstance(raw, DualCochain):
        return raw
    _, n, entries = raw
    if n != alg.dim:
        raise ValueError(f"cocycle has dim {n}, algebra has dim {alg.dim}")
    t = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), v in entries.items():
        t[i][j][k] = v
    return DualCochain(alg, t)


def parse(text: str):
    """The last block of a document (the principal object)."""
    objs = parse_document(text)
    if not objs:
        raise ParseError(1, 1, "document has no blocks")
    return list(objs.values())[-1]
