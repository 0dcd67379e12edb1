import io
import sys

import pytest

from superquad.catalog import catalog, make_duflo7, make_gn
from superquad.cli import main
from superquad.core import SuperAlgebra, SuperSpace, Representation
from superquad.decomposition import central_isotropic_descent
from superquad.io import ModuleDocument, ParseError, parse, parse_document, serialize, serialize_document
from superquad.quadratic import GramForm

G2_DOC = serialize(make_gn(2))


def run(argv, stdin=""):
    old_in, old_out, old_err = sys.stdin, sys.stdout, sys.stderr
    sys.stdin, sys.stdout, sys.stderr = io.StringIO(stdin), io.StringIO(), io.StringIO()
    try:
        code = main(argv)
        return code, sys.stdout.getvalue(), sys.stderr.getvalue()
    finally:
        sys.stdin, sys.stdout, sys.stderr = old_in, old_out, old_err


# -- documents --------------------------------------------------------------------


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.name)
def test_round_trip(entry):
    obj = entry.build()
    text = serialize(obj)
    back = parse(text)
    assert back == obj
    assert serialize(back) == text


def test_gn2_document_shape():
    lines = G2_DOC.splitlines()
    assert lines[0] == "lsa-document 1"
    assert "dims 2 4" in lines and "field Q" in lines


def test_context_round_trip():
    d = central_isotropic_descent(make_duflo7())
    text = serialize_document([("ctx", d.decomposition.context), ("Pi", d.decomposition.Pi)])
    objs = parse_document(text)
    assert objs["ctx"] == d.decomposition.context
    assert serialize_document([("ctx", objs["ctx"]), ("Pi", objs["Pi"])]) == text


def test_module_round_trip():
    L = SuperAlgebra.abelian(0, 1)
    sp = SuperSpace(1, 1)
    doc = ModuleDocument(Representation(L, sp, (((0, 0), (1, 0)),)), None)
    assert parse(serialize(doc)) == doc


def test_irrational_scalars_round_trip():
    from superquad.decomposition import solvable_to_tstar
    from superquad.catalog import get_entry

    from superquad.scalars import field_session

    with field_session():
        emb = solvable_to_tstar(get_entry("abelian_1_0").build())
        text = serialize_document([("ambient", emb.ambient), ("Pi", emb.presentation.Pi)])
        assert "sqrt(-1)" in text
        objs = parse_document(text)
        assert objs["ambient"] == emb.ambient
        assert serialize_document([("ambient", objs["ambient"]), ("Pi", objs["Pi"])]) == text


def replace_line(doc, prefix, new):
    return "\n".join(new if l.startswith(prefix) else l for l in doc.splitlines()) + "\n"


def test_syntax_error_position():
    bad = replace_line(G2_DOC, "labels", "labels a12 d12 b11 b12 b22 c12\nbrcket 0 1")
    with pytest.raises(ParseError) as info:
        parse(bad)
    assert (info.value.line, info.value.col) == (7, 1)


def test_non_canonical_rational_position():
    bad = G2_DOC.replace("=1\n", "=2/4\n", 1)
    with pytest.raises(ParseError) as info:
        parse(bad)
    assert "non-canonical rational" in str(info.value)
    assert info.value.line == 7


def test_even_square_is_a_parity_error():
    doc = "lsa-document 1\nbegin algebra a\nname a\nfield Q\ndims 1 0\nlabels e\nbracket 0 0 0=1\nend\n"
    with pytest.raises(ParseError) as info:
        parse(doc)
    assert "parity error" in str(info.value) and info.value.line == 7


# -- command line -----------------------------------------------------------------


def test_catalog_then_verify(tmp_path):
    code, out, _ = run(["catalog", "gn", "--n", "2"])
    assert code == 0
    code, out, _ = run(["verify", "-"], stdin=out)
    assert code == 0 and out.startswith("dim 6 (2|4)")


def test_tstar_then_verify(tmp_path):
    p = tmp_path / "g2.doc"
    p.write_text(G2_DOC)
    code, out, _ = run(["tstar", "--algebra", str(p), "--cocycle", "zero"])
    assert code == 0
    code, out, _ = run(["verify", "-"], stdin=out)
    assert code == 0 and out.startswith("dim 12 ")


def test_decompose_auto_on_duflo(tmp_path):
    p = tmp_path / "d.doc"
    p.write_text(serialize(make_duflo7()))
    code, out, err = run(["decompose", "--algebra", str(p), "--auto"])
    assert code == 0 and "central odd line" in err
    q = tmp_path / "ctx.doc"
    q.write_text(out)
    code, out, _ = run(["dext", str(q)])
    assert code == 0
    assert run(["verify", "-"], stdin=out)[0] == 0


def test_decompose_by_ideal(tmp_path):
    p = tmp_path / "d.doc"
    p.write_text(serialize(make_duflo7()))
    z = central_isotropic_descent(make_duflo7()).X
    code, out, _ = run(["decompose", "--algebra", str(p), "--ideal", " ".join(str(v) for v in z)])
    assert code == 0 and "begin context" in out


def test_solvable_to_tstar_exit_codes(tmp_path):
    p = tmp_path / "d.doc"
    p.write_text(serialize(make_duflo7()))
    assert run(["solvable-to-tstar", "--algebra", str(p)])[0] == 3
    code, out, _ = run(["--field-ext", "-1", "solvable-to-tstar", "--algebra", str(p)])
    assert code == 0 and "begin algebra ambient" in out


def test_oddext_from_blocks(tmp_path):
    d = central_isotropic_descent(make_duflo7()).data
    from superquad.quadratic import QuadraticSuperAlgebra

    text = serialize_document(
        [("g1", QuadraticSuperAlgebra(d["g1"], d["B1"])), ("D", d["D"].matrix), ("X0", (d["X0"],))]
    )
    p = tmp_path / "odd.doc"
    p.write_text(text)
    code, out, _ = run(["oddext", str(p)])
    assert code == 0 and parse(out).dim == 7


def test_duflo_check_commands(tmp_path):
    L = SuperAlgebra.abelian(0, 1)
    sp = SuperSpace(1, 1)
    doc = ModuleDocument(Representation(L, sp, (((0, 0), (1, 0)),)), None)
    p = tmp_path / "m.doc"
    p.write_text(serialize(doc))
    code, out, _ = run(["duflo-check", str(p), "--T", "1", "--W", "1 0"])
    assert code == 0 and "M = 1" in out
    sp2 = SuperSpace(0, 2)
    doc2 = ModuleDocument(Representation(SuperAlgebra.abelian(1, 0), sp2, (((0, 0), (0, 0)),)), GramForm(sp2, ((0, 1), (-1, 0))))
    p2 = tmp_path / "m2.doc"
    p2.write_text(serialize(doc2))
    code, out, _ = run(["duflo-check", str(p2)])
    assert code == 0 and "isotropic submodule" in out


def test_cocycle_command(tmp_path):
    p = tmp_path / "g2.doc"
    p.write_text(G2_DOC)
    code, out, _ = run(["cocycle", "--algebra", str(p), "--cocycle", "zero"])
    assert code == 0 and "s_phi isometry" in out


def test_invalid_algebra_exit_1(tmp_path):
    doc = "lsa-document 1\nbegin algebra a\nname bad\nfield Q\ndims 0 3\nlabels x y z\nbracket 0 0 1=1\nend\n"
    # parity-inconsistent entries are parse errors; a Jacobi failure is a validation failure
    doc = (
        "lsa-document 1\nbegin algebra a\nname bad\nfield Q\ndims 1 2\nlabels z x y\n"
        "bracket 0 2 1=1\nbracket 1 1 0=1\nend\n"
    )
    p = tmp_path / "bad.doc"
    p.write_text(doc)
    code, out, _ = run(["verify", str(p)])
    assert code == 1 and "super-jacobi" in out


@pytest.mark.parametrize(
    "argv",
    [[], ["verify"], ["verify", "/nonexistent/file"], ["catalog", "nope"], ["decompose", "--algebra", "/nonexistent"]],
)
def test_usage_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_parse_errors_exit_2_with_position(tmp_path):
    cases = {
        "syntax": replace_line(G2_DOC, "labels", "labels a12 d12 b11 b12 b22 c12\nbrcket 0 1"),
        "rational": G2_DOC.replace("=1\n", "=2/4\n", 1),
        "parity": "lsa-document 1\nbegin algebra a\nname a\nfield Q\ndims 1 0\nlabels e\nbracket 0 0 0=1\nend\n",
    }
    for name, text in cases.items():
        p = tmp_path / f"{name}.doc"
        p.write_text(text)
        code, _, err = run(["verify", str(p)])
        assert code == 2 and "line 7, column" in err, (name, err)
