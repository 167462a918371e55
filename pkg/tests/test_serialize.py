import json

import pytest

from milnor import (
    GF,
    PolyMatrix,
    apply_F,
    datum,
    decompose_sum,
    double_and_factor,
    extract_x_factor,
    factor_gl_split,
    factor_sl,
    glue,
    parse_poly,
    patching_data_iso,
    smith,
    verify_certificate,
)
from milnor.errors import ParseError
from milnor.generate import random_gl, random_sl, random_smith
from milnor.serialize import SCHEMA, CertificateFormatError, decode, dumps, encode, loads


def M(text, field=None):
    return PolyMatrix.parse(text, field)


def certificates():
    yield "factor", factor_sl(M("[[1, x^-1*y^-1], [0, 1]]"))
    yield "factor_fp", factor_sl(random_sl(3, 8, 4, GF(101)))
    yield "gl", factor_gl_split(random_gl(3, 5, 7))
    yield "double", double_and_factor(M("[[x^-1*y^-1]]"))
    yield "extract", extract_x_factor(M("[[x*y, 1], [0, x*y]]"))
    yield "glue", glue(datum(M("[[1, x^-1*y^-1], [0, 1]]")))
    yield "glue0", glue(apply_F(0))
    yield "iso", patching_data_iso(datum(random_gl(2, 4, 1)), apply_F(2))
    yield "decompose", decompose_sum(parse_poly("x^-1*y^-1 + x"))
    yield "smith_zz", smith(random_smith(3, 1, "zz"))
    yield "smith_ky", smith(random_smith(3, 1, "ky", degree=3))


CERTS = list(certificates())


@pytest.mark.parametrize("name, cert", CERTS, ids=[n for n, _ in CERTS])
def test_round_trip(name, cert):
    text = dumps(cert)
    doc = json.loads(text)
    assert doc["schema"] == SCHEMA and doc["verification"]["ok"]
    back = loads(text)
    assert verify_certificate(back).ok
    assert dumps(back) == text


@pytest.mark.parametrize("name, cert", CERTS, ids=[n for n, _ in CERTS])
def test_verification_block_matches(name, cert):
    doc = encode(cert)
    names = [c["name"] for c in doc["verification"]["checks"]]
    assert names == verify_certificate(decode(doc)).names()


def _factor_doc():
    return encode(factor_sl(M("[[1, x^-1*y^-1], [0, 1]]")))


def test_tampered_det_claim():
    doc = _factor_doc()
    doc["outputs"]["det_b"] = "y"
    assert "det_b" in verify_certificate(decode(doc)).failed()


def test_tampered_tag():
    doc = _factor_doc()
    doc["outputs"]["b_tag"] = "LOC_X"
    assert "b_membership" in verify_certificate(decode(doc)).failed()


def test_tampered_entry():
    doc = _factor_doc()
    doc["outputs"]["A"][0][0] = "x^-1 + 1"
    failed = verify_certificate(decode(doc)).failed()
    assert "product" in failed


def test_tampered_trace():
    doc = _factor_doc()
    doc["outputs"]["trace"][0]["A"][0][0] = "7"
    assert "trace" in verify_certificate(decode(doc)).failed()


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"schema": 2, "kind": "factor"},
        {"schema": 1, "kind": "nope", "input": {}, "outputs": {}},
        {"schema": 1, "kind": "factor", "input": {}, "outputs": {}},
        {"schema": 1, "kind": "decompose", "input": {"f": 3}, "outputs": {}},
        {"schema": 1, "kind": "factor", "input": {"C": "x"}, "outputs": {}},
    ],
)
def test_malformed(doc):
    with pytest.raises(CertificateFormatError):
        decode(doc)


def test_bad_tag_name():
    doc = _factor_doc()
    doc["outputs"]["a_tag"] = "SOMEWHERE"
    with pytest.raises(CertificateFormatError):
        decode(doc)


def test_invalid_json():
    with pytest.raises(ParseError):
        loads("{not json")


def test_field_recorded():
    doc = encode(factor_sl(random_sl(2, 3, 1, GF(101))))
    assert doc["field"] == "fp:101"
    assert decode(doc).C.field == GF(101)
