"""JSON certificate documents (``"schema": 1``).

Every document has the shape::

    {"schema": 1, "kind": ..., "field": "rational" | "fp:<p>",
     "input": {...}, "outputs": {...},
     "verification": {"ok": bool, "checks": [{"name", "passed", "detail"}]}}

Polynomials are strings in the polynomial grammar and matrices are arrays
of rows of such strings. The verification block is informational: loading
a document and running :func:`verify_certificate` re-derives every check
from ``input`` and ``outputs`` alone.
"""

from __future__ import annotations

import json

from .coeffs import parse_field
from .errors import MilnorError, ParseError
from .euclid import (
    Side,
    SmithCertificate,
    Transvection,
    TransvectionSeq,
    domain_by_key,
)
from .factorization import DoublingCertificate, ExtractionStep, FactorCertificate
from .laurent import LaurentPoly, RingTag, parse_poly
from .matrix import MatGroupClaim, PolyMatrix
from .patching import FreePatchingDatum, GluedModule, IsoCertificate, SumDecomposition
from .report import VerificationReport, verify_certificate

SCHEMA = 1


class CertificateFormatError(ParseError):
    """A certificate document is structurally malformed."""

    def __init__(self, message):
        super().__init__(message, "", 0)
        self.args = (message,)


# -- encoders ------------------------------------------------------------------


def _mat(M: PolyMatrix):
    return M.to_json()


def _seq(seq: TransvectionSeq):
    return {
        "n": seq.n,
        "steps": [{"side": t.side.value, "i": t.i, "j": t.j, "lambda": str(t.lam)} for t in seq],
    }


def _step(st: ExtractionStep):
    return {
        "variable": st.variable,
        "shift": st.shift,
        "pivot_row": st.pivot_row,
        "U": _seq(st.U),
        "V": _seq(st.V),
        "A": _mat(st.A),
        "X_next": _mat(st.X_next),
    }


def _factor(c: FactorCertificate):
    out = {
        "group": c.group.value,
        "method": c.method,
        "A": _mat(c.A),
        "B": _mat(c.B),
        "a_tag": c.a_tag.name,
        "b_tag": c.b_tag.name,
        "det_a": str(c.det_a),
        "det_b": str(c.det_b),
        "m_x": c.m_x,
        "m_y": c.m_y,
        "trace_input": _mat(c.trace_input) if c.trace_input is not None else None,
        "trace": [_step(st) for st in c.trace],
    }
    if c.inner is not None:
        out["D_x"] = _mat(c.D_x)
        out["D_y"] = _mat(c.D_y)
        out["inner"] = {"input": {"C": _mat(c.inner.C)}, "outputs": _factor(c.inner)}
    return out


def _verification(report: VerificationReport):
    return {
        "ok": report.ok,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks],
    }


def _smith_entry(e):
    return str(e)


def encode(obj, report: VerificationReport | None = None) -> dict:
    """Certificate object -> JSON-ready dict (verifying it unless ``report`` is given)."""
    if report is None:
        report = verify_certificate(obj)
    if isinstance(obj, FactorCertificate):
        kind, field = "factor", obj.C.field
        inp, out = {"C": _mat(obj.C)}, _factor(obj)
    elif isinstance(obj, DoublingCertificate):
        kind, field = "double", obj.A_S.field
        inp = {"A_S": _mat(obj.A_S)}
        out = {
            "A_S_inv": _mat(obj.A_S_inv),
            "doubled": _mat(obj.doubled),
            "inner": {"input": {"C": _mat(obj.inner.C)}, "outputs": _factor(obj.inner)},
        }
    elif isinstance(obj, ExtractionStep):
        kind, field = "extract", obj.X.field
        inp, out = {"X": _mat(obj.X)}, _step(obj)
    elif isinstance(obj, GluedModule):
        kind, field = "glue", obj.zeta.field
        inp = {"zeta": _mat(obj.zeta)}
        out = {
            "rank": obj.n,
            "basis": [{"v1": [str(e) for e in v1], "v2": [str(e) for e in v2]} for v1, v2 in obj.basis],
            "factorization": (
                {"input": {"C": _mat(obj.factorization.C)}, "outputs": _factor(obj.factorization)}
                if obj.factorization is not None
                else None
            ),
        }
    elif isinstance(obj, IsoCertificate):
        kind, field = "iso", obj.d1.zeta.field
        inp = {"zeta1": _mat(obj.d1.zeta), "zeta2": _mat(obj.d2.zeta)}
        out = {"G1": _mat(obj.G1), "G2": _mat(obj.G2)}
    elif isinstance(obj, SumDecomposition):
        kind, field = "decompose", obj.f.field
        inp = {"f": str(obj.f)}
        out = {
            "part_x": str(obj.part_x),
            "part_y": str(obj.part_y),
            "obstruction": str(obj.obstruction),
            "verdict": obj.verdict,
        }
    elif isinstance(obj, SmithCertificate):
        kind = "smith"
        field = getattr(obj.domain, "field", None)
        inp = {"domain": obj.domain.key, "Y": [[_smith_entry(e) for e in r] for r in obj.Y]}
        out = {"U": _seq(obj.U), "V": _seq(obj.V), "D": [[_smith_entry(e) for e in r] for r in obj.D]}
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")
    return {
        "schema": SCHEMA,
        "kind": kind,
        "field": field.spec if field is not None else "rational",
        "input": inp,
        "outputs": out,
        "verification": _verification(report),
    }


def dumps(obj, report: VerificationReport | None = None, indent: int | None = 2) -> str:
    return json.dumps(encode(obj, report), indent=indent)


# -- decoders ------------------------------------------------------------------


class _Decoder:
    def __init__(self, field):
        self.field = field

    def poly(self, text) -> LaurentPoly:
        if not isinstance(text, str):
            raise CertificateFormatError(f"expected a polynomial string, got {text!r}")
        return parse_poly(text, self.field)

    def mat(self, rows) -> PolyMatrix:
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise CertificateFormatError("expected a matrix as an array of rows")
        return PolyMatrix([[self.poly(e) for e in r] for r in rows], field=self.field)

    def seq(self, d, param=None) -> TransvectionSeq:
        param = param or self.poly
        try:
            steps = tuple(
                Transvection(Side(s["side"]), int(s["i"]), int(s["j"]), param(s["lambda"])) for s in d["steps"]
            )
            return TransvectionSeq(int(d["n"]), steps)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MilnorError):
                raise
            raise CertificateFormatError(f"bad transvection sequence: {exc}") from None

    @staticmethod
    def tag(name) -> RingTag:
        try:
            return RingTag[name]
        except KeyError:
            raise CertificateFormatError(f"unknown ring tag {name!r}") from None

    def step(self, d, X: PolyMatrix) -> ExtractionStep:
        return ExtractionStep(
            X=X,
            U=self.seq(d["U"]),
            V=self.seq(d["V"]),
            pivot_row=int(d["pivot_row"]),
            A=self.mat(d["A"]),
            X_next=self.mat(d["X_next"]),
            variable=d.get("variable", "x"),
            shift=int(d.get("shift", 0)),
        )

    def factor(self, inp, out) -> FactorCertificate:
        trace_input = self.mat(out["trace_input"]) if out.get("trace_input") is not None else None
        steps = []
        X = trace_input
        for d in out.get("trace", []):
            st = self.step(d, X)
            steps.append(st)
            X = st.X_next
        inner = None
        if out.get("inner") is not None:
            inner = self.factor(out["inner"]["input"], out["inner"]["outputs"])
        try:
            group = MatGroupClaim(out["group"])
        except ValueError:
            raise CertificateFormatError(f"unknown group claim {out['group']!r}") from None
        return FactorCertificate(
            C=self.mat(inp["C"]),
            A=self.mat(out["A"]),
            B=self.mat(out["B"]),
            group=group,
            det_a=self.poly(out["det_a"]),
            det_b=self.poly(out["det_b"]),
            a_tag=self.tag(out["a_tag"]),
            b_tag=self.tag(out["b_tag"]),
            m_x=int(out.get("m_x", 0)),
            m_y=int(out.get("m_y", 0)),
            method=out.get("method", ""),
            trace=tuple(steps),
            trace_input=trace_input,
            inner=inner,
            D_x=self.mat(out["D_x"]) if out.get("D_x") is not None else None,
            D_y=self.mat(out["D_y"]) if out.get("D_y") is not None else None,
        )


def decode(doc: dict):
    """JSON dict -> certificate object (no verification is performed)."""
    if not isinstance(doc, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise CertificateFormatError(f"unsupported schema {doc.get('schema')!r}")
    field = parse_field(doc.get("field", "rational"))
    dec = _Decoder(field)
    kind, inp, out = doc.get("kind"), doc.get("input", {}), doc.get("outputs", {})
    try:
        if kind == "factor":
            return dec.factor(inp, out)
        if kind == "double":
            return DoublingCertificate(
                A_S=dec.mat(inp["A_S"]),
                A_S_inv=dec.mat(out["A_S_inv"]),
                doubled=dec.mat(out["doubled"]),
                inner=dec.factor(out["inner"]["input"], out["inner"]["outputs"]),
            )
        if kind == "extract":
            return dec.step(out, dec.mat(inp["X"]))
        if kind == "glue":
            zeta = dec.mat(inp["zeta"])
            n = int(out["rank"])
            pairs = out["basis"]
            cols1 = [[dec.poly(e) for e in p["v1"]] for p in pairs]
            cols2 = [[dec.poly(e) for e in p["v2"]] for p in pairs]
            V1 = PolyMatrix([list(r) for r in zip(*cols1)], field=field, n_cols=len(cols1))
            V2 = PolyMatrix([list(r) for r in zip(*cols2)], field=field, n_cols=len(cols2))
            fac = out.get("factorization")
            cert = dec.factor(fac["input"], fac["outputs"]) if fac is not None else None
            return GluedModule(n, zeta, V1, V2, cert)
        if kind == "iso":
            z1, z2 = dec.mat(inp["zeta1"]), dec.mat(inp["zeta2"])
            return IsoCertificate(
                FreePatchingDatum(z1.n_rows, z1),
                FreePatchingDatum(z2.n_rows, z2),
                dec.mat(out["G1"]),
                dec.mat(out["G2"]),
            )
        if kind == "decompose":
            return SumDecomposition(
                dec.poly(inp["f"]), dec.poly(out["part_x"]), dec.poly(out["part_y"]), dec.poly(out["obstruction"])
            )
        if kind == "smith":
            domain = domain_by_key(inp["domain"], field)
            entry = _int_entry if domain.key == "zz" else dec.poly
            Y = [[entry(e) for e in r] for r in inp["Y"]]
            D = [[entry(e) for e in r] for r in out["D"]]
            return SmithCertificate(Y, dec.seq(out["U"], entry), dec.seq(out["V"], entry), D, domain)
    except KeyError as exc:
        raise CertificateFormatError(f"missing field {exc} in {kind} certificate") from None
    raise CertificateFormatError(f"unknown certificate kind {kind!r}")


def _int_entry(text) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise CertificateFormatError(f"expected an integer, got {text!r}") from None


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from None
    return decode(doc)
