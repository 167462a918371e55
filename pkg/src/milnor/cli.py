"""Command-line front end: ``milnor <command> [options]``.

Exit codes: 0 success with every check passing, 1 verification failure,
2 input error (parse errors, violated preconditions, malformed files).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import generate
from .coeffs import default_field, parse_field
from .errors import InternalCheckFailed, MilnorError, NotInDomain
from .euclid import Integers, LaurentPolynomialsY, PolynomialsY, domain_by_key, smith
from .factorization import double_and_factor, extract_x_factor, extract_y_factor, factor
from .laurent import LaurentPoly, parse_poly
from .matrix import PolyMatrix, det, det_bareiss, det_cofactor
from .patching import (
    MISMATCH,
    check_cartesian_witness,
    datum,
    decompose_sum,
    glue,
    patching_data_iso,
    truncation_iso_check,
)
from .report import VerificationReport, verify_certificate
from .serialize import SCHEMA, encode, loads

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _read(arg: str) -> str:
    """``-`` reads stdin, ``@path`` reads a file, anything else is literal."""
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def _matrix(args, arg: str) -> PolyMatrix:
    return PolyMatrix.parse(_read(arg).strip(), field=args.field)


def _poly(args, arg: str):
    return parse_poly(_read(arg).strip(), args.field)


def _emit(args, obj, report: VerificationReport, text: str) -> int:
    if not report.ok and not args.emit_on_fail:
        print(f"error: verification failed: {', '.join(report.failed())}", file=sys.stderr)
        return EXIT_FAIL
    if args.output == "json":
        print(json.dumps(encode(obj, report), indent=2))
    else:
        print(text)
        print(_summary(report))
    return EXIT_OK if report.ok else EXIT_FAIL


def _summary(report: VerificationReport) -> str:
    passed = sum(c.passed for c in report.checks)
    head = f"checks: {passed}/{len(report.checks)} passed"
    return head + "\n" + report.text() if not report.ok else head


def _doc(args, kind, inp, out, report=None):
    doc = {"schema": SCHEMA, "kind": kind, "field": args.field.spec, "input": inp, "outputs": out}
    if report is not None:
        doc["verification"] = {
            "ok": report.ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks],
        }
    return doc


# -- commands ------------------------------------------------------------------


def cmd_det(args) -> int:
    M = _matrix(args, args.matrix)
    d = det(M)
    report = VerificationReport()
    if M.is_square() and M.n_rows <= 6:
        one, zero = LaurentPoly.one(M.field), LaurentPoly.zero(M.field)
        alt = det_cofactor(M.rows) if M.n_rows > 3 else det_bareiss(M.rows, one, zero)
        report.add("cross_check", alt == d, "Bareiss vs cofactor expansion")
    if args.output == "json":
        print(json.dumps(_doc(args, "det", {"M": M.to_json()}, {"det": str(d)}, report), indent=2))
    else:
        print(d)
    return EXIT_OK if report.ok else EXIT_FAIL


def _smith_domain(args, M: PolyMatrix):
    if args.domain != "auto":
        return domain_by_key(args.domain, args.field)
    entries = [e for r in M.rows for e in r]
    if args.field.characteristic == 0 and all(e.is_constant() for e in entries):
        if all(_as_int(args.field, e) is not None for e in entries):
            return Integers()
    if all(a == 0 and b >= 0 for e in entries for a, b in e._t):
        return PolynomialsY(args.field)
    if all(a == 0 for e in entries for a, _ in e._t):
        return LaurentPolynomialsY(args.field)
    raise NotInDomain("entries involve x; smith works over Z, k[y] or k[y^+-1]")


def _as_int(field, e):
    v = field.to_fraction(e.constant_value()) if e.is_constant() else None
    return int(v) if v is not None and v.denominator == 1 else None


def cmd_smith(args) -> int:
    M = _matrix(args, args.matrix)
    domain = _smith_domain(args, M)
    if domain.key == "zz":
        Y = [[_as_int(args.field, e) for e in r] for r in M.rows]
        if any(v is None for r in Y for v in r):
            raise NotInDomain("domain zz needs integer entries")
    else:
        Y = M.to_lists()
    cert = smith(Y, domain)
    report = verify_certificate(cert)
    text = "\n".join(
        [
            f"domain: {domain.name}",
            "D = [" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in cert.D) + "]",
            f"U: {len(cert.U)} row transvections, V: {len(cert.V)} column transvections",
        ]
    )
    return _emit(args, cert, report, text)


def cmd_extract(args) -> int:
    M = _matrix(args, args.matrix)
    fn = extract_x_factor if args.variable == "x" else extract_y_factor
    step = fn(M, args.strategy)
    report = verify_certificate(step)
    text = f"A (det {args.variable}):\n{step.A}\nX_next:\n{step.X_next}\npivot row: {step.pivot_row}"
    return _emit(args, step, report, text)


def _factor_text(cert) -> str:
    return (
        f"A ({cert.a_tag.name}, det {cert.det_a}):\n{cert.A}\n"
        f"B ({cert.b_tag.name}, det {cert.det_b}):\n{cert.B}\n"
        f"method: {cert.method}, m_x = {cert.m_x}, m_y = {cert.m_y}, extraction steps: {len(cert.trace)}"
    )


def cmd_factor(args) -> int:
    C = _matrix(args, args.matrix)
    cert = factor(C, route=args.route, strategy=args.strategy)
    return _emit(args, cert, verify_certificate(cert), _factor_text(cert))


def cmd_double(args) -> int:
    A = _matrix(args, args.matrix)
    cert = double_and_factor(A, route=args.route, strategy=args.strategy)
    text = f"A_S^-1:\n{cert.A_S_inv}\n" + _factor_text(cert.inner)
    return _emit(args, cert, verify_certificate(cert), text)


def cmd_glue(args) -> int:
    zeta = _matrix(args, args.matrix)
    g = glue(datum(zeta))
    lines = [f"rank {g.n}"]
    for j, (v1, v2) in enumerate(g.basis):
        lines.append(f"e{j}: v1 = [{', '.join(map(str, v1))}]  v2 = [{', '.join(map(str, v2))}]")
    return _emit(args, g, verify_certificate(g), "\n".join(lines))


def cmd_decompose(args) -> int:
    s = decompose_sum(_poly(args, args.poly))
    text = (
        f"part_x: {s.part_x}\npart_y: {s.part_y}\nobstruction: {s.obstruction}\nverdict: {s.verdict}"
    )
    return _emit(args, s, verify_certificate(s), text)


def cmd_check_square(args) -> int:
    if args.check == "cartesian":
        f, g = _poly(args, args.operands[0]), _poly(args, args.operands[1])
        res = check_cartesian_witness(f, g)
        match = res is not MISMATCH
        out = {"result": str(res) if match else "MISMATCH", "tag": "BASE" if match else None}
        text = f"result: {out['result']}" + (" (in BASE)" if match else "")
    elif args.check == "truncation":
        k = int(args.operands[0])
        rep = truncation_iso_check(k, _poly(args, args.operands[1]))
        out = {
            "k": k,
            "truncated": str(rep.truncated),
            "injective": rep.injective,
            "preimage": str(rep.preimage) if rep.preimage is not None else None,
            "witness": str(rep.witness),
        }
        text = "\n".join(f"{key}: {val}" for key, val in out.items())
    else:
        d1 = datum(_matrix(args, args.operands[0]))
        d2 = datum(_matrix(args, args.operands[1]))
        cert = patching_data_iso(d1, d2)
        return _emit(args, cert, verify_certificate(cert), f"G1:\n{cert.G1}\nG2:\n{cert.G2}")
    if args.output == "json":
        print(json.dumps(_doc(args, f"check-square/{args.check}", {"operands": args.operands}, out), indent=2))
    else:
        print(text)
    return EXIT_OK


def _verify_one(text: str):
    """Worker: ``(exit_code, message, checks)`` for one certificate document."""
    try:
        cert = loads(text)
        report = verify_certificate(cert)
    except MilnorError as exc:
        return EXIT_INPUT, f"{exc.code}: {exc}", []
    checks = [(c.name, c.passed, c.detail) for c in report.checks]
    if report.ok:
        return EXIT_OK, "OK", checks
    return EXIT_FAIL, "FAIL " + ", ".join(report.failed()), checks


def cmd_verify(args) -> int:
    texts = []
    for path in args.files:
        try:
            texts.append(_read(path) if path == "-" or path.startswith("@") else _read("@" + path))
        except OSError as exc:
            texts.append(None)
            print(f"{path}: cannot read: {exc}", file=sys.stderr)
    todo = [t for t in texts if t is not None]
    if args.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            done = iter(list(pool.map(_verify_one, todo)))
    else:
        done = iter([_verify_one(t) for t in todo])
    code = EXIT_OK
    results = []
    for path, t in zip(args.files, texts):
        if t is None:
            code = max(code, EXIT_INPUT)
            results.append({"file": path, "ok": False, "error": "unreadable"})
            continue
        c, msg, checks = next(done)
        code = max(code, c)
        results.append(
            {"file": path, "ok": c == EXIT_OK, "status": msg, "checks": [
                {"name": n, "passed": p, "detail": d} for n, p, d in checks
            ]}
        )
        if args.output == "text":
            print(f"{path}: {msg}")
            for n, p, d in checks:
                if not p:
                    print(f"  FAIL  {n}" + (f"  ({d})" if d else ""))
    if args.output == "json":
        print(json.dumps(results, indent=2))
    return code


def cmd_gen(args) -> int:
    f, n, seed = args.field, args.n, args.seed
    c = args.complexity if args.complexity is not None else (2 if args.kind == "base" else 4)
    if args.kind == "sl":
        M = generate.random_sl(n, c, seed, f)
    elif args.kind == "gl":
        M = generate.random_gl(n, c, seed, f)
    elif args.kind == "base":
        M = generate.random_base_monomial_det(n, args.s, args.t, seed, f, mix=c)
    else:
        rows = generate.random_smith(n, seed, args.domain if args.domain != "auto" else "zz", f)
        text = "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in rows) + "]"
        print(json.dumps([[str(e) for e in r] for r in rows]) if args.output == "json" else text)
        return EXIT_OK
    print(json.dumps(M.to_json()) if args.output == "json" else M.format())
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _common(defaults: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    sup = {} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--field", type=parse_field, help="rational (default) or fp:<prime>; env MILNOR_FIELD", **({"default": None} if defaults else sup))
    p.add_argument("--output", choices=("text", "json"), **({"default": "text"} if defaults else sup))
    p.add_argument("--seed", type=int, **({"default": 0} if defaults else sup), help="seed for gen")
    p.add_argument(
        "--emit-on-fail",
        action="store_true",
        **({"default": False} if defaults else sup),
        help="print certificates even when a check fails",
    )
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milnor",
        description="Factor, glue and verify matrices over the square k[x,y] -> k[x^+-1,y], k[x,y^+-1] -> k[x^+-1,y^+-1].",
        parents=[_common(True)],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = _common(False)
    mat_help = "matrix text, '-' for stdin or @file"

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=fn)
        return p

    p = add("det", cmd_det, "exact determinant")
    p.add_argument("matrix", help=mat_help)

    p = add("smith", cmd_smith, "transvection-only diagonalization over Z, k[y] or k[y^+-1]")
    p.add_argument("matrix", help=mat_help)
    p.add_argument("--domain", choices=("auto", "zz", "ky", "kyl"), default="auto")

    p = add("extract", cmd_extract, "split off one factor of determinant x (or y)")
    p.add_argument("matrix", help=mat_help)
    p.add_argument("--variable", choices=("x", "y"), default="x")
    p.add_argument("--strategy", choices=("echelon", "diagonalize"), default="echelon")

    p = add("factor", cmd_factor, "factor an SL or GL matrix as A (over LOC_X) times B (over LOC_Y)")
    p.add_argument("matrix", help=mat_help)
    p.add_argument("--route", choices=("base", "loc_y"), default="base")
    p.add_argument("--strategy", choices=("echelon", "diagonalize"), default="echelon")

    p = add("double", cmd_double, "factor diag(A, A^-1) for a GL matrix A")
    p.add_argument("matrix", help=mat_help)
    p.add_argument("--route", choices=("base", "loc_y"), default="base")
    p.add_argument("--strategy", choices=("echelon", "diagonalize"), default="echelon")

    p = add("glue", cmd_glue, "basis of the module glued along a transition matrix")
    p.add_argument("matrix", help=mat_help)

    p = add("decompose", cmd_decompose, "split a Laurent polynomial into LOC_X + LOC_Y + obstruction")
    p.add_argument("poly", help="polynomial text, '-' for stdin or @file")

    p = add("check-square", cmd_check_square, "element and datum level checks on the square")
    p.add_argument("check", choices=("cartesian", "truncation", "iso"))
    p.add_argument(
        "operands",
        nargs=2,
        help="cartesian: F G; truncation: K F; iso: ZETA1 ZETA2",
    )

    p = add("verify", cmd_verify, "re-check certificate files")
    p.add_argument("files", nargs="+", help="certificate JSON files ('-' for stdin)")
    p.add_argument("--jobs", type=int, default=1, help="verify files in parallel")

    p = add("gen", cmd_gen, "random instances")
    p.add_argument("kind", choices=("sl", "gl", "smith", "base"))
    p.add_argument("-n", type=int, default=2, help="matrix size")
    p.add_argument(
        "--complexity",
        type=int,
        default=None,
        help="number of transvections (sl, gl; default 4) or transvections per diagonal factor (base; default 2)",
    )
    p.add_argument("--domain", choices=("auto", "zz", "ky"), default="auto", help="smith: zz or ky")
    p.add_argument("-s", type=int, default=1, help="base: exponent of x in det")
    p.add_argument("-t", type=int, default=1, help="base: exponent of y in det")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.field is None:
            env = os.environ.get("MILNOR_FIELD")
            args.field = parse_field(env) if env else default_field()
        if args.command == "gen" and (args.n < 1 or (args.complexity or 0) < 0):
            raise ValueError("gen needs n >= 1 and complexity >= 0")
        return args.func(args)
    except InternalCheckFailed as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except MilnorError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
