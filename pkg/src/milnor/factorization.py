"""Determinant-induced factorization over the square L(k[x,y], x, y).

The building block is :func:`extract_x_factor`: given ``X`` over k[x, y]
(or k[x, y^+-1]) with ``x | det X``, it writes ``X = A @ X_next`` with
``A`` over k[x, y] and ``det A = x``. It reduces ``X`` modulo ``x``,
diagonalizes the reduction over k[y] with transvections, lifts those back,
and divides the row that reduced to zero by ``x``.

Iterating it peels off any monomial part of the determinant
(:func:`dif_monomial`), which is what :func:`factor_sl` needs to split an
SL_n matrix over k[x^+-1, y^+-1] into a factor over k[x^+-1, y] times a
factor over k[x, y^+-1]. :func:`factor_gl_split` and
:func:`double_and_factor` handle GL_n. Every result is a certificate that
:func:`verify_certificate` re-checks from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    DetNotDivisible,
    DetNotMonomial,
    ExponentTooLarge,
    InternalCheckFailed,
    NotGL,
    NotInDomain,
    NotSL,
    ShapeError,
)
from .euclid import PolynomialsY, TransvectionSeq, diagonalize, lift, reduce_to_zero_row, replay
from .laurent import BASE, LOC_X, LOC_XY, LOC_Y, LaurentPoly, RingTag
from .matrix import MatGroupClaim, PolyMatrix, det, inverse_unimodular
from .report import Check, VerificationReport, verify_certificate  # noqa: F401


# -- single extraction ---------------------------------------------------------


@dataclass(frozen=True)
class ExtractionStep:
    """One application of the x-extraction: ``X == A @ X_next``, ``det A == x``.

    ``U`` and ``V`` are the lifted transvection sequences; ``replay(V,
    replay(U, X))`` has row ``pivot_row`` divisible by the variable.
    ``shift`` is the exponent ``e`` of the monomial ``y^e`` used to clear
    negative powers of y before reducing (0 over k[x, y]).
    """

    X: PolyMatrix
    U: TransvectionSeq
    V: TransvectionSeq
    pivot_row: int
    A: PolyMatrix
    X_next: PolyMatrix
    variable: str = "x"
    shift: int = 0

    def swap_xy(self) -> ExtractionStep:
        swap = lambda p: p.swap_xy()  # noqa: E731
        return ExtractionStep(
            X=self.X.swap_xy(),
            U=self.U.map_params(swap),
            V=self.V.map_params(swap),
            pivot_row=self.pivot_row,
            A=self.A.swap_xy(),
            X_next=self.X_next.swap_xy(),
            variable="y" if self.variable == "x" else "x",
            shift=self.shift,
        )


def _require_square(M: PolyMatrix) -> None:
    if not M.is_square():
        raise ShapeError(f"expected a square matrix, got {M.shape}")


def extract_x_factor(X: PolyMatrix, strategy: str = "echelon") -> ExtractionStep:
    """Split ``X = A @ X_next`` with ``A`` over k[x, y] and ``det A = x``.

    ``X`` must be over k[x, y] or k[x, y^+-1] and ``x`` must divide its
    determinant there.

    Since ``X_next = diag(.., x, ..)^-1 @ U @ X`` does not depend on the column
    operations, the default ``strategy="echelon"`` uses row transvections only
    and stops at the first vanishing row of the reduction mod x.
    ``strategy="diagonalize"`` runs the full two-sided diagonalization and
    takes its lowest-index zero diagonal entry.
    """
    _require_square(X)
    if not X.member(LOC_Y):
        raise NotInDomain("extraction needs a matrix without negative powers of x")
    field = X.field
    n = X.n_rows
    d = det(X)
    if any(a == 0 for a, _ in d._t):
        raise DetNotDivisible(f"x does not divide det = {d}")

    reduced = [[e.filter(lambda a, b: a == 0) for e in r] for r in X.rows]
    bmin = min((b for r in reduced for e in r for _, b in e._t), default=0)
    shift = max(0, -bmin)
    if shift:
        reduced = [[e.shift(0, shift) for e in r] for r in reduced]

    domain = PolynomialsY(field)
    if strategy == "echelon":
        U0, k, _ = reduce_to_zero_row(reduced, domain)
        V0 = TransvectionSeq(n, ())
    elif strategy == "diagonalize":
        U0, V0, D = diagonalize(reduced, domain)
        k = next((i for i in range(n) if not D[i][i]), None)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if k is None:
        raise InternalCheckFailed("reduction mod x has nonzero determinant")
    U, V = lift(U0, field), lift(V0, field)

    Z = replay(V, replay(U, X)).to_lists()
    if any(a < 1 for e in Z[k] for a, _ in e._t):
        raise InternalCheckFailed(f"row {k} of the transformed matrix is not divisible by x")
    Z[k] = [e.shift(-1, 0) for e in Z[k]]
    X_prime = PolyMatrix._trusted(Z, X.tag, field)

    diag = PolyMatrix.identity(n, field).to_lists()
    diag[k][k] = LaurentPoly.x(field)
    A = replay(U.inverse(), PolyMatrix._trusted(diag, BASE, field))
    X_next = replay(V.inverse(), X_prime)
    return ExtractionStep(
        X=X,
        U=U,
        V=V,
        pivot_row=k,
        A=PolyMatrix._trusted(A.rows, BASE, field),
        X_next=PolyMatrix._trusted(X_next.rows, X.tag, field),
        variable="x",
        shift=shift,
    )


def extract_y_factor(X: PolyMatrix, strategy: str = "echelon") -> ExtractionStep:
    """Mirror of :func:`extract_x_factor`: ``det A = y``, X over k[x, y] or k[x^+-1, y]."""
    if not X.member(LOC_X):
        raise NotInDomain("y-extraction needs a matrix without negative powers of y")
    return extract_x_factor(X.swap_xy(), strategy).swap_xy()


# -- iterated extraction -------------------------------------------------------


@dataclass(frozen=True)
class MonomialSplit:
    """``C == A @ B`` with ``det A`` the requested monomial."""

    A: PolyMatrix
    B: PolyMatrix
    steps: tuple

    def __iter__(self):
        return iter((self.A, self.B))


def _strip(X: PolyMatrix, count: int, extract, steps: list, strategy: str = "echelon"):
    A = PolyMatrix.identity(X.n_rows, X.field)
    for _ in range(count):
        st = extract(X, strategy)
        steps.append(st)
        A = A @ st.A
        X = st.X_next
    return A, X


def dif_monomial(C: PolyMatrix, i: int, j: int = 0) -> MonomialSplit:
    """Factor ``C = A @ B`` over k[x, y] with ``det A = x^i y^j``.

    ``det C`` must be a monomial ``c x^s y^t`` with ``i <= s`` and ``j <= t``.
    The x factors are stripped first, then the y factors.
    """
    _require_square(C)
    if not C.member(BASE):
        raise NotInDomain("dif_monomial works over k[x, y]")
    if i < 0 or j < 0:
        raise ValueError("target exponents must be non-negative")
    d = det(C)
    if not d.is_monomial():
        raise DetNotMonomial(f"det = {d} is not a monomial")
    _, s, t = d.monomial_data()
    if i > s or j > t:
        raise ExponentTooLarge(f"cannot split x^{i} y^{j} off det = {d}")
    steps: list = []
    A1, X = _strip(C, i, extract_x_factor, steps)
    A2, B = _strip(X, j, extract_y_factor, steps)
    A = A1 @ A2 if j else A1
    return MonomialSplit(PolyMatrix._trusted(A.rows, BASE, C.field), B, tuple(steps))


# -- certificates --------------------------------------------------------------


@dataclass(frozen=True)
class FactorCertificate:
    """Claim ``C == A @ B`` with A over ``a_tag`` (<= LOC_X), B over ``b_tag`` (<= LOC_Y).

    ``trace`` holds the extraction steps, starting from ``trace_input`` (the
    matrix ``x^m_x y^m_y C`` after denominator clearing). A GL certificate
    produced by unit splitting keeps the SL certificate of the unit-free part
    in ``inner`` together with the diagonal unit matrices ``D_x``, ``D_y``.
    """

    C: PolyMatrix
    A: PolyMatrix
    B: PolyMatrix
    group: MatGroupClaim
    det_a: LaurentPoly
    det_b: LaurentPoly
    a_tag: RingTag = LOC_X
    b_tag: RingTag = LOC_Y
    m_x: int = 0
    m_y: int = 0
    method: str = "clear_both"
    trace: tuple = ()
    trace_input: Optional[PolyMatrix] = None
    inner: Optional["FactorCertificate"] = None
    D_x: Optional[PolyMatrix] = None
    D_y: Optional[PolyMatrix] = None


@dataclass(frozen=True)
class DoublingCertificate:
    """``diag(A_S, A_S^-1) == A @ B`` as a strong patching witness."""

    A_S: PolyMatrix
    A_S_inv: PolyMatrix
    doubled: PolyMatrix
    inner: FactorCertificate


def factor_sl(
    C: PolyMatrix, route: str = "base", shortcut: bool = True, strategy: str = "echelon"
) -> FactorCertificate:
    """Split ``C`` in SL_n(k[x^+-1, y^+-1]) as ``A @ B``, A in SL_n(k[x^+-1, y]),
    B in SL_n(k[x, y^+-1]).

    ``route="base"`` clears both denominators, ``C' = x^m_x y^m_y C`` over
    k[x, y], and strips ``x^(n m_x)`` off ``C'``. ``route="loc_y"`` clears
    only x-denominators and extracts directly over k[x, y^+-1]. With
    ``shortcut`` a matrix already over one of the two middle rings is returned
    as ``(C, I)`` or ``(I, C)``. ``strategy`` is passed to
    :func:`extract_x_factor`.
    """
    _require_square(C)
    if route not in ("base", "loc_y"):
        raise ValueError(f"unknown route {route!r}")
    field = C.field
    n = C.n_rows
    d = det(C)
    if not d.is_one():
        raise NotSL(f"det = {d}, expected 1")
    one = LaurentPoly.one(field)
    ident = PolyMatrix.identity(n, field)
    if shortcut and C.member(LOC_X):
        return FactorCertificate(C, C.retag(LOC_X), ident, MatGroupClaim.SL, one, one, method="trivial")
    if shortcut and C.member(LOC_Y):
        return FactorCertificate(C, ident, C.retag(LOC_Y), MatGroupClaim.SL, one, one, method="trivial")

    amin, bmin = C.min_exponents()
    m_x, m_y = max(0, -amin), max(0, -bmin)
    steps: list = []
    if route == "base":
        start = C.shift(m_x, m_y)
        A_, B_ = _strip(start, n * m_x, extract_x_factor, steps, strategy)
        A, B = A_.shift(-m_x, 0), B_.shift(0, -m_y)
    else:
        m_y = 0
        start = C.shift(m_x, 0)
        A_, B = _strip(start, n * m_x, extract_x_factor, steps, strategy)
        A = A_.shift(-m_x, 0)
    A, B = A.retag(LOC_X), B.retag(LOC_Y)
    if A @ B != C:
        raise InternalCheckFailed("factor product does not reproduce the input")
    return FactorCertificate(
        C, A, B, MatGroupClaim.SL, one, one,
        m_x=m_x, m_y=m_y, method="clear_both" if route == "base" else "clear_x",
        trace=tuple(steps), trace_input=start,
    )


def factor_gl_split(
    C: PolyMatrix, route: str = "base", shortcut: bool = True, strategy: str = "echelon"
) -> FactorCertificate:
    """Factor ``C`` in GL_n(k[x^+-1, y^+-1]) using that its unit determinant
    ``c x^a y^b`` splits as ``(c x^a) * (y^b)``.

    ``C = D_x @ C0 @ D_y`` with ``D_x = diag(c x^a, 1, ...)``, ``D_y =
    diag(y^b, 1, ...)`` and ``C0`` in SL_n; ``C0`` goes through
    :func:`factor_sl`.
    """
    _require_square(C)
    if C.n_rows == 0:
        raise ShapeError("empty matrix")
    field = C.field
    d = det(C)
    if not LOC_XY.is_unit(d):
        raise NotGL(f"det = {d} is not a unit of k[x^+-1, y^+-1]")
    c, a, b = d.monomial_data()
    one = LaurentPoly.one(field)
    n = C.n_rows
    if shortcut and C.member(LOC_X) and b == 0:
        return FactorCertificate(
            C, C.retag(LOC_X), PolyMatrix.identity(n, field), MatGroupClaim.GL, d, one, method="trivial"
        )
    if shortcut and C.member(LOC_Y) and a == 0:
        return FactorCertificate(
            C, PolyMatrix.identity(n, field), C.retag(LOC_Y), MatGroupClaim.GL, one, d, method="trivial"
        )
    ux = LaurentPoly.monomial(a, 0, c, field)
    uy = LaurentPoly.monomial(0, b, 1, field)
    D_x = PolyMatrix.diag([ux] + [one] * (n - 1), field)
    D_y = PolyMatrix.diag([uy] + [one] * (n - 1), field)
    rows = C.to_lists()
    ux_inv, uy_inv = ux ** -1, uy ** -1
    rows[0] = [ux_inv * e for e in rows[0]]
    for r in rows:
        r[0] = r[0] * uy_inv
    C0 = PolyMatrix(rows, field=field)
    inner = factor_sl(C0, route=route, shortcut=shortcut, strategy=strategy)
    A = (D_x @ inner.A).retag(LOC_X)
    B = (inner.B @ D_y).retag(LOC_Y)
    if A @ B != C:
        raise InternalCheckFailed("unit split does not reproduce the input")
    return FactorCertificate(
        C, A, B, MatGroupClaim.GL, ux, uy,
        m_x=inner.m_x, m_y=inner.m_y, method="unit_split", inner=inner, D_x=D_x, D_y=D_y,
    )


def factor(C: PolyMatrix, **kw) -> FactorCertificate:
    """:func:`factor_sl` when ``det C == 1``, else :func:`factor_gl_split`."""
    _require_square(C)
    if det(C).is_one():
        return factor_sl(C, **kw)
    return factor_gl_split(C, **kw)


def double_and_factor(
    A_S: PolyMatrix, route: str = "base", shortcut: bool = True, strategy: str = "echelon"
) -> DoublingCertificate:
    """Factor ``diag(A_S, A_S^-1)`` (determinant 1) with :func:`factor_sl`."""
    _require_square(A_S)
    d = det(A_S)
    if not LOC_XY.is_unit(d):
        raise NotGL(f"det = {d} is not a unit of k[x^+-1, y^+-1]")
    inv = inverse_unimodular(A_S, LOC_XY)
    doubled = PolyMatrix.block_diag(A_S, inv)
    return DoublingCertificate(A_S, inv, doubled, factor_sl(doubled, route=route, shortcut=shortcut, strategy=strategy))


# -- verification --------------------------------------------------------------


def _first_violation(M: PolyMatrix, tag: RingTag) -> str:
    for i, r in enumerate(M.rows):
        for j, e in enumerate(r):
            if not tag.contains(e):
                return f"entry ({i},{j}) = {e} not in {tag.name}"
    return ""


def _first_mismatch(P: PolyMatrix, Q: PolyMatrix) -> str:
    if P.shape != Q.shape:
        return f"shape {P.shape} vs {Q.shape}"
    for i, (r, s) in enumerate(zip(P.rows, Q.rows)):
        for j, (a, b) in enumerate(zip(r, s)):
            if a != b:
                return f"entry ({i},{j}): {a} vs {b}"
    return ""


def _check_trace(cert: FactorCertificate, report: VerificationReport) -> None:
    X = cert.trace_input
    n = cert.C.n_rows
    field = cert.C.field
    problems = []
    expected_start = cert.C.shift(cert.m_x, cert.m_y)
    if X != expected_start:
        problems.append("trace input is not the denominator-cleared input")
    acc = PolyMatrix.identity(n, field)
    var = {"x": LaurentPoly.x(field), "y": LaurentPoly.y(field)}
    for k, st in enumerate(cert.trace):
        if st.X != X:
            problems.append(f"step {k} does not continue from the previous remainder")
            break
        if st.A @ st.X_next != st.X:
            problems.append(f"step {k}: A @ X_next != X")
        if not st.A.member(BASE):
            problems.append(f"step {k}: A not over k[x, y]")
        if det(st.A) != var.get(st.variable):
            problems.append(f"step {k}: det A != {st.variable}")
        acc = acc @ st.A
        X = st.X_next
    if not problems and acc.shift(-cert.m_x, 0) != cert.A:
        problems.append("extracted factors do not assemble to A")
    report.add("trace", not problems, "; ".join(problems) or f"{len(cert.trace)} steps telescope")


@verify_certificate.register
def _(cert: FactorCertificate) -> VerificationReport:
    r = VerificationReport()
    C, A, B = cert.C, cert.A, cert.B
    shape_ok = C.is_square() and A.shape == C.shape == B.shape
    r.add("shape", shape_ok, "" if shape_ok else f"C {C.shape}, A {A.shape}, B {B.shape}")
    if not shape_ok:
        return r
    r.add("a_tag", cert.a_tag <= LOC_X, f"A claimed over {cert.a_tag.name}")
    r.add("b_tag", cert.b_tag <= LOC_Y, f"B claimed over {cert.b_tag.name}")
    r.add("a_membership", A.member(cert.a_tag), _first_violation(A, cert.a_tag))
    r.add("b_membership", B.member(cert.b_tag), _first_violation(B, cert.b_tag))
    prod = A @ B
    r.add("product", prod == C, _first_mismatch(prod, C))
    dA, dB, dC = det(A), det(B), det(C)
    r.add("det_a", dA == cert.det_a, f"computed {dA}, claimed {cert.det_a}")
    r.add("det_b", dB == cert.det_b, f"computed {dB}, claimed {cert.det_b}")
    if cert.group is MatGroupClaim.SL:
        r.add("input_group", dC.is_one(), f"det C = {dC}, SL claimed")
        r.add("group_a", cert.det_a.is_one(), f"det A claimed {cert.det_a}, SL")
        r.add("group_b", cert.det_b.is_one(), f"det B claimed {cert.det_b}, SL")
    else:
        r.add("input_group", LOC_XY.is_unit(dC), f"det C = {dC}, GL claimed")
        r.add("group_a", cert.a_tag.is_unit(cert.det_a), f"det A claimed {cert.det_a}, GL over {cert.a_tag.name}")
        r.add("group_b", cert.b_tag.is_unit(cert.det_b), f"det B claimed {cert.det_b}, GL over {cert.b_tag.name}")
    if cert.trace:
        _check_trace(cert, r)
    if cert.inner is not None:
        ok = cert.D_x is not None and cert.D_y is not None and cert.D_x @ cert.inner.C @ cert.D_y == C
        r.add("unit_split", ok, "C == D_x @ C0 @ D_y")
        r.extend(verify_certificate(cert.inner), "inner.")
    return r


@verify_certificate.register
def _(cert: DoublingCertificate) -> VerificationReport:
    r = VerificationReport()
    n = cert.A_S.n_rows
    field = cert.A_S.field
    ident = PolyMatrix.identity(n, field)
    inv_ok = (
        cert.A_S.is_square()
        and cert.A_S_inv.shape == cert.A_S.shape
        and cert.A_S @ cert.A_S_inv == ident
        and cert.A_S_inv @ cert.A_S == ident
    )
    r.add("inverse", inv_ok, "A_S @ A_S^-1 == I")
    blocks = PolyMatrix.block_diag(cert.A_S, cert.A_S_inv)
    r.add("doubled_blocks", blocks == cert.doubled, _first_mismatch(blocks, cert.doubled))
    dd = det(cert.doubled) if cert.doubled.is_square() else None
    r.add("doubled_det", dd is not None and dd.is_one(), f"det = {dd}")
    r.add("inner_input", cert.inner.C == cert.doubled, _first_mismatch(cert.inner.C, cert.doubled))
    r.extend(verify_certificate(cert.inner), "inner.")
    return r


@verify_certificate.register
def _(step: ExtractionStep) -> VerificationReport:
    r = VerificationReport()
    var = LaurentPoly.x(step.X.field) if step.variable == "x" else LaurentPoly.y(step.X.field)
    r.add("a_membership", step.A.member(BASE), _first_violation(step.A, BASE))
    prod = step.A @ step.X_next
    r.add("product", prod == step.X, _first_mismatch(prod, step.X))
    dA = det(step.A)
    r.add("det_a", dA == var, f"det A = {dA}")
    Z = replay(step.V, replay(step.U, step.X))
    k = step.pivot_row
    ok = 0 <= k < Z.n_rows and all(
        (a >= 1) if step.variable == "x" else (b >= 1) for e in Z.rows[k] for a, b in e._t
    )
    r.add("divisible_row", ok, f"row {k} of U X V divisible by {step.variable}")
    return r
