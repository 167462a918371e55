"""Dense exact matrices over the Laurent carrier, plus generic determinants.

:class:`PolyMatrix` holds :class:`~milnor.laurent.LaurentPoly` entries and a
:class:`~milnor.laurent.RingTag` claiming which corner of the square all
entries live in. The claim is checked whenever it is supplied explicitly and
recomputed (as a join of the operands' tags) otherwise, so a matrix never
carries a tag one of its entries violates.

``det_bareiss`` and ``det_cofactor`` work on plain nested lists over any
integral domain whose elements support ``+ - *`` (``int``, LaurentPoly).
"""

from __future__ import annotations

import enum
import os

from .coeffs import SCALAR_TYPES, default_field
from .errors import (
    FieldMismatch,
    InternalCheckFailed,
    MembershipError,
    NotAUnit,
    ParseError,
    ShapeError,
)
from .laurent import BASE, LOC_XY, LaurentPoly, RingTag, parse_poly

# Set MILNOR_AUDIT=1 to re-check every entry against its tag after each
# operation that derives a tag instead of checking it.
AUDIT = bool(os.environ.get("MILNOR_AUDIT"))


class MatGroupClaim(enum.Enum):
    MAT = "MAT"
    GL = "GL"
    SL = "SL"


def _exact_div(a, b):
    if isinstance(a, int):
        q, r = divmod(a, b)
        if r:
            raise InternalCheckFailed(f"Bareiss division {a}/{b} is not exact")
        return q
    return a.div_exact(b)


def det_bareiss(rows, one=None, zero=None):
    """Fraction-free Gaussian elimination (Bareiss).

    Every intermediate division is exact in any integral domain. A zero pivot
    is replaced by the first nonzero entry below it, flipping the sign.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return 1 if one is None else one
    m = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return m[0][0] * 0 if zero is None else zero
        p = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                v = p * ri[j] - a * rk[j]
                ri[j] = v if prev is None else _exact_div(v, prev)
        prev = p
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def det_cofactor(rows):
    """Laplace expansion along the first row; exponential, for small n only."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        a = rows[0][j]
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * det_cofactor(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return rows[0][0] * 0 if total is None else total


class PolyMatrix:
    """Immutable dense matrix of Laurent polynomials with a ring tag."""

    __slots__ = ("rows", "n_rows", "n_cols", "tag", "field")

    def __init__(self, rows, tag: RingTag | None = None, field=None, n_cols: int | None = None):
        field = field or _field_of(rows) or default_field()
        conv = []
        for r in rows:
            conv.append(tuple(_to_poly(e, field) for e in r))
        widths = {len(r) for r in conv}
        if len(widths) > 1:
            raise ShapeError("ragged matrix rows")
        self.rows = tuple(conv)
        self.n_rows = len(conv)
        self.n_cols = widths.pop() if widths else (n_cols or 0)
        self.field = field
        inferred = _infer_tag(self.rows)
        if tag is None:
            tag = inferred
        elif not inferred <= tag:
            bad = next(e for r in self.rows for e in r if not tag.contains(e))
            raise MembershipError(f"entry {bad} is not in {tag.name}")
        self.tag = tag

    @classmethod
    def _trusted(cls, rows, tag, field, n_cols=None) -> PolyMatrix:
        obj = object.__new__(cls)
        obj.rows = tuple(tuple(r) for r in rows)
        obj.n_rows = len(obj.rows)
        obj.n_cols = len(obj.rows[0]) if obj.rows else (n_cols or 0)
        obj.tag = tag
        obj.field = field
        if AUDIT:
            obj.audit()
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int, field=None) -> PolyMatrix:
        field = field or default_field()
        one, zero = LaurentPoly.one(field), LaurentPoly.zero(field)
        return cls._trusted([[one if i == j else zero for j in range(n)] for i in range(n)], BASE, field)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int, field=None) -> PolyMatrix:
        field = field or default_field()
        zero = LaurentPoly.zero(field)
        return cls._trusted([[zero] * n_cols for _ in range(n_rows)], BASE, field, n_cols)

    @classmethod
    def diag(cls, entries, field=None) -> PolyMatrix:
        entries = list(entries)
        field = field or _field_of([entries]) or default_field()
        entries = [_to_poly(e, field) for e in entries]
        zero = LaurentPoly.zero(field)
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], field=field)

    @classmethod
    def block_diag(cls, *blocks: PolyMatrix) -> PolyMatrix:
        field = blocks[0].field
        n = sum(b.n_rows for b in blocks)
        m = sum(b.n_cols for b in blocks)
        zero = LaurentPoly.zero(field)
        rows = [[zero] * m for _ in range(n)]
        r0 = c0 = 0
        tag = BASE
        for b in blocks:
            for i, row in enumerate(b.rows):
                rows[r0 + i][c0:c0 + b.n_cols] = row
            r0 += b.n_rows
            c0 += b.n_cols
            tag = tag.join(b.tag)
        return cls._trusted(rows, tag, field, m)

    @classmethod
    def parse(cls, text: str, field=None, tag=None) -> PolyMatrix:
        return cls(parse_matrix_rows(text, field), tag=tag, field=field or default_field())

    # -- access ------------------------------------------------------------

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def row(self, i: int):
        return self.rows[i]

    def column(self, j: int):
        return tuple(r[j] for r in self.rows)

    def to_lists(self):
        return [list(r) for r in self.rows]

    def entries(self):
        for r in self.rows:
            yield from r

    def submatrix(self, rows, cols) -> PolyMatrix:
        rows, cols = list(rows), list(cols)
        return PolyMatrix._trusted(
            [[self.rows[i][j] for j in cols] for i in rows], self.tag, self.field, len(cols)
        )

    def minor(self, i: int, j: int) -> PolyMatrix:
        return self.submatrix(
            [k for k in range(self.n_rows) if k != i], [k for k in range(self.n_cols) if k != j]
        )

    def audit(self) -> None:
        for e in self.entries():
            if not self.tag.contains(e):
                raise MembershipError(f"entry {e} violates tag {self.tag.name}")

    def min_exponents(self):
        amin = bmin = 0
        for e in self.entries():
            if e:
                a, b = e.min_exponents()
                amin, bmin = min(amin, a), min(bmin, b)
        return amin, bmin

    def member(self, tag: RingTag) -> bool:
        return all(tag.contains(e) for e in self.entries())

    def retag(self, tag: RingTag | None = None) -> PolyMatrix:
        """Same entries, new tag (checked); ``None`` picks the smallest fitting corner."""
        return PolyMatrix(self.rows, tag=tag, field=self.field, n_cols=self.n_cols)

    # -- arithmetic --------------------------------------------------------

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        return mat_mul(self, other)

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        rows = [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        return PolyMatrix._trusted(rows, self.tag.join(other.tag), self.field, self.n_cols)

    def __neg__(self) -> PolyMatrix:
        return PolyMatrix._trusted([[-a for a in r] for r in self.rows], self.tag, self.field, self.n_cols)

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def scale(self, c) -> PolyMatrix:
        """Entrywise product with a scalar; the tag is recomputed from supports."""
        c = _to_poly(c, self.field)
        rows = [[c * e for e in r] for r in self.rows]
        return PolyMatrix._trusted(rows, _infer_tag(rows), self.field, self.n_cols)

    def shift(self, da: int, db: int) -> PolyMatrix:
        """Multiply every entry by ``x^da y^db``."""
        rows = [[e.shift(da, db) for e in r] for r in self.rows]
        return PolyMatrix._trusted(rows, _infer_tag(rows), self.field, self.n_cols)

    def swap_xy(self) -> PolyMatrix:
        mirror = {BASE: BASE, RingTag.LOC_X: RingTag.LOC_Y, RingTag.LOC_Y: RingTag.LOC_X, LOC_XY: LOC_XY}
        rows = [[e.swap_xy() for e in r] for r in self.rows]
        return PolyMatrix._trusted(rows, mirror[self.tag], self.field, self.n_cols)

    def map(self, fn) -> PolyMatrix:
        return PolyMatrix([[fn(e) for e in r] for r in self.rows], field=self.field, n_cols=self.n_cols)

    def transpose(self) -> PolyMatrix:
        return PolyMatrix._trusted(list(zip(*self.rows)), self.tag, self.field, self.n_rows)

    @property
    def T(self) -> PolyMatrix:
        return self.transpose()

    def det(self) -> LaurentPoly:
        return det(self)

    def inverse_unimodular(self) -> PolyMatrix:
        return inverse_unimodular(self)

    def is_identity(self) -> bool:
        return self.is_square() and all(
            (e.is_one() if i == j else not e) for i, r in enumerate(self.rows) for j, e in enumerate(r)
        )

    def is_diagonal(self) -> bool:
        return all(not e for i, r in enumerate(self.rows) for j, e in enumerate(r) if i != j)

    # -- text --------------------------------------------------------------

    def format(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "]"

    def to_json(self):
        return [[str(e) for e in r] for r in self.rows]

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"PolyMatrix({self.format()}, tag={self.tag.name})"

    def pretty(self) -> str:
        cells = [[str(e) for e in r] for r in self.rows]
        if not cells:
            return "[]"
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(w) for c in r) + " ]" for r in cells)


def _field_of(rows):
    for r in rows:
        for e in r:
            if isinstance(e, LaurentPoly):
                return e.field
    return None


def _to_poly(e, field) -> LaurentPoly:
    if isinstance(e, LaurentPoly):
        if e.field != field:
            raise FieldMismatch(f"entry over {e.field!r}, matrix over {field!r}")
        return e
    if isinstance(e, str):
        return parse_poly(e, field)
    if isinstance(e, SCALAR_TYPES) and not isinstance(e, bool):
        return LaurentPoly.const(e, field)
    raise TypeError(f"cannot use {e!r} as a matrix entry")


def _infer_tag(rows) -> RingTag:
    xi = yi = False
    for r in rows:
        for e in r:
            for a, b in e._t:
                if a < 0:
                    xi = True
                if b < 0:
                    yi = True
            if xi and yi:
                return LOC_XY
    return RingTag.from_flags(xi, yi)


def mat_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    """Exact product; the result is tagged with the join of the inputs' tags."""
    if A.n_cols != B.n_rows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if A.field != B.field:
        raise FieldMismatch(f"{A.field!r} vs {B.field!r}")
    zero = LaurentPoly.zero(A.field)
    cols = list(zip(*B.rows)) if B.rows else [()] * B.n_cols
    out = []
    for r in A.rows:
        row = []
        for c in cols:
            s = zero
            for a, b in zip(r, c):
                if a and b:
                    s = s + a * b
            row.append(s)
        out.append(row)
    return PolyMatrix._trusted(out, A.tag.join(B.tag), A.field, B.n_cols)


def det(A: PolyMatrix) -> LaurentPoly:
    """Cofactor expansion for n <= 3, Bareiss elimination above."""
    if not A.is_square():
        raise ShapeError(f"determinant of a {A.shape} matrix")
    if A.n_rows == 0:
        return LaurentPoly.one(A.field)
    rows = A.to_lists()
    return det_cofactor(rows) if A.n_rows <= 3 else det_bareiss(rows)


def is_unit_of(p: LaurentPoly, tag: RingTag) -> bool:
    return tag.is_unit(p)


def adjugate(A: PolyMatrix) -> PolyMatrix:
    n = A.n_rows
    if n == 1:
        return PolyMatrix._trusted([[LaurentPoly.one(A.field)]], BASE, A.field)
    rows = A.to_lists()
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            d = det_cofactor(minor) if n - 1 <= 3 else det_bareiss(minor)
            out[j][i] = -d if (i + j) % 2 else d
    return PolyMatrix._trusted(out, A.tag, A.field)


def inverse_unimodular(A: PolyMatrix, tag: RingTag | None = None) -> PolyMatrix:
    """Inverse over the ring ``tag`` (default: A's tag), as adjugate / det.

    The determinant must be a unit there, i.e. a monomial in the inverted
    variables, so dividing the adjugate by it is always exact.
    """
    if not A.is_square():
        raise ShapeError(f"inverse of a {A.shape} matrix")
    tag = tag or A.tag
    if not A.tag <= tag:
        raise MembershipError(f"matrix tagged {A.tag.name} is not over {tag.name}")
    if A.n_rows == 0:
        return A
    d = det(A)
    if not tag.is_unit(d):
        raise NotAUnit(f"det = {d} is not a unit of {tag.name}")
    inv_d = d ** -1
    adj = adjugate(A)
    rows = [[inv_d * e for e in r] for r in adj.rows]
    return PolyMatrix(rows, tag=tag, field=A.field)


def parse_matrix_rows(text: str, field=None):
    """Parse ``[[p, q], [r, s]]`` (polynomial grammar entries) or a JSON array
    of polynomial strings. Returns nested lists of LaurentPoly."""
    field = field or default_field()
    s = text.strip()
    if s.startswith("[") and '"' in s:
        import json

        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON matrix: {exc.msg}", text, exc.pos) from None
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ParseError("JSON matrix must be an array of arrays", text, 0)
        return [[parse_poly(str(e), field) for e in r] for r in data]
    rows = []
    i = 0
    n = len(text)

    def skip_ws(k):
        while k < n and text[k].isspace():
            k += 1
        return k

    i = skip_ws(i)
    if i >= n or text[i] != "[":
        raise ParseError("matrix must start with '['", text, i)
    i = skip_ws(i + 1)
    if i < n and text[i] == "]":
        return []
    while True:
        if i >= n or text[i] != "[":
            raise ParseError("expected '[' to open a row", text, i)
        i += 1
        row = []
        while True:
            start = i
            while i < n and text[i] not in ",]":
                if text[i] == "[":
                    raise ParseError("unexpected '['", text, i)
                i += 1
            if i >= n:
                raise ParseError("unterminated row", text, i)
            chunk = text[start:i]
            if chunk.strip():
                try:
                    row.append(parse_poly(chunk, field))
                except ParseError as exc:
                    raise ParseError(str(exc).rsplit(" (line", 1)[0], text, start + exc.pos) from None
            elif text[i] == "," or row:
                raise ParseError("empty matrix entry", text, start)
            if text[i] == "]":
                i += 1
                break
            i += 1
        rows.append(row)
        i = skip_ws(i)
        if i < n and text[i] == ",":
            i = skip_ws(i + 1)
            continue
        if i < n and text[i] == "]":
            i = skip_ws(i + 1)
            if i != n:
                raise ParseError("trailing characters after matrix", text, i)
            break
        raise ParseError("expected ',' or ']' after a row", text, i)
    if len({len(r) for r in rows}) > 1:
        raise ParseError("rows have different lengths", text, 0)
    return rows
