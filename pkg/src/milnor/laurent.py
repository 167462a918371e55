"""Sparse bivariate Laurent polynomials over a coefficient field.

A :class:`LaurentPoly` is an immutable map ``(a, b) -> c`` meaning
``sum c * x**a * y**b`` with ``a, b`` possibly negative. Zero coefficients
are never stored, so structural equality is mathematical equality.

The four rings of the localization square are subsets of the same carrier,
distinguished only by which exponents may be negative; see :class:`RingTag`.
"""

from __future__ import annotations

import enum
import re
from types import MappingProxyType

from .coeffs import SCALAR_TYPES, default_field
from .errors import (
    DivisionByZero,
    ExponentOverflow,
    FieldMismatch,
    NotDivisible,
    NotInDomain,
    ParseError,
)

# Exponents are bounded like machine integers; exceeding this is an error
# rather than a silent wrap.
EXPONENT_LIMIT = 2**31 - 1


def _check_exponent(e: int) -> int:
    if not -EXPONENT_LIMIT <= e <= EXPONENT_LIMIT:
        raise ExponentOverflow(f"exponent {e} exceeds +-{EXPONENT_LIMIT}")
    return e


class RingTag(enum.Enum):
    """Corner of the square L(k[x,y], x, y) that an element is claimed to lie in.

    ======== =================== ==========================
    tag      ring                support condition on (a, b)
    ======== =================== ==========================
    BASE     k[x, y]             a >= 0 and b >= 0
    LOC_X    k[x^+-1, y]         b >= 0
    LOC_Y    k[x, y^+-1]         a >= 0
    LOC_XY   k[x^+-1, y^+-1]     none
    ======== =================== ==========================
    """

    BASE = "BASE"
    LOC_X = "LOC_X"
    LOC_Y = "LOC_Y"
    LOC_XY = "LOC_XY"

    @property
    def x_inverted(self) -> bool:
        return self in (RingTag.LOC_X, RingTag.LOC_XY)

    @property
    def y_inverted(self) -> bool:
        return self in (RingTag.LOC_Y, RingTag.LOC_XY)

    def admits(self, a: int, b: int) -> bool:
        return (a >= 0 or self.x_inverted) and (b >= 0 or self.y_inverted)

    def __le__(self, other: RingTag) -> bool:
        """Subring order."""
        return (not self.x_inverted or other.x_inverted) and (
            not self.y_inverted or other.y_inverted
        )

    def __lt__(self, other: RingTag) -> bool:
        return self is not other and self <= other

    def join(self, other: RingTag) -> RingTag:
        """Smallest corner containing both."""
        return RingTag.from_flags(
            self.x_inverted or other.x_inverted, self.y_inverted or other.y_inverted
        )

    def meet(self, other: RingTag) -> RingTag:
        return RingTag.from_flags(
            self.x_inverted and other.x_inverted, self.y_inverted and other.y_inverted
        )

    @staticmethod
    def from_flags(x_inverted: bool, y_inverted: bool) -> RingTag:
        if x_inverted:
            return RingTag.LOC_XY if y_inverted else RingTag.LOC_X
        return RingTag.LOC_Y if y_inverted else RingTag.BASE

    def is_unit(self, p: LaurentPoly) -> bool:
        """Units of each corner are monomials ``c x^a y^b`` with the
        non-inverted variables absent."""
        if len(p._t) != 1 or not self.contains(p):
            return False
        ((a, b),) = p._t
        return (a == 0 or self.x_inverted) and (b == 0 or self.y_inverted)

    def contains(self, p: LaurentPoly) -> bool:
        if self is RingTag.LOC_XY:
            return True
        xi, yi = self.x_inverted, self.y_inverted
        for a, b in p._t:
            if (a < 0 and not xi) or (b < 0 and not yi):
                return False
        return True


BASE, LOC_X, LOC_Y, LOC_XY = RingTag.BASE, RingTag.LOC_X, RingTag.LOC_Y, RingTag.LOC_XY


class LaurentPoly:
    """Immutable sparse Laurent polynomial in ``x`` and ``y``."""

    __slots__ = ("_t", "field", "_h")

    def __init__(self, terms=(), field=None):
        field = field or default_field()
        items = terms.items() if hasattr(terms, "items") else terms
        t: dict = {}
        for (a, b), c in items:
            key = (_check_exponent(int(a)), _check_exponent(int(b)))
            c = field.coerce(c)
            if key in t:
                c = field.reduce(t[key] + c)
            t[key] = c
        self._t = {k: c for k, c in t.items() if c}
        self.field = field
        self._h = None

    @classmethod
    def _new(cls, t: dict, field) -> LaurentPoly:
        # Trusted constructor: t already canonical.
        obj = object.__new__(cls)
        obj._t = t
        obj.field = field
        obj._h = None
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field=None) -> LaurentPoly:
        return cls._new({}, field or default_field())

    @classmethod
    def one(cls, field=None) -> LaurentPoly:
        return cls.monomial(0, 0, 1, field)

    @classmethod
    def const(cls, c, field=None) -> LaurentPoly:
        return cls.monomial(0, 0, c, field)

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c=1, field=None) -> LaurentPoly:
        field = field or default_field()
        c = field.coerce(c)
        if not c:
            return cls._new({}, field)
        return cls._new({(_check_exponent(a), _check_exponent(b)): c}, field)

    @classmethod
    def x(cls, field=None) -> LaurentPoly:
        return cls.monomial(1, 0, 1, field)

    @classmethod
    def y(cls, field=None) -> LaurentPoly:
        return cls.monomial(0, 1, 1, field)

    # -- inspection --------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._t)

    def items(self):
        return self._t.items()

    def coefficient(self, a: int, b: int):
        return self._t.get((a, b), 0)

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_one(self) -> bool:
        return len(self._t) == 1 and self._t.get((0, 0)) == 1

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and (0, 0) in self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def monomial_data(self):
        """``(c, a, b)`` for a monomial ``c x^a y^b``."""
        if len(self._t) != 1:
            raise ValueError(f"{self} is not a monomial")
        ((a, b), c), = self._t.items()
        return c, a, b

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._t.get((0, 0), 0)

    def min_exponents(self):
        """``(min a, min b)`` over the support; ``(0, 0)`` for zero."""
        if not self._t:
            return 0, 0
        return min(a for a, _ in self._t), min(b for _, b in self._t)

    def max_exponents(self):
        if not self._t:
            return 0, 0
        return max(a for a, _ in self._t), max(b for _, b in self._t)

    def member(self, tag: RingTag) -> bool:
        return tag.contains(self)

    def tag(self) -> RingTag:
        """Smallest corner containing this element."""
        amin, bmin = self.min_exponents()
        return RingTag.from_flags(amin < 0, bmin < 0)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, SCALAR_TYPES) and not isinstance(other, bool):
            return LaurentPoly.const(other, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._t:
            return self
        if not self._t:
            return other
        red = self.field.reduce
        t = dict(self._t)
        for k, c in other._t.items():
            s = t.get(k)
            if s is None:
                t[k] = c
            else:
                s = red(s + c)
                if s:
                    t[k] = s
                else:
                    del t[k]
        return LaurentPoly._new(t, self.field)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return LaurentPoly._new({k: red(-c) for k, c in self._t.items()}, self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        s, o = self._t, other._t
        if not s or not o:
            return LaurentPoly._new({}, self.field)
        if _may_overflow(s, o):
            _check_product_exponents(s, o)
        red = self.field.reduce
        if len(o) == 1:
            ((oa, ob), oc), = o.items()
            if oc == 1:
                return LaurentPoly._new({(a + oa, b + ob): c for (a, b), c in s.items()}, self.field)
            t = {(a + oa, b + ob): red(c * oc) for (a, b), c in s.items()}
            return LaurentPoly._new({k: c for k, c in t.items() if c}, self.field)
        t: dict = {}
        get = t.get
        for (a1, b1), c1 in s.items():
            for (a2, b2), c2 in o.items():
                k = (a1 + a2, b1 + b2)
                prev = get(k)
                t[k] = red(c1 * c2) if prev is None else red(prev + c1 * c2)
        return LaurentPoly._new({k: c for k, c in t.items() if c}, self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if len(self._t) != 1:
                raise NotDivisible(f"{self} is not a unit; cannot raise to {e}")
            c, a, b = self.monomial_data()
            return LaurentPoly.monomial(a * e, b * e, self.field.inv(c) ** -e, self.field)
        result = LaurentPoly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def scale(self, c) -> LaurentPoly:
        c = self.field.coerce(c)
        red = self.field.reduce
        t = {k: red(v * c) for k, v in self._t.items()}
        return LaurentPoly._new({k: v for k, v in t.items() if v}, self.field)

    def shift(self, da: int, db: int) -> LaurentPoly:
        """Multiply by the monomial ``x^da y^db``."""
        if da == 0 and db == 0:
            return self
        t = {(_check_exponent(a + da), _check_exponent(b + db)): c for (a, b), c in self._t.items()}
        return LaurentPoly._new(t, self.field)

    def swap_xy(self) -> LaurentPoly:
        return LaurentPoly._new({(b, a): c for (a, b), c in self._t.items()}, self.field)

    def filter(self, pred) -> LaurentPoly:
        """Sub-polynomial of the terms whose exponent pair satisfies ``pred(a, b)``."""
        return LaurentPoly._new({k: c for k, c in self._t.items() if pred(*k)}, self.field)

    def div_exact(self, q: LaurentPoly) -> LaurentPoly:
        """Exact quotient in k[x^+-1, y^+-1]; raises :class:`NotDivisible` if none."""
        return div_exact(self, q)

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.field == other.field and self._t == other._t
        if isinstance(other, SCALAR_TYPES) and not isinstance(other, bool):
            return self._t == LaurentPoly.const(other, self.field)._t
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    def __reduce__(self):
        return (_rebuild, (tuple(self._t.items()), self.field))


def _rebuild(items, field):
    return LaurentPoly._new(dict(items), field)


def _may_overflow(s, o) -> bool:
    lim = EXPONENT_LIMIT // 2
    return any(abs(a) > lim or abs(b) > lim for a, b in s) or any(
        abs(a) > lim or abs(b) > lim for a, b in o
    )


def _check_product_exponents(s, o) -> None:
    sa = [a for a, _ in s]
    sb = [b for _, b in s]
    oa = [a for a, _ in o]
    ob = [b for _, b in o]
    for lo, hi in (
        (min(sa) + min(oa), max(sa) + max(oa)),
        (min(sb) + min(ob), max(sb) + max(ob)),
    ):
        _check_exponent(lo)
        _check_exponent(hi)


def _lex_leading(t: dict):
    return max(t)


def div_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return ``r`` with ``q * r == p`` in k[x^+-1, y^+-1].

    Both operands are shifted to genuine polynomials coprime to ``x`` and
    ``y``; then ``q | p`` in the Laurent ring iff the shifted ``q`` divides the
    shifted ``p`` in k[x, y], which lex-order long division decides.
    """
    q = p._coerce(q)
    if not q._t:
        raise DivisionByZero("division by the zero polynomial")
    if not p._t:
        return p
    field = p.field
    if len(q._t) == 1:
        c, a, b = q.monomial_data()
        inv = field.inv(c)
        red = field.reduce
        return LaurentPoly._new({(pa - a, pb - b): red(pc * inv) for (pa, pb), pc in p._t.items()}, field)
    pa, pb = p.min_exponents()
    qa, qb = q.min_exponents()
    rem = {(a - pa, b - pb): c for (a, b), c in p._t.items()}
    den = {(a - qa, b - qb): c for (a, b), c in q._t.items()}
    lead_k = _lex_leading(den)
    lead_inv = field.inv(den[lead_k])
    red = field.reduce
    quot: dict = {}
    while rem:
        k = _lex_leading(rem)
        da, db = k[0] - lead_k[0], k[1] - lead_k[1]
        if da < 0 or db < 0:
            raise NotDivisible(f"{p} is not divisible by {q}")
        c = red(rem[k] * lead_inv)
        quot[(da, db)] = c
        for (a, b), dc in den.items():
            kk = (a + da, b + db)
            v = red(rem.get(kk, 0) - c * dc)
            if v:
                rem[kk] = v
            else:
                rem.pop(kk, None)
    return LaurentPoly._new(quot, field).shift(pa - qa, pb - qb)


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def member(p: LaurentPoly, tag: RingTag) -> bool:
    return tag.contains(p)


def reduce_mod_x(p: LaurentPoly, over: RingTag = BASE) -> LaurentPoly:
    """Class of ``p`` in R/(x), as the sub-polynomial of terms with ``a == 0``.

    ``over`` is the ring ``p`` is reduced from: BASE gives k[y], LOC_Y gives
    k[y^+-1]. Terms with ``a < 0`` have no meaning modulo ``x``.
    """
    if over.x_inverted:
        raise NotInDomain(f"x is a unit in {over.name}; reduction mod x is trivial")
    for a, b in p._t:
        if a < 0:
            raise NotInDomain(f"{p} has a negative power of x")
        if b < 0 and not over.y_inverted:
            raise NotInDomain(f"{p} is not in {over.name}")
    return p.filter(lambda a, b: a == 0)


def reduce_mod_y(p: LaurentPoly, over: RingTag = BASE) -> LaurentPoly:
    """Mirror image of :func:`reduce_mod_x`: keeps the terms with ``b == 0``."""
    mirrored = {BASE: BASE, LOC_X: LOC_Y, LOC_Y: LOC_X, LOC_XY: LOC_XY}[over]
    return reduce_mod_x(p.swap_xy(), mirrored).swap_xy()


# -- text format -------------------------------------------------------------


def _monomial_text(a: int, b: int) -> str:
    parts = []
    for var, e in (("x", a), ("y", b)):
        if e == 1:
            parts.append(var)
        elif e:
            parts.append(f"{var}^{e}")
    return "*".join(parts)


def term_order_key(k):
    """Graded order on exponent pairs, highest first."""
    a, b = k
    return (-(a + b), -a)


def format_poly(p: LaurentPoly) -> str:
    if not p._t:
        return "0"
    out = []
    fmt = p.field.format
    for k in sorted(p._t, key=term_order_key):
        c = p._t[k]
        s = fmt(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = _monomial_text(*k)
        if mono:
            body = mono if s == "1" else f"{s}*{mono}"
        else:
            body = s
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])|(\^)|([-+])|(\*)|(/)|(\()|(\)))")


class _Parser:
    def __init__(self, text: str, field):
        self.text = text
        self.field = field
        self.pos = 0
        self.toks = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise ParseError(f"unexpected character {text[i]!r}", text, i)
            start = m.start(m.lastindex)
            self.toks.append((m.lastindex, m.group(m.lastindex), start))
            i = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self) -> LaurentPoly:
        if not self.toks:
            raise ParseError("empty polynomial", self.text, 0)
        terms = {}
        sign = 1
        kind, val, _ = self.peek()
        if kind == 4:
            self.take()
            sign = -1 if val == "-" else 1
        self.term(sign, terms)
        while self.peek()[0] is not None:
            kind, val, _ = self.peek()
            if kind != 4:
                self.fail("expected '+' or '-' between terms")
            self.take()
            self.term(-1 if val == "-" else 1, terms)
        return LaurentPoly(terms.items(), self.field)

    def number(self) -> int:
        kind, val, _ = self.peek()
        if kind != 1:
            self.fail("expected a number")
        self.take()
        return int(val)

    def exponent(self) -> int:
        paren = self.peek()[0] == 7
        if paren:
            self.take()
        sign = 1
        kind, val, _ = self.peek()
        if kind == 4:
            self.take()
            sign = -1 if val == "-" else 1
        e = sign * self.number()
        if paren:
            if self.peek()[0] != 8:
                self.fail("expected ')'")
            self.take()
        return _check_exponent(e)

    def term(self, sign: int, terms: dict) -> None:
        coeff = self.field.coerce(sign)
        a = b = 0
        seen_factor = False
        while True:
            kind, val, pos = self.peek()
            if kind == 1:
                num = self.number()
                den = 1
                if self.peek()[0] == 6:
                    self.take()
                    den = self.number()
                    if den == 0:
                        raise ParseError("zero denominator", self.text, pos)
                coeff = self.field.reduce(coeff * self.field.ratio(num, den))
            elif kind == 2:
                self.take()
                e = 1
                if self.peek()[0] == 3:
                    self.take()
                    e = self.exponent()
                if val == "x":
                    a = _check_exponent(a + e)
                else:
                    b = _check_exponent(b + e)
            else:
                if not seen_factor:
                    self.fail("expected a coefficient or variable")
                break
            seen_factor = True
            if self.peek()[0] == 5:
                self.take()
                if self.peek()[0] not in (1, 2):
                    self.fail("expected a factor after '*'")
        k = (a, b)
        terms[k] = self.field.reduce(terms.get(k, 0) + coeff)


def parse_poly(text: str, field=None) -> LaurentPoly:
    """Parse e.g. ``"3*x^-1*y^2 + 1/2"``. Whitespace is insignificant."""
    return _Parser(text, field or default_field()).parse()


parse = parse_poly
format = format_poly  # noqa: A001


def x(field=None) -> LaurentPoly:
    return LaurentPoly.x(field)


def y(field=None) -> LaurentPoly:
    return LaurentPoly.y(field)
