"""Coefficient fields: exact rationals and prime fields F_p.

Over the rationals coefficients are ``gmpy2.mpq`` (GMP rationals, always
reduced with a positive denominator); over F_p they are ``int`` in
``[0, p)``. Both compare and hash equal to the matching ``int`` or
``fractions.Fraction``, so callers may pass and compare plain Python
numbers. A field object knows how to coerce, reduce, invert and print its
elements; polynomials hold a reference to their field.
"""

from __future__ import annotations

import os
from fractions import Fraction

from gmpy2 import mpq

from .errors import DivisionByZero, ParseError

MPQ = type(mpq())
SCALAR_TYPES = (int, Fraction, MPQ)


class RationalField:
    """The field of rational numbers."""

    characteristic = 0
    name = "rational"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __reduce__(self):
        return (RationalField, ())

    @staticmethod
    def reduce(c):
        return c

    def coerce(self, value):
        if isinstance(value, bool):
            raise TypeError("bool is not a coefficient")
        if isinstance(value, (int, Fraction, MPQ)):
            return mpq(value)
        if isinstance(value, str):
            return mpq(Fraction(value))
        raise TypeError(f"cannot coerce {value!r} to a rational")

    def ratio(self, num: int, den: int):
        if den == 0:
            raise DivisionByZero("zero denominator")
        return mpq(num, den)

    def inv(self, c):
        if not c:
            raise DivisionByZero("inverse of zero")
        return 1 / mpq(c)

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        return mpq(a) / b

    def to_fraction(self, c) -> Fraction:
        c = mpq(c)
        return Fraction(int(c.numerator), int(c.denominator))

    def format(self, c) -> str:
        return str(c)

    @property
    def spec(self) -> str:
        return "rational"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The prime field F_p with elements stored as ints in ``[0, p)``."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"fp:{p}"

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __reduce__(self):
        return (PrimeField, (self.p,))

    def reduce(self, c):
        return c % self.p

    def coerce(self, value):
        if isinstance(value, bool):
            raise TypeError("bool is not a coefficient")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, (Fraction, MPQ)):
            return self.ratio(int(value.numerator), int(value.denominator))
        raise TypeError(f"cannot coerce {value!r} to GF({self.p})")

    def ratio(self, num: int, den: int):
        if den % self.p == 0:
            raise DivisionByZero(f"denominator {den} vanishes mod {self.p}")
        return num * pow(den, -1, self.p) % self.p

    def inv(self, c):
        if c % self.p == 0:
            raise DivisionByZero("inverse of zero")
        return pow(c, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def to_fraction(self, c) -> Fraction:
        return Fraction(self.signed(c))

    def signed(self, c) -> int:
        """Representative in ``(-p/2, p/2]``."""
        return c - self.p if c > self.p // 2 else c

    def format(self, c) -> str:
        return str(self.signed(c))

    @property
    def spec(self) -> str:
        return self.name


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str):
    """Parse ``rational`` / ``qq`` / ``fp:<prime>``."""
    t = text.strip().lower()
    if t in ("rational", "qq", "q"):
        return QQ
    if t.startswith("fp:"):
        try:
            p = int(t[3:])
        except ValueError:
            raise ParseError(f"bad prime in field spec {text!r}", text, 3) from None
        return PrimeField(p)
    raise ParseError(f"unknown field {text!r}; use 'rational' or 'fp:<prime>'", text, 0)


_default_field = None


def default_field():
    """Session field: set once via :func:`set_default_field` or ``MILNOR_FIELD``."""
    global _default_field
    if _default_field is None:
        _default_field = parse_field(os.environ.get("MILNOR_FIELD", "rational"))
    return _default_field


def set_default_field(field) -> None:
    global _default_field
    if isinstance(field, str):
        field = parse_field(field)
    _default_field = field
