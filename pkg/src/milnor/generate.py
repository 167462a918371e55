"""Seeded random instances for tests, benchmarks and the ``gen`` command.

All generators take an explicit seed and use their own ``random.Random``,
so the same arguments always give the same instance.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .coeffs import QQ
from .laurent import BASE, LaurentPoly
from .matrix import PolyMatrix

_COEFFS = (1, -1, 2, -2, 3, -3, Fraction(1, 2), Fraction(-1, 2))


def _coeff(rng: random.Random, field):
    c = rng.choice(_COEFFS)
    return field.coerce(c) or field.coerce(1)


def random_param(rng: random.Random, field=QQ, lo: int = -1, hi: int = 1, terms=(1, 2)) -> LaurentPoly:
    """A monomial or binomial with exponents in ``[lo, hi]``."""
    p = LaurentPoly.zero(field)
    for _ in range(rng.choice(terms)):
        p = p + LaurentPoly.monomial(rng.randint(lo, hi), rng.randint(lo, hi), _coeff(rng, field), field)
    return p or LaurentPoly.one(field)


def _transvect_rows(rows, i, j, lam):
    rows[i] = [a + lam * b for a, b in zip(rows[i], rows[j])]


def random_sl(n: int, complexity: int, seed: int, field=QQ) -> PolyMatrix:
    """Product of ``complexity`` random transvections over k[x^+-1, y^+-1]."""
    if n < 1 or complexity < 0:
        raise ValueError("need n >= 1 and complexity >= 0")
    rng = random.Random(seed)
    rows = PolyMatrix.identity(n, field).to_lists()
    if n == 1:
        return PolyMatrix(rows, field=field)
    for _ in range(complexity):
        i, j = rng.sample(range(n), 2)
        _transvect_rows(rows, i, j, random_param(rng, field))
    return PolyMatrix(rows, field=field)


def random_unit(rng: random.Random, field=QQ, span: int = 1) -> LaurentPoly:
    return LaurentPoly.monomial(rng.randint(-span, span), rng.randint(-span, span), _coeff(rng, field), field)


def random_gl(n: int, complexity: int, seed: int, field=QQ) -> PolyMatrix:
    """A random unit diagonal times :func:`random_sl`."""
    rng = random.Random(seed)
    S = random_sl(n, complexity, rng.getrandbits(64), field)
    units = [random_unit(rng, field) for _ in range(n)]
    return PolyMatrix([[u * e for e in r] for u, r in zip(units, S.rows)], field=field)


def random_smith(n: int, seed: int, domain: str = "zz", field=QQ, bound: int = 50, degree: int = 6):
    """Random square matrix over Z (entries in ``[-bound, bound]``) or k[y]
    (degrees ``<= degree``, small integer coefficients), as nested lists."""
    rng = random.Random(seed)
    if domain == "zz":
        return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
    if domain != "ky":
        raise ValueError(f"unknown domain {domain!r}")
    out = []
    for _ in range(n):
        row = []
        for _ in range(n):
            d = rng.randint(-1, degree)  # -1 gives the zero polynomial
            p = LaurentPoly.zero(field)
            for b in range(d + 1):
                c = rng.randint(-5, 5)
                if c:
                    p = p + LaurentPoly.monomial(0, b, field.coerce(c), field)
            row.append(p)
        out.append(row)
    return out


def random_base_monomial_det(n: int, s: int, t: int, seed: int, field=QQ, mix: int = 2) -> PolyMatrix:
    """Matrix over k[x, y] with determinant exactly ``x^s y^t``.

    Built as a shuffled product of ``diag(.., x, ..)``, ``diag(.., y, ..)``
    and ``mix`` transvections per diagonal factor whose parameters are
    monomials of degree at most 1 in each variable.
    """
    rng = random.Random(seed)
    rows = PolyMatrix.identity(n, field).to_lists()
    factors = ["x"] * s + ["y"] * t
    rng.shuffle(factors)
    factors += [None]
    for f in factors:
        if n > 1:
            for _ in range(mix):
                i, j = rng.sample(range(n), 2)
                _transvect_rows(rows, i, j, random_param(rng, field, 0, 1, terms=(1,)))
        if f is not None:
            k = rng.randrange(n)
            v = LaurentPoly.x(field) if f == "x" else LaurentPoly.y(field)
            rows[k] = [v * e for e in rows[k]]
    return PolyMatrix(rows, tag=BASE, field=field)
