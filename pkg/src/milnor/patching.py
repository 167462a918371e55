"""The square k[x,y] -> k[x^+-1,y], k[x,y^+-1] -> k[x^+-1,y^+-1] as an object.

Element-level checks (sum decomposition, the cartesian property,
truncations mod x^k) and free patching data: a rank ``n`` and a transition
matrix ``zeta`` over k[x^+-1, y^+-1]. Gluing such a datum produces explicit
bases over the two middle rings by factoring ``zeta^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import MembershipError, NotGL, RankMismatch, ShapeError
from .factorization import FactorCertificate, factor_gl_split
from .report import VerificationReport, verify_certificate
from .laurent import BASE, LOC_X, LOC_XY, LOC_Y, LaurentPoly, RingTag
from .matrix import PolyMatrix, det, inverse_unimodular


class LocalizationSquare:
    """The four corners with their inclusions.

    ``phi(r) = (r, r)`` embeds the top corner into the product of the middle
    ones and ``psi(f, g) = f - g`` is the difference map to the bottom corner.
    The square is cartesian (``ker psi`` is the image of ``phi``) but ``psi``
    is not onto.
    """

    corners = (BASE, LOC_X, LOC_Y, LOC_XY)
    localized = ("x", "y")

    def __repr__(self):
        return "LocalizationSquare(k[x,y]; x, y)"

    @staticmethod
    def include(p: LaurentPoly, src: RingTag, dst: RingTag) -> LaurentPoly:
        """The inclusion ``src -> dst`` (identity on the shared carrier)."""
        if not src <= dst:
            raise ValueError(f"no inclusion {src.name} -> {dst.name}")
        if not src.contains(p):
            raise MembershipError(f"{p} is not in {src.name}")
        return p

    def phi(self, r: LaurentPoly):
        self.include(r, BASE, LOC_X)
        return (r, r)

    def psi(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        self.include(f, LOC_X, LOC_XY)
        self.include(g, LOC_Y, LOC_XY)
        return f - g

    @staticmethod
    def is_cartesian_at(p: LaurentPoly) -> bool:
        """``p`` in both middle corners implies ``p`` in the top corner."""
        return not (p.member(LOC_X) and p.member(LOC_Y)) or p.member(BASE)


SQUARE = LocalizationSquare()


# -- element level -------------------------------------------------------------


@dataclass(frozen=True)
class SumDecomposition:
    """``f == part_x + part_y + obstruction``."""

    f: LaurentPoly
    part_x: LaurentPoly
    part_y: LaurentPoly
    obstruction: LaurentPoly

    @property
    def in_sum(self) -> bool:
        """Whether ``f`` lies in k[x^+-1, y] + k[x, y^+-1]."""
        return not self.obstruction

    @property
    def verdict(self) -> str:
        return "in R_x + R_y" if self.in_sum else "not in R_x + R_y"


def decompose_sum(f: LaurentPoly) -> SumDecomposition:
    """Split ``f`` by support: ``b >= 0`` to ``part_x``, ``a >= 0 > b`` to
    ``part_y``, both negative to the obstruction."""
    px, py, ob = {}, {}, {}
    for (a, b), c in f._t.items():
        if b >= 0:
            px[(a, b)] = c
        elif a >= 0:
            py[(a, b)] = c
        else:
            ob[(a, b)] = c
    new = LaurentPoly._new
    return SumDecomposition(f, new(px, f.field), new(py, f.field), new(ob, f.field))


class _Mismatch:
    def __repr__(self):
        return "MISMATCH"

    def __bool__(self):
        return False


MISMATCH = _Mismatch()


def check_cartesian_witness(f: LaurentPoly, g: LaurentPoly):
    """Return ``f`` (an element of k[x, y]) if ``f == g``, else ``MISMATCH``.

    ``f`` must lie in k[x^+-1, y] and ``g`` in k[x, y^+-1]; anything else is
    rejected with :class:`MembershipError`.
    """
    if not f.member(LOC_X):
        raise MembershipError(f"{f} is not in LOC_X")
    if not g.member(LOC_Y):
        raise MembershipError(f"{g} is not in LOC_Y")
    if f != g:
        return MISMATCH
    if not f.member(BASE):  # would contradict LOC_X meet LOC_Y == BASE
        raise AssertionError(f"{f} lies in both middle corners but not in BASE")
    return f


@dataclass(frozen=True)
class TruncationReport:
    """Comparison of ``k[x,y]/(x^k)`` with ``k[x,y^+-1]/(x^k)`` at one sample."""

    k: int
    f: LaurentPoly
    truncated: LaurentPoly
    injective: bool
    preimage: Optional[LaurentPoly]
    witness: LaurentPoly

    @property
    def surjective_at_sample(self) -> bool:
        return self.preimage is not None


def truncation_iso_check(k: int, f: LaurentPoly) -> TruncationReport:
    """Look for a k[x, y] preimage of the class of ``f`` modulo ``x^k``.

    The class is represented by the terms with ``a < k``. A preimage exists
    exactly when none of those terms has ``b < 0``; otherwise those terms are
    returned as the cokernel witness. Injectivity holds because ``x^k``
    k[x, y^+-1] meets k[x, y] in ``x^k`` k[x, y], which on supports says that
    the truncation of a k[x, y] element is the same in both quotients; the
    report re-checks this on the sample.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not f.member(LOC_Y):
        raise MembershipError(f"{f} is not in LOC_Y")
    truncated = f.filter(lambda a, b: a < k)
    witness = truncated.filter(lambda a, b: b < 0)
    # the part of f's k[x, y] component that dies mod x^k in k[x, y^+-1]
    # must already be a multiple of x^k in k[x, y]
    dying = f.filter(lambda a, b: b >= 0 and a >= k)
    injective = dying.shift(-k, 0).member(BASE)
    return TruncationReport(k, f, truncated, injective, None if witness else truncated, witness)


# -- free patching data ----------------------------------------------------------


@dataclass(frozen=True)
class FreePatchingDatum:
    """``(k[x^+-1,y]^n, k[x,y^+-1]^n, zeta)`` with zeta invertible over the bottom corner."""

    n: int
    zeta: PolyMatrix

    def __post_init__(self):
        if self.zeta.shape != (self.n, self.n):
            raise ShapeError(f"zeta has shape {self.zeta.shape}, rank is {self.n}")
        if not LOC_XY.is_unit(det(self.zeta)):
            raise NotGL(f"transition matrix has det {det(self.zeta)}, not a unit")


def apply_F(n: int, field=None) -> FreePatchingDatum:
    """Image of the free module of rank ``n``: identity transition."""
    if n < 0:
        raise ValueError("rank must be non-negative")
    return FreePatchingDatum(n, PolyMatrix.identity(n, field))


def datum(zeta: PolyMatrix) -> FreePatchingDatum:
    if not zeta.is_square():
        raise ShapeError("transition matrix must be square")
    return FreePatchingDatum(zeta.n_rows, zeta)


@dataclass(frozen=True)
class GluedModule:
    """Basis of the glued module: column j of ``V1`` (over k[x^+-1, y]) paired
    with column j of ``V2`` (over k[x, y^+-1]), so ``zeta @ V1 == V2``."""

    n: int
    zeta: PolyMatrix
    V1: PolyMatrix
    V2: PolyMatrix
    factorization: Optional[FactorCertificate] = None

    @property
    def basis(self) -> list:
        return [(self.V1.column(j), self.V2.column(j)) for j in range(self.n)]


def glue(d: FreePatchingDatum) -> GluedModule:
    """Factor ``zeta^-1 = A1 @ A2`` and take ``V1 = A1``, ``V2 = A2^-1``.

    Then ``zeta = A2^-1 @ A1^-1`` and ``zeta @ A1 = A2^-1``, so column j of
    ``A1`` and column j of ``A2^-1`` form a basis pair.
    """
    field = d.zeta.field
    if d.n == 0:
        empty = PolyMatrix.identity(0, field)
        return GluedModule(0, d.zeta, empty, empty)
    zinv = inverse_unimodular(d.zeta, LOC_XY)
    cert = factor_gl_split(zinv)
    V1 = cert.A.retag(LOC_X)
    V2 = inverse_unimodular(cert.B, LOC_Y)
    return GluedModule(d.n, d.zeta, V1, V2, cert)


def retensor(g: GluedModule) -> FreePatchingDatum:
    """The datum of the glued module in its own basis: ``V2^-1 @ zeta @ V1``."""
    if g.n == 0:
        return FreePatchingDatum(0, g.zeta)
    return FreePatchingDatum(g.n, inverse_unimodular(g.V2, LOC_Y) @ g.zeta @ g.V1)


@dataclass(frozen=True)
class IsoCertificate:
    """Morphism ``(G1, G2)`` from ``d1`` to ``d2``: ``zeta2 @ G1 == G2 @ zeta1``."""

    d1: FreePatchingDatum
    d2: FreePatchingDatum
    G1: PolyMatrix
    G2: PolyMatrix


def _to_free(d: FreePatchingDatum):
    g = glue(d)
    return inverse_unimodular(g.V1, LOC_X), inverse_unimodular(g.V2, LOC_Y), g


def patching_data_iso(d1: FreePatchingDatum, d2: FreePatchingDatum) -> IsoCertificate:
    """Isomorphism between two free data of the same rank.

    Gluing ``d`` gives ``zeta = V2 @ V1^-1``, so ``(V1^-1, V2^-1)`` maps ``d``
    to the identity datum. Composing with the inverse of the same map for
    ``d2`` gives ``G1 = W1 @ V1^-1`` and ``G2 = W2 @ V2^-1``.
    """
    if d1.n != d2.n:
        raise RankMismatch(f"ranks {d1.n} and {d2.n} differ")
    field = d1.zeta.field
    ident = PolyMatrix.identity(d1.n, field)
    if d1.zeta == d2.zeta:
        return IsoCertificate(d1, d2, ident.retag(LOC_X), ident.retag(LOC_Y))
    G1a, G2a, _ = _to_free(d1)
    if d2.zeta == ident:
        return IsoCertificate(d1, d2, G1a, G2a)
    _, _, g2 = _to_free(d2)
    return IsoCertificate(d1, d2, (g2.V1 @ G1a).retag(LOC_X), (g2.V2 @ G2a).retag(LOC_Y))


# -- verification ----------------------------------------------------------------


def _unit_det(M: PolyMatrix, tag: RingTag):
    d = det(M)
    return tag.is_unit(d), f"det = {d}"


@verify_certificate.register
def _(g: GluedModule) -> VerificationReport:
    r = VerificationReport()
    shapes = g.zeta.shape == g.V1.shape == g.V2.shape == (g.n, g.n)
    r.add("shape", shapes, f"rank {g.n}")
    if not shapes:
        return r
    r.add("v1_membership", g.V1.member(LOC_X), "first basis halves over LOC_X")
    r.add("v2_membership", g.V2.member(LOC_Y), "second basis halves over LOC_Y")
    img = g.zeta @ g.V1
    for j in range(g.n):
        r.add(f"gluing[{j}]", img.column(j) == g.V2.column(j), "zeta v1 == v2")
    if g.n:
        r.add("basis_x", *_unit_det(g.V1, LOC_X))
        r.add("basis_y", *_unit_det(g.V2, LOC_Y))
    if g.factorization is not None:
        r.extend(verify_certificate(g.factorization), "factorization.")
    return r


@verify_certificate.register
def _(c: IsoCertificate) -> VerificationReport:
    r = VerificationReport()
    n = c.d1.n
    ok = c.d2.n == n and c.G1.shape == c.G2.shape == (n, n)
    r.add("rank", ok, f"ranks {c.d1.n}, {c.d2.n}")
    if not ok:
        return r
    r.add("g1_membership", c.G1.member(LOC_X), "G1 over LOC_X")
    r.add("g2_membership", c.G2.member(LOC_Y), "G2 over LOC_Y")
    if n:
        r.add("g1_invertible", *_unit_det(c.G1, LOC_X))
        r.add("g2_invertible", *_unit_det(c.G2, LOC_Y))
    r.add("commuting_square", c.d2.zeta @ c.G1 == c.G2 @ c.d1.zeta, "zeta2 G1 == G2 zeta1")
    return r


@verify_certificate.register
def _(s: SumDecomposition) -> VerificationReport:
    r = VerificationReport()
    r.add("exact_sum", s.part_x + s.part_y + s.obstruction == s.f, "f == part_x + part_y + obstruction")
    r.add("part_x_membership", s.part_x.member(LOC_X))
    r.add("part_y_membership", s.part_y.member(LOC_Y))
    r.add(
        "obstruction_support",
        all(a < 0 and b < 0 for a, b in s.obstruction._t),
        "every obstruction term has both exponents negative",
    )
    return r
