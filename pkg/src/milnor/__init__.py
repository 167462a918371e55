"""Exact factorization and gluing over the square of localizations of k[x, y].

The square has k[x, y] on top, k[x^+-1, y] and k[x, y^+-1] in the middle and
k[x^+-1, y^+-1] at the bottom. The library factors invertible matrices over
the bottom ring into factors over the two middle rings, glues free modules
along transition matrices and checks the element-level structure of the
square. Results come with certificates that :func:`verify_certificate`
re-checks independently.
"""

from types import ModuleType as _ModuleType

from .coeffs import GF, QQ, PrimeField, RationalField, default_field, parse_field, set_default_field
from .errors import MilnorError
from .euclid import (
    Integers,
    LaurentPolynomialsY,
    PolynomialsY,
    SmithCertificate,
    Transvection,
    TransvectionSeq,
    diagonalize,
    div_rem,
    lift,
    reduce_to_zero_row,
    replay,
    smith,
)
from .factorization import (
    DoublingCertificate,
    ExtractionStep,
    FactorCertificate,
    dif_monomial,
    double_and_factor,
    extract_x_factor,
    extract_y_factor,
    factor,
    factor_gl_split,
    factor_sl,
)
from .laurent import (
    BASE,
    LOC_X,
    LOC_XY,
    LOC_Y,
    LaurentPoly,
    RingTag,
    add,
    div_exact,
    format_poly,
    member,
    mul,
    parse_poly,
    reduce_mod_x,
    reduce_mod_y,
)
from .matrix import MatGroupClaim, PolyMatrix, det, inverse_unimodular, mat_mul
from .patching import (
    MISMATCH,
    SQUARE,
    FreePatchingDatum,
    GluedModule,
    IsoCertificate,
    LocalizationSquare,
    SumDecomposition,
    apply_F,
    check_cartesian_witness,
    datum,
    decompose_sum,
    glue,
    patching_data_iso,
    retensor,
    truncation_iso_check,
)
from .report import Check, VerificationReport, verify_certificate

__version__ = "0.1.0"

__all__ = [n for n, v in list(globals().items()) if not n.startswith("_") and not isinstance(v, _ModuleType)]
