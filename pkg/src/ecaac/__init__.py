"""Coprime 3-powerful solutions of a + b = c from rational points on
Y^2 = X^3 - 432*m^mu, plus divisibility scans for the unit-coefficient
property of real quadratic fields and its elliptic curve analogue."""

import sys

# Decimal serialization of the integers this package produces routinely
# exceeds CPython's conversion guard, so lift it for the whole process.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

__version__ = "0.1.0"

from .aac_classical import (
    AacFlag,
    AacScanResult,
    CFExpansion,
    QuadUnit,
    aac_flag,
    aac_scan,
    cf_sqrt,
    fundamental_unit,
    unit_power,
)
from .curve_db import (
    GeneratorRecord,
    RecordProblem,
    format_record,
    load_records,
    pick_point,
    search_points,
)
from .erdos_triples import (
    CubicTriple,
    DegeneratePointError,
    NotErdosEligible,
    PowerCertificate,
    PowerfulTriple,
    StructuralAssumptionError,
    check_certificate,
    check_triple,
    extract,
    infinite_family,
    normalize_to_erdos,
)
from .padic_order import (
    EcaacVerdict,
    GlueReport,
    MinMultipleReport,
    PrecisionExhausted,
    denom_valuation,
    ecaac_check,
    glue_composite,
    min_multiple_exact,
    min_multiple_mod_ps,
    min_multiple_mod_ps_retry,
    min_multiple_theory,
)
from .powerful_arith import (
    Factorization,
    UnfactoredCofactorError,
    certify_k_powerful,
    factorize,
    iroot,
    is_k_powerful,
    is_prime,
    is_squarefree,
    radical,
)
from .rational_ec import (
    INFINITY,
    CanonicalFormError,
    CurveParameterError,
    CurveQ,
    NotOnCurveError,
    RatPoint,
    add,
    canonicalize,
    double,
    is_non_torsion,
    is_on_curve,
    make_curve,
    negate,
    scalar_mul,
)
