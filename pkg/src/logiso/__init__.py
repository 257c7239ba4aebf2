"""Deciding *-isomorphism of algebras of log-integrable functions.

The algebra ``L_log(mu)`` of measurable functions with
``integral of log(1 + |f|) d(mu) < infinity`` depends only on the measure up to
bounded Radon-Nikodym derivatives, and, for probability measures, on the
passport of the measure algebra up to bounded mass ratios. This package
decides those conditions with certificates and builds the witnessing maps.
"""

from .errors import (
    AlgebraMismatch,
    AtomMismatch,
    DerivativeBounded,
    InfiniteMass,
    LogIsoError,
    RatioUnbounded,
    RowMismatch,
    SchemaError,
    UndecidableTail,
    UnknownAtom,
    UnknownComponent,
)
from .isomap import (
    ComponentMap,
    GammaMeasure,
    StarIso,
    build_gamma,
    build_iso,
    build_pairing,
    log_equivalent_decision,
    verify_prop2,
    verify_transport,
)
from .logspace import (
    SimpleFunction,
    build_counterexample,
    equality_check,
    fnorm_metric,
    inclusion_check,
    is_log_integrable,
    log_fnorm,
)
from .measure import (
    ComponentRamp,
    Event,
    HomogeneousComponent,
    MeasureSpace,
    measure_of,
    normalize,
    rn_derivative,
)
from .passport import (
    IsoVerdict,
    Passport,
    extract_passport,
    log_iso_decision,
    measure_iso_decision,
    ratio_bounded,
    same_upper_row,
)
from .sequences import (
    FiniteList,
    Geometric,
    GeometricPower,
    PowerLaw,
    PrefixThenTail,
    Sequence,
)

__all__ = [
    "AlgebraMismatch",
    "AtomMismatch",
    "ComponentMap",
    "ComponentRamp",
    "DerivativeBounded",
    "Event",
    "FiniteList",
    "GammaMeasure",
    "Geometric",
    "GeometricPower",
    "HomogeneousComponent",
    "InfiniteMass",
    "IsoVerdict",
    "LogIsoError",
    "MeasureSpace",
    "Passport",
    "PowerLaw",
    "PrefixThenTail",
    "RatioUnbounded",
    "RowMismatch",
    "SchemaError",
    "Sequence",
    "SimpleFunction",
    "StarIso",
    "UndecidableTail",
    "UnknownAtom",
    "UnknownComponent",
    "build_counterexample",
    "build_gamma",
    "build_iso",
    "build_pairing",
    "equality_check",
    "extract_passport",
    "fnorm_metric",
    "inclusion_check",
    "is_log_integrable",
    "log_equivalent_decision",
    "log_fnorm",
    "log_iso_decision",
    "measure_iso_decision",
    "measure_of",
    "normalize",
    "ratio_bounded",
    "rn_derivative",
    "same_upper_row",
    "verify_prop2",
    "verify_transport",
]
