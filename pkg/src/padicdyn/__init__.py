"""Truncated power-series dynamics over the p-adics.

The package works in S_nc, the monoid of series with zero constant term
under composition, truncated at x^(K+1) with coefficients carried mod
p^N (or in F_p, or as p-adic floats).  On top of the arithmetic it
offers Newton polygons and Weierstrass preparation, linearization and
commutant construction around a noninvertible series, integrality
certificates for torsion candidates, ramification diagnostics in the
residue ring, and closed-form oracle families to test everything
against.
"""

from .errors import (
    OracleIntegrityError,
    PadicDynError,
    PreconditionError,
    PrecisionError,
)
from .padic import (
    INFINITE,
    PadicNumber,
    PrimeContext,
    is_prime,
    primitive_torsion_root,
    teichmuller,
    vp,
    vp_fraction,
)
from .series import (
    RING_FLOAT,
    RING_INTEGRAL,
    RING_RESIDUE,
    PowerSeries,
    SncClass,
)
from .newton import (
    LambdaCheckReport,
    NewtonPolygon,
    RootValuationMultiset,
    WeierstrassFactorization,
    compare_root_polygons,
    negative_part,
    newton_polygon,
    render_ascii,
    root_valuations,
    weierstrass_degree,
    weierstrass_preparation,
)
from .commutant import (
    Linearization,
    TorsionCertificate,
    certify_torsion,
    commutant,
    linearize,
)
from .oracle import (
    MinimalPairReport,
    conjugate_pair,
    gm_endomorphism,
    gm_minimal_pair,
    lt_minimal_pair,
    lubin_tate_endomorphism,
    seeded_conjugator,
    validate_minimal_pair,
)
from .ramification import (
    NormalizerReport,
    RamificationProfile,
    TorsionInvariant,
    g0_order,
    lower_ramification,
    normalizer_witness,
    nottingham_order,
    zp_iterate,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITE",
    "LambdaCheckReport",
    "Linearization",
    "MinimalPairReport",
    "NewtonPolygon",
    "NormalizerReport",
    "OracleIntegrityError",
    "PadicDynError",
    "PadicNumber",
    "PowerSeries",
    "PreconditionError",
    "PrecisionError",
    "PrimeContext",
    "RamificationProfile",
    "RING_FLOAT",
    "RING_INTEGRAL",
    "RING_RESIDUE",
    "RootValuationMultiset",
    "SncClass",
    "TorsionCertificate",
    "TorsionInvariant",
    "WeierstrassFactorization",
    "certify_torsion",
    "commutant",
    "compare_root_polygons",
    "conjugate_pair",
    "g0_order",
    "gm_endomorphism",
    "gm_minimal_pair",
    "is_prime",
    "linearize",
    "lower_ramification",
    "lt_minimal_pair",
    "lubin_tate_endomorphism",
    "negative_part",
    "newton_polygon",
    "normalizer_witness",
    "nottingham_order",
    "primitive_torsion_root",
    "render_ascii",
    "root_valuations",
    "seeded_conjugator",
    "teichmuller",
    "validate_minimal_pair",
    "vp",
    "vp_fraction",
    "weierstrass_degree",
    "weierstrass_preparation",
    "zp_iterate",
]
