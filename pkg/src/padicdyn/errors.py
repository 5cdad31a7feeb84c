"""Exception taxonomy shared across the package.

Every failure a caller can act on carries a short machine-readable code;
the command-line layer maps these onto exit statuses and JSON payloads.
"""


class PadicDynError(Exception):
    """Base class for all library failures."""

    code = "error"


class PreconditionError(PadicDynError):
    """An operation was invoked outside its contract: wrong coefficient
    ring, non-unit linear coefficient, mismatched contexts, a commuting
    pair that fails the minimality gate, and so on."""

    code = "precondition"


class PrecisionError(PadicDynError):
    """The requested quantity cannot be certified at the available
    coefficient precision or x-adic truncation order."""

    code = "precision"


class OracleIntegrityError(PadicDynError):
    """An internal consistency check failed.  This is a bug surface, not a
    verdict: guaranteed-integral constructions raise this loudly instead
    of returning a wrong answer."""

    code = "integrity"
