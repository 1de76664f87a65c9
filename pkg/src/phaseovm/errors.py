"""Error taxonomy shared by the library, service and CLI.

Two failure classes matter for the exit-code / HTTP contract:

* usage errors (bad parameters, malformed regions, unsupported targets)
  map to HTTP 400/422 and CLI exit code 2;
* numerical errors (a truncation too small to honor a tolerance, or a
  refusal because truncation would blow up) map to HTTP 409 and exit 3.
"""


class PhaseOVMError(Exception):
    """Base class for all library errors."""

    kind = "error"


class UsageError(PhaseOVMError):
    """Invalid parameters or descriptors; the request itself is wrong."""

    kind = "usage"


class InvalidDimensionError(UsageError):
    kind = "invalid-dimension"


class InvalidQuadratureError(UsageError):
    kind = "invalid-quadrature"


class InvalidRegionError(UsageError):
    kind = "invalid-region"


class NotRepresentableError(UsageError):
    kind = "not-representable"


class SingularParameterError(UsageError):
    kind = "singular-parameter"


class DimensionMismatchError(UsageError):
    kind = "dimension-mismatch"


class GridResolutionError(UsageError):
    kind = "grid-too-coarse"


class NumericalError(PhaseOVMError):
    """Truncation or quadrature could not deliver the declared accuracy."""

    kind = "numerical"


class TruncationError(NumericalError):
    kind = "truncation-too-small"


class TruncationRiskError(NumericalError):
    kind = "truncation-risk"


class ReliableBandWarning(UserWarning):
    """Momentum or displacement outside the band the truncation resolves."""
