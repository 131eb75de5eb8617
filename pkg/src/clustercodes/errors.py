"""Exception types shared across the package.

The CLI maps these onto process exit codes: ParamError (and subclasses)
exit 2, FormatError exit 3, InconsistentSharesError exit 1.
"""


class ClusterCodeError(Exception):
    pass


class ParamError(ClusterCodeError, ValueError):
    """Invalid parameter combination (bad field polynomial, k out of range, ...)."""


class RegimeError(ParamError):
    """Parameters fall outside the regime a construction supports."""


class InsufficientDataError(ParamError):
    """Fewer shares/nodes supplied than the code needs to decode."""


class InconsistentSharesError(ClusterCodeError):
    """Redundant shares disagree with the decoded message (corruption)."""


class FormatError(ClusterCodeError, ValueError):
    """Malformed serialized input (placement, transcript, config)."""
