"""Exception hierarchy.

Everything raised on purpose by this package derives from
:class:`KreinWeaveError`, which itself is a ``ValueError`` so callers that
only care about "bad input" can catch the builtin.
"""


class KreinWeaveError(ValueError):
    """Base class for all package errors."""


class DimensionError(KreinWeaveError):
    """Vector or operator shape does not match the Krein space."""


class NotHermitianError(KreinWeaveError):
    """Matrix handed to the Hermitian eigensolver is not Hermitian."""


class EmptyFamilyError(KreinWeaveError):
    """A frame family with no vectors."""


class MismatchError(KreinWeaveError):
    """Two families live in different spaces or have different sizes."""


class SubsetBudgetError(KreinWeaveError):
    """Exhaustive subset enumeration requested for too many vectors."""


class NotAFrameError(KreinWeaveError):
    """A family whose frame operator is singular."""


class DegenerateSubspaceError(KreinWeaveError):
    """Subspace on which the indefinite form is singular (or empty)."""


class InsufficientRedundancyError(KreinWeaveError):
    """Fewer frame vectors than the ambient dimension."""


class ZeroVectorError(KreinWeaveError):
    """Operation needs a nonzero vector."""


class BundleError(KreinWeaveError):
    """Malformed frame bundle file. The message carries the JSON location."""
