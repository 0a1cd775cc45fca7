"""Exception types shared across the toolkit.

Construction-time invariant violations raise ValueError; everything that can
fail for a *numerical* or *modeling* reason gets a named class here so callers
can branch on it.
"""


class SvsplitError(Exception):
    """Base class for all toolkit-specific errors."""


class RankError(SvsplitError):
    """A matrix does not have the rank the operation requires."""


class DimError(SvsplitError):
    """Mismatched or unsupported dimensions."""


class UnsupportedDim(DimError):
    """Operation not available in this ambient dimension."""


class UnsupportedRep(SvsplitError):
    """Body representation cannot be converted as requested."""


class EmptyInput(SvsplitError):
    """An input collection that must be nonempty is empty."""


class DegenerateDirection(SvsplitError):
    """A direction vector is (numerically) zero."""


class SolverStall(SvsplitError):
    """Iteration cap hit without convergence; indicates cycling or bad scaling."""


class OutsideShadow(SvsplitError):
    """Query point lies outside the projection of the body."""


class UnknownBody(SvsplitError):
    """Name not present in the bundled body collection."""


class EmptyIntersection(SvsplitError):
    """Per-sample intersection of two maps is empty."""


class InsufficientDomain(SvsplitError):
    """Not enough domain samples for the requested estimate."""


class OutsideSum(SvsplitError):
    """Target point is not a member of the Minkowski sum."""


class InfeasibleSelection(SvsplitError):
    """The prescribed selection is not attainable from the given data."""


class NotParallelViolation(SvsplitError):
    """Kernel of the surjection meets a factor space; splitting hypothesis fails.

    Carries the offending kernel vector in ``args[1]`` when available.
    """


class EpsilonTooSmall(SvsplitError):
    """Approximation radius too small for the eroded slice to stay nonempty."""


class ConfigError(SvsplitError):
    """Malformed request, schema violation, or bad CLI configuration."""
