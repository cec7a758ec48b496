"""Exception hierarchy.

Everything raised for a violated modelling assumption derives from
:class:`ModelError`, so callers (and the CLI) can separate "the inputs
describe an invalid game" from ordinary programming errors.
"""


class ModelError(ValueError):
    """Base class for violated model assumptions."""


class DomainError(ModelError):
    """Argument outside the domain of a numerical primitive or utility."""


class DegenerateSupportError(ModelError):
    """Truncation interval carries (numerically) zero probability mass."""


class BracketError(ModelError):
    """Root-finding bracket does not contain a sign change."""


class ModelInvariantError(ModelError):
    """A test model violates super-uniformity or non-trivial power."""


class PowerAssumptionError(ModelError):
    """beta1 must exceed beta0."""


class EnvelopeError(ModelError):
    """Envelope kappa must dominate the threshold."""


class BoundAssumptionError(ModelError):
    """Bound denominator is degenerate (non-positive)."""


class RegionError(ModelError):
    """Threshold lies outside the region where a worst-case prior exists."""


class InfeasibleEpsilonError(ModelError):
    """Staircase slack epsilon is not below every bound value."""


class UndefinedPosteriorError(ModelError):
    """Approval has zero probability, so the posterior null is undefined."""
