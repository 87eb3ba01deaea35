"""Exception types shared across the library."""


class ConekitError(Exception):
    """Base class for all library errors."""


class BudgetExceeded(ConekitError):
    """An enumeration exceeded its node budget before reaching a verdict."""

    def __init__(self, message, nodes=None):
        super().__init__(message)
        self.nodes = nodes


class NotStrictlyConvex(ConekitError):
    """The cone contains a line, so the requested invariant is undefined."""


class NotExact(ConekitError):
    """The homomorphism is not exact, so infima are not defined for it."""


class HypothesisViolation(ConekitError):
    """A precondition of the requested decision procedure does not hold."""


class IncompatibleChern(ConekitError):
    """The multicharacter assignment is inconsistent on shared faces."""


class InfUndefined(ConekitError):
    """A pairwise infimum came out as a genuine antichain, so the hull
    construction has no single defining inequality for that pair."""

    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


class SingularLattice(ConekitError):
    """A lattice generator matrix is singular over the valuation field."""


class SchemaError(ConekitError):
    """A document failed validation; carries the offending field path."""

    def __init__(self, message, path=()):
        super().__init__(message)
        self.path = tuple(path)


class RankMismatch(SchemaError):
    """Dimensions inside a document disagree with each other."""
