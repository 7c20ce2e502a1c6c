"""Exception types shared across the library.

Negative mathematical answers (not equivalent, not isomorphic, no match)
are returned as values, never raised.  Exceptions mark misuse or
computations that cannot be carried out over the given field / budget.
"""


class WildredError(Exception):
    """Base class for all library errors."""


class FieldMismatch(WildredError):
    """Operands live over different fields."""


class ShapeMismatch(WildredError):
    """Operand shapes are incompatible."""


class NonSquare(WildredError):
    """A square matrix was required."""


class NotInvertible(WildredError):
    """Matrix is singular (rank-deficient)."""


class InfiniteField(WildredError):
    """Operation requires a finite field but got the rationals."""


class NonSplitSpectrum(WildredError):
    """The characteristic polynomial of a regular pencil part does not
    factor into linear factors over the base field.

    Carries the offending non-linear factor (monic, irreducible over
    GF(p); over Q the root-free remainder, which may be reducible).
    """

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"spectrum does not split: {factor}")


class FieldTooSmall(WildredError):
    """Encoder needs more distinct scalars than the field provides."""


class BudgetExceeded(WildredError):
    """An exhaustive enumeration would exceed the configured budget."""


class NotCube(WildredError):
    """A spatial matrix of shape m x m x m was required."""


class NotAChain(WildredError):
    """A totally ordered poset was required."""


class StructureMismatch(WildredError):
    """Representations live over different quivers/posets or shapes."""


class ParseError(WildredError):
    """Malformed input text; carries 1-based line and column."""

    def __init__(self, line, col, msg):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {msg}")


class InternalCheckFailed(WildredError):
    """An internal witness re-verification failed; indicates a bug."""
