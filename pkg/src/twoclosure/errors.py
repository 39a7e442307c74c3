# errors.py

"""
Exception types raised by the closure library.
"""


class ClosureError(Exception):
    """Base class for every error raised by twoclosure."""


class MalformedPermutationError(ClosureError, ValueError):
    """An image list is not a bijection on {0, ..., n-1}."""


class DegreeMismatchError(ClosureError, ValueError):
    """Two objects that must act on the same domain do not."""


class NotInGroupError(ClosureError, ValueError):
    """A seed element was expected to lie in the ambient group."""


class IntransitiveGroupError(ClosureError, ValueError):
    """The operation needs a transitive group."""


class TooLargeError(ClosureError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class BudgetExceededError(ClosureError):
    """A randomised search ran out of its sampling budget."""


class OracleUnavailableError(ClosureError):
    """The automorphism search was asked for a degree above its cap."""


class InconsistentFrameError(ClosureError):
    """A permutation does not act linearly on the affine labelling."""


class ConsistencyError(ClosureError):
    """An internal cross-check failed."""


class GroupParseError(ClosureError, ValueError):
    """Syntax error in a group file. Lines are 1-based, columns 0-based."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class NotRankThreeError(ClosureError):
    """The input group is not transitive of rank 3."""

    def __init__(self, rank: int, transitive: bool = True):
        what = f"rank {rank}" if transitive else "intransitive group"
        super().__init__(f"expected a transitive rank 3 group, got {what}")
        self.rank = rank
        self.transitive = transitive
