class IsocalcError(Exception):
    """Base class for input errors raised by the toolkit."""


class InjectivityError(IsocalcError, ValueError):
    """A piece list is not a partial injection of N."""

    def __init__(self, message, pieces=(), witness=None, kind=None):
        super().__init__(message)
        self.pieces = pieces
        self.witness = witness
        self.kind = kind


class TierError(IsocalcError, TypeError):
    """A symbolic operation was asked of a prefix-tier operator."""


class NotMIError(IsocalcError, ValueError):
    """Operands do not span an MI-space; carries the failing column index."""

    def __init__(self, message, witness=None, pair=None):
        super().__init__(message)
        self.witness = witness
        self.pair = pair


class NotIsometryError(IsocalcError, ValueError):
    """An isometry (multiple) was required."""


class WoldUndecided(IsocalcError, RuntimeError):
    """A backward orbit neither exited nor cycled within the step budget."""


class SchemaError(IsocalcError, ValueError):
    """Malformed JSON input; ``pointer`` is a JSON pointer to the bad node."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
