"""Exception hierarchy shared by all wstar modules."""


class WStarError(Exception):
    """Base class; may carry a source location when raised from a script."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        base = super().__str__()
        if self.line is not None:
            if self.column is not None:
                return f"{base} (line {self.line}, column {self.column})"
            return f"{base} (line {self.line})"
        return base


class NonPositiveBlockSize(WStarError):
    """A declared matrix block size was zero or negative."""


class StructureMismatch(WStarError):
    """Operands live over different block structures."""


class ObjectMismatch(WStarError):
    """Morphisms were combined across incompatible algebras."""


class MultiplicityOverflow(WStarError):
    """Embedded copies exceed the capacity of a target block."""


class NotVerified(WStarError):
    """An operation required a verified *-homomorphism."""


class RangesNotOrthogonal(WStarError):
    """Ranges of an orthogonal-sum family overlap; carries a witness."""

    def __init__(self, message, witness=None, magnitude=None):
        super().__init__(message)
        self.witness = witness
        self.magnitude = magnitude


class RangesDoNotCommute(WStarError):
    """A mediator was requested for maps whose ranges do not commute."""

    def __init__(self, message, witness=None, magnitude=None):
        super().__init__(message)
        self.witness = witness
        self.magnitude = magnitude


class NotAnIdealSummand(WStarError):
    """A subspace handed to the duality checks is not a block sub-sum."""


class ScriptError(WStarError):
    """Base class for script front-end failures (parse and name/type)."""


class ScriptSyntaxError(ScriptError):
    pass


class ScriptNameError(ScriptError):
    pass


class ScriptTypeError(ScriptError):
    pass


class IoError(WStarError):
    """Report emission failed."""
