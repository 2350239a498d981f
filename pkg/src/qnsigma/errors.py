"""Exception hierarchy shared by every stage of the engine."""


class QnError(Exception):
    """Base class. ``line`` is the 1-based source line when known."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self):
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


# poset construction
class UnknownLabel(QnError):
    pass


class DuplicateLabel(QnError):
    pass


class CycleDetected(QnError):
    pass


class TooLarge(QnError):
    pass


# constraint validation and closure
class DegenerateConstraint(QnError):
    pass


class Incoherent(QnError):
    pass


class NotSupremum(QnError):
    pass


class NotInfimum(QnError):
    pass


class DerivedConflict(QnError):
    pass


class DerivedNotSupremum(QnError):
    pass


class DerivedNotInfimum(QnError):
    pass


# job files
class ParseError(QnError):
    pass


class UnknownCommand(ParseError):
    pass


class SizeMismatch(ParseError):
    pass


class MalformedToken(ParseError):
    pass


class MissingSection(ParseError):
    pass


class UnterminatedJob(ParseError):
    pass


class MissingEnddata(ParseError):
    pass


# case trees
class TreeError(ParseError):
    pass


class DuplicateLabelOnPath(TreeError):
    pass


class ConstraintLabelNotOnPath(TreeError):
    pass


class GenerationExhausted(QnError):
    pass
