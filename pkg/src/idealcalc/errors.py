"""Exception hierarchy shared by every module."""


class IdealCalcError(Exception):
    """Base class for all library errors."""


class DomainMismatch(IdealCalcError):
    pass


class NotClosed(IdealCalcError):
    """An operation left the closed set grammar."""


class RefinementNotClosed(NotClosed):
    pass


class Undecidable(IdealCalcError):
    """No decision rule ships for this combination of constructors."""


class OrdinalOutOfRange(IdealCalcError):
    pass


class NoMetadata(IdealCalcError):
    pass


class NonpositiveEpsilon(IdealCalcError):
    pass


class WitnessUnavailable(IdealCalcError):
    pass


class MembershipRequired(IdealCalcError):
    pass


class ValidationError(IdealCalcError):
    pass


class ParseError(IdealCalcError):
    def __init__(self, message, line=1, column=1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        text = "%d:%d: %s" % (line, column, message)
        if self.expected:
            text += " (expected one of: %s)" % ", ".join(self.expected)
        super().__init__(text)
