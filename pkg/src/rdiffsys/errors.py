"""Exception hierarchy.

Every error carries a ``code`` matching the command-line exit status it maps
to: 1 for a failed verification, 2 for bad input, 3 for a capability limit.
"""

from __future__ import annotations


class RDiffError(Exception):
    code = 2


class InputError(RDiffError):
    code = 2


class CapabilityError(RDiffError):
    code = 3


class DivisionError(RDiffError, ArithmeticError):
    """Exact division left a nonzero remainder (available as ``remainder``)."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class ZeroDenominator(RDiffError, ZeroDivisionError):
    pass


class UnassignedVariable(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ScopeError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        loc = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(loc + message)
        self.line = line
        self.column = column


class NotRLinear(InputError):
    pass


class NotClosed(RDiffError):
    code = 1


class NonElementaryTerm(CapabilityError):
    pass


class NotCompletelySolvable(RDiffError):
    code = 1


class InconsistentRecurrence(RDiffError):
    """A recurrence direction disagreed with another; indicates an internal bug."""

    code = 1


class EigenvalueNotRational(CapabilityError):
    pass


class ChainBreaks(RDiffError):
    code = 1

    def __init__(self, message, length=None):
        super().__init__(message)
        self.length = length


class NonConstantMu(RDiffError):
    """Lie derivative of a Psi function is not constant.

    ``values`` holds the offending rational functions; each is itself a
    first integral of the system.
    """

    code = 1

    def __init__(self, message, values=()):
        super().__init__(message)
        self.values = tuple(values)
