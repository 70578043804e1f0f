"""Exception types shared across the package."""

from __future__ import annotations


class GLambdaError(Exception):
    """Base class for all package errors."""


class DivisionByZero(GLambdaError, ZeroDivisionError):
    """Exact division by a vanishing scalar.

    ``where`` names the location of the vanishing denominator when known
    (a lattice point, a central minor, a chip vertex...).
    """

    def __init__(self, message: str = "division by zero", where=None):
        super().__init__(message if where is None else f"{message} at {where}")
        self.where = where


class NonMonomialDivisor(GLambdaError, ArithmeticError):
    pass


class VariableMismatch(GLambdaError, ValueError):
    pass


class ZeroAtNegativeExponent(GLambdaError, ZeroDivisionError):
    def __init__(self, variable: str):
        super().__init__(f"variable {variable!r} appears with a negative exponent but is assigned 0")
        self.variable = variable


class NotASM(GLambdaError, ValueError):
    def __init__(self, kind: str, index: int, rule: str):
        super().__init__(f"not an alternating sign matrix: {kind} {index} violates {rule}")
        self.kind = kind
        self.index = index
        self.rule = rule


class InvalidGrid(GLambdaError, ValueError):
    pass


class CapExceeded(GLambdaError, ValueError):
    pass


class WindowMiss(GLambdaError, KeyError):
    def __init__(self, which: str, index: int):
        super().__init__(f"{which}_{index} is outside the stored coefficient window")
        self.which = which
        self.index = index

    def __str__(self) -> str:
        return self.args[0]


class ZeroEntryAtMinus(GLambdaError, ZeroDivisionError):
    def __init__(self, i: int, j: int):
        super().__init__(f"a[{i},{j}] = 0 where the ASM has a -1 entry")
        self.position = (i, j)


class ZeroFaceLabel(GLambdaError, ZeroDivisionError):
    def __init__(self, i: int, j: int):
        super().__init__(f"face label a[{i},{j}] = 0 is needed in a denominator")
        self.position = (i, j)


class MismatchAt(GLambdaError, AssertionError):
    def __init__(self, where, left, right):
        super().__init__(f"mismatch at {where}: {left} != {right}")
        self.where = where
        self.left = left
        self.right = right


class OrderDependence(GLambdaError, AssertionError):
    pass


class UnclassifiableTriangle(GLambdaError, ValueError):
    pass


class SchemaError(GLambdaError, ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class WindowTooSmall(GLambdaError, ValueError):
    pass


class ViolationAt(MismatchAt):
    """A coefficient identity failed at lattice point ``where``."""
