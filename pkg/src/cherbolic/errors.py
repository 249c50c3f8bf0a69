"""Exception hierarchy.

Every error raised by the library derives from :class:`CherbolicError`, so
callers (the CLI in particular) can catch mathematical failures in one place.
"""


class CherbolicError(Exception):
    pass


class NotHermitian(CherbolicError, ValueError):
    pass


class ConvergenceFailure(CherbolicError, ArithmeticError):
    pass


class ZeroVector(CherbolicError, ValueError):
    pass


class NotInteriorPoint(CherbolicError, ValueError):
    pass


class SameGeodesic(CherbolicError, ValueError):
    pass


class DegenerateForm(CherbolicError, ValueError):
    pass


class NotOnGeodesic(CherbolicError, ValueError):
    pass


class DegenerateTriangle(CherbolicError, ValueError):
    pass


class NotATriangle(CherbolicError, ValueError):
    pass


class NotAnIsometry(CherbolicError, ValueError):
    pass


class NonPositivePolar(CherbolicError, ValueError):
    pass


class UnresolvedBorderline(CherbolicError, ArithmeticError):
    pass


class IdentityElement(CherbolicError, ValueError):
    pass


class OrderDisagreement(CherbolicError, ArithmeticError):
    """The powering and eigenvalue routes to a projective order disagree."""


class WrongSignature(CherbolicError, ValueError):
    pass


class WordSyntaxError(CherbolicError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class MacroUnavailable(CherbolicError, ValueError):
    pass


class NonIntegerExponent(CherbolicError, ValueError):
    def __init__(self, p, formula):
        super().__init__(f"exponent {formula} is not an integer at p={p}")
        self.p = p
        self.formula = formula


class NonCatalogParameter(CherbolicError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown catalog entry"


class VertexOffGeodesic(CherbolicError, ValueError):
    pass


class NonSimplePolygon(CherbolicError, ValueError):
    pass


class UnresolvedVertexClass(CherbolicError, ArithmeticError):
    pass


class PairingFailed(CherbolicError, AssertionError):
    def __init__(self, side, report):
        super().__init__(f"side pairing for {side} failed: {report}")
        self.side = side
        self.report = report


class CycleClosureFailure(CherbolicError, AssertionError):
    pass


class AngleSumMismatch(CherbolicError, AssertionError):
    pass
