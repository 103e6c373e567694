"""Exception hierarchy.

Three families, mirroring the CLI exit codes:

* ``InputError`` (exit 2): malformed input or unmet preconditions.
* ``MathNegative`` (exit 1): a well-posed question whose answer is "no".
* ``InvariantViolation`` (exit 3): an internal consistency check failed.
  These should never fire; if one does it is a bug (or a counterexample).
"""


class DertoolError(Exception):
    exit_code = 2


class InputError(DertoolError):
    exit_code = 2


class MathNegative(DertoolError):
    exit_code = 1


class InvariantViolation(DertoolError):
    exit_code = 3


# exact-arith
class ZeroPolynomial(InputError):
    pass


# exact-linalg
class DimensionMismatch(InputError):
    pass


class NotSquare(InputError):
    pass


class NotCommuting(InputError):
    pass


class NotNilpotent(InputError):
    pass


class NotInvertible(InputError):
    pass


class IterationBound(InvariantViolation):
    pass


# findim-algebra
class NotAssociative(InputError):
    def __init__(self, i, j, k):
        super().__init__(f"associativity fails on basis triple ({i}, {j}, {k})")
        self.triple = (i, j, k)


class BadUnit(InputError):
    def __init__(self, i):
        super().__init__(f"unit law fails on basis element {i}")
        self.index = i


class AlgebraMismatch(InputError):
    pass


class NotUnital(InputError):
    pass


# poly-ext-algebra
class DegreeCapExceeded(InputError):
    pass


class UnsupportedOperator(InputError):
    pass


class NotPreimage(InputError):
    pass


# deriv-calc
class NotLocallyNilpotent(InputError):
    pass


class NotEDerivation(InputError):
    pass


class NotEndomorphism(InputError):
    pass


class PreconditionFailed(InputError):
    pass


class NotSplit(MathNegative):
    def __init__(self, factor):
        super().__init__(f"spectrum does not split over Q; irreducible part {factor}")
        self.factor = factor


class NotInImage(MathNegative):
    pass


class KernelCheckFailed(InvariantViolation):
    pass


class GradingViolation(InvariantViolation):
    pass


class StructureMismatch(InvariantViolation):
    pass


class NoStabilization(InvariantViolation):
    pass


class RankMismatch(InvariantViolation):
    pass


# cli
class ParseError(InputError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class UnknownBasisName(InputError):
    pass
