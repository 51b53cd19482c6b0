"""Exception hierarchy.

Two families: ``InputError`` for malformed or inconsistent input (CLI exit
code 2) and ``MathematicalViolation`` for inputs that are well-formed but
fail a mathematical precondition (CLI exit code 1).
"""


class NilprojError(Exception):
    pass


class InputError(NilprojError, ValueError):
    pass


class MathematicalViolation(NilprojError):
    pass


class BadIndex(InputError):
    pass


class DuplicateEntry(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class BadParameter(InputError):
    pass


class BackendMismatch(InputError):
    pass


class DimensionCapExceeded(InputError):
    pass


class JacobiViolation(MathematicalViolation):
    def __init__(self, triple, value):
        self.triple = triple
        self.value = value
        i, j, k = triple
        super().__init__(f"Jacobi identity fails on basis triple (X{i}, X{j}, X{k})")


class NotNilpotent(MathematicalViolation):
    def __init__(self, message, witness=None, power=None):
        self.witness = witness
        self.power = power
        super().__init__(message)


class SingularBasis(MathematicalViolation):
    pass


class NotTransversal(MathematicalViolation):
    pass


class WrongJumpSet(MathematicalViolation):
    pass


class NotJordanHolder(MathematicalViolation):
    pass


# Same condition, named after the flag rather than a basis.
NotJordanHolderFlag = NotJordanHolder


class NotASubalgebra(MathematicalViolation):
    pass


class MembershipFailure(MathematicalViolation):
    """Raised when a computed nonlinear projection fails its own defining check."""


class CellBoundaryCrossed(MathematicalViolation):
    pass
