"""Exception hierarchy shared by all zrigid modules."""


class ZRigidError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class InvalidComponent(ZRigidError):
    pass


class NotDivisible(ZRigidError):
    pass


class PrecisionExhausted(ZRigidError):
    def __init__(self, max_bits):
        super().__init__(f"sign undecided at {max_bits} bits")
        self.max_bits = max_bits


class OutsideSpan(ZRigidError):
    pass


class IndependenceViolation(ZRigidError):
    pass


class GeneratorInZ(ZRigidError):
    pass


class InvalidSpec(ZRigidError):
    pass


class NotInGroup(ZRigidError):
    pass


class EqualElements(ZRigidError):
    pass


class PreconditionFailed(ZRigidError):
    pass


class GammaNotAdmissible(ZRigidError):
    pass


class NotInvertible(ZRigidError):
    pass


class CapacityExceeded(ZRigidError):
    pass


class UnboundVariable(ZRigidError):
    pass


class FormulaSyntaxError(ZRigidError):
    def __init__(self, position, expected, text=""):
        super().__init__(f"syntax error at position {position}: expected {expected}")
        self.position = position
        self.expected = expected
        self.text = text
