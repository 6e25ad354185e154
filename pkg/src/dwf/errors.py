"""Exception types shared across the package."""


class DwfError(Exception):
    """Base class for all errors raised by this package."""


# group core

class IdOutOfRange(DwfError, IndexError):
    pass


class NonSquareTable(DwfError, ValueError):
    pass


class NotAGroup(DwfError, ValueError):
    def __init__(self, axiom: str, witness: tuple = ()):
        self.axiom = axiom
        self.witness = tuple(witness)
        super().__init__(f"group axiom '{axiom}' fails at {self.witness}")


class OverflowOrder(DwfError, OverflowError):
    pass


class ClosureCapExceeded(DwfError, RuntimeError):
    pass


# abelian structure

class NotAbelian(DwfError, ValueError):
    def __init__(self, a: int, b: int):
        self.witness = (a, b)
        super().__init__(f"elements {a} and {b} do not commute")


# pair sets

class PairFormatError(DwfError, ValueError):
    pass


class MalformedHeader(PairFormatError):
    pass


class PairOutOfRange(PairFormatError):
    pass


class DuplicatePair(PairFormatError):
    pass


# window construction

class InfeasibleParameters(DwfError, ValueError):
    pass


class InsufficientCosetSpace(InfeasibleParameters):
    pass


class IntervalTooLarge(DwfError, ValueError):
    pass


class ProductBoundViolated(DwfError, AssertionError):
    pass


class GuaranteeViolated(DwfError, AssertionError):
    pass


# oracles

class WitnessInconsistent(DwfError, AssertionError):
    pass


class CapExceeded(DwfError, RuntimeError):
    pass


class SearchSpaceTooLarge(DwfError, RuntimeError):
    pass


class WitnessParseError(DwfError, ValueError):
    pass
