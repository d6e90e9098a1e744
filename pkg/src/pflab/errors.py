"""Exception hierarchy shared by every pflab module."""


class PflabError(Exception):
    """Base class for all library errors."""


class ParseError(PflabError, ValueError):
    pass


class EmptySet(PflabError, ValueError):
    pass


class DisconnectedContractionSet(PflabError, ValueError):
    pass


class DegreeMismatch(PflabError, ValueError):
    pass


class InvalidPairing(PflabError, ValueError):
    pass


class EdgeNotPresent(PflabError, KeyError):
    pass


class TooSmall(PflabError, ValueError):
    pass


class TooLarge(PflabError, ValueError):
    pass


class EnumerationCapExceeded(PflabError, RuntimeError):
    """An exhaustive search hit its configured cap; the instance is too large."""

    def __init__(self, what, cap):
        super().__init__(f"{what}: enumeration cap {cap} exceeded")
        self.what = what
        self.cap = cap


class NotACut(PflabError, ValueError):
    pass


class NotAFactor(PflabError, ValueError):
    pass


class NoFactor(PflabError, ValueError):
    pass


class OddCircuit(PflabError, ValueError):
    pass


class NotOddCircuit(PflabError, ValueError):
    pass


class InvalidInput(PflabError, ValueError):
    pass


class NotOneExtendible(PflabError, ValueError):
    pass


class OddOrder(PflabError, ValueError):
    pass


class IsBicritical(PflabError, ValueError):
    pass


class NoCircuitFound(PflabError, AssertionError):
    pass


class HypothesisViolated(PflabError, ValueError):
    """A theorem hypothesis does not hold for the given instance."""

    def __init__(self, hypothesis, detail=""):
        msg = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(msg)
        self.hypothesis = hypothesis
        self.detail = detail


class EvenReducedTrace(PflabError, AssertionError):
    pass


class InvariantViolation(PflabError, AssertionError):
    """An internal structural invariant failed; indicates a bug or bad input."""
