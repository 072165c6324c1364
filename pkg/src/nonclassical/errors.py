"""Exception hierarchy.

Everything raised on purpose by the package derives from
:class:`NonclassicalError`, so the CLI can map it to a single exit code.
"""


class NonclassicalError(Exception):
    """Base class for numeric and domain failures."""


class DomainError(NonclassicalError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateState(NonclassicalError):
    """The operator annihilates the input, or a witness denominator vanishes."""


class WordTooLong(NonclassicalError):
    pass


class OutOfRange(NonclassicalError, ValueError):
    pass


class TruncationTooSmall(NonclassicalError):
    """The Fock cutoff cannot support the requested quantity."""


class GridTooLarge(NonclassicalError):
    pass


class SpecTooLarge(NonclassicalError):
    pass


class CapExceeded(NonclassicalError):
    """Population leaked past a per-mode photon-number cap."""


class ZeroProbability(NonclassicalError):
    """A heralding pattern has (numerically) zero probability."""
