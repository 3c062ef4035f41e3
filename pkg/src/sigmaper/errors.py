"""Exception hierarchy shared by all sigmaper modules."""


class SigmaError(Exception):
    """Base class for all sigmaper errors."""


class NotMarkov(SigmaError):
    """A node image does not lie on the node grid (node set + Z)."""


class DuplicateNode(SigmaError):
    """Two supplied nodes canonicalize to the same point of S."""


class DiscontinuousAtBase(SigmaError):
    """Node data assigns inconsistent images to the same point mod 1."""


class MissingNode(SigmaError):
    """The node set lacks a required point (Real(0) or Branch(0,1))."""


class BadPartition(SigmaError):
    """Builder parameters violate the required orderings."""


class NotALoop(SigmaError):
    """An edge sequence does not close into a loop."""


class NoCycle(SigmaError):
    """The Markov graph has no cycle, so no rotation interval."""


class NotAStarOrbit(SigmaError):
    """The orbit hull is not homeomorphic to a 3-star."""


class NotTrueOrbit(SigmaError):
    """The orbit has nonzero shift, hence is not a true periodic orbit."""


class BadRotationData(SigmaError):
    """Orbit period/rotation data is inconsistent with the block request."""


class UnrepresentableTail(SigmaError):
    """No finite Markov map realizes the requested period tail (2^infinity)."""


class NotInDomain(SigmaError):
    """Argument outside the domain N_t of the Baldwin ordering."""


class MapSyntaxError(SigmaError):
    """Map file could not be parsed; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
