"""Exception hierarchy shared by all modules."""


class CyclePackError(Exception):
    """Base class for every error raised by this package."""


class InvalidGraph(CyclePackError, ValueError):
    """Malformed digraph input (bad endpoint, duplicate arc, self-loop)."""


class InvalidWalk(CyclePackError, ValueError):
    """A consecutive pair of a walk is not an arc of the host digraph."""


class NoCycle(CyclePackError):
    """An open walk with pairwise distinct vertices contains no cycle."""


class CapExceeded(CyclePackError):
    """An exponential search was refused because its input is above the cap."""


class NoDual(CyclePackError):
    """No linkage of full order exists in the reverse direction."""


class NotDual(CyclePackError, ValueError):
    """Two linkages do not have swapped endpoint sets."""


class NotAnAuxPath(CyclePackError, ValueError):
    """A node sequence does not follow arcs of the auxiliary graph."""


class CrossesCycleBoundary(CyclePackError, ValueError):
    """An interlaced walk request leaves a single auxiliary cycle."""


class HypothesisViolated(CyclePackError):
    """A numeric or structural precondition of a construction does not hold."""


class InternalInvariant(CyclePackError):
    """A property that the construction guarantees was observed to fail."""


class NotFound(CyclePackError):
    """Exhaustive search found no object of the requested kind."""


class NoLinkage(CyclePackError):
    """A required full-order linkage does not exist; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IsForest(CyclePackError):
    """The intersection restriction for one index has average degree below 2."""

    def __init__(self, index, message=None):
        super().__init__(message or f"intersection restriction {index} is a forest")
        self.index = index


class InvalidWitness(CyclePackError):
    """A certificate failed one of its structural clauses."""

    def __init__(self, clause, message=None):
        super().__init__(f"{clause}: {message}" if message else clause)
        self.clause = clause


class BoundNotMet(CyclePackError):
    """A numeric inequality required by a lower-bound witness does not hold."""

    def __init__(self, lhs, rhs, message=None):
        super().__init__(message or f"minimum degree {lhs} below required {rhs}")
        self.lhs = lhs
        self.rhs = rhs


class PipelineStage(CyclePackError):
    """A stage of a multi-step construction could not be completed."""

    def __init__(self, stage, reason):
        super().__init__(f"stage {stage!r}: {reason}")
        self.stage = stage
        self.reason = reason


class BadSpec(CyclePackError, ValueError):
    """Unknown generator or malformed generator parameters."""


class UnknownKind(CyclePackError, ValueError):
    """Certificate kind not recognised by the verifier."""
