"""Exception hierarchy shared by every module of the package."""


class BoundaryLabError(Exception):
    """Base class for all package errors."""


class InvalidParameter(BoundaryLabError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class DomainError(BoundaryLabError, ValueError):
    """A map or point does not belong to the structure an operation expects."""


class IdentityMapError(DomainError):
    """Raised when an operation needs a non-trivial map but got the identity."""


class OverlappingArcs(BoundaryLabError):
    """Two generator arcs of a pairing system intersect."""

    def __init__(self, i, j, detail=""):
        self.i, self.j = i, j
        msg = f"arcs of generators {i} and {j} overlap"
        super().__init__(msg + (f": {detail}" if detail else ""))


class PingPongFailure(BoundaryLabError):
    """A generator does not send the outside of its source arc into its target arc."""

    def __init__(self, i, witness):
        self.i = i
        self.witness = witness
        super().__init__(f"ping-pong inclusion fails for generator {i} at {witness!r}")


class AmbiguousAtTolerance(BoundaryLabError):
    """A boundary point sits within the arc tolerance of an arc endpoint."""

    def __init__(self, theta, endpoint, depth):
        self.theta, self.endpoint, self.depth = theta, endpoint, depth
        super().__init__(
            f"theta={theta!r} is within tolerance of arc endpoint {endpoint!r} "
            f"at coding step {depth}"
        )


class ResourceLimitExceeded(BoundaryLabError):
    """Word enumeration would exceed the configured cap."""


class StepTooLarge(BoundaryLabError):
    """Curve lifting could not continue the branch between two samples."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"branch continuation ambiguous at sample {index}")


class NotEscaping(BoundaryLabError):
    """A prime-end operation was called at a point that is not of escaping type."""


class Unsupported(BoundaryLabError):
    """The request is well-formed but outside what the engine can answer exactly."""
