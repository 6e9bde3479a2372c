"""Exception hierarchy.

Every error raised by the package derives from :class:`HSRError`.  The
three top-level families map onto the CLI exit codes: validation
problems (1), geometric degeneracies (2) and internal invariant
failures (3).
"""


class HSRError(Exception):
    exit_code = 3


class ValidationError(HSRError):
    """The input violates the scene contract."""

    exit_code = 1


class SceneFormatError(ValidationError):
    pass


class DegenerateRay(ValidationError):
    pass


class UnsupportedSize(ValidationError):
    pass


class DepthOrderViolation(ValidationError):
    """Triangle ``far`` (lower index) occludes triangle ``near``."""

    def __init__(self, far, near):
        super().__init__(f"triangle {far} occludes triangle {near} but precedes it")
        self.far = far
        self.near = near


class DegeneracyDetected(HSRError):
    """General position does not hold."""

    exit_code = 2


class CyclicOrderViolation(DegeneracyDetected):
    pass


class InvariantError(HSRError):
    exit_code = 3


class NoIntersection(InvariantError):
    pass


class MaskConflict(InvariantError):
    pass


class NonClosingWalk(InvariantError):
    pass


class OrphanVertex(InvariantError):
    pass


class DuplicateVertex(InvariantError):
    pass


class OutOfRange(IndexError):
    pass


class EmptyBlock(ValueError):
    pass
