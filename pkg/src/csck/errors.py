"""Exception types shared across the engine."""


class CsckError(Exception):
    """Base class for all engine errors."""


class ZeroPolyError(CsckError):
    """The zero polynomial has no degree."""


class IllConditionedError(CsckError):
    """Root factorization could not be certified by reconstruction.

    Carries the offending residual so callers can report it.
    """

    def __init__(self, residual: float, message: str = ""):
        self.residual = residual
        super().__init__(message or f"reconstruction residual {residual:.3e} above tolerance")


class NotKahlerError(CsckError):
    """u' or u' + s*u'' is not positive where it must be."""


class NotCsckError(CsckError):
    """Recovered constants are not constant across the sample window."""

    def __init__(self, spread: float, message: str = ""):
        self.spread = spread
        super().__init__(message or f"constant recovery spread {spread:.3e} above tolerance")


class EndpointSampleError(CsckError):
    """A residual sample sits exactly on a branch endpoint (H(g) = 0)."""


class UnsupportedMultiplicityError(CsckError):
    """Quadratic factors of multiplicity >= 2 are outside the supported range."""


class OutOfDomainError(CsckError):
    """Query point lies outside the solution's s-domain."""


class BadAnchorError(CsckError):
    """Anchor value g0 does not lie strictly inside the branch interval."""


class NotNormalizableError(CsckError):
    """Branch fills the whole ray; there is no finite boundary to normalize to."""


class ConstraintViolationError(CsckError):
    """Case parameters violate a theorem-case constraint clause."""

    def __init__(self, label: str, clause: str):
        self.label = label
        self.clause = clause
        super().__init__(f"case {label}: constraint violated: {clause}")


class NotClassifiedError(CsckError):
    """Requested (n, sign) combination is outside the classified range."""


class StageError(CsckError):
    """A cross-check pipeline stage failed; wraps the original error."""

    def __init__(self, stage: str, original: BaseException):
        self.stage = stage
        self.original = original
        super().__init__(f"stage {stage}: {type(original).__name__}: {original}")
