"""Exception types shared across the package.

Every certifying routine fails loudly: a raised exception always means
"not certified", never "certified false".
"""


class PentachargeError(Exception):
    """Base class for all package errors."""


class GuardViolation(PentachargeError):
    """An arithmetic operand escaped its magnitude guard; the computation aborts."""


class DomainError(PentachargeError):
    """Input outside the mathematical domain (e.g. log of a nonpositive interval)."""


class PrecisionExhausted(PentachargeError):
    """A comparison remained undecidable at the maximum working precision."""


class DepthExceeded(PentachargeError):
    """Subdivision reached the depth limit without certifying. Not a negative result."""


class NotSquarefree(PentachargeError):
    """Root isolation requires a squarefree polynomial on the domain."""


class DegenerateDenominator(PentachargeError):
    """Rational-function denominator vanishes identically."""


class CertificationFailed(PentachargeError):
    """A certification stage failed; the message names the stage."""


class IdentityFailed(PentachargeError):
    """An exact identity check between two closed forms failed."""


class ComparisonFailed(PentachargeError):
    """An exact power comparison did not decide in the claimed direction."""


class VerificationFailed(PentachargeError):
    """A fast-path witness failed its exact verification; the run must abort."""


class CapacityExceeded(PentachargeError):
    """Integer workload exceeded a configured capacity bound."""


class GridPointFailed(PentachargeError):
    """A grid certification inequality failed at a specific point."""

    def __init__(self, i: int, j: int, message: str = ""):
        self.i = i
        self.j = j
        super().__init__(message or f"grid point ({i},{j}) failed")


class MissingArtifact(PentachargeError):
    """A required input file from an earlier phase does not exist."""


class PoleError(PentachargeError):
    """Projection evaluated at the projection pole."""


class NotGood(PentachargeError):
    """Square or block does not satisfy the geometry preconditions."""


class CoincidentPoints(PentachargeError):
    """Pair potential evaluated at two equal points."""


class DepthLimit(PentachargeError):
    """Dyadic subdivision would leave the representable grid."""


class BlockBudgetExceeded(PentachargeError):
    """Search exceeded its configured block budget."""


class NonRationalCharPoly(PentachargeError):
    """Characteristic polynomial left the rationals; caller falls back to exact signs."""


class CoincidenceStall(PentachargeError):
    """Bisection stalled on an exact midpoint coincidence."""
