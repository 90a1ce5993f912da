"""Exception types. Every error carries a short machine-readable reason."""


class VdgvError(Exception):
    reason = "error"

    def __init__(self, message: str = "", **detail):
        super().__init__(message)
        self.detail = detail


class InvalidSubfield(VdgvError, ValueError):
    reason = "invalid-subfield"


class FieldMismatch(VdgvError, ValueError):
    reason = "field-mismatch"


class NotSeparable(VdgvError, ValueError):
    reason = "not-separable"


class SplitCapExceeded(VdgvError):
    reason = "kernel-not-split-within-cap"


class NoRationalLagrangian(VdgvError):
    reason = "no-rational-lagrangian"


class ResidueNonzero(VdgvError):
    reason = "residue-nonzero"


class PreconditionFailed(VdgvError, ValueError):
    reason = "precondition-failed"


class GateExceeded(VdgvError):
    reason = "enumeration-gate-exceeded"


class InvariantViolation(VdgvError, AssertionError):
    reason = "invariant-violation"


class CountMismatch(VdgvError):
    reason = "count-mismatch"
