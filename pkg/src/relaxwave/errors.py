"""Exception and warning types.

Every error carries a short machine-readable ``code`` and the ``exit_status``
the command-line driver reports for it.
"""

from __future__ import annotations


class RelaxWaveError(Exception):
    code = "error"
    exit_status = 3
    module = "relaxwave"


# -- configuration / input errors (exit 2) ----------------------------------


class ConfigError(RelaxWaveError):
    code = "config"
    exit_status = 2
    module = "cli"


class SubcharacteristicViolation(ConfigError):
    code = "subcharacteristic"
    module = "model"


class NonpositiveParameter(ConfigError):
    code = "nonpositive"
    module = "model"


class CompatibilityError(ConfigError):
    code = "compatibility"
    module = "model"


class ExprSyntaxError(ConfigError):
    """Raised for malformed expression strings; ``offset`` is a byte offset."""

    code = "syntax"
    module = "exprparse"

    def __init__(self, message: str, offset: int, source: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.source = source


class UnknownIdentifier(ExprSyntaxError):
    code = "unknown-identifier"


class GridMismatch(ConfigError):
    code = "grid-mismatch"
    module = "asymptotics"


class CFLViolation(ConfigError):
    code = "cfl"
    module = "reference"


# -- numeric failures (exit 3) ----------------------------------------------


class EvaluationError(RelaxWaveError):
    code = "evaluation"
    module = "model"


class DomainError(EvaluationError):
    code = "domain"
    module = "exprparse"


class QuadratureUnderflow(RelaxWaveError):
    code = "quadrature-underflow"
    module = "spectral"


class Overflow(RelaxWaveError):
    code = "overflow"
    module = "spectral"


class Divergence(RelaxWaveError):
    code = "divergence"
    module = "reference"


class MissingField(RelaxWaveError):
    code = "missing-field"
    module = "reference"


class EmptyTrajectory(RelaxWaveError):
    code = "empty-trajectory"
    module = "energy"


# -- hypothesis / applicability violations (exit 4) --------------------------


class HypothesisViolation(RelaxWaveError):
    code = "hypothesis"
    exit_status = 4
    module = "energy"


class NotApplicable(HypothesisViolation):
    code = "not-applicable"
    module = "spectral"


class WrongSign(HypothesisViolation):
    code = "wrong-sign"
    module = "asymptotics"


# -- warnings ----------------------------------------------------------------


class StiffnessWarning(UserWarning):
    pass


class KinkWarning(UserWarning):
    pass
