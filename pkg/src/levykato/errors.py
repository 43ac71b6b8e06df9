"""Exception types shared by all modules."""


class LevyKatoError(Exception):
    """Base class for every error raised by the package."""


class SpecError(LevyKatoError, ValueError):
    """Malformed or out-of-range input (process spec, potential, config)."""


class NonIntegrableMeasure(LevyKatoError):
    pass


class QuadratureFailure(LevyKatoError):
    pass


class EmptyGrid(LevyKatoError):
    pass


class InconclusiveIntegral(LevyKatoError):
    """The regularity integral could not be decided; carries the diagnostic."""

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic


class MissingDecomposition(LevyKatoError):
    pass


class WrongCase(LevyKatoError):
    pass


class AtomAtOrigin(LevyKatoError):
    pass


class TailNotIntegrable(LevyKatoError):
    pass


class CaseAViolation(LevyKatoError):
    pass


class MissingDerivative(LevyKatoError):
    pass


class SupSearchExhausted(LevyKatoError):
    def __init__(self, message, profile=None):
        super().__init__(message)
        self.profile = profile


class DimensionUnsupported(LevyKatoError):
    pass


class NotUnimodal(LevyKatoError):
    pass


class HorizonTooShort(LevyKatoError):
    pass


class SamplerMismatch(LevyKatoError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
