"""Exception hierarchy.

Everything raised on purpose derives from :class:`BiorthoError`. Failures that
signal a numerical property of the input (degeneracy, coalescence, missing
convergence) derive from :class:`NumericalError`; the CLI maps those to exit
code 2.
"""


class BiorthoError(Exception):
    pass


class NumericalError(BiorthoError):
    pass


class ShapeMismatch(BiorthoError, ValueError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class SingularBasis(NumericalError):
    pass


class PairingAmbiguous(NumericalError):
    pass


class DegenerateSpectrum(NumericalError):
    pass


class ExceptionalPoint(NumericalError):
    pass


class ZeroState(BiorthoError, ValueError):
    pass


class SystemMismatch(BiorthoError, ValueError):
    pass


class SplitInvalid(BiorthoError, ValueError):
    pass


class DenominatorSingular(NumericalError):
    pass


class DimensionNotTwo(BiorthoError, ValueError):
    pass


class ComplexSpectrum(NumericalError):
    pass


class OverflowRisk(NumericalError):
    pass


class DegenerateGap(NumericalError):
    pass


class MatchingAmbiguous(NumericalError):
    pass


class InvalidSpin(BiorthoError, ValueError):
    pass


class NoPositiveSigning(NumericalError):
    def __init__(self, message, best_signs=None, best_min_eig=None):
        super().__init__(message)
        self.best_signs = best_signs
        self.best_min_eig = best_min_eig


class ZeroDenominator(NumericalError):
    pass


class InternalConsistencyError(BiorthoError, RuntimeError):
    pass
