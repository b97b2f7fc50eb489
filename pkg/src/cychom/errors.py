"""Exception taxonomy.

Every failure the engine can signal deliberately has its own class so callers
(and the CLI exit-code mapping) can tell validation problems, budget overruns
and inconclusive computations apart.
"""

from __future__ import annotations


class CychomError(Exception):
    """Base class for all deliberate failures raised by this package."""


class ValidationError(CychomError):
    """Input data violates a structural precondition (bad algebra, bad map)."""


class ParseError(CychomError):
    """A serialized file or scalar string could not be read.

    Carries ``line`` (1-based) when the offending line is known.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


# -- scalar / linear algebra ------------------------------------------------

class DivisionByZero(ValidationError, ZeroDivisionError):
    """Inversion of the zero scalar."""


class FieldMismatch(ValidationError):
    """Arithmetic attempted between scalars of different cyclotomic orders."""


class AmbientMismatch(ValidationError):
    """Subspace operation on subspaces of different ambient dimensions."""


class NotContained(ValidationError):
    """quotient_dim(V, W) asked with W not contained in V."""


# -- algebra constructors ---------------------------------------------------

class ClosureOverflow(CychomError):
    """Subalgebra closure exceeded the dimension cap."""


class NotAutomorphism(ValidationError):
    """Twisting map is not a unital algebra automorphism."""


# -- chain complexes --------------------------------------------------------

class SizeOverflow(CychomError):
    """A chain space would exceed the dimension budget."""


class NonUnital(ValidationError):
    """Operation requires a unital algebra."""


class NotMultiplicative(ValidationError):
    """Induced map requested for a linear map that is not multiplicative."""


class DegreeTooLow(ValidationError):
    """Periodicity operator applied below degree 2."""


class NotStabilized(CychomError):
    """Tower images kept changing within the cutoff (inconclusive)."""


# -- spectrum ---------------------------------------------------------------

class SplittingFieldTooLarge(CychomError):
    """Central idempotents need a cyclotomic order beyond the configured bound."""


class FiltrationNotStandard(ValidationError):
    """Filtration handed to the spectral sequence is not the standard one."""


class FiltrationNotRespected(ValidationError):
    """Morphism does not map the source filtration into the target one."""


# -- crossed products / chern ----------------------------------------------

class EmptyTarget(CychomError):
    """Every comparison-map component has an empty target (no fixed points)."""


class DegreePositive(ValidationError):
    """phi_gamma is only defined in degree 0 here."""


class NotIdempotent(ValidationError):
    """Claimed idempotent fails e*e = e."""


class NotInvertible(ValidationError):
    """Claimed invertible has no two-sided inverse."""


class OrderUnbounded(CychomError):
    """Invertible generates infinite multiplicative order within the bound."""
