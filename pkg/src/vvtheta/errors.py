"""Exception hierarchy for vvtheta."""


class VvthetaError(Exception):
    """Base class for all vvtheta errors."""


# lattice construction / sublattices

class NotSymmetric(VvthetaError):
    pass


class NotEven(VvthetaError):
    pass


class Degenerate(VvthetaError):
    pass


class NotPrimitive(VvthetaError):
    pass


class DegenerateSublattice(VvthetaError):
    pass


class IncompatibleSublattices(VvthetaError):
    pass


# discriminant forms

class NotIsotropic(VvthetaError):
    pass


class NotSubgroup(VvthetaError):
    pass


class NotInDual(VvthetaError):
    pass


class MismatchedSignature(VvthetaError):
    pass


class EnumerationCapExceeded(VvthetaError):
    pass


# representation vectors

class IndexMismatch(VvthetaError):
    pass


# Grassmannian / polynomials

class NotPositiveDefiniteSpan(VvthetaError):
    pass


class WrongDimension(VvthetaError):
    pass


class NonHomogeneousPolynomial(VvthetaError):
    pass


class PolynomialNotHarmonic(VvthetaError):
    pass


# theta computation

class TauNotInUpperHalfPlane(VvthetaError):
    pass


class BoundTooLarge(VvthetaError):
    pass


class TailTooLarge(VvthetaError):
    pass


class VectorNotInComplement(VvthetaError):
    pass


# contraction

class ComplementNotDefinite(VvthetaError):
    pass


class GlueDegenerate(VvthetaError):
    pass


class InconsistentDegrees(VvthetaError):
    pass


class SplitCheckFailed(VvthetaError):
    pass


# CLI / scenarios

class ParseError(VvthetaError):
    pass


class UnknownCheck(VvthetaError):
    pass
