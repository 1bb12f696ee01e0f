"""Exception hierarchy shared by every qcm module."""


class QcmError(Exception):
    """Base class for all errors raised by qcm."""


class NonHermitian(QcmError):
    pass


class NoConvergence(QcmError):
    pass


class DimensionMismatch(QcmError):
    pass


class NotPsd(QcmError):
    pass


class TooLarge(QcmError):
    pass


class UnknownPoint(QcmError):
    pass


class ZeroMass(QcmError):
    pass


class SpaceMismatch(QcmError):
    pass


class UnboundedMap(QcmError):
    pass


class AlgebraMismatch(QcmError):
    pass


class ImproperIdeal(QcmError):
    pass


class NotStarClosed(QcmError):
    pass


class NoRepresentation(QcmError):
    pass


class ZeroMeasure(QcmError):
    pass


class NotPositive(QcmError):
    pass


class DegenerateConditioning(QcmError):
    pass


class NotCommutative(QcmError):
    pass


class DegenerateSpectrum(QcmError):
    pass


class ParseError(QcmError):
    pass


class UnresolvedReference(QcmError):
    pass


class UnknownSuite(QcmError):
    pass
