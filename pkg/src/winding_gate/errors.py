"""Exception hierarchy.

Three families map onto the CLI exit codes: input problems (2), numerical
failures (3) and failed certificates (4).
"""
from __future__ import annotations


class WindingGateError(Exception):
    exit_code = 1


class InputError(WindingGateError):
    exit_code = 2


class NumericalError(WindingGateError):
    exit_code = 3


class CertificateError(WindingGateError):
    exit_code = 4


# geometry
class DomainError(InputError):
    pass


class OverlapError(DomainError):
    pass


class ContainmentError(DomainError):
    pass


class DegenerateError(DomainError):
    pass


class EpsilonTooLarge(InputError):
    pass


# boundary data
class ExpressionSyntaxError(InputError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class DivisionByZero(InputError):
    pass


class OffBoundaryError(InputError):
    pass


class OutsideDomain(InputError):
    pass


# solver / periods
class IllConditioned(NumericalError):
    pass


class InsufficientSamples(NumericalError):
    pass


class SingularPeriodMatrix(NumericalError):
    pass


class ResidualLogPeriod(NumericalError):
    pass


# degree
class ZeroOnContour(NumericalError):
    pass


class NonConvergent(NumericalError):
    pass


class Unstable(NumericalError):
    pass


# extendibility / witness
class NotExtendible(InputError):
    pass


class NoGoodPoint(NumericalError):
    pass


class InconsistentCriteria(CertificateError):
    pass


class DeflationResidual(CertificateError):
    pass


class DegreeNotMinusOne(CertificateError):
    pass


class CertificateFailed(CertificateError):
    pass


class NegativeDegree(CertificateError):
    pass
