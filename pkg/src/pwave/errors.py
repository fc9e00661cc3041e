"""Exception hierarchy. Each error carries the CLI exit code it maps to."""


class WaveError(Exception):
    exit_code = 1


class DistinctRealRootsRequired(WaveError):
    exit_code = 2


class NoPositivePair(WaveError):
    exit_code = 3


class InvalidEpsilon(WaveError):
    exit_code = 4


class InvalidPlateau(WaveError):
    exit_code = 5


class BaseCaseFails(WaveError):
    exit_code = 6


class BoundsFailed(WaveError):
    exit_code = 7


class OrderingViolated(WaveError):
    exit_code = 8


class MaxIterExceeded(WaveError):
    exit_code = 9

    def __init__(self, msg, profile=None, trace=None):
        super().__init__(msg)
        self.profile = profile
        self.trace = trace


class RangeViolation(WaveError):
    exit_code = 10


class GridTooSmall(WaveError):
    exit_code = 11


class DomainTooSmall(WaveError):
    exit_code = 12


class NonMonotoneFront(WaveError):
    exit_code = 13


class MuTooLarge(WaveError):
    exit_code = 14


class KinkOutsideDomain(WaveError):
    exit_code = 15


class GridMismatch(WaveError):
    exit_code = 16


class SingularSystem(WaveError):
    exit_code = 17


class InvalidConfig(WaveError):
    exit_code = 18


class ValidationFailed(WaveError):
    exit_code = 19


EXIT_CODES = {
    cls.__name__: cls.exit_code
    for cls in (
        DistinctRealRootsRequired, NoPositivePair, InvalidEpsilon, InvalidPlateau,
        BaseCaseFails, BoundsFailed, OrderingViolated, MaxIterExceeded,
        RangeViolation, GridTooSmall, DomainTooSmall, NonMonotoneFront,
        MuTooLarge, KinkOutsideDomain, GridMismatch, SingularSystem,
        InvalidConfig, ValidationFailed,
    )
}
