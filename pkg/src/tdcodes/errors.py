"""Exception hierarchy shared by every module."""

from __future__ import annotations


class TdError(Exception):
    """Base class for all errors raised by this package."""


class InvalidLattice(TdError):
    pass


class InvalidDimension(TdError):
    pass


class InvalidLeafDim(TdError):
    pass


class NodeNotInLeaf(TdError):
    pass


class DimensionMismatch(TdError, ValueError):
    pass


class NotInRowSpace(TdError):
    pass


class NotAStabilizerCode(TdError):
    pass


class InternalConsistencyError(TdError):
    pass


class RedundancyCheckFailed(TdError):
    pass


class NotRepresentable(TdError):
    pass


class UnsupportedModel(TdError):
    pass


class MissingTags(TdError):
    pass


class InvalidSeeds(TdError):
    pass


class SeedSetViolation(TdError):
    pass


class InvalidSize(TdError, ValueError):
    pass


class TooManyQubits(TdError):
    pass


class NotCss(TdError):
    pass


class DependentGenerators(TdError):
    pass


class InvalidPlan(TdError):
    pass


class CircuitFormatError(TdError, ValueError):
    pass


class InvalidParams(TdError, ValueError):
    pass
