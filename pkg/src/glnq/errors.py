"""Exception types shared across the package."""


class GlnqError(Exception):
    """Base class for all package errors."""


class NotPrimePower(GlnqError):
    pass


class TooLarge(GlnqError):
    pass


class ZeroConstantTerm(GlnqError):
    pass


class SizeMismatch(GlnqError):
    pass


class SingularMatrix(GlnqError):
    pass


class BudgetExceeded(GlnqError):
    pass


class LiftFailure(GlnqError):
    pass


class LabelingInconsistent(GlnqError):
    pass


class NotConstantOnD(GlnqError):
    pass


class StrataMismatch(GlnqError):
    pass


class RankDeficient(GlnqError):
    pass


class NoCandidate(GlnqError):
    pass


class LabelingRequired(GlnqError):
    pass


class SingularSystem(GlnqError):
    pass


class DegenerateWeights(GlnqError):
    pass
