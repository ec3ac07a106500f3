"""Exception hierarchy for ConeLab."""


class ConeLabError(Exception):
    """Base class for every error raised by ConeLab."""


class GridMismatchError(ConeLabError):
    """Fields living on different grids were combined."""


class MetricError(ConeLabError):
    """A metric field is singular or not positive definite."""


class GuardError(ConeLabError):
    """A pair left the neighborhood in which the functionals are trusted."""


class ConstraintError(ConeLabError):
    """An input violates a linear or volume constraint."""


class DecompositionError(ConeLabError):
    """A York decomposition could not be resolved on the given basis."""


class ConvergenceError(ConeLabError):
    """An iterative solver (Newton, finite differences, eigensolver) failed."""


class ModelError(ConeLabError):
    """An ambient model is degenerate or a requested level is not attained."""


class PreconditionError(ConeLabError):
    """A sequence lemma was called outside its hypotheses."""


class ConfigError(ConeLabError):
    """A configuration file could not be parsed or validated."""
