"""Exception types shared across the package.

Plain ``ValueError`` is raised for ordinary argument violations; the classes
here mark failure modes a caller may reasonably want to catch separately.
"""


class NoConvergenceError(RuntimeError):
    """An iterative routine exhausted its budget before reaching tolerance."""


class UnstableDriftError(ValueError):
    """A drift matrix has an eigenvalue with non-negative real part."""


class SingularGramianError(ArithmeticError):
    """A covariance matrix is numerically singular at the requested time."""


class DegenerateObservationError(ValueError):
    """The observation map cannot separate states; its smallest singular
    value is below the degeneracy threshold, so no finite observability
    constant exists."""


class BasisOverflowError(ValueError):
    """A requested discretization exceeds the supported basis size."""
