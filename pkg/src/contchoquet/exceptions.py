"""Exception types raised by the library."""


class InputError(ValueError):
    """An argument violates a precondition (bad shape, sign, ordering...)."""


class DomainError(ValueError):
    """A geometric precondition fails, e.g. a target outside its body.

    Attributes
    ----------
    certificate : ndarray or None
        Unit direction ``f`` with ``<f, x> - support(P, f) > 0`` when the
        failure is a point outside a polytope.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class RefinementError(RuntimeError):
    """Grid refinement could not reach the requested resolution."""


class CoverError(RuntimeError):
    """Chart construction failed to cover the parameter domain.

    Attributes
    ----------
    worst_t : float
        Parameter value at the centre of the largest uncovered gap.
    """

    def __init__(self, message, worst_t):
        super().__init__(message)
        self.worst_t = worst_t
