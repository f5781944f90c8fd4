"""Exception types shared across the package."""


class HalmosLabError(Exception):
    """Base class for all halmos-lab errors."""


class DimensionError(HalmosLabError):
    """Matrix shapes are incompatible with the requested operation."""


class StructureError(HalmosLabError):
    """A matrix violates the symmetry-class structure it claims."""


class DomainError(HalmosLabError):
    """Input is outside the mathematical domain of the operation."""


class GapTooSmall(DomainError):
    """The index operator's spectral gap is below threshold; the index is undefined.

    Carries the measured gap so callers can report it.
    """

    def __init__(self, gap, threshold):
        self.gap = float(gap)
        self.threshold = float(threshold)
        super().__init__(
            f"spectral gap {self.gap:.3e} below threshold {self.threshold:.3e}; "
            "index undefined"
        )


class PresentationError(HalmosLabError):
    """An integer matrix does not define a map of the given group presentations."""


class ObstructionContradiction(HalmosLabError):
    """A valid nonzero index coexists with a too-close commuting family.

    This must never fire: the index is locally constant inside the gap radius,
    so a commuting family that close would force the index to zero.
    """
