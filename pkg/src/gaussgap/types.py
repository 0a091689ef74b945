"""Shared domain types."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class MomentSpec:
    """Parameters of one bivariate centered Gaussian moment problem.

    sigma1, sigma2 are the standard deviations of the two coordinates,
    alpha1, alpha2 the exponents applied to their absolute values, and rho
    the correlation coefficient.  Exponents must exceed -1 for the moments
    to be finite.  |rho| = 1 is admitted at construction time; operations
    that require non-degeneracy enforce |rho| < 1 themselves.
    """

    sigma1: float
    sigma2: float
    alpha1: float
    alpha2: float
    rho: float

    def __post_init__(self):
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise DomainError(f"standard deviations must be positive, got "
                              f"({self.sigma1}, {self.sigma2})")
        if not (self.alpha1 > -1 and self.alpha2 > -1):
            raise DomainError(f"exponents must exceed -1, got "
                              f"({self.alpha1}, {self.alpha2})")
        if not abs(self.rho) <= 1:
            raise DomainError(f"correlation must lie in [-1, 1], got {self.rho}")

    @property
    def degenerate(self) -> bool:
        """True when |rho| = 1 (the two coordinates coincide up to sign)."""
        return abs(self.rho) == 1.0
