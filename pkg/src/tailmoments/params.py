"""Analysis configuration shared by the moment and asymptotics machinery."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ModelValidationError

#: default scale factors used by the ratio estimators; 2 and 3 have
#: incommensurable logarithms, which is what defeats log-periodic aliasing,
#: and e makes the de Haan normalization step exact.
DEFAULT_LAMBDAS: tuple[float, ...] = (2.0, math.e, 3.0, 8.0)


@dataclass(frozen=True)
class AnalysisParams:
    """Immutable bundle of every knob the analysis pipeline reads.

    beta              order of the truncated moment under study (> 0)
    lambdas           scale factors for ratio estimators (each > 1)
    x_min, x_max      analysis range (0 < x_min < x_max)
    points_per_decade geometric grid density (>= 8)
    rel_tol           relative quadrature tolerance, in (0, 1e-4]
    eps_rho           tolerance used when comparing index estimates and
                      classifying boundary regimes
    window_decades    width of the tail window used by all limit estimators
    spread_tol        half-range convergence band for local estimates
    trend_tol         allowed drift between first- and second-half means
    """

    beta: float
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    x_min: float = 1.0
    x_max: float = 1.0e12
    points_per_decade: int = 16
    rel_tol: float = 1.0e-10
    eps_rho: float = 0.02
    window_decades: float = 3.0
    spread_tol: float = 0.02
    trend_tol: float = 0.01

    def __post_init__(self):
        if not (isinstance(self.beta, (int, float)) and self.beta > 0
                and math.isfinite(self.beta)):
            raise ModelValidationError(f"beta must be a positive finite real, got {self.beta!r}")
        object.__setattr__(self, "lambdas", tuple(float(l) for l in self.lambdas))
        if not self.lambdas:
            raise ModelValidationError("lambdas must be non-empty")
        for lam in self.lambdas:
            if not (lam > 1.0 and math.isfinite(lam)):
                raise ModelValidationError(f"every lambda must exceed 1, got {lam!r}")
        if not (0.0 < self.x_min < self.x_max and math.isfinite(self.x_max)):
            raise ModelValidationError(
                f"need 0 < x_min < x_max < inf, got [{self.x_min!r}, {self.x_max!r}]")
        if self.points_per_decade < 8:
            raise ModelValidationError(
                f"points_per_decade must be >= 8, got {self.points_per_decade!r}")
        if not (0.0 < self.rel_tol <= 1.0e-4):
            raise ModelValidationError(
                f"rel_tol must lie in (0, 1e-4], got {self.rel_tol!r}")
        if not (self.eps_rho > 0.0):
            raise ModelValidationError(f"eps_rho must be positive, got {self.eps_rho!r}")
        if not (self.window_decades > 0.0):
            raise ModelValidationError("window_decades must be positive")
        if not (self.spread_tol > 0.0 and self.trend_tol > 0.0):
            raise ModelValidationError("convergence bands must be positive")

    def window(self) -> tuple[float, float]:
        """Tail window [x_max / 10**window_decades, x_max], clipped at x_min."""
        lo = max(self.x_min, self.x_max / 10.0 ** self.window_decades)
        return lo, self.x_max
