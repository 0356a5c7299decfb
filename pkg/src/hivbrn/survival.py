"""Weibull distribution of the infective age at death.

Parameterized by its median ``me`` and shape ``beta``; the scale is then
``alpha = me * ln(2)**(-1/beta)``, which places exactly half the mass below
the median.  Density, CDF and quantile are closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

__all__ = [
    "SurvivalParams",
    "weibull_scale",
    "survival_density",
    "survival_cdf",
    "survival_quantile",
    "tail_mass",
]


def weibull_scale(median: float, shape: float) -> float:
    """Weibull scale from median and shape: ``median * ln(2)**(-1/shape)``."""
    if not (median > 0 and shape > 0):
        raise DomainError("median and shape must be > 0")
    return float(median * np.log(2.0) ** (-1.0 / shape))


@dataclass(frozen=True)
class SurvivalParams:
    """Median (years) and shape of the infective-age-at-death distribution.

    ``shape`` is the scenario key ``beta``.
    """

    median: float
    shape: float

    def __post_init__(self):
        if not self.median > 0:
            raise DomainError("median must be > 0")
        if not self.shape > 0:
            raise DomainError("shape (beta) must be > 0")

    @cached_property
    def scale(self) -> float:
        return weibull_scale(self.median, self.shape)


def survival_density(x, p: SurvivalParams):
    """Weibull density ``x**(b-1) * b / a**b * exp(-(x/a)**b)`` at x >= 0."""
    x_a = np.asarray(x, dtype=float)
    if np.any(x_a < 0):
        raise DomainError("x must be >= 0")
    a, b = p.scale, p.shape
    out = x_a ** (b - 1.0) * b / a**b * np.exp(-((x_a / a) ** b))
    return float(out) if np.isscalar(x) else out


def survival_cdf(x, p: SurvivalParams):
    """Weibull CDF ``1 - exp(-(x/a)**b)`` at x >= 0."""
    x_a = np.asarray(x, dtype=float)
    if np.any(x_a < 0):
        raise DomainError("x must be >= 0")
    out = -np.expm1(-((x_a / p.scale) ** p.shape))
    return float(out) if np.isscalar(x) else out


def survival_quantile(u, p: SurvivalParams):
    """Inverse CDF ``a * (-ln(1-u))**(1/b)`` for u in (0, 1)."""
    u_a = np.asarray(u, dtype=float)
    if np.any(u_a <= 0) or np.any(u_a >= 1):
        raise DomainError("u must lie strictly inside (0, 1)")
    out = p.scale * (-np.log1p(-u_a)) ** (1.0 / p.shape)
    return float(out) if np.isscalar(u) else out


def tail_mass(horizon: float, p: SurvivalParams) -> float:
    """Probability of dying later than ``horizon`` years after infection."""
    if horizon < 0:
        raise DomainError("horizon must be >= 0")
    return float(np.exp(-((horizon / p.scale) ** p.shape)))
