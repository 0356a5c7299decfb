"""Two-sex basic reproduction number, thresholds and sensitivity.

One infected individual of a given sex generates an expected number of
opposite-sex infections

    R = delta * I,   I = int_0^omega s(y) int_0^y G(x, y) ptr(x, y) dx dy

where ``s`` is the density of the infective age at death, ``G`` the
remaining-activity fraction, ``ptr`` the per-act transmission probability
and ``delta`` the annual act rate at infection.  With both sexes'
integrals in hand the composite number is R0 = sqrt(R_fm * R_mf), and the
epidemic threshold R0 > 1 is equivalent to ISA > I0 where

    ISA = sqrt(delta_m * delta_f)          (index of sexual activity)
    I0  = (I_f * I_m) ** -0.5              (critical act rate)

I0 depends only on infectivity, survival and the shape of the activity
decline, never on the contact rates, so the R0 = 1 locus in the
(delta_m, delta_f) plane is the fixed hyperbola delta_m * delta_f = I0**2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import cache, cached_property

import numpy as np

from .behavior import ActivityParams, activity_fraction
from .errors import DomainError, InconsistentResult, QuadratureFailure
from .natural_history import (
    TransmissionParams,
    ViralLoadParams,
    peak_transmission_prob,
    solve_plateau_point,
    transmission_prob,
)
from .survival import SurvivalParams, survival_density, tail_mass

__all__ = [
    "QuadratureSpec",
    "SexProfile",
    "PopulationConfig",
    "BrnResult",
    "Verdict",
    "sex_integral",
    "sex_brn",
    "index_i0",
    "index_isa",
    "composite_r0",
    "evaluate_brn",
    "threshold_check",
    "hyperbola_locus",
    "sensitivity_sweep",
    "balance_partner_rate",
    "MAX_TAIL_MASS",
    "CRITICAL_BAND",
]

# horizon must leave less survival mass beyond it than this
MAX_TAIL_MASS = 1e-6

# |ISA - I0| within this relative band counts as critical
CRITICAL_BAND = 1e-9


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor Gauss-Legendre rule with panel-doubling refinement.

    ``order`` nodes per panel in each direction; refinement doubles the
    panel count in both directions until two consecutive levels agree to
    relative ``tol``, up to ``max_refine`` doublings.
    """

    order: int = 24
    tol: float = 1e-6
    max_refine: int = 8

    def __post_init__(self):
        if self.order < 2:
            raise DomainError("quadrature order must be >= 2")
        if not self.tol > 0:
            raise DomainError("quadrature tol must be > 0")
        if self.max_refine < 0:
            raise DomainError("max_refine must be >= 0")


@dataclass(frozen=True)
class SexProfile:
    """Complete parameter set for one sex."""

    label: str
    viral: ViralLoadParams
    transmission: TransmissionParams
    activity: ActivityParams
    survival: SurvivalParams

    def __post_init__(self):
        if self.label not in ("female", "male"):
            raise DomainError("label must be 'female' or 'male'")
        if self.activity.terminal_lead != self.viral.terminal_lead:
            raise DomainError(
                "activity and viral-load trajectories must share tau1"
            )

    @cached_property
    def x_plateau(self) -> float:
        """Plateau crossing of the early-peak curve (largest root at the plateau)."""
        return solve_plateau_point(self.viral)

    @cached_property
    def peak_prob(self) -> float:
        """Supremum of the per-act transmission probability."""
        return peak_transmission_prob(self.viral, self.transmission)


@dataclass(frozen=True)
class PopulationConfig:
    """Two sex profiles plus the integration horizon and optional head counts."""

    female: SexProfile
    male: SexProfile
    omega: float = 40.0
    pop_female: float | None = None
    pop_male: float | None = None

    def __post_init__(self):
        if self.female.label != "female" or self.male.label != "male":
            raise DomainError("profiles must carry their own sex labels")
        if not self.omega > 0:
            raise DomainError("omega must be > 0")
        for pop in (self.pop_female, self.pop_male):
            if pop is not None and not pop > 0:
                raise DomainError("population sizes must be > 0")
        for prof in (self.female, self.male):
            mass = tail_mass(self.omega, prof.survival)
            if mass >= MAX_TAIL_MASS:
                raise DomainError(
                    f"survival mass beyond omega={self.omega:g} is {mass:.2e} "
                    f"for {prof.label}; must be < {MAX_TAIL_MASS:g}"
                )


class Verdict(enum.Enum):
    EPIDEMIC = "epidemic"
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"


@dataclass(frozen=True)
class BrnResult:
    """Everything the threshold question needs, in one record.

    ``integral_f``/``integral_m`` are the per-unit-delta expected-infection
    integrals; ``r_fm``/``r_mf`` the sex-specific reproduction numbers;
    ``i0`` and ``isa`` are in acts/year.
    """

    integral_f: float
    integral_m: float
    r_fm: float
    r_mf: float
    r0: float
    i0: float
    isa: float
    epidemic: bool


@cache
def _gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _tensor_level(profile, omega, order, panels, ptr_scale):
    """One refinement level: `panels` x `panels` tensor GL on the triangle.

    Outer variable y runs over [tau1, omega] (the integrand vanishes for
    y <= tau1); for each outer node the inner integral over x in [0, y]
    uses the same panel count.
    """
    nodes, weights = _gl_rule(order)
    tau = profile.activity.terminal_lead
    viral, link, act = profile.viral, profile.transmission, profile.activity
    xp = profile.x_plateau
    edges = np.linspace(tau, omega, panels + 1)
    fractions = np.linspace(0.0, 1.0, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        y = 0.5 * (hi + lo) + half * nodes          # (order,)
        wy = half * weights
        inner = np.zeros_like(y)
        ycol = y[:, None]
        for flo, fhi in zip(fractions[:-1], fractions[1:]):
            ihalf = 0.5 * (fhi - flo) * ycol
            x = 0.5 * (fhi + flo) * ycol + ihalf * nodes[None, :]
            wx = ihalf * weights[None, :]
            g = activity_fraction(x, ycol, act)
            ptr = transmission_prob(x, ycol, viral, link, xp)
            inner += np.sum(wx * g * ptr, axis=1)
        total += float(np.sum(wy * survival_density(y, profile.survival) * inner))
    return ptr_scale * total


def sex_integral(
    profile: SexProfile,
    omega: float,
    quad: QuadratureSpec | None = None,
    ptr_scale: float = 1.0,
) -> float:
    """Expected infections per unit delta over one infective life course.

    Integrates ``s(y) * G(x, y) * ptr(x, y)`` over the triangle
    0 <= x <= y <= omega, with the per-act probability scaled pointwise by
    ``ptr_scale``.  Refines until consecutive levels agree to ``quad.tol``
    relative; raises :class:`QuadratureFailure` if the budget runs out.
    """
    quad = quad or QuadratureSpec()
    if not omega > 0:
        raise DomainError("omega must be > 0")
    if not ptr_scale >= 0:
        raise DomainError("ptr_scale must be >= 0")
    if ptr_scale * profile.peak_prob >= 1.0:
        raise DomainError(
            f"scaled transmission probability reaches "
            f"{ptr_scale * profile.peak_prob:.3g} >= 1"
        )
    if omega <= profile.activity.terminal_lead:
        return 0.0
    prev = None
    err = math.inf
    for level in range(quad.max_refine + 1):
        total = _tensor_level(profile, omega, quad.order, 2**level, ptr_scale)
        if prev is not None:
            err = abs(total - prev) / max(abs(total), 1e-300)
            if err <= quad.tol:
                return total
        prev = total
    raise QuadratureFailure(
        f"relative error {err:.2e} above target {quad.tol:g} "
        f"after {quad.max_refine} refinements"
    )


def sex_brn(delta: float, integral: float) -> float:
    """Sex-specific reproduction number: annual act rate times the integral."""
    if delta < 0:
        raise DomainError("delta must be >= 0")
    return delta * integral


def index_i0(integral_f: float, integral_m: float) -> float:
    """Critical act rate ``(I_f * I_m)**-0.5`` (acts/year).

    Undefined when either integral vanishes (no transmission, no threshold).
    """
    if integral_f <= 0 or integral_m <= 0:
        raise DomainError("both sex integrals must be > 0 for a threshold")
    return (integral_f * integral_m) ** -0.5


def index_isa(delta_m: float, delta_f: float) -> float:
    """Index of sexual activity ``sqrt(delta_m * delta_f)`` (acts/year)."""
    if delta_m < 0 or delta_f < 0:
        raise DomainError("contact rates must be >= 0")
    return math.sqrt(delta_m * delta_f)


def composite_r0(r_fm: float, r_mf: float) -> float:
    """Composite reproduction number ``sqrt(r_fm * r_mf)``.

    Dominant eigenvalue of the 2x2 anti-diagonal next-generation matrix;
    transmission takes two generations to return to the same sex.
    """
    if r_fm < 0 or r_mf < 0:
        raise DomainError("reproduction numbers must be >= 0")
    return math.sqrt(r_fm * r_mf)


def _verdict(isa: float, i0: float) -> Verdict:
    if abs(isa - i0) <= CRITICAL_BAND * i0:
        return Verdict.CRITICAL
    return Verdict.EPIDEMIC if isa > i0 else Verdict.SUBCRITICAL


def evaluate_brn(
    config: PopulationConfig, quad: QuadratureSpec | None = None
) -> BrnResult:
    """Run both sex integrals and assemble the full threshold record."""
    integral_f = sex_integral(config.female, config.omega, quad)
    integral_m = sex_integral(config.male, config.omega, quad)
    delta_f = config.female.activity.annual_acts
    delta_m = config.male.activity.annual_acts
    r_fm = sex_brn(delta_f, integral_f)
    r_mf = sex_brn(delta_m, integral_m)
    i0 = index_i0(integral_f, integral_m)
    isa = index_isa(delta_m, delta_f)
    result = BrnResult(
        integral_f=integral_f,
        integral_m=integral_m,
        r_fm=r_fm,
        r_mf=r_mf,
        r0=composite_r0(r_fm, r_mf),
        i0=i0,
        isa=isa,
        epidemic=_verdict(isa, i0) is Verdict.EPIDEMIC,
    )
    threshold_check(result)
    return result


def threshold_check(result: BrnResult) -> Verdict:
    """Three-way verdict, cross-checked between its two formulations.

    ISA vs I0 and R0 vs 1 must agree (they are algebraically identical);
    a disagreement beyond the criticality band raises
    :class:`InconsistentResult`.
    """
    by_index = _verdict(result.isa, result.i0)
    by_r0 = _verdict(result.r0, 1.0)
    if by_index is not by_r0:
        raise InconsistentResult(
            f"ISA/I0 gives {by_index.value} but R0={result.r0!r} gives "
            f"{by_r0.value}"
        )
    if result.epidemic != (by_index is Verdict.EPIDEMIC):
        raise InconsistentResult("stored epidemic flag contradicts the verdict")
    return by_index


def hyperbola_locus(
    i0: float, delta_m_grid: "list[float] | np.ndarray"
) -> list[tuple[float, float]]:
    """Points (delta_m, i0**2 / delta_m) on the R0 = 1 locus."""
    grid = np.asarray(delta_m_grid, dtype=float)
    if np.any(grid <= 0):
        raise DomainError("delta_m grid values must be > 0")
    return [(float(dm), float(i0 * i0 / dm)) for dm in grid]


def sensitivity_sweep(
    config: PopulationConfig,
    scale_factors: "list[float]",
    mode: str = "scale_function",
    quad: QuadratureSpec | None = None,
) -> list[tuple[float, float]]:
    """I0 under rescaled transmission probabilities.

    ``scale_function`` multiplies the per-act probability pointwise by each
    factor (I0 is exactly factor**-1 times baseline); ``scale_endpoints``
    rescales the two anchor probabilities and re-derives the link, which is
    only approximately linear.
    """
    if mode not in ("scale_function", "scale_endpoints"):
        raise DomainError(f"unknown sweep mode {mode!r}")
    out = []
    for factor in scale_factors:
        if not factor > 0:
            raise DomainError("scale factors must be > 0")
        if mode == "scale_function":
            int_f = sex_integral(config.female, config.omega, quad, ptr_scale=factor)
            int_m = sex_integral(config.male, config.omega, quad, ptr_scale=factor)
        else:
            profiles = []
            for prof in (config.female, config.male):
                link = prof.transmission
                scaled = TransmissionParams.from_anchors(
                    factor * link.prob_at_peak,
                    factor * link.prob_at_plateau,
                    prof.viral.peak_log_vl,
                    prof.viral.plateau_log_vl,
                )
                profiles.append(replace(prof, transmission=scaled))
            int_f = sex_integral(profiles[0], config.omega, quad)
            int_m = sex_integral(profiles[1], config.omega, quad)
        out.append((factor, index_i0(int_f, int_m)))
    return out


def balance_partner_rate(pop_f: float, pop_m: float, delta_f: float) -> float:
    """Male rate implied by act-balance: ``pop_f * delta_f / pop_m``.

    Total acts by women with men must equal total acts by men with women.
    """
    if pop_f <= 0 or pop_m <= 0:
        raise DomainError("population sizes must be > 0")
    if delta_f < 0:
        raise DomainError("delta_f must be >= 0")
    return pop_f * delta_f / pop_m
