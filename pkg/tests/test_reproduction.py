import dataclasses

import numpy as np
import pytest
from scipy import integrate

from hivbrn import (
    BrnResult,
    DomainError,
    InconsistentResult,
    PopulationConfig,
    QuadratureFailure,
    QuadratureSpec,
    SexProfile,
    TransmissionParams,
    Verdict,
    activity_fraction,
    balance_partner_rate,
    composite_r0,
    evaluate_brn,
    hyperbola_locus,
    index_i0,
    index_isa,
    sensitivity_sweep,
    sex_brn,
    sex_integral,
    survival_density,
    threshold_check,
    transmission_prob,
)

# Frozen cross-check values from scipy.integrate.quad nested over the same
# integrand at epsrel=1e-11 (the live oracle below re-derives the female one
# at looser settings).
INT_F_REFERENCE = 0.011866472266349291
INT_M_REFERENCE = 0.012666651010154186


def scaled_profile(profile, factor):
    link = profile.transmission
    scaled = TransmissionParams.from_anchors(
        factor * link.prob_at_peak,
        factor * link.prob_at_plateau,
        profile.viral.peak_log_vl,
        profile.viral.plateau_log_vl,
    )
    return dataclasses.replace(profile, transmission=scaled)


class TestSexIntegral:
    def test_female_value(self, baseline_integrals):
        int_f, _ = baseline_integrals
        assert int_f == pytest.approx(0.011875, rel=0.02)
        assert int_f == pytest.approx(INT_F_REFERENCE, rel=1e-5)

    def test_male_value(self, baseline_integrals):
        _, int_m = baseline_integrals
        assert int_m == pytest.approx(0.012692, rel=0.03)
        assert int_m == pytest.approx(INT_M_REFERENCE, rel=1e-5)

    def test_against_live_scipy_oracle(self, female, population):
        # independent route: scipy's adaptive quadrature, nested
        def inner(y):
            val, _ = integrate.quad(
                lambda x: activity_fraction(x, y, female.activity)
                * transmission_prob(
                    x, y, female.viral, female.transmission, female.x_plateau
                ),
                0.0,
                y,
                limit=200,
            )
            return val

        oracle, _ = integrate.quad(
            lambda y: survival_density(y, female.survival) * inner(y),
            female.activity.terminal_lead,
            population.omega,
            limit=200,
        )
        assert sex_integral(female, population.omega) == pytest.approx(
            oracle, rel=1e-5
        )

    def test_vanishing_transmission(self, female, population):
        tiny = scaled_profile(female, 1e-12 / female.transmission.prob_at_plateau)
        assert sex_integral(tiny, population.omega) == pytest.approx(0.0, abs=1e-10)

    def test_pointwise_scaling_is_linear(self, female, population, baseline_integrals):
        base = baseline_integrals[0]
        for c in (0.5, 2.0):
            scaled = sex_integral(female, population.omega, ptr_scale=c)
            assert scaled == pytest.approx(c * base, rel=1e-9)

    def test_monotone_in_anchor_probs(self, female, population):
        values = []
        for hi in np.linspace(0.004, 0.012, 5):
            link = TransmissionParams.from_anchors(hi, 0.001, 5.0, 3.0)
            prof = dataclasses.replace(female, transmission=link)
            values.append(sex_integral(prof, population.omega))
        assert np.all(np.diff(values) > 0)
        values = []
        for lo in np.linspace(0.0005, 0.002, 5):
            link = TransmissionParams.from_anchors(0.008, lo, 5.0, 3.0)
            prof = dataclasses.replace(female, transmission=link)
            values.append(sex_integral(prof, population.omega))
        assert np.all(np.diff(values) > 0)

    def test_horizon_stability(self, female, tight_quad):
        at_40 = sex_integral(female, 40.0, tight_quad)
        at_60 = sex_integral(female, 60.0, tight_quad)
        assert abs(at_60 - at_40) / at_40 < 1e-6

    def test_short_horizon_is_zero(self, female):
        assert sex_integral(female, 1.0) == 0.0

    def test_refinement_exhaustion(self, female, population):
        with pytest.raises(QuadratureFailure):
            sex_integral(
                female, population.omega, QuadratureSpec(order=4, tol=1e-16, max_refine=1)
            )

    def test_scale_must_keep_prob_below_one(self, female, population):
        with pytest.raises(DomainError):
            sex_integral(female, population.omega, ptr_scale=200.0)


class TestSexBrn:
    def test_lower_corner(self, baseline_integrals):
        assert sex_brn(208.0, baseline_integrals[0]) == pytest.approx(2.47, rel=0.01)

    def test_upper_corner(self, baseline_integrals):
        assert sex_brn(468.0, baseline_integrals[0]) == pytest.approx(5.55, rel=0.01)

    def test_zero_rate(self, baseline_integrals):
        assert sex_brn(0.0, baseline_integrals[0]) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            sex_brn(-1.0, 0.01)


class TestIndices:
    def test_i0_baseline(self, baseline_integrals):
        assert index_i0(*baseline_integrals) == pytest.approx(81.60, rel=0.01)

    def test_i0_unit(self):
        assert index_i0(1.0, 1.0) == 1.0

    def test_i0_from_rounded_corners(self):
        # arithmetic on the corner-implied integrals is self-consistent
        assert index_i0(2.47 / 208.0, 0.33 / 26.0) == pytest.approx(81.45, abs=0.1)

    def test_i0_undefined_for_zero(self):
        with pytest.raises(DomainError):
            index_i0(0.0, 0.01)

    def test_isa(self):
        assert index_isa(82.0, 82.0) == 82.0
        assert index_isa(26.0, 256.1) == pytest.approx(81.6, abs=0.1)
        assert index_isa(0.0, 300.0) == 0.0
        with pytest.raises(DomainError):
            index_isa(-1.0, 10.0)

    def test_composite_r0(self):
        assert composite_r0(2.47, 0.33) == pytest.approx(0.90, abs=0.01)
        assert composite_r0(5.55, 1.32) == pytest.approx(2.70, abs=0.02)
        assert composite_r0(1.0, 1.0) == 1.0
        with pytest.raises(DomainError):
            composite_r0(-0.1, 1.0)


def with_deltas(population, delta_f, delta_m):
    female = dataclasses.replace(
        population.female,
        activity=dataclasses.replace(
            population.female.activity, annual_acts=delta_f
        ),
    )
    male = dataclasses.replace(
        population.male,
        activity=dataclasses.replace(population.male.activity, annual_acts=delta_m),
    )
    return dataclasses.replace(population, female=female, male=male)


class TestEvaluateAndThreshold:
    def test_equal_rates_82_is_epidemic(self, population):
        result = evaluate_brn(with_deltas(population, 82.0, 82.0))
        assert threshold_check(result) is Verdict.EPIDEMIC
        assert result.epidemic

    def test_lower_corner_subcritical(self, population):
        result = evaluate_brn(with_deltas(population, 208.0, 26.0))
        assert threshold_check(result) is Verdict.SUBCRITICAL
        assert result.r0 == pytest.approx(0.90, abs=0.01)
        assert not result.epidemic

    def test_exact_boundary_is_critical(self, population):
        result = evaluate_brn(with_deltas(population, 82.0, 82.0))
        critical_df = result.i0**2 / 26.0
        boundary = evaluate_brn(with_deltas(population, critical_df, 26.0))
        assert threshold_check(boundary) is Verdict.CRITICAL

    def test_result_internal_consistency(self, population):
        result = evaluate_brn(with_deltas(population, 300.0, 40.0))
        assert result.r0 == pytest.approx(
            np.sqrt(result.r_fm * result.r_mf), rel=1e-12
        )
        assert result.r_fm == pytest.approx(300.0 * result.integral_f, rel=1e-12)
        assert result.r_mf == pytest.approx(40.0 * result.integral_m, rel=1e-12)

    def test_inconsistent_record_detected(self):
        bogus = BrnResult(
            integral_f=0.01, integral_m=0.01, r_fm=2.0, r_mf=2.0,
            r0=0.5, i0=100.0, isa=200.0, epidemic=True,
        )
        with pytest.raises(InconsistentResult):
            threshold_check(bogus)

    def test_three_predicates_agree_on_grid(self, population, baseline_integrals):
        int_f, int_m = baseline_integrals
        i0 = index_i0(int_f, int_m)
        for dm in np.linspace(26.0, 104.0, 20):
            for df in np.linspace(208.0, 468.0, 20):
                r_fm, r_mf = df * int_f, dm * int_m
                by_r0 = composite_r0(r_fm, r_mf) > 1.0
                by_product = r_fm * r_mf > 1.0
                by_index = index_isa(dm, df) > i0
                assert by_r0 == by_product == by_index

    def test_identical_profiles_reduce_to_single_sex(self, population):
        male_as_female = dataclasses.replace(population.male, label="female")
        config = dataclasses.replace(population, female=male_as_female)
        result = evaluate_brn(with_deltas(config, 82.0, 82.0))
        assert result.r_fm == result.r_mf
        assert result.r0 == pytest.approx(result.r_fm, rel=1e-12)
        assert result.r0 == pytest.approx(82.0 * result.integral_m, rel=1e-12)


class TestHyperbola:
    def test_locus_values(self):
        locus = dict(hyperbola_locus(81.60, [26.0, 81.60, 104.0]))
        assert locus[26.0] == pytest.approx(256.1, abs=0.1)
        assert locus[81.60] == pytest.approx(81.60, rel=1e-12)

    def test_scaled_locus(self):
        (pair,) = hyperbola_locus(163.2, [104.0])
        assert pair[1] == pytest.approx(256.1, abs=0.2)

    def test_rejects_nonpositive_grid(self):
        with pytest.raises(DomainError):
            hyperbola_locus(81.6, [26.0, 0.0])


class TestSensitivity:
    def test_scale_function_values(self, population):
        swept = dict(sensitivity_sweep(population, [0.5, 1.0, 2.0]))
        assert swept[0.5] == pytest.approx(163.2, rel=0.01)
        assert swept[1.0] == pytest.approx(81.60, rel=0.01)
        assert swept[2.0] == pytest.approx(40.8, rel=0.01)

    def test_identity_factor(self, population, baseline_integrals):
        ((_, i0),) = sensitivity_sweep(population, [1.0])
        assert i0 == index_i0(*baseline_integrals)

    def test_exact_inverse_linearity(self, population, baseline_integrals):
        base = index_i0(*baseline_integrals)
        for factor, i0 in sensitivity_sweep(population, [0.5, 2.0]):
            assert i0 == pytest.approx(base / factor, rel=1e-9)

    def test_endpoint_mode_agrees(self, population):
        factors = [0.5, 2.0]
        by_function = dict(sensitivity_sweep(population, factors, "scale_function"))
        by_endpoints = dict(sensitivity_sweep(population, factors, "scale_endpoints"))
        for f in factors:
            assert by_endpoints[f] == pytest.approx(by_function[f], rel=0.025)

    def test_scaled_probability_guard(self, population):
        with pytest.raises(DomainError):
            sensitivity_sweep(population, [200.0], "scale_function")
        with pytest.raises(DomainError):
            sensitivity_sweep(population, [130.0], "scale_endpoints")

    def test_bad_inputs(self, population):
        with pytest.raises(DomainError):
            sensitivity_sweep(population, [0.0])
        with pytest.raises(DomainError):
            sensitivity_sweep(population, [1.0], "scale_sideways")


class TestBalance:
    def test_equal_populations(self):
        assert balance_partner_rate(1000.0, 1000.0, 82.0) == 82.0

    def test_csw_ratio(self):
        assert balance_partner_rate(1.0, 8.0, 208.0) == 26.0

    def test_rejects_nonpositive_population(self):
        with pytest.raises(DomainError):
            balance_partner_rate(0.0, 8.0, 208.0)
        with pytest.raises(DomainError):
            balance_partner_rate(1.0, -8.0, 208.0)


class TestConfigValidation:
    def test_tail_mass_guard(self, population):
        with pytest.raises(DomainError):
            dataclasses.replace(population, omega=10.0)

    def test_label_mismatch(self, population):
        with pytest.raises(DomainError):
            PopulationConfig(female=population.male, male=population.male)

    def test_swapped_terminal_lead(self, female):
        bad_activity = dataclasses.replace(female.activity, terminal_lead=2.0)
        with pytest.raises(DomainError):
            dataclasses.replace(female, activity=bad_activity)

    def test_quadrature_spec_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(order=1)
        with pytest.raises(DomainError):
            QuadratureSpec(tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(max_refine=-1)

    def test_population_size_validation(self, population):
        with pytest.raises(DomainError):
            dataclasses.replace(population, pop_female=0.0)
