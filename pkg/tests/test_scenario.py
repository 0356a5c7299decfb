import pytest

from hivbrn import ScenarioError, load_scenario, parse_scenario
from hivbrn.scenario import default_values


class TestDefaults:
    def test_empty_text_gives_baseline(self):
        scn = parse_scenario("")
        pop = scn.population
        assert pop.female.activity.annual_acts == 82.0
        assert pop.male.activity.annual_acts == 82.0
        assert pop.female.survival.median == 8.6
        assert pop.male.survival.median == 9.4
        assert pop.female.viral.peak_log_vl == 5.0
        assert pop.female.transmission.prob_at_peak == 0.008
        assert pop.omega == 40.0
        assert scn.quadrature.tol == 1e-6
        assert scn.simulation.act_process == "poisson_thinning"

    def test_none_path_gives_baseline(self):
        assert load_scenario(None).config_hash() == parse_scenario("").config_hash()

    def test_default_table_is_complete(self):
        values = default_values()
        assert set(values) == {
            "female", "male", "population", "quadrature", "simulation"
        }


class TestOverrides:
    def test_sex_sections(self):
        scn = parse_scenario(
            "[female]\ndelta = 208\nmedian = 9.0\n\n[male]\ndelta = 26\n"
        )
        assert scn.population.female.activity.annual_acts == 208.0
        assert scn.population.female.survival.median == 9.0
        assert scn.population.male.activity.annual_acts == 26.0
        # untouched keys keep their baselines
        assert scn.population.male.survival.median == 9.4

    def test_population_and_quadrature(self):
        scn = parse_scenario(
            "[population]\nomega = 50\npop_female = 1\npop_male = 8\n"
            "[quadrature]\norder = 16\ntol = 1e-8\nmax_refine = 6\n"
        )
        assert scn.population.omega == 50.0
        assert scn.population.pop_female == 1.0
        assert scn.quadrature.order == 16
        assert scn.quadrature.tol == 1e-8

    def test_simulation_section(self):
        scn = parse_scenario(
            "[simulation]\nsamples = 5000\nseed = 42\nact_process = expected_value\n"
        )
        assert scn.simulation.samples == 5000
        assert scn.simulation.seed == 42
        assert scn.simulation.act_process == "expected_value"

    def test_replace_simulation(self):
        scn = parse_scenario("")
        other = scn.replace_simulation(seed=7, samples=12)
        assert other.simulation.seed == 7
        assert other.simulation.samples == 12
        assert other.config_hash() != scn.config_hash()
        with pytest.raises(ScenarioError):
            scn.replace_simulation(samples=0)


class TestRejection:
    def test_unknown_key_with_line(self):
        text = "[female]\ndelta = 208\nalpha9 = 3\n"
        with pytest.raises(ScenarioError) as err:
            parse_scenario(text)
        assert "alpha9" in str(err.value)
        assert err.value.line == 3

    def test_unknown_section_with_line(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario("[female]\ndelta = 208\n\n[canine]\ndelta = 3\n")
        assert "canine" in str(err.value)
        assert err.value.line == 4

    def test_bad_number(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario("[female]\ndelta = lots\n")
        assert "delta" in str(err.value)
        assert err.value.line == 2

    def test_bad_integer(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario("[quadrature]\norder = 24.5\n")
        assert "order" in str(err.value)

    def test_duplicate_key(self):
        with pytest.raises(ScenarioError):
            parse_scenario("[female]\ndelta = 1\ndelta = 2\n")

    def test_semantic_error_is_config_error(self):
        with pytest.raises(ScenarioError):
            parse_scenario("[female]\nphi = 1.5\n")
        with pytest.raises(ScenarioError):
            parse_scenario("[population]\nomega = -4\n")
        with pytest.raises(ScenarioError):
            parse_scenario("[simulation]\nsamples = 0\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError):
            load_scenario(tmp_path / "nope.ini")


class TestHash:
    def test_stable_across_formatting(self):
        a = parse_scenario("[female]\ndelta = 208\n")
        b = parse_scenario("\n# comment\n[female]\ndelta   =    208\n")
        assert a.config_hash() == b.config_hash()

    def test_sensitive_to_values(self):
        a = parse_scenario("[female]\ndelta = 208\n")
        b = parse_scenario("[female]\ndelta = 209\n")
        assert a.config_hash() != b.config_hash()
