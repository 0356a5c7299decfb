import pytest

from hivbrn import QuadratureSpec, baseline_population, sex_integral


@pytest.fixture(scope="session")
def population():
    return baseline_population()


@pytest.fixture(scope="session")
def female(population):
    return population.female


@pytest.fixture(scope="session")
def male(population):
    return population.male


@pytest.fixture(scope="session")
def baseline_integrals(population):
    """(integral_f, integral_m) at the default quadrature settings."""
    return (
        sex_integral(population.female, population.omega),
        sex_integral(population.male, population.omega),
    )


@pytest.fixture(scope="session")
def tight_quad():
    return QuadratureSpec(tol=1e-9)
