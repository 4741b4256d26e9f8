import numpy as np
import pytest

from mcentropy.thermo import ConstantCv, LinearCv, MixtureSpec, SpeciesSpec


def single_species():
    return MixtureSpec((SpeciesSpec("A", r=1.0, cv_model=ConstantCv(2.5)),))


def two_species():
    return MixtureSpec((
        SpeciesSpec("A", r=1.0, cv_model=ConstantCv(2.5)),
        SpeciesSpec("B", r=0.5, cv_model=ConstantCv(2.0)),
    ))


def random_mixture(rng, n, linear=False):
    species = []
    for k in range(n):
        if linear and rng.random() < 0.5:
            cv = LinearCv(rng.uniform(1.0, 3.0), rng.uniform(0.0, 0.5))
        else:
            cv = ConstantCv(rng.uniform(1.0, 3.0))
        species.append(SpeciesSpec(f"S{k}", r=rng.uniform(0.3, 2.0), cv_model=cv))
    return MixtureSpec(tuple(species))


def random_state(rng, n):
    return np.concatenate([rng.uniform(0.1, 2.0, n), [rng.uniform(-2, 2), rng.uniform(0.3, 3.0)]])


def relative_steps(u):
    """FD steps proportional to each component; the absolute default is too coarse for rho_k ~ 0.1."""
    return 1e-4 * np.maximum(np.abs(u), 0.1)


@pytest.fixture
def mix1():
    return single_species()


@pytest.fixture
def mix2():
    return two_species()


@pytest.fixture
def Z1():
    return np.array([1.0, 0.0, 1.0])


@pytest.fixture
def Z2():
    return np.array([0.5, 0.5, 0.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = {}


def record_criterion(number, passed, detail):
    """Print and keep one pass/fail line per acceptance criterion."""
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
