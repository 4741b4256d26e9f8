"""Bundled initial-value problems."""

import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidInputError
from .fv_solver import BC, Field1D, Grid1D
from .thermo import ConstantCv, MixtureSpec, SpeciesSpec, conservative_from_primitive, primitive

SOD2_MIXTURE = MixtureSpec((
    SpeciesSpec("A", r=1.0, cv_model=ConstantCv(2.5)),
    SpeciesSpec("B", r=0.5, cv_model=ConstantCv(2.0)),
))

# both species have gamma = 1.4, so a mass-fraction step keeps p and u uniform
ADVECT_MIXTURE = MixtureSpec((
    SpeciesSpec("A", r=1.0, cv_model=ConstantCv(2.5)),
    SpeciesSpec("C", r=0.4, cv_model=ConstantCv(1.0)),
))

MIN_MASS_FRACTION = 0.1


@dataclass(frozen=True)
class CaseSpec:
    """A Riemann problem on ``[0, length]`` or, with ``profile``, a closed-form field.

    ``left`` and ``right`` are primitive states ``(rho_1..rho_N, u, T)``.
    ``profile`` maps cell centres to an array of primitive states.
    """

    name: str
    mixture: MixtureSpec
    left: tuple
    right: tuple
    length: float = 1.0
    diaphragm: float = 0.5
    bc: BC = BC.TRANSMISSIVE
    seed: Optional[int] = None
    profile: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(float(x) for x in self.left))
        object.__setattr__(self, "right", tuple(float(x) for x in self.right))
        object.__setattr__(self, "bc", BC(self.bc))
        n = self.mixture.n_species + 2
        for side in ("left", "right"):
            Z = getattr(self, side)
            if len(Z) != n:
                raise InvalidInputError(f"{side} state needs {n} entries, got {len(Z)}")
            if not all(x > 0 for x in Z[:-2]):
                raise InvalidInputError(f"{side} state: partial densities must be positive")
            if not Z[-1] > 0:
                raise InvalidInputError(f"{side} state: temperature must be positive")
        if not self.length > 0:
            raise InvalidInputError("domain length must be positive")
        if not 0 <= self.diaphragm <= self.length:
            raise InvalidInputError("diaphragm must lie inside the domain")

    def with_mixture(self, mixture):
        if mixture.n_species != self.mixture.n_species:
            raise InvalidInputError(
                f"case {self.name!r} has {self.mixture.n_species} species, "
                f"mixture has {mixture.n_species}"
            )
        return CaseSpec(self.name, mixture, self.left, self.right, self.length,
                        self.diaphragm, self.bc, self.seed, self.profile)

    def initial_field(self, n_cells):
        grid = Grid1D(n_cells, self.length / n_cells, self.bc)
        x = grid.centers()
        if self.profile is not None:
            Z = np.asarray(self.profile(x), dtype=float)
        else:
            Z = np.where((x < self.diaphragm)[:, None],
                         np.array(self.left), np.array(self.right))
        return Field1D(grid, conservative_from_primitive(Z, self.mixture))


def state_from_composition(Y, rho, u, T):
    Y = np.asarray(Y, dtype=float)
    return primitive(Y * rho, u, T)


def sod2():
    return CaseSpec(
        name="sod2",
        mixture=SOD2_MIXTURE,
        left=state_from_composition([0.9, 0.1], 1.0, 0.0, 1.0),
        right=state_from_composition([0.1, 0.9], 0.125, 0.0, 0.8),
    )


def advect_y(p=1.0, u=1.0, T=1.0):
    r = ADVECT_MIXTURE.r

    def side(YA):
        Y = np.array([YA, 1 - YA])
        rho = p / ((Y * r).sum() * T)
        return state_from_composition(Y, rho, u, T)

    return CaseSpec(name="advect-Y", mixture=ADVECT_MIXTURE, left=side(0.9), right=side(0.1))


def random_riemann(seed):
    """Random two-species Riemann problem with moderate jumps, reproducible by seed."""
    rng = np.random.default_rng(seed)

    def draw():
        YA = rng.uniform(MIN_MASS_FRACTION, 1 - MIN_MASS_FRACTION)
        return state_from_composition([YA, 1 - YA], rng.uniform(0.1, 1.0),
                                      rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5))

    left = draw()
    right = draw()
    return CaseSpec(name="random-riemann", mixture=SOD2_MIXTURE, left=left, right=right,
                    seed=int(seed))


CASE_NAMES = ("sod2", "advect-Y", "random-riemann")

_RANDOM_RE = re.compile(r"random-riemann\((\d+)\)$")


def case_library(name, seed=None):
    """Look up a bundled case; ``random-riemann`` takes a seed, also as ``random-riemann(7)``."""
    m = _RANDOM_RE.match(name)
    if m:
        name, seed = "random-riemann", int(m.group(1))
    if name == "sod2":
        return sod2()
    if name == "advect-Y":
        return advect_y()
    if name == "random-riemann":
        if seed is None:
            raise InvalidInputError("random-riemann needs a seed")
        return random_riemann(seed)
    raise InvalidInputError(f"unknown case {name!r}; known cases: {', '.join(CASE_NAMES)}")
