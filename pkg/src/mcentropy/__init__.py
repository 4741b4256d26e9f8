"""Entropy pairs, admissibility checks and first-order finite-volume schemes
for the multicomponent compressible Euler equations."""

from .cases import CaseSpec, case_library
from .config import RunConfig, parse_config, serialize_config
from .entropy_pairs import (
    Baseline,
    CandidateI,
    CandidateII,
    EntropyFunction,
    candidate1_report,
    candidate2_report,
    convolution_entropy,
    entropy_hessian,
    entropy_variables,
    pair_eval,
)
from .errors import MCEntropyError
from .fv_solver import BC, Field1D, Grid1D, Scheme, advance, numerical_flux, step
from .runner import run
from .thermo import (
    ConstantCv,
    LinearCv,
    MixtureSpec,
    SpeciesSpec,
    conservative_from_primitive,
    primitive_from_conservative,
    thermo_eval,
)
from .verification import entropy_inequality_check, lax_cfl_bound, min_principle_check

__version__ = "0.1.0"

__all__ = [
    "BC", "Baseline", "CandidateI", "CandidateII", "CaseSpec", "ConstantCv", "EntropyFunction",
    "Field1D", "Grid1D", "LinearCv", "MCEntropyError", "MixtureSpec", "RunConfig", "Scheme",
    "SpeciesSpec", "advance", "candidate1_report", "candidate2_report", "case_library",
    "conservative_from_primitive", "convolution_entropy", "entropy_hessian",
    "entropy_inequality_check", "entropy_variables", "lax_cfl_bound", "min_principle_check",
    "numerical_flux", "pair_eval", "parse_config", "primitive_from_conservative", "run",
    "serialize_config", "step", "thermo_eval",
]
