"""JSON run configuration: schema validation and conversion to domain objects.

Schema violations surface as :class:`ConfigError` with the dotted key path of
the offending entry. A parsed :class:`RunConfig` serializes back to JSON with
:func:`serialize_config`, and parsing that text yields an equal config.
"""

import json
from dataclasses import dataclass, field
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .cases import CaseSpec, case_library
from .entropy_pairs import (
    Baseline,
    CandidateI,
    CandidateII,
    affine,
    convolution_entropy,
    exponential,
    identity,
    polynomial,
    quadratic_about,
)
from .errors import ConfigError, MCEntropyError
from .fv_solver import BC, CFL_CAP, DEFAULT_CFL, Scheme
from .thermo import ConstantCv, LinearCv, MixtureSpec, SpeciesSpec, T_MAX_DEFAULT, T_MIN_DEFAULT
from .verification import DEFAULT_EPS, MONITOR_TOL, Mode


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ConstantCvModel(_Strict):
    model: Literal["constant"]
    cv: float


class LinearCvModel(_Strict):
    model: Literal["linear"]
    a: float
    b: float


class SpeciesModel(_Strict):
    name: str
    r: float
    cv: Annotated[Union[ConstantCvModel, LinearCvModel], Field(discriminator="model")]
    e0: float = 0.0
    s_ref: float = 0.0
    T_ref: float = 1.0


class MixtureModel(_Strict):
    species: list[SpeciesModel]
    T_min: float = T_MIN_DEFAULT
    T_max: float = T_MAX_DEFAULT


class StateModel(_Strict):
    """Either ``rho_k`` or the pair ``Y``, ``rho``; plus ``u`` and ``T``."""

    rho_k: Optional[list[float]] = None
    Y: Optional[list[float]] = None
    rho: Optional[float] = None
    u: float
    T: float


class CaseModel(_Strict):
    name: str
    seed: Optional[int] = None
    left: Optional[StateModel] = None
    right: Optional[StateModel] = None
    length: Optional[float] = None
    diaphragm: Optional[float] = None
    bc: Optional[Literal["periodic", "transmissive"]] = None


class MonitorModel(_Strict):
    kind: Literal["min_entropy", "entropy_inequality", "total_entropy"]
    mode: Optional[Literal["global", "stencil3", "stencil2"]] = None
    eps: Optional[list[float]] = None
    baseline: bool = True


class OutputModel(_Strict):
    dir: Optional[str] = None
    output_every: Optional[int] = None


class TolerancesModel(_Strict):
    monitor: float = MONITOR_TOL


class RunConfigModel(_Strict):
    mixture: Optional[MixtureModel] = None
    case: CaseModel
    scheme: Literal["lxf", "rusanov", "hll"]
    n_cells: int = 400
    cfl: Optional[float] = None
    t_end: float = 0.2
    monitors: Optional[list[MonitorModel]] = None
    output: OutputModel = OutputModel()
    tolerances: TolerancesModel = TolerancesModel()


class FunctionModel(_Strict):
    kind: Literal["identity", "polynomial", "affine", "quadratic_about", "exponential",
                  "neg_exp", "convolution"]
    coeffs: Optional[list[float]] = None
    slope: Optional[float] = None
    offset: Optional[float] = None
    center: Optional[float] = None
    value: Optional[float] = None
    curvature: Optional[float] = None
    scale: Optional[float] = None
    amplitude: Optional[float] = None
    eps: Optional[float] = None
    s0: Optional[float] = None


class FamilyModel(_Strict):
    family: Literal["baseline", "candidate_I", "candidate_II"]
    functions: Optional[list[FunctionModel]] = None
    f: Optional[FunctionModel] = None


class AdmissibilityModel(_Strict):
    mixture: MixtureModel
    state: StateModel
    entropy: FamilyModel
    tol: Optional[float] = None


class CflBoundModel(_Strict):
    mixture: MixtureModel
    left: StateModel
    right: StateModel
    entropy: FamilyModel = FamilyModel(family="baseline")
    grid_res: int = 33


# --------------------------------------------------------------------------
# domain objects


@dataclass(frozen=True)
class MonitorSpec:
    kind: str
    mode: Optional[str] = None
    eps: tuple = ()
    baseline: bool = True

    def to_dict(self):
        if self.kind == "min_entropy":
            return {"kind": self.kind, "mode": self.mode}
        return {"kind": self.kind, "eps": list(self.eps), "baseline": self.baseline}


@dataclass(frozen=True)
class RunConfig:
    mixture: MixtureSpec
    case: CaseSpec
    scheme: Scheme
    n_cells: int
    cfl: float
    t_end: float
    monitors: tuple
    output_dir: Optional[str] = None
    output_every: Optional[int] = None
    tolerances: dict = field(default_factory=lambda: {"monitor": MONITOR_TOL})

    @property
    def monitor_tol(self):
        return self.tolerances["monitor"]

    def to_dict(self):
        return {
            "mixture": self.mixture.to_dict(),
            "case": case_to_dict(self.case),
            "scheme": self.scheme.value,
            "n_cells": self.n_cells,
            "cfl": self.cfl,
            "t_end": self.t_end,
            "monitors": [m.to_dict() for m in self.monitors],
            "output": {"dir": self.output_dir, "output_every": self.output_every},
            "tolerances": dict(self.tolerances),
        }


def default_monitors(scheme):
    local = Mode.STENCIL2 if Scheme(scheme) is Scheme.LXF else Mode.STENCIL3
    return (
        MonitorSpec("min_entropy", mode=Mode.GLOBAL.value),
        MonitorSpec("min_entropy", mode=local.value),
        MonitorSpec("entropy_inequality", eps=DEFAULT_EPS, baseline=True),
    )


def case_to_dict(case):
    bundled = case.name in ("sod2", "advect-Y", "random-riemann")
    if bundled:
        ref = case_library(case.name, seed=case.seed)
        if (ref.left, ref.right, ref.length, ref.diaphragm, ref.bc) == (
            case.left, case.right, case.length, case.diaphragm, case.bc
        ):
            out = {"name": case.name}
            if case.seed is not None:
                out["seed"] = case.seed
            return out
    n = case.mixture.n_species

    def state(Z):
        return {"rho_k": list(Z[:n]), "u": Z[n], "T": Z[n + 1]}

    out = {"name": case.name}
    if case.seed is not None:
        out["seed"] = case.seed
    out.update(left=state(case.left), right=state(case.right), length=case.length,
               diaphragm=case.diaphragm, bc=case.bc.value)
    return out


def _loc(loc):
    return ".".join(str(p) for p in loc) or "<root>"


def _validate(model_cls, data):
    try:
        return model_cls.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        path = _loc(err["loc"])
        raise ConfigError(err["msg"], path=path) from None


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", path="<root>") from None


def _wrap(path, fn, *args, **kwargs):
    """Re-raise library validation errors as config errors at ``path``."""
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except MCEntropyError as exc:
        raise ConfigError(str(exc), path=path) from None


def build_mixture(model, path="mixture"):
    def species(i, sp):
        cv = ConstantCv(sp.cv.cv) if sp.cv.model == "constant" else LinearCv(sp.cv.a, sp.cv.b)
        return SpeciesSpec(sp.name, r=sp.r, cv_model=cv, e0=sp.e0, s_ref=sp.s_ref, T_ref=sp.T_ref)

    specs = [_wrap(f"{path}.species.{i}", species, i, sp) for i, sp in enumerate(model.species)]
    return _wrap(path, MixtureSpec, tuple(specs), T_min=model.T_min, T_max=model.T_max)


def build_state(model, n_species, path):
    if model.rho_k is not None:
        if model.Y is not None or model.rho is not None:
            raise ConfigError("give either rho_k or Y with rho, not both", path=path)
        rho_k = np.asarray(model.rho_k, dtype=float)
    else:
        if model.Y is None or model.rho is None:
            raise ConfigError("need rho_k or both Y and rho", path=path)
        Y = np.asarray(model.Y, dtype=float)
        if abs(Y.sum() - 1.0) > 1e-12:
            raise ConfigError("mass fractions must sum to 1", path=f"{path}.Y")
        rho_k = Y * model.rho
    if rho_k.size != n_species:
        raise ConfigError(f"expected {n_species} species, got {rho_k.size}", path=path)
    if not np.all(rho_k > 0):
        raise ConfigError("partial densities must be positive", path=path)
    if not model.T > 0:
        raise ConfigError("temperature must be positive", path=f"{path}.T")
    return tuple(rho_k.tolist()) + (float(model.u), float(model.T))


def build_case(model, mixture):
    inline = model.left is not None or model.right is not None
    if not inline:
        if model.name == "random-riemann" and model.seed is None:
            raise ConfigError("random-riemann needs a seed", path="case.seed")
        base = _wrap("case.name", case_library, model.name, seed=model.seed)
        if mixture is not None:
            base = _wrap("mixture", base.with_mixture, mixture)
        overrides = {k: getattr(model, k) for k in ("length", "diaphragm", "bc")
                     if getattr(model, k) is not None}
        if overrides:
            fields = dict(name=base.name, mixture=base.mixture, left=base.left,
                          right=base.right, length=base.length, diaphragm=base.diaphragm,
                          bc=base.bc, seed=base.seed)
            fields.update(overrides)
            base = _wrap("case", CaseSpec, **fields)
        return base
    if model.left is None or model.right is None:
        raise ConfigError("inline cases need both left and right", path="case")
    if mixture is None:
        raise ConfigError("inline cases need a mixture", path="mixture")
    n = mixture.n_species
    return _wrap(
        "case", CaseSpec,
        name=model.name,
        mixture=mixture,
        left=build_state(model.left, n, "case.left"),
        right=build_state(model.right, n, "case.right"),
        length=1.0 if model.length is None else model.length,
        diaphragm=0.5 if model.diaphragm is None else model.diaphragm,
        bc=model.bc or BC.TRANSMISSIVE.value,
        seed=model.seed,
    )


def build_monitor(model, i):
    path = f"monitors.{i}"
    if model.kind == "min_entropy":
        if model.eps is not None:
            raise ConfigError("not used by min_entropy", path=f"{path}.eps")
        return MonitorSpec("min_entropy", mode=model.mode or Mode.GLOBAL.value)
    if model.mode is not None:
        raise ConfigError("only min_entropy takes a mode", path=f"{path}.mode")
    eps = DEFAULT_EPS if model.eps is None else tuple(float(e) for e in model.eps)
    if not all(e > 0 for e in eps):
        raise ConfigError("values must be positive", path=f"{path}.eps")
    return MonitorSpec(model.kind, eps=tuple(eps), baseline=model.baseline)


def run_config_from_dict(data):
    m = _validate(RunConfigModel, data)
    mixture = build_mixture(m.mixture) if m.mixture is not None else None
    case = build_case(m.case, mixture)
    mixture = case.mixture
    scheme = Scheme(m.scheme)
    cap = CFL_CAP[scheme]
    cfl = DEFAULT_CFL[scheme] if m.cfl is None else float(m.cfl)
    if not 0 < cfl <= cap:
        raise ConfigError(f"{cfl:g} is outside (0, {cap:g}]; {cap:g} is the {scheme.value} cap",
                          path="cfl")
    if m.n_cells < 3:
        raise ConfigError("need at least 3 cells", path="n_cells")
    if not m.t_end > 0:
        raise ConfigError("must be positive", path="t_end")
    if m.output.output_every is not None and m.output.output_every < 1:
        raise ConfigError("must be at least 1", path="output.output_every")
    if not m.tolerances.monitor >= 0:
        raise ConfigError("must be non-negative", path="tolerances.monitor")
    if m.monitors is None:
        monitors = default_monitors(scheme)
    else:
        monitors = tuple(build_monitor(mm, i) for i, mm in enumerate(m.monitors))
    return RunConfig(
        mixture=mixture,
        case=case,
        scheme=scheme,
        n_cells=m.n_cells,
        cfl=cfl,
        t_end=float(m.t_end),
        monitors=monitors,
        output_dir=m.output.dir,
        output_every=m.output.output_every,
        tolerances={"monitor": float(m.tolerances.monitor)},
    )


def parse_config(text):
    """Parse and validate a JSON run configuration."""
    return run_config_from_dict(_load(text))


def serialize_config(config):
    return json.dumps(config.to_dict(), indent=2)


# --------------------------------------------------------------------------
# entropy families from config


def build_function(model, path):
    k = model.kind
    given = {name for name, v in model.model_dump().items() if v is not None and name != "kind"}
    required = {
        "identity": set(), "neg_exp": set(), "polynomial": {"coeffs"},
        "affine": {"slope"}, "quadratic_about": {"center", "value", "slope", "curvature"},
        "exponential": {"scale"}, "convolution": {"eps"},
    }[k]
    optional = {"affine": {"offset"}, "exponential": {"amplitude"}, "convolution": {"s0"}}.get(k, set())
    missing = required - given
    if missing:
        raise ConfigError(f"{k} needs {', '.join(sorted(missing))}", path=path)
    extra = given - required - optional
    if extra:
        raise ConfigError(f"{k} does not take {', '.join(sorted(extra))}", path=path)
    if k == "identity":
        return identity()
    if k == "neg_exp":
        return _wrap(path, exponential, -1.0, -1.0)
    if k == "polynomial":
        return _wrap(path, polynomial, model.coeffs)
    if k == "affine":
        return affine(model.slope, model.offset or 0.0)
    if k == "quadratic_about":
        return quadratic_about(model.center, model.value, model.slope, model.curvature)
    if k == "exponential":
        amp = 1.0 if model.amplitude is None else model.amplitude
        return _wrap(path, exponential, model.scale, amp)
    return _wrap(path, convolution_entropy, model.eps, model.s0 or 0.0)


def build_family(model, path="entropy"):
    if model.family == "baseline":
        if model.functions is not None or model.f is not None:
            raise ConfigError("baseline takes no functions", path=path)
        return Baseline()
    if model.family == "candidate_I":
        if model.functions is None or model.f is not None:
            raise ConfigError("candidate_I needs a 'functions' list", path=path)
        return CandidateI(tuple(build_function(fm, f"{path}.functions.{i}")
                                for i, fm in enumerate(model.functions)))
    if model.f is None or model.functions is not None:
        raise ConfigError("candidate_II needs a single 'f'", path=path)
    return CandidateII(build_function(model.f, f"{path}.f"))


def parse_admissibility(text):
    """Returns ``(mixture, Z, family, tol)``."""
    m = _validate(AdmissibilityModel, _load(text))
    mixture = build_mixture(m.mixture)
    Z = np.array(build_state(m.state, mixture.n_species, "state"))
    family = build_family(m.entropy)
    if isinstance(family, CandidateI) and len(family.functions) != mixture.n_species:
        raise ConfigError(
            f"need {mixture.n_species} functions", path="entropy.functions"
        )
    return mixture, Z, family, m.tol


def parse_cfl_bound(text):
    """Returns ``(mixture, Z_left, Z_right, family, grid_res)``."""
    m = _validate(CflBoundModel, _load(text))
    mixture = build_mixture(m.mixture)
    n = mixture.n_species
    if m.grid_res < 2:
        raise ConfigError("must be at least 2", path="grid_res")
    return (mixture, np.array(build_state(m.left, n, "left")),
            np.array(build_state(m.right, n, "right")), build_family(m.entropy), m.grid_res)
