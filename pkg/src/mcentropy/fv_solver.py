"""First-order finite-volume schemes on a uniform 1D grid.

Fields hold conservative states in an array of shape (n_cells, N + 2).
Interface fluxes are computed for all interfaces at once; reductions use
numpy's fixed ordering, so results do not depend on anything but the inputs.
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import CflError, InvalidInputError, InvalidStateError, NoTemperatureError, PositivityError
from .thermo import primitive_from_conservative, specific_entropy, thermo_eval


class Scheme(str, Enum):
    LXF = "lxf"
    RUSANOV = "rusanov"
    HLL = "hll"


class BC(str, Enum):
    PERIODIC = "periodic"
    TRANSMISSIVE = "transmissive"


#: Hard limit on lambda * a_max accepted by :func:`step`.
CFL_CAP = {Scheme.LXF: 0.5, Scheme.RUSANOV: 1.0, Scheme.HLL: 1.0}
#: Default CFL numbers used by :func:`advance` and the run configuration.
DEFAULT_CFL = {Scheme.LXF: 0.45, Scheme.RUSANOV: 0.9, Scheme.HLL: 0.9}

_CFL_SLACK = 1e-12


@dataclass(frozen=True)
class Grid1D:
    n_cells: int
    dx: float
    bc: BC = BC.TRANSMISSIVE

    def __post_init__(self):
        if self.n_cells < 3:
            raise InvalidInputError("a grid needs at least 3 cells")
        if not self.dx > 0:
            raise InvalidInputError("dx must be positive")
        object.__setattr__(self, "bc", BC(self.bc))

    def centers(self, x0=0.0):
        return x0 + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class Field1D:
    grid: Grid1D
    states: np.ndarray

    def __post_init__(self):
        states = np.asarray(self.states, dtype=float)
        if states.ndim != 2 or states.shape[0] != self.grid.n_cells:
            raise InvalidInputError(
                f"states must have shape ({self.grid.n_cells}, N+2), got {states.shape}"
            )
        object.__setattr__(self, "states", states)

    def with_states(self, states):
        return replace(self, states=states)

    def totals(self):
        return self.states.sum(axis=0) * self.grid.dx


@dataclass(frozen=True)
class StepReport:
    dt: float
    lam: float
    max_wave_speed: float
    min_entropy_before: float
    min_entropy_after: float


def with_ghosts(states, bc):
    """Pad a cell array with one ghost cell per side."""
    if BC(bc) is BC.PERIODIC:
        left, right = states[-1:], states[:1]
    else:
        left, right = states[:1], states[-1:]
    return np.concatenate([left, states, right], axis=0)


def physical_flux(U, mix):
    """``[rho_k u, rho u**2 + p, (E + p) u]`` for conservative state(s)."""
    U = np.asarray(U, dtype=float)
    Z = primitive_from_conservative(U, mix)
    p = thermo_eval(Z, mix).p
    vel = Z[..., -2]
    flux = np.empty_like(U)
    flux[..., :-2] = U[..., :-2] * vel[..., None]
    flux[..., -2] = U[..., -2] * vel + p
    flux[..., -1] = (U[..., -1] + p) * vel
    return flux


def _flux_and_speed(U, mix):
    Z = primitive_from_conservative(U, mix)
    th = thermo_eval(Z, mix)
    vel = Z[..., -2]
    flux = np.empty_like(U)
    flux[..., :-2] = U[..., :-2] * vel[..., None]
    flux[..., -2] = U[..., -2] * vel + th.p
    flux[..., -1] = (U[..., -1] + th.p) * vel
    return flux, vel, th.sound_speed


def wave_speed_estimates(uL, uR, mix):
    """Davis bounds ``aL = min(uL - cL, uR - cR)``, ``aR = max(uL + cL, uR + cR)``."""
    _, vL, cL = _flux_and_speed(np.asarray(uL, dtype=float), mix)
    _, vR, cR = _flux_and_speed(np.asarray(uR, dtype=float), mix)
    return np.minimum(vL - cL, vR - cR), np.maximum(vL + cL, vR + cR)


def _interface_flux(scheme, uL, uR, fL, fR, aL, aR, lam):
    scheme = Scheme(scheme)
    if scheme is Scheme.LXF:
        if lam is None or not lam > 0:
            raise InvalidInputError("Lax-Friedrichs flux needs lambda > 0")
        return 0.5 * (fL + fR) - (0.5 / lam) * (uR - uL)
    if scheme is Scheme.RUSANOV:
        a = np.maximum(np.abs(aL), np.abs(aR))[..., None]
        return 0.5 * (fL + fR) - 0.5 * a * (uR - uL)
    aL_, aR_ = aL[..., None], aR[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        middle = (aR_ * fL - aL_ * fR + aL_ * aR_ * (uR - uL)) / (aR_ - aL_)
    return np.where(aL_ >= 0, fL, np.where(aR_ <= 0, fR, middle))


def numerical_flux(scheme, uL, uR, mix, lam=None):
    """Interface flux between left and right state(s)."""
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    fL, vL, cL = _flux_and_speed(uL, mix)
    fR, vR, cR = _flux_and_speed(uR, mix)
    aL = np.minimum(vL - cL, vR - cR)
    aR = np.maximum(vL + cL, vR + cR)
    return _interface_flux(scheme, uL, uR, fL, fR, aL, aR, lam)


def max_wave_speed(field, mix):
    """Largest ``max(|aL|, |aR|)`` over all interfaces, ghosts included."""
    padded = with_ghosts(field.states, field.grid.bc)
    _, vel, c = _flux_and_speed(padded, mix)
    aL = np.minimum(vel[:-1] - c[:-1], vel[1:] - c[1:])
    aR = np.maximum(vel[:-1] + c[:-1], vel[1:] + c[1:])
    return float(np.max(np.maximum(np.abs(aL), np.abs(aR))))


def interface_fluxes(field, scheme, lam, mix):
    """Fluxes at the n_cells + 1 interfaces and their Davis speeds."""
    padded = with_ghosts(field.states, field.grid.bc)
    f, vel, c = _flux_and_speed(padded, mix)
    aL = np.minimum(vel[:-1] - c[:-1], vel[1:] - c[1:])
    aR = np.maximum(vel[:-1] + c[:-1], vel[1:] + c[1:])
    flux = _interface_flux(scheme, padded[:-1], padded[1:], f[:-1], f[1:], aL, aR, lam)
    return flux, aL, aR


def _check_positivity(states, mix):
    rho_k = states[:, :-2]
    bad = np.argwhere(~(rho_k > 0))
    if bad.size:
        cell = int(bad[0, 0])
        raise PositivityError(f"negative partial density in cell {cell}", cell=cell)
    try:
        return specific_entropy(states, mix)
    except (NoTemperatureError, InvalidStateError):
        for i, st in enumerate(states):
            try:
                specific_entropy(st, mix)
            except (NoTemperatureError, InvalidStateError):
                raise PositivityError(f"no admissible temperature in cell {i}", cell=i) from None
        raise


def step(field, scheme, lam, mix, cfl_cap=None):
    """One conservative update ``u_i - lam (F_{i+1/2} - F_{i-1/2})``."""
    scheme = Scheme(scheme)
    cap = CFL_CAP[scheme] if cfl_cap is None else cfl_cap
    if not lam > 0:
        raise InvalidInputError("lambda must be positive")
    flux, aL, aR = interface_fluxes(field, scheme, lam, mix)
    a_max = float(np.max(np.maximum(np.abs(aL), np.abs(aR))))
    if lam * a_max > cap * (1 + _CFL_SLACK):
        raise CflError(
            f"lambda*a_max = {lam * a_max:.6g} exceeds the {scheme.value} cap {cap}",
            admissible_lambda=cap / a_max,
        )
    s_before = specific_entropy(field.states, mix)
    new_states = field.states - lam * (flux[1:] - flux[:-1])
    s_after = _check_positivity(new_states, mix)
    report = StepReport(
        dt=lam * field.grid.dx,
        lam=lam,
        max_wave_speed=a_max,
        min_entropy_before=float(np.min(s_before)),
        min_entropy_after=float(np.min(s_after)),
    )
    return field.with_states(new_states), report


def advance(field, scheme, cfl, t_end, mix, hooks=(), max_steps=1_000_000):
    """March to ``t_end`` with ``dt = cfl * dx / a_max``, clipping the last step.

    Each hook is called as ``hook(prev, next, report)`` after every step.
    Returns the final field and the list of step reports.
    """
    scheme = Scheme(scheme)
    if not 0 < cfl <= CFL_CAP[scheme]:
        raise InvalidInputError(
            f"cfl must lie in (0, {CFL_CAP[scheme]}] for {scheme.value}, got {cfl}"
        )
    if not t_end > 0:
        raise InvalidInputError("t_end must be positive")
    if callable(hooks):
        hooks = (hooks,)
    dx = field.grid.dx
    t = 0.0
    reports = []
    while t < t_end:
        if len(reports) >= max_steps:
            raise InvalidInputError(f"exceeded {max_steps} steps")
        a_max = max_wave_speed(field, mix)
        dt = cfl * dx / a_max
        last = t + dt >= t_end * (1 - 1e-14)
        if last:
            dt = t_end - t
        nxt, report = step(field, scheme, dt / dx, mix)
        for hook in hooks:
            hook(field, nxt, report)
        reports.append(report)
        field = nxt
        t = t_end if last else t + dt
    return field, reports
