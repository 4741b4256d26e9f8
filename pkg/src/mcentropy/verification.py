"""Monitors for discrete entropy properties of a time step.

* minimum entropy principle in global and local-stencil forms
* per-cell entropy inequalities and total entropy decay
* Lax's homotopy bound on the Lax-Friedrichs time step for a given entropy
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .entropy_pairs import Baseline, CandidateII, convolution_entropy, family_hessian, pair_eval
from .errors import HomotopyExitError, InvalidInputError, MCEntropyError, ConvergenceError
from .fv_solver import BC, Scheme, with_ghosts, _flux_and_speed, physical_flux
from .numerics import fd_jacobian, sym_eig_extremes
from .thermo import primitive_from_conservative, specific_entropy

MONITOR_TOL = 1e-12
DEFAULT_EPS = (1.0, 0.3, 0.1, 0.03, 0.01)


class Mode(str, Enum):
    GLOBAL = "global"
    STENCIL3 = "stencil3"
    STENCIL2 = "stencil2"


@dataclass
class MinEntropyReport:
    mode: Mode
    worst_margin: float
    violating_cells: list
    passed: bool

    def to_dict(self):
        return {"mode": self.mode.value, "worst_margin": self.worst_margin,
                "violating_cells": list(self.violating_cells), "passed": self.passed}


@dataclass
class EntropyInequalityReport:
    entropy_label: str
    per_cell_residual: np.ndarray
    max_residual: float
    total_decay: float
    passed: bool
    diagnostic: bool = False

    def to_dict(self):
        return {"entropy_label": self.entropy_label, "max_residual": self.max_residual,
                "total_decay": self.total_decay, "passed": self.passed,
                "diagnostic": self.diagnostic}


@dataclass
class CflBoundReport:
    c: float
    m: float
    M: float
    lambda_bound: float
    samples: int
    iterations: int = 0
    history: list = field(default_factory=list)

    def to_dict(self):
        return {"c": self.c, "m": self.m, "M": self.M, "lambda_bound": self.lambda_bound,
                "samples": self.samples, "iterations": self.iterations}


def _same_shape(prev, nxt):
    if prev.states.shape != nxt.states.shape:
        raise InvalidInputError(
            f"field shapes differ: {prev.states.shape} vs {nxt.states.shape}"
        )


def min_principle_check(prev, nxt, mode, mix, tol=MONITOR_TOL):
    """Margins ``s(next_i) - bound_i`` for the chosen lower bound.

    ``global`` bounds by the minimum over all previous cells, ``stencil3`` by
    the minimum over {i-1, i, i+1} and ``stencil2`` over {i-1, i+1}. Boundary
    neighbours come from the grid's ghost-cell rule.
    """
    _same_shape(prev, nxt)
    mode = Mode(mode)
    s_prev = specific_entropy(with_ghosts(prev.states, prev.grid.bc), mix)
    s_next = specific_entropy(nxt.states, mix)
    if mode is Mode.GLOBAL:
        bound = np.full_like(s_next, np.min(s_prev[1:-1]))
    elif mode is Mode.STENCIL3:
        bound = np.minimum(np.minimum(s_prev[:-2], s_prev[1:-1]), s_prev[2:])
    else:
        bound = np.minimum(s_prev[:-2], s_prev[2:])
    margin = s_next - bound
    violating = [int(i) for i in np.flatnonzero(margin < -tol)]
    worst = float(np.min(margin))
    return MinEntropyReport(mode=mode, worst_margin=worst, violating_cells=violating,
                            passed=worst >= -tol)


def default_families(prev, mix, eps_list=DEFAULT_EPS, include_baseline=True):
    """Baseline plus convolution entropies centred at the current minimum entropy."""
    s0 = float(np.min(specific_entropy(prev.states, mix)))
    fams = [Baseline()] if include_baseline else []
    for eps in eps_list:
        fams.append(CandidateII(convolution_entropy(eps, s0)))
    return fams


def family_label(family):
    if isinstance(family, CandidateII) and family.f.label == "convolution":
        return f"convolution(eps={family.f.params['eps']:g})"
    if isinstance(family, CandidateII):
        return f"candidate_II({family.f.label})"
    return family.label


def _interface_entropy_flux(scheme, U, F, aL, aR):
    UL, UR, FL, FR = U[:-1], U[1:], F[:-1], F[1:]
    if scheme is Scheme.RUSANOV:
        a = np.maximum(np.abs(aL), np.abs(aR))
        return 0.5 * (FL + FR) - 0.5 * a * (UR - UL)
    with np.errstate(divide="ignore", invalid="ignore"):
        middle = (aR * FL - aL * FR + aL * aR * (UR - UL)) / (aR - aL)
    return np.where(aL >= 0, FL, np.where(aR <= 0, FR, middle))


def entropy_inequality_check(prev, nxt, scheme, lam, pairs, mix, tol=MONITOR_TOL):
    """Per-cell entropy inequality residuals and total entropy change per family.

    For Lax-Friedrichs the residual is
    ``U(u_i') - [(U_{i-1} + U_{i+1})/2 + lam/2 (F_{i-1} - F_{i+1})]``.
    For Rusanov and HLL the interface entropy flux is the scheme's own
    dissipative average of ``(U, F)``; those reports are marked diagnostic.
    ``total_decay`` is ``dx * sum(U' - U)`` plus ``dt`` times the net entropy
    outflow through the boundary (zero for periodic grids). Residuals should be
    non-positive.
    """
    _same_shape(prev, nxt)
    scheme = Scheme(scheme)
    if pairs is None:
        pairs = default_families(prev, mix)
    grid = prev.grid
    padded = with_ghosts(prev.states, grid.bc)
    Zp = primitive_from_conservative(padded, mix)
    Zn = primitive_from_conservative(nxt.states, mix)
    if scheme is not Scheme.LXF:
        _, vel, c = _flux_and_speed(padded, mix)
        aL = np.minimum(vel[:-1] - c[:-1], vel[1:] - c[1:])
        aR = np.maximum(vel[:-1] + c[:-1], vel[1:] + c[1:])

    reports = []
    for family in pairs:
        pp = pair_eval(Zp, mix, family)
        U_next = pair_eval(Zn, mix, family).U
        U, F = pp.U, pp.F
        if scheme is Scheme.LXF:
            rhs = 0.5 * (U[:-2] + U[2:]) + 0.5 * lam * (F[:-2] - F[2:])
        else:
            Fhat = _interface_entropy_flux(scheme, U, F, aL, aR)
            rhs = U[1:-1] - lam * (Fhat[1:] - Fhat[:-1])
        residual = U_next - rhs
        if BC(grid.bc) is BC.PERIODIC:
            outflow = 0.0
        else:
            outflow = F[-2] - F[1]
        total = grid.dx * (float(np.sum(U_next)) - float(np.sum(U[1:-1]))) \
            + lam * grid.dx * float(outflow)
        max_res = float(np.max(residual))
        reports.append(EntropyInequalityReport(
            entropy_label=family_label(family),
            per_cell_residual=residual,
            max_residual=max_res,
            total_decay=total,
            passed=max_res <= tol and total <= tol,
            diagnostic=scheme is not Scheme.LXF,
        ))
    return reports


def lxf_pair_update(v, w, lam, mix):
    """Lax-Friedrichs state from left neighbour ``v`` and right neighbour ``w``."""
    return 0.5 * (v + w) + 0.5 * lam * (physical_flux(v, mix) - physical_flux(w, mix))


def lxf_pair_residual(v, w, lam, mix, family):
    """``U(u') - [(U(v) + U(w))/2 + lam/2 (F(v) - F(w))]`` for the two-point update."""
    u_new = lxf_pair_update(v, w, lam, mix)
    pv = pair_eval(primitive_from_conservative(v, mix), mix, family)
    pw = pair_eval(primitive_from_conservative(w, mix), mix, family)
    pu = pair_eval(primitive_from_conservative(u_new, mix), mix, family)
    return float(pu.U - (0.5 * (pv.U + pw.U) + 0.5 * lam * (pv.F - pw.F)))


def _checked_primitive(states, r_grid, s_grid, mix, what):
    try:
        return primitive_from_conservative(states, mix)
    except MCEntropyError:
        for idx in np.ndindex(states.shape[:-1]):
            try:
                primitive_from_conservative(states[idx], mix)
            except MCEntropyError:
                r, s = float(r_grid[idx]), float(s_grid[idx])
                raise HomotopyExitError(
                    f"homotopy state {what} invalid at r={r:g}, s={s:g}", r=r, s=s
                ) from None
        raise


def lax_cfl_bound(v, w, entropy, mix, grid_res=33, max_iter=60, rtol=1e-8):
    """Sufficient Lax-Friedrichs step ``lambda < (sqrt(1 + m/M) - 1)/c`` for one entropy.

    ``c`` is the largest spectral norm of the flux Jacobian at the homotopy
    states ``s v + (1-s) w`` and ``rs v + (1-rs) w``; ``m`` and ``M`` are the
    extreme eigenvalues of the entropy Hessian at the Lax-Friedrichs updates of
    those state pairs, over a ``grid_res`` x ``grid_res`` grid in (r, s).
    Because those updates depend on lambda, the bound is iterated to a fixed
    point starting from lambda = 0.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if grid_res < 2:
        raise InvalidInputError("grid_res must be at least 2")
    if entropy is None:
        entropy = Baseline()
    t = np.linspace(0.0, 1.0, grid_res)
    r_grid, s_grid = np.meshgrid(t, t, indexing="ij")
    vbar = s_grid[..., None] * v + (1 - s_grid[..., None]) * w
    rs = (r_grid * s_grid)[..., None]
    wbar = rs * v + (1 - rs) * w
    _checked_primitive(vbar, r_grid, s_grid, mix, "v(s)")
    _checked_primitive(wbar, r_grid, s_grid, mix, "w(r,s)")

    samples = np.concatenate([vbar[0], wbar.reshape(-1, v.size)], axis=0)
    h = 1e-6 * np.maximum(1.0, np.abs(samples))
    A = fd_jacobian(lambda x: physical_flux(x, mix), samples, h)
    c = float(np.max(np.linalg.norm(A, ord=2, axis=(-2, -1))))

    fv, fw = physical_flux(vbar, mix), physical_flux(wbar, mix)

    def bound_at(lam):
        ubar = 0.5 * (vbar + wbar) + 0.5 * lam * (fv - fw)
        Z = _checked_primitive(ubar, r_grid, s_grid, mix, "u(r,s)")
        G = family_hessian(Z.reshape(-1, v.size), mix, entropy)
        ext = sym_eig_extremes(G)
        m, M = float(np.min(ext.min_eig)), float(np.max(ext.max_eig))
        if c == 0:
            return np.inf, m, M
        return (np.sqrt(1.0 + m / M) - 1.0) / c, m, M

    lam, m, M = bound_at(0.0)
    history = [lam]
    for it in range(1, max_iter + 1):
        new, m, M = bound_at(lam)
        history.append(new)
        if abs(new - lam) <= rtol * abs(lam):
            return CflBoundReport(c=c, m=m, M=M, lambda_bound=float(new),
                                  samples=grid_res, iterations=it, history=history)
        lam = new
    raise ConvergenceError("Lax bound fixed-point iteration did not settle", last=lam)
