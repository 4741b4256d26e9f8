"""Entropy pairs for the multicomponent Euler system and their admissibility.

Three entropy families are supported, all with flux ``F = u * U``:

* :class:`Baseline` -- ``U = -rho*s``
* :class:`CandidateI` -- ``U = -sum_k rho_k f_k(s_k)``, one generating function per species
* :class:`CandidateII` -- ``U = -rho f(s)``

Convexity is decided on the congruent matrix ``H = J^T G J`` with
``J = du/dZ``, which is sparse where the Hessian ``G`` is dense.
"""

from dataclasses import dataclass, field
from math import pi, sqrt
from typing import Callable

import numpy as np
from scipy.special import erfc

from .errors import (
    InternalConsistencyError,
    InvalidInputError,
    UnsupportedModelError,
)
from .numerics import PdReport, pd_check
from .thermo import ConstantCv, check_primitive, primitive_from_conservative, thermo_eval

CONSERVATION_TOL = 1e-10
CLOSED_FORM_RTOL = 1e-9
CONGRUENCE_RTOL = 1e-10

_SQRT_PI = sqrt(pi)


# --------------------------------------------------------------------------
# generating functions


@dataclass(frozen=True)
class EntropyFunction:
    """A scalar generating function with its first two derivatives.

    The evaluators must accept numpy arrays. Unless ``validate`` is false the
    derivatives are spot-checked against central differences at
    ``check_points``; points where ``f`` is not finite are skipped.
    """

    f: Callable
    df: Callable
    d2f: Callable
    label: str = "f"
    params: dict = field(default_factory=dict, compare=False)
    validate: bool = field(default=True, compare=False, repr=False)
    check_points: tuple = field(default=(-1.0, -0.3, 0.0, 0.4, 1.0), compare=False, repr=False)

    def __post_init__(self):
        if self.validate:
            self.spot_check(self.check_points)

    def __call__(self, s):
        return self.f(s)

    def spot_check(self, points, rtol=1e-5):
        for s in points:
            h = 1e-4 * max(1.0, abs(s))
            vals = [float(self.f(s + k * h)) for k in (-2, -1, 0, 1, 2)]
            if not np.all(np.isfinite(vals)):
                continue
            fd1 = (vals[3] - vals[1]) / (2 * h)
            d1 = float(self.df(s))
            fd2 = (vals[3] - 2 * vals[2] + vals[1]) / h**2
            d2 = float(self.d2f(s))
            # d2 via FD carries ~eps*|f|/h^2 roundoff on top of truncation error
            scale1 = max(1.0, abs(d1), abs(vals[2]))
            scale2 = max(1.0, abs(d2), abs(d1)) + 1e-8 * abs(vals[2]) / h**2
            if abs(fd1 - d1) > rtol * scale1 or abs(fd2 - d2) > 10 * rtol * scale2:
                raise InvalidInputError(
                    f"{self.label}: derivatives inconsistent with f at s={s} "
                    f"(df {d1:.6g} vs fd {fd1:.6g}, d2f {d2:.6g} vs fd {fd2:.6g})"
                )

    def to_dict(self):
        return {"kind": self.label, **self.params}


def identity():
    return EntropyFunction(
        f=lambda s: np.asarray(s, dtype=float),
        df=lambda s: np.ones_like(np.asarray(s, dtype=float)),
        d2f=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
        label="identity",
    )


def polynomial(coeffs):
    """``f(s) = sum_i coeffs[i] * s**i``."""
    p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    dp, d2p = p.deriv(1), p.deriv(2)
    return EntropyFunction(
        f=lambda s: p(np.asarray(s, dtype=float)),
        df=lambda s: dp(np.asarray(s, dtype=float)),
        d2f=lambda s: d2p(np.asarray(s, dtype=float)),
        label="polynomial",
        params={"coeffs": [float(c) for c in coeffs]},
    )


def affine(slope, offset=0.0):
    fn = polynomial([offset, slope])
    return EntropyFunction(fn.f, fn.df, fn.d2f, label="affine",
                           params={"slope": float(slope), "offset": float(offset)},
                           validate=False)


def quadratic_about(center, value, slope, curvature):
    """Quadratic with prescribed value, slope and curvature at ``center``."""

    def f(s):
        d = np.asarray(s, dtype=float) - center
        return value + slope * d + 0.5 * curvature * d**2

    def df(s):
        return slope + curvature * (np.asarray(s, dtype=float) - center)

    def d2f(s):
        return np.full_like(np.asarray(s, dtype=float), curvature)

    return EntropyFunction(
        f, df, d2f, label="quadratic_about",
        params={"center": float(center), "value": float(value),
                "slope": float(slope), "curvature": float(curvature)},
        validate=False,
    )


def exponential(scale, amplitude=1.0):
    """``f(s) = amplitude * exp(scale * s)``; ``exponential(-1, -1)`` is ``-exp(-s)``."""

    def f(s):
        return amplitude * np.exp(scale * np.asarray(s, dtype=float))

    def df(s):
        return amplitude * scale * np.exp(scale * np.asarray(s, dtype=float))

    def d2f(s):
        return amplitude * scale**2 * np.exp(scale * np.asarray(s, dtype=float))

    return EntropyFunction(f, df, d2f, label="exponential",
                           params={"scale": float(scale), "amplitude": float(amplitude)})


def neg_exp():
    return exponential(-1.0, -1.0)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def convolution_quadrature(s, eps, s0=0.0, width=10.0):
    """64-point Gauss-Legendre evaluation of the Gaussian-mollified ``min(s - s0, 0)``.

    Returns ``(f, df)``. The mollifier ``exp(-(x/eps)**2)/(eps*sqrt(pi))`` is
    integrated over ``[max(s - s0, -width*eps), width*eps]``, where the
    kinked integrand is smooth; the discarded tail is below ``exp(-width**2)``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    lo = np.maximum(s - s0, -width * eps)
    hi = np.full_like(lo, width * eps)
    half = 0.5 * np.maximum(hi - lo, 0.0)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    phi = np.exp(-(x / eps) ** 2) / (eps * _SQRT_PI)
    w = half[:, None] * _GL_WEIGHTS[None, :]
    df = (w * phi).sum(axis=1)
    f = (w * (s[:, None] - s0 - x) * phi).sum(axis=1)
    return f, df


def convolution_entropy(eps, s0=0.0, check=True):
    """Smooth approximation of ``min(s - s0, 0)`` with ``0 < f' < 1`` and ``f'' < 0``.

    On construction the closed forms are compared with
    :func:`convolution_quadrature` at ten points around ``s0``: ``f`` and
    ``df`` pointwise, ``d2f`` through ``df(b) - df(a) = int_a^b d2f``.
    """
    if not eps > 0:
        raise InvalidInputError(f"eps must be positive, got {eps}")
    eps = float(eps)
    s0 = float(s0)

    def f(s):
        t = (np.asarray(s, dtype=float) - s0) / eps
        return (t * eps) * 0.5 * erfc(t) - eps / (2 * _SQRT_PI) * np.exp(-t * t)

    def df(s):
        t = (np.asarray(s, dtype=float) - s0) / eps
        return 0.5 * erfc(t)

    def d2f(s):
        t = (np.asarray(s, dtype=float) - s0) / eps
        return -np.exp(-t * t) / (eps * _SQRT_PI)

    fn = EntropyFunction(f, df, d2f, label="convolution",
                         params={"eps": eps, "s0": s0}, validate=False)
    if check:
        err = convolution_oracle_error(fn, eps, s0)
        if err > 1e-8:
            raise InternalConsistencyError(
                f"convolution entropy closed form deviates from quadrature by {err:.3e}"
            )
    return fn


def convolution_oracle_error(fn, eps, s0, n_points=10):
    """Max deviation of ``fn`` (f, df, d2f) from the quadrature oracle."""
    pts = s0 + eps * np.linspace(-4.0, 4.0, n_points)
    fq, dfq = convolution_quadrature(pts, eps, s0)
    err = max(np.max(np.abs(fn.f(pts) - fq)), np.max(np.abs(fn.df(pts) - dfq)))
    a, b = pts - 0.25 * eps, pts + 0.25 * eps
    _, dfa = convolution_quadrature(a, eps, s0)
    _, dfb = convolution_quadrature(b, eps, s0)
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b)[:, None] + half[:, None] * _GL_NODES[None, :]
    integral = (half[:, None] * _GL_WEIGHTS[None, :] * fn.d2f(nodes)).sum(axis=1)
    return float(max(err, np.max(np.abs(integral - (dfb - dfa)))))


def min_entropy_limit(s, s0):
    """The nonsmooth limit ``min(s - s0, 0)``; monitoring only, never for admissibility."""
    return np.minimum(np.asarray(s, dtype=float) - s0, 0.0)


# --------------------------------------------------------------------------
# Jacobians and the baseline Hessian


@dataclass(frozen=True)
class StateJacobians:
    dudZ: np.ndarray
    dudZ_inv: np.ndarray


@dataclass(frozen=True)
class EntropyHessian:
    G: np.ndarray
    H: np.ndarray


def entropy_variables(Z, mix):
    """``v = dU/du`` for ``U = -rho*s``: ``(1/T)[g_k - u**2/2, u, -1]``."""
    Z = check_primitive(Z, mix)
    th = thermo_eval(Z, mix)
    vel, T = Z[..., -2], Z[..., -1]
    kin = 0.5 * vel**2
    v = np.empty_like(Z)
    v[..., :-2] = (th.g_k - kin[..., None]) / T[..., None]
    v[..., -2] = vel / T
    v[..., -1] = -1.0 / T
    return v


def state_jacobians(Z, mix):
    """Closed-form ``du/dZ`` and its inverse."""
    Z = check_primitive(Z, mix)
    th = thermo_eval(Z, mix)
    n = mix.n_species
    vel = Z[..., -2]
    kin = 0.5 * vel**2
    rho, rho_cv = th.rho, th.rho * th.c_v
    shape = Z.shape[:-1] + (n + 2, n + 2)

    J = np.zeros(shape)
    idx = np.arange(n)
    J[..., idx, idx] = 1.0
    J[..., n, :n] = vel[..., None]
    J[..., n, n] = rho
    J[..., n + 1, :n] = th.e_k + kin[..., None]
    J[..., n + 1, n] = rho * vel
    J[..., n + 1, n + 1] = rho_cv

    Ji = np.zeros(shape)
    Ji[..., idx, idx] = 1.0
    Ji[..., n, :n] = (-vel / rho)[..., None]
    Ji[..., n, n] = 1.0 / rho
    Ji[..., n + 1, :n] = (kin[..., None] - th.e_k) / rho_cv[..., None]
    Ji[..., n + 1, n] = -vel / rho_cv
    Ji[..., n + 1, n + 1] = 1.0 / rho_cv
    return StateJacobians(J, Ji)


def _dvdZ(Z, mix, th):
    n = mix.n_species
    rho_k, vel, T = Z[..., :-2], Z[..., -2], Z[..., -1]
    kin = 0.5 * vel**2
    D = np.zeros(Z.shape[:-1] + (n + 2, n + 2))
    idx = np.arange(n)
    D[..., idx, idx] = mix.r / rho_k
    D[..., :n, n] = (-vel / T)[..., None]
    D[..., :n, n + 1] = (kin[..., None] - th.e_k) / (T**2)[..., None]
    D[..., n, n] = 1.0 / T
    D[..., n, n + 1] = -vel / T**2
    D[..., n + 1, n + 1] = 1.0 / T**2
    return D


def congruence_diagonal(Z, mix):
    """Diagonal of ``H`` for ``U = -rho*s``: ``(r_k/rho_k, rho/T, rho*c_v/T**2)``."""
    Z = check_primitive(Z, mix)
    th = thermo_eval(Z, mix)
    T = Z[..., -1]
    d = np.empty_like(Z)
    d[..., :-2] = mix.r / Z[..., :-2]
    d[..., -2] = th.rho / T
    d[..., -1] = th.rho * th.c_v / T**2
    return d


def _diag_embed(d):
    out = np.zeros(d.shape + (d.shape[-1],))
    idx = np.arange(d.shape[-1])
    out[..., idx, idx] = d
    return out


def _transpose(M):
    return np.swapaxes(M, -1, -2)


def entropy_hessian(Z, mix):
    """Hessian ``G = (dv/dZ)(du/dZ)^-1`` of ``U = -rho*s`` and ``H = J^T G J``.

    ``H`` must come out diagonal; a mismatch beyond 1e-10 relative means a bug.
    """
    Z = check_primitive(Z, mix)
    th = thermo_eval(Z, mix)
    jac = state_jacobians(Z, mix)
    G = _dvdZ(Z, mix, th) @ jac.dudZ_inv
    G = 0.5 * (G + _transpose(G))
    H = _transpose(jac.dudZ) @ G @ jac.dudZ
    expected = _diag_embed(congruence_diagonal(Z, mix))
    scale = np.max(np.abs(expected), axis=(-2, -1), keepdims=True)
    if np.any(np.abs(H - expected) > CONGRUENCE_RTOL * scale):
        raise InternalConsistencyError("congruence matrix J^T G J is not the expected diagonal")
    return EntropyHessian(G=G, H=H)


def hessian_from_congruence(H, jac):
    """Recover ``G = J^-T H J^-1``."""
    Ji = jac.dudZ_inv
    G = _transpose(Ji) @ H @ Ji
    return 0.5 * (G + _transpose(G))


# --------------------------------------------------------------------------
# entropy families


@dataclass(frozen=True)
class EntropyPairValue:
    U: np.ndarray
    F: np.ndarray


class Baseline:
    label = "baseline"

    def value(self, Z, mix):
        th = thermo_eval(Z, mix)
        return -th.rho * th.s

    def entropy_variables(self, Z, mix):
        return entropy_variables(Z, mix)

    def congruence_matrix(self, Z, mix):
        return _diag_embed(congruence_diagonal(Z, mix))

    def to_dict(self):
        return {"family": "baseline"}


@dataclass(frozen=True)
class CandidateI:
    functions: tuple

    label = "candidate_I"

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))

    def _check(self, mix):
        if len(self.functions) != mix.n_species:
            raise InvalidInputError(
                f"candidate I needs {mix.n_species} functions, got {len(self.functions)}"
            )

    def _derivs(self, s_k):
        fk = np.stack([fn.f(s_k[..., k]) for k, fn in enumerate(self.functions)], axis=-1)
        d1 = np.stack([fn.df(s_k[..., k]) for k, fn in enumerate(self.functions)], axis=-1)
        d2 = np.stack([fn.d2f(s_k[..., k]) for k, fn in enumerate(self.functions)], axis=-1)
        return fk, d1, d2

    def value(self, Z, mix):
        self._check(mix)
        th = thermo_eval(Z, mix)
        fk, _, _ = self._derivs(th.s_k)
        return -(Z[..., :-2] * fk).sum(axis=-1)

    def entropy_variables(self, Z, mix):
        self._check(mix)
        Z = check_primitive(Z, mix)
        th = thermo_eval(Z, mix)
        rho_k, vel, T = Z[..., :-2], Z[..., -2], Z[..., -1]
        fk, d1, _ = self._derivs(th.s_k)
        cv_k = mix.cv_k(T)
        beta = (rho_k * cv_k * d1).sum(axis=-1) / (rho_k * cv_k).sum(axis=-1)
        kin = 0.5 * vel**2
        v = np.empty_like(Z)
        v[..., :-2] = (-fk + mix.r * d1
                       - beta[..., None] * (kin[..., None] - th.e_k) / T[..., None])
        v[..., -2] = beta * vel / T
        v[..., -1] = -beta / T
        return v

    def congruence_matrix(self, Z, mix):
        return _candidate1_parts(Z, mix, self)["H"]

    def to_dict(self):
        return {"family": "candidate_I", "functions": [fn.to_dict() for fn in self.functions]}


@dataclass(frozen=True)
class CandidateII:
    f: EntropyFunction

    label = "candidate_II"

    def value(self, Z, mix):
        th = thermo_eval(Z, mix)
        return -th.rho * self.f.f(th.s)

    def entropy_variables(self, Z, mix):
        th = thermo_eval(Z, mix)
        d1 = self.f.df(th.s)
        v = d1[..., None] * entropy_variables(Z, mix)
        v[..., :-2] += (d1 * th.s - self.f.f(th.s))[..., None]
        return v

    def congruence_matrix(self, Z, mix):
        return _candidate2_parts(Z, mix, self.f)["H"]

    def to_dict(self):
        return {"family": "candidate_II", "f": self.f.to_dict()}


def pair_eval(Z, mix, family):
    """Entropy and entropy flux; always ``F = u * U``."""
    Z = check_primitive(Z, mix)
    U = family.value(Z, mix)
    return EntropyPairValue(U=U, F=Z[..., -2] * U)


def pair_from_conservative(Ucons, mix, family):
    return pair_eval(primitive_from_conservative(Ucons, mix), mix, family)


def family_hessian(Z, mix, family):
    """Entropy Hessian ``G`` in conservative variables for any family."""
    Z = check_primitive(Z, mix)
    if isinstance(family, Baseline):
        return entropy_hessian(Z, mix).G
    return hessian_from_congruence(family.congruence_matrix(Z, mix), state_jacobians(Z, mix))


# --------------------------------------------------------------------------
# admissibility reports


@dataclass
class AdmissibilityReport:
    kind: str
    verdict: str
    matrix: np.ndarray
    pd: PdReport
    s_values: np.ndarray
    conservation_residual: float | None = None
    beta: float | None = None
    eta: float | None = None
    xi_k: np.ndarray | None = None
    Delta_k: np.ndarray | None = None
    R_k: np.ndarray | None = None
    det_closed_form: float | None = None
    det_direct: float | None = None
    closed_form_minors: np.ndarray | None = None
    sufficiency_flags: dict | None = None
    failed_conditions: list = field(default_factory=list)

    def to_dict(self):
        def conv(x):
            if x is None:
                return None
            if isinstance(x, np.ndarray):
                return x.tolist()
            if isinstance(x, (np.floating, np.bool_)):
                return x.item()
            return x

        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "conservation_residual": conv(self.conservation_residual),
            "beta": conv(self.beta),
            "eta": conv(self.eta),
            "xi_k": conv(self.xi_k),
            "Delta_k": conv(self.Delta_k),
            "R_k": conv(self.R_k),
            "matrix": conv(self.matrix),
            "pd": self.pd.to_dict(),
            "det_closed_form": conv(self.det_closed_form),
            "det_direct": conv(self.det_direct),
            "closed_form_minors": conv(self.closed_form_minors),
            "sufficiency_flags": self.sufficiency_flags,
            "s_values": conv(self.s_values),
            "failed_conditions": list(self.failed_conditions),
        }


def _require_calorically_perfect(mix):
    if not mix.calorically_perfect:
        raise UnsupportedModelError(
            "candidate I admissibility assumes constant species heat capacities"
        )
    if np.any(mix.e0 != 0):
        raise UnsupportedModelError(
            "candidate I admissibility assumes zero formation energies"
        )


def _candidate1_parts(Z, mix, family):
    family._check(mix)
    _require_calorically_perfect(mix)
    Z = check_primitive(Z, mix)
    th = thermo_eval(Z, mix)
    n = mix.n_species
    rho_k, T = Z[..., :-2], Z[..., -1]
    cv_k = mix.cv_k(T)
    _, d1, d2 = family._derivs(th.s_k)
    xi = d1 - mix.r * d2
    w = (rho_k * cv_k).sum(axis=-1)
    beta = (rho_k * cv_k * d1).sum(axis=-1) / w
    eta = (rho_k * cv_k**2 * d2).sum(axis=-1) / w
    residual = beta - (rho_k * mix.r * d1).sum(axis=-1) / (rho_k * mix.r).sum(axis=-1)
    gm1 = mix.r / cv_k
    Delta = (beta - eta)[..., None] * xi * gm1 - (xi - beta[..., None]) ** 2

    H = np.zeros(Z.shape[:-1] + (n + 2, n + 2))
    idx = np.arange(n)
    H[..., idx, idx] = mix.r / rho_k * xi
    coupling = -cv_k / T[..., None] * (xi - beta[..., None])
    H[..., :n, n + 1] = coupling
    H[..., n + 1, :n] = coupling
    H[..., n, n] = th.rho * beta / T
    H[..., n + 1, n + 1] = th.rho * th.c_v * (beta - eta) / T**2

    weighted = (rho_k * cv_k / (xi * gm1) * Delta).sum(axis=-1)
    det = th.rho * beta / T**3 * np.prod(mix.r * xi / rho_k, axis=-1) * weighted
    return {"H": H, "xi": xi, "beta": beta, "eta": eta, "Delta": Delta,
            "residual": residual, "det": det, "weighted": weighted, "s_k": th.s_k}


def _hadamard_scale(M):
    return float(np.prod(np.linalg.norm(M, axis=1)))


def candidate1_report(Z, mix, family, tol=CONSERVATION_TOL):
    """Admissibility of ``U = -sum_k rho_k f_k(s_k)`` at one state.

    Conservation requires the c_v-weighted and r-weighted means of ``f_k'``
    to agree; convexity holds iff every ``xi_k > 0``, ``beta > 0`` and
    ``sum_k rho_k c_vk Delta_k / (xi_k (gamma_k - 1)) > 0``. Convexity failures
    take precedence in the verdict; every failed condition is listed.
    """
    if not isinstance(family, CandidateI):
        family = CandidateI(tuple(family))
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 1:
        raise InvalidInputError("candidate1_report takes a single state")
    parts = _candidate1_parts(Z, mix, family)
    H = parts["H"]
    pd = pd_check(H)
    det_direct = float(np.linalg.det(H))
    det_cf = float(parts["det"])
    if abs(det_cf - det_direct) > CLOSED_FORM_RTOL * max(_hadamard_scale(H), 1e-300):
        raise InternalConsistencyError(
            f"closed-form determinant {det_cf!r} disagrees with direct {det_direct!r}"
        )

    failed = []
    for k, name in enumerate(mix.names):
        if not parts["xi"][k] > 0:
            failed.append(f"xi_k > 0 fails for species {name}")
    if not parts["beta"] > 0:
        failed.append("beta > 0 fails")
    if not parts["weighted"] > 0:
        failed.append("sum_k rho_k c_vk Delta_k / (xi_k (gamma_k - 1)) > 0 fails")
    if not failed and not pd.is_pd:
        failed.append("positive definiteness of H_I fails numerically")
    convex = not failed
    conservative = abs(float(parts["residual"])) <= tol
    if not conservative:
        failed.append(f"conservation residual {float(parts['residual']):.6g} exceeds {tol:g}")

    if not convex:
        verdict = "inadmissible"
    elif not conservative:
        verdict = "not-conservative"
    else:
        verdict = "admissible"
    return AdmissibilityReport(
        kind="CandidateI",
        verdict=verdict,
        matrix=H,
        pd=pd,
        s_values=parts["s_k"],
        conservation_residual=float(parts["residual"]),
        beta=float(parts["beta"]),
        eta=float(parts["eta"]),
        xi_k=parts["xi"],
        Delta_k=parts["Delta"],
        det_closed_form=det_cf,
        det_direct=det_direct,
        failed_conditions=failed,
    )


def _candidate2_parts(Z, mix, f):
    Z = check_primitive(Z, mix)
    th = thermo_eval(Z, mix)
    T = Z[..., -1]
    d1, d2 = f.df(th.s), f.d2f(th.s)
    R = -th.s_k + mix.r + th.s[..., None]
    w = np.concatenate(
        [R, np.zeros(R.shape[:-1] + (1,)), (-th.rho * th.c_v / T)[..., None]], axis=-1
    )
    base = _diag_embed(congruence_diagonal(Z, mix))
    H = (d1[..., None, None] * base
         - (d2 / th.rho)[..., None, None] * w[..., :, None] * w[..., None, :])
    return {"H": H, "d1": d1, "d2": d2, "R": R, "s": th.s, "th": th}


def candidate2_two_species_minors(Z, mix, f):
    """Closed-form leading minors of ``H_II`` for two species.

    The first three follow the standard block expansion. The full determinant
    is ``rho**4 c_v f'**3 rb_1 rb_2 (eta - f'' sum_k R_k**2/rb_k) / T**3`` for
    ``rho*H_II`` with ``rb_k = r_k/Y_k`` and ``eta = f' - c_v f''``.
    """
    if mix.n_species != 2:
        raise InvalidInputError("closed-form minors are for two species only")
    p = _candidate2_parts(Z, mix, f)
    th, d1, d2, R = p["th"], float(p["d1"]), float(p["d2"]), p["R"]
    rho, T, cv = float(th.rho), float(Z[-1]), float(th.c_v)
    rb = mix.r / th.Y_k
    eta = d1 - cv * d2
    q = float((R**2 / rb).sum())
    m1 = rb[0] * (d1 - d2 * R[0] ** 2 / rb[0])
    m2 = rb[0] * rb[1] * d1 * (d1 - d2 * q)
    m3 = rho**2 * d1 / T * m2
    m4 = rho**4 * cv * d1**3 * rb[0] * rb[1] / T**3 * (eta - d2 * q)
    # minors of H_II itself: divide the k-th minor of rho*H_II by rho**k
    return np.array([m1 / rho, m2 / rho**2, m3 / rho**3, m4 / rho**4])


def candidate2_report(Z, mix, f, tol=None):
    """Admissibility of ``U = -rho f(s)`` at one state (any heat-capacity model).

    ``f' > 0`` and ``f'' < 0`` are sufficient; the verdict itself comes from the
    Sylvester test on ``H_II``. For two species the closed-form minors are
    cross-checked against the direct ones.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 1:
        raise InvalidInputError("candidate2_report takes a single state")
    p = _candidate2_parts(Z, mix, f)
    H = p["H"]
    pd = pd_check(H) if tol is None else pd_check(H, tol=tol)
    d1, d2 = float(p["d1"]), float(p["d2"])
    th = p["th"]
    det_direct = float(np.linalg.det(H))

    closed = None
    if mix.n_species == 2:
        closed = candidate2_two_species_minors(Z, mix, f)
        for k, (cf, direct) in enumerate(zip(closed, pd.leading_minors)):
            scale = _hadamard_scale(H[: k + 1, : k + 1])
            if abs(cf - direct) > CLOSED_FORM_RTOL * max(scale, 1e-300):
                raise InternalConsistencyError(
                    f"closed-form minor {k + 1} ({cf!r}) disagrees with direct ({direct!r})"
                )

    failed = []
    if not pd.is_pd:
        bad = [k + 1 for k, m in enumerate(pd.leading_minors) if not m > 0]
        failed.append(f"leading minors not positive: {bad}" if bad
                      else "positive definiteness fails numerically")
    return AdmissibilityReport(
        kind="CandidateII",
        verdict="admissible" if pd.is_pd else "inadmissible",
        matrix=H,
        pd=pd,
        s_values=np.atleast_1d(p["s"]),
        beta=d1,
        eta=d1 - float(th.c_v) * d2,
        R_k=p["R"],
        det_direct=det_direct,
        det_closed_form=None if closed is None else float(closed[-1]),
        closed_form_minors=closed,
        sufficiency_flags={"df_positive": bool(d1 > 0), "d2f_negative": bool(d2 < 0)},
        failed_conditions=failed,
    )


@dataclass(frozen=True)
class HartenCheck:
    harten_ok: bool
    failing_s: float | None


def euler_reduction_check(f, species, s_samples):
    """Single-species conditions ``f' > 0`` and ``f' - c_p f'' > 0`` at each sample."""
    if not isinstance(species.cv_model, ConstantCv):
        raise UnsupportedModelError("the single-species reduction assumes constant cv")
    s_samples = np.atleast_1d(np.asarray(s_samples, dtype=float))
    if s_samples.size == 0:
        raise InvalidInputError("need at least one entropy sample")
    cp = species.cv_model.cv + species.r
    for s in s_samples:
        d1, d2 = float(f.df(s)), float(f.d2f(s))
        if not (d1 > 0 and d1 - cp * d2 > 0):
            return HartenCheck(False, float(s))
    return HartenCheck(True, None)
