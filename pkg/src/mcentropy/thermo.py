"""Thermally perfect mixture thermodynamics.

State vectors are numpy arrays whose last axis has length N + 2:

* primitive ``Z = [rho_1, ..., rho_N, u, T]``
* conservative ``u = [rho_1, ..., rho_N, rho*u, E]`` with ``E = rho*e + rho*u**2/2``

Every function accepts a single state or a stack of shape (..., N + 2).
Species heat capacities are either constant or linear in temperature. Entropy
integrals are anchored at a per-species reference temperature ``T_ref`` with
an additive constant ``s_ref``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, InvalidStateError, NoTemperatureError
from .numerics import newton_bracketed

T_MIN_DEFAULT = 1e-8
T_MAX_DEFAULT = 1e6
TEMPERATURE_RTOL = 1e-13


@dataclass(frozen=True)
class ConstantCv:
    cv: float

    def __post_init__(self):
        if not self.cv > 0:
            raise InvalidInputError(f"constant cv must be positive, got {self.cv}")

    @property
    def coefficients(self):
        return float(self.cv), 0.0

    def to_dict(self):
        return {"model": "constant", "cv": self.cv}


@dataclass(frozen=True)
class LinearCv:
    """``cv(T) = a + b*T``."""

    a: float
    b: float

    @property
    def coefficients(self):
        return float(self.a), float(self.b)

    def to_dict(self):
        return {"model": "linear", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class SpeciesSpec:
    name: str
    r: float
    cv_model: ConstantCv | LinearCv
    e0: float = 0.0
    s_ref: float = 0.0
    T_ref: float = 1.0

    def __post_init__(self):
        if not self.r > 0:
            raise InvalidInputError(f"species {self.name!r}: r must be positive")
        if not self.T_ref > 0:
            raise InvalidInputError(f"species {self.name!r}: T_ref must be positive")

    def cv(self, T):
        a, b = self.cv_model.coefficients
        return a + b * np.asarray(T, dtype=float)

    def cp(self, T):
        return self.cv(T) + self.r

    def to_dict(self):
        return {
            "name": self.name,
            "r": self.r,
            "cv": self.cv_model.to_dict(),
            "e0": self.e0,
            "s_ref": self.s_ref,
            "T_ref": self.T_ref,
        }


@dataclass(frozen=True)
class MixtureSpec:
    """Ordered, immutable list of species plus the temperature search bracket."""

    species: tuple
    T_min: float = T_MIN_DEFAULT
    T_max: float = T_MAX_DEFAULT
    _arrays: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        species = tuple(self.species)
        object.__setattr__(self, "species", species)
        if len(species) < 1:
            raise InvalidInputError("a mixture needs at least one species")
        names = [sp.name for sp in species]
        if len(set(names)) != len(names):
            raise InvalidInputError(f"duplicate species names in {names}")
        if not 0 < self.T_min < self.T_max:
            raise InvalidInputError("need 0 < T_min < T_max")
        coeffs = np.array([sp.cv_model.coefficients for sp in species])
        arrays = {
            "r": np.array([sp.r for sp in species], dtype=float),
            "a": coeffs[:, 0].copy(),
            "b": coeffs[:, 1].copy(),
            "e0": np.array([sp.e0 for sp in species], dtype=float),
            "s_ref": np.array([sp.s_ref for sp in species], dtype=float),
            "T_ref": np.array([sp.T_ref for sp in species], dtype=float),
        }
        for T in (self.T_min, self.T_max):
            if np.any(arrays["a"] + arrays["b"] * T <= 0):
                raise InvalidInputError(
                    f"cv(T) must stay positive on [{self.T_min:g}, {self.T_max:g}]"
                )
        for arr in arrays.values():
            arr.flags.writeable = False
        object.__setattr__(self, "_arrays", arrays)

    @property
    def n_species(self):
        return len(self.species)

    @property
    def names(self):
        return [sp.name for sp in self.species]

    @property
    def r(self):
        return self._arrays["r"]

    @property
    def e0(self):
        return self._arrays["e0"]

    @property
    def calorically_perfect(self):
        return all(isinstance(sp.cv_model, ConstantCv) for sp in self.species)

    def cv_k(self, T):
        T = np.asarray(T, dtype=float)[..., None]
        return self._arrays["a"] + self._arrays["b"] * T

    def e_k(self, T):
        """Species internal energies ``e0_k + int_0^T cv_k``."""
        T = np.asarray(T, dtype=float)[..., None]
        a, b = self._arrays["a"], self._arrays["b"]
        return self._arrays["e0"] + a * T + 0.5 * b * T**2

    def s_k(self, rho_k, T):
        """Species entropies ``s_ref_k + int_{T_ref}^T cv_k/tau - r_k ln rho_k``."""
        T = np.asarray(T, dtype=float)[..., None]
        a, b = self._arrays["a"], self._arrays["b"]
        T_ref = self._arrays["T_ref"]
        thermal = a * np.log(T / T_ref) + b * (T - T_ref)
        return self._arrays["s_ref"] + thermal - self.r * np.log(rho_k)

    def to_dict(self):
        return {"species": [sp.to_dict() for sp in self.species],
                "T_min": self.T_min, "T_max": self.T_max}


@dataclass(frozen=True)
class ThermoEval:
    p: np.ndarray
    rho: np.ndarray
    e: np.ndarray
    e_k: np.ndarray
    h_k: np.ndarray
    s_k: np.ndarray
    g_k: np.ndarray
    s: np.ndarray
    c_v: np.ndarray
    c_p: np.ndarray
    gamma: np.ndarray
    sound_speed: np.ndarray
    Y_k: np.ndarray


def primitive(rho_k, u, T):
    """Pack ``Z = [rho_1..rho_N, u, T]``."""
    return np.concatenate([np.asarray(rho_k, dtype=float).ravel(), [float(u), float(T)]])


def conservative(rho_k, momentum, total_energy):
    return np.concatenate(
        [np.asarray(rho_k, dtype=float).ravel(), [float(momentum), float(total_energy)]]
    )


def _check_width(X, mix):
    X = np.asarray(X, dtype=float)
    if X.shape[-1] != mix.n_species + 2:
        raise InvalidInputError(
            f"state has length {X.shape[-1]}, mixture needs {mix.n_species + 2}"
        )
    return X


def _first_bad(mask):
    idx = np.argwhere(mask)
    return tuple(int(i) for i in idx[0]) if idx.size else None


def check_primitive(Z, mix):
    Z = _check_width(Z, mix)
    rho_k, T = Z[..., :-2], Z[..., -1]
    bad = ~(rho_k > 0)
    if np.any(bad):
        raise InvalidStateError("rho_k", index=_first_bad(bad))
    bad = ~(T > 0)
    if np.any(bad):
        raise InvalidStateError("T", index=_first_bad(bad))
    return Z


def thermo_eval(Z, mix):
    """All derived thermodynamic quantities at primitive state(s) ``Z``."""
    Z = check_primitive(Z, mix)
    rho_k, T = Z[..., :-2], Z[..., -1]
    rho = rho_k.sum(axis=-1)
    Y = rho_k / rho[..., None]
    cv_k = mix.cv_k(T)
    e_k = mix.e_k(T)
    h_k = e_k + mix.r * T[..., None]
    s_k = mix.s_k(rho_k, T)
    g_k = h_k - T[..., None] * s_k
    c_v = (Y * cv_k).sum(axis=-1)
    r_mix = (Y * mix.r).sum(axis=-1)
    c_p = c_v + r_mix
    gamma = c_p / c_v
    p = (rho_k * mix.r).sum(axis=-1) * T
    return ThermoEval(
        p=p,
        rho=rho,
        e=(Y * e_k).sum(axis=-1),
        e_k=e_k,
        h_k=h_k,
        s_k=s_k,
        g_k=g_k,
        s=(rho_k * s_k).sum(axis=-1) / rho,
        c_v=c_v,
        c_p=c_p,
        gamma=gamma,
        sound_speed=np.sqrt(gamma * p / rho),
        Y_k=Y,
    )


def conservative_from_primitive(Z, mix):
    Z = check_primitive(Z, mix)
    rho_k, vel, T = Z[..., :-2], Z[..., -2], Z[..., -1]
    rho = rho_k.sum(axis=-1)
    rhoe = (rho_k * mix.e_k(T)).sum(axis=-1)
    out = np.empty_like(Z)
    out[..., :-2] = rho_k
    out[..., -2] = rho * vel
    out[..., -1] = rhoe + 0.5 * rho * vel**2
    return out


def _solve_temperature(rho_k, rhoe, mix):
    a, b = mix._arrays["a"], mix._arrays["b"]
    rho_a = (rho_k * a).sum(axis=-1)
    rho_b = (rho_k * b).sum(axis=-1)
    formation = (rho_k * mix.e0).sum(axis=-1)
    target = rhoe - formation

    if not np.any(b):
        T = target / rho_a
        bad = ~(T > 0)
        if np.any(bad):
            raise NoTemperatureError(
                f"internal energy admits no positive temperature (state {_first_bad(bad)})"
            )
        return T

    def g(T):
        return rho_a * T + 0.5 * rho_b * T**2 - target

    def dg(T):
        return rho_a + rho_b * T

    lo = np.full(np.shape(target), mix.T_min)
    hi = np.full(np.shape(target), mix.T_max)
    bad = (g(lo) > 0) | (g(hi) < 0)
    if np.any(bad):
        raise NoTemperatureError(
            f"internal energy outside the model range on [{mix.T_min:g}, {mix.T_max:g}]"
            f" (state {_first_bad(bad)})"
        )
    scale = np.abs(target) + np.finfo(float).tiny
    T = newton_bracketed(g, lo, hi, tol=TEMPERATURE_RTOL, max_iter=200, dg=dg, scale=scale)
    return np.asarray(T).reshape(np.shape(target))


def primitive_from_conservative(U, mix):
    """Invert the primitive-to-conservative map, solving for temperature."""
    U = _check_width(U, mix)
    rho_k = U[..., :-2]
    bad = ~(rho_k > 0)
    if np.any(bad):
        raise InvalidStateError("rho_k", index=_first_bad(bad))
    rho = rho_k.sum(axis=-1)
    vel = U[..., -2] / rho
    rhoe = U[..., -1] - 0.5 * rho * vel**2
    T = _solve_temperature(rho_k, rhoe, mix)
    Z = np.empty_like(U)
    Z[..., :-2] = rho_k
    Z[..., -2] = vel
    Z[..., -1] = T
    return Z


def specific_entropy(U, mix):
    """Mixture specific entropy ``s`` of conservative state(s)."""
    Z = primitive_from_conservative(U, mix)
    rho_k, T = Z[..., :-2], Z[..., -1]
    return (rho_k * mix.s_k(rho_k, T)).sum(axis=-1) / rho_k.sum(axis=-1)
