"""Small dense linear algebra, finite-difference oracles and bracketed root finding.

Matrices here are tiny (n <= N + 2 for N species), so clarity wins over speed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BracketError, ConvergenceError, EvaluationError, InvalidInputError

#: Relative symmetry tolerance, scaled by max |M_ij|.
SYM_RTOL = 1e-10
#: Leading minors must exceed ``PD_TOL * max|M_ij|**k``.
PD_TOL = 1e-12


@dataclass(frozen=True)
class PdReport:
    is_pd: bool
    leading_minors: np.ndarray
    symmetry_defect: float

    def to_dict(self):
        return {
            "is_pd": bool(self.is_pd),
            "leading_minors": [float(m) for m in self.leading_minors],
            "symmetry_defect": float(self.symmetry_defect),
        }


@dataclass(frozen=True)
class EigExtremes:
    min_eig: float
    max_eig: float


@dataclass(frozen=True)
class FdDerivatives:
    gradient: np.ndarray
    hessian: np.ndarray


def _as_square(M):
    M = np.asarray(M, dtype=float)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2] or M.shape[-1] < 1:
        raise InvalidInputError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix has non-finite entries")
    return M


def symmetry_defect(M):
    M = _as_square(M)
    return float(np.max(np.abs(M - np.swapaxes(M, -1, -2))))


def pd_check(M, tol=PD_TOL, sym_rtol=SYM_RTOL):
    """Sylvester test: positive definite iff every leading principal minor is positive.

    Each minor is an LU (partial pivoting) determinant of the top-left block.
    A minor counts as positive when it exceeds ``tol * max|M_ij|**k`` for the
    k-by-k block; a matrix asymmetric beyond ``sym_rtol * max|M_ij|`` is never PD.
    """
    M = _as_square(M)
    if M.ndim != 2:
        raise InvalidInputError("pd_check takes a single matrix")
    n = M.shape[0]
    scale = float(np.max(np.abs(M)))
    defect = symmetry_defect(M)
    minors = np.array([np.linalg.det(M[:k, :k]) for k in range(1, n + 1)])
    thresholds = tol * scale ** np.arange(1, n + 1)
    symmetric = defect <= sym_rtol * max(scale, np.finfo(float).tiny)
    is_pd = bool(symmetric and scale > 0 and np.all(minors > thresholds))
    return PdReport(is_pd=is_pd, leading_minors=minors, symmetry_defect=defect)


def sym_eig_extremes(M, tol=SYM_RTOL):
    """Smallest and largest eigenvalue of a symmetric matrix (or a stack of them).

    For a stack of shape (..., n, n) the fields are arrays of shape (...).
    """
    M = _as_square(M)
    scale = np.max(np.abs(M), axis=(-2, -1))
    defect = np.max(np.abs(M - np.swapaxes(M, -1, -2)), axis=(-2, -1))
    if np.any(defect > tol * np.maximum(scale, np.finfo(float).tiny)):
        raise InvalidInputError(
            f"matrix not symmetric within {tol:g} (defect {float(np.max(defect)):.3e})"
        )
    sym = 0.5 * (M + np.swapaxes(M, -1, -2))
    w = np.linalg.eigvalsh(sym)
    lo, hi = w[..., 0], w[..., -1]
    if M.ndim == 2:
        return EigExtremes(float(lo), float(hi))
    return EigExtremes(lo, hi)


def default_fd_steps(x):
    x = np.asarray(x, dtype=float)
    return 1e-4 * np.maximum(1.0, np.abs(x))


def fd_derivatives(fn, x, h=None):
    """Central-difference gradient and Hessian of a scalar function, O(h^2).

    ``h`` may be a scalar or a per-component vector; the default is
    ``1e-4 * max(1, |x_i|)``. The Hessian is symmetrized by averaging.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if h is None:
        h = default_fd_steps(x)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape).copy()
    if np.any(h <= 0):
        raise InvalidInputError("finite-difference steps must be positive")

    def call(point):
        val = fn(point)
        val = float(val)
        if not np.isfinite(val):
            raise EvaluationError(f"non-finite value at {point!r}", point=point.copy())
        return val

    f0 = call(x)
    e = np.eye(n) * h
    fp = np.array([call(x + e[i]) for i in range(n)])
    fm = np.array([call(x - e[i]) for i in range(n)])
    grad = (fp - fm) / (2.0 * h)

    hess = np.empty((n, n))
    for i in range(n):
        hess[i, i] = (fp[i] - 2.0 * f0 + fm[i]) / h[i] ** 2
        for j in range(i + 1, n):
            fpp = call(x + e[i] + e[j])
            fpm = call(x + e[i] - e[j])
            fmp = call(x - e[i] + e[j])
            fmm = call(x - e[i] - e[j])
            hess[i, j] = hess[j, i] = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j])
    hess = 0.5 * (hess + hess.T)
    return FdDerivatives(gradient=grad, hessian=hess)


def fd_jacobian(fn, x, h=None):
    """Central-difference Jacobian of a vector map. ``x`` may be a stack (..., n)."""
    x = np.asarray(x, dtype=float)
    if h is None:
        h = default_fd_steps(x)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    n = x.shape[-1]
    cols = []
    for j in range(n):
        step = np.zeros_like(x)
        step[..., j] = h[..., j]
        cols.append((fn(x + step) - fn(x - step)) / (2.0 * h[..., j : j + 1]))
    return np.stack(cols, axis=-1)


def newton_bracketed(g, lo, hi, tol=1e-12, max_iter=100, dg=None, scale=None):
    """Safeguarded Newton iteration for a monotone function on [lo, hi].

    Works elementwise when ``lo``/``hi`` are arrays and ``g`` is vectorized.
    Without ``dg`` the derivative is a central difference. A Newton step that
    leaves the current bracket is replaced by bisection. Stops when
    ``|g(x)| <= tol * scale`` or the bracket is narrower than ``tol * max(1, |x|)``;
    ``scale`` defaults to ``max(|g(lo)|, |g(hi)|)``.
    """
    scalar = np.ndim(lo) == 0 and np.ndim(hi) == 0
    lo, hi = np.broadcast_arrays(np.atleast_1d(np.asarray(lo, dtype=float)),
                                 np.atleast_1d(np.asarray(hi, dtype=float)))
    lo, hi = lo.copy(), hi.copy()
    glo, ghi = np.asarray(g(lo), dtype=float), np.asarray(g(hi), dtype=float)
    if not (np.all(np.isfinite(glo)) and np.all(np.isfinite(ghi))):
        raise EvaluationError("non-finite value at bracket ends", point=(lo, hi))
    if np.any(glo * ghi > 0):
        raise BracketError(f"no sign change on [{lo.min():g}, {hi.max():g}]")
    if scale is None:
        scale = np.maximum(np.abs(glo), np.abs(ghi))
    scale = np.broadcast_to(np.asarray(scale, dtype=float), lo.shape)

    if dg is None:
        def dg(x):
            d = 1e-7 * np.maximum(1.0, np.abs(x))
            return (np.asarray(g(x + d)) - np.asarray(g(x - d))) / (2.0 * d)

    denom = ghi - glo
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(denom != 0, lo - glo * (hi - lo) / denom, 0.5 * (lo + hi))
    x = np.where(glo == 0, lo, np.where(ghi == 0, hi, x))

    for _ in range(max_iter):
        gx = np.asarray(g(x), dtype=float)
        if not np.all(np.isfinite(gx)):
            raise EvaluationError("non-finite value during iteration", point=x.copy())
        done = (np.abs(gx) <= tol * scale) | (hi - lo <= tol * np.maximum(1.0, np.abs(x)))
        if np.all(done):
            return float(x[0]) if scalar else x
        same_as_lo = np.sign(gx) == np.sign(glo)
        lo = np.where(same_as_lo, x, lo)
        glo = np.where(same_as_lo, gx, glo)
        hi = np.where(same_as_lo, hi, x)
        ghi = np.where(same_as_lo, ghi, gx)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - gx / np.asarray(dg(x), dtype=float)
        inside = np.isfinite(xn) & (xn > np.minimum(lo, hi)) & (xn < np.maximum(lo, hi))
        xn = np.where(inside, xn, 0.5 * (lo + hi))
        x = np.where(done, x, xn)
    raise ConvergenceError(f"no convergence in {max_iter} iterations",
                           last=float(x[0]) if scalar else x)
