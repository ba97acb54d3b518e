"""One-dimensional and radial p-Laplacian eigenvalues.

The fundamental eigenvalue of -(rho^{d-1} phi_p(u'))' = lambda rho^{d-1}
phi_p(u), phi_p(s) = |s|^{p-2} s, on (r, R) with Dirichlet/Neumann end
conditions, computed by nonlinear shooting in the flux variables
(u, v = rho^{d-1} phi_p(u')).  A finite-difference eigensolver (p = 2) and a
discrete Rayleigh-quotient minimizer (general p) provide an independent
cross-check of the shooting path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from ._kernels import shoot_rk4
from .errors import BracketError, ConvergenceError


class Arrangement(Enum):
    """End conditions: which endpoint carries the Dirichlet condition."""

    NEUMANN_INNER = "nd"        # Neumann at r, Dirichlet at R
    DIRICHLET_INNER = "dn"      # Dirichlet at r, Neumann at R
    DIRICHLET_BOTH = "dd"
    UNIT_INTERVAL_MIXED = "interval"  # (0, 1), d = 1, Dirichlet at 0, Neumann at 1


@dataclass(frozen=True)
class Exponent:
    """An exponent 1 < p < infinity with its dual p/(p-1)."""

    p: float

    def __post_init__(self):
        if not (1.0 < self.p < math.inf):
            raise ValueError(f"exponent must satisfy 1 < p < infinity, got {self.p}")

    @property
    def dual(self) -> float:
        return self.p / (self.p - 1.0)


def as_exponent(p) -> Exponent:
    return p if isinstance(p, Exponent) else Exponent(float(p))


@dataclass(frozen=True)
class RadialEigenProblem:
    r_inner: float
    r_outer: float
    p: Exponent
    d: int
    arrangement: Arrangement

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension d must be >= 1")
        if not (0.0 <= self.r_inner < self.r_outer):
            raise ValueError("need 0 <= r_inner < r_outer")
        if self.r_inner == 0.0 and self.d > 1:
            raise ValueError("r_inner = 0 requires d = 1 (one-sided interval problem)")
        if self.arrangement is Arrangement.UNIT_INTERVAL_MIXED:
            if (self.r_inner, self.r_outer, self.d) != (0.0, 1.0, 1):
                raise ValueError("the unit-interval arrangement is (0, 1) with d = 1")

    @property
    def dirichlet_outer(self) -> bool:
        return self.arrangement in (Arrangement.NEUMANN_INNER, Arrangement.DIRICHLET_BOTH)


@dataclass
class RadialEigenResult:
    eigenvalue: float
    profile: np.ndarray          # u on the uniform radial mesh
    shooting_residual: float     # |end mismatch| / sup|u|
    mesh_size: int
    problem: RadialEigenProblem

    @property
    def radii(self) -> np.ndarray:
        return np.linspace(self.problem.r_inner, self.problem.r_outer, self.mesh_size + 1)


def unit_interval_problem(p) -> RadialEigenProblem:
    return RadialEigenProblem(0.0, 1.0, as_exponent(p), 1, Arrangement.UNIT_INTERVAL_MIXED)


def _phi_inverse(w: float, p: float) -> float:
    # inverse of phi_p: |w|^{p'-2} w
    if w == 0.0:
        return 0.0
    return math.copysign(abs(w) ** (1.0 / (p - 1.0)), w)


def shoot_radial(problem: RadialEigenProblem, lam: float, mesh_size: int = 4096):
    """Integrate the radial system from the inner endpoint at trial lambda.

    Inner condition: u = 1, u' = 0 for a Neumann start; u = 0, phi_p(u') = 1
    for a Dirichlet start.  Returns (end_value, end_derivative, profile);
    values are NaN if the state blew up (lambda absurdly large).
    """
    if lam <= 0.0:
        raise ValueError("trial eigenvalue must be positive")
    if mesh_size < 64:
        raise ValueError("mesh_size must be at least 64")
    p = problem.p.p
    d = problem.d
    if problem.arrangement is Arrangement.NEUMANN_INNER:
        u0, v0 = 1.0, 0.0
    else:
        rf = 1.0 if d == 1 else problem.r_inner ** (d - 1)
        u0, v0 = 0.0, rf
    profile = np.empty(mesh_size + 1)
    u_end, v_end = shoot_rk4(problem.r_inner, problem.r_outer, mesh_size,
                             u0, v0, lam, p, d, profile)
    rf_out = 1.0 if d == 1 else problem.r_outer ** (d - 1)
    du_end = _phi_inverse(v_end / rf_out, p) if math.isfinite(v_end) else math.nan
    return u_end, du_end, profile


def _mismatch(problem: RadialEigenProblem, lam: float, mesh_size: int):
    u_end, du_end, profile = shoot_radial(problem, lam, mesh_size)
    m = u_end if problem.dirichlet_outer else du_end
    return m, profile


def radial_eigenvalue(problem: RadialEigenProblem, tol: float = 1e-9,
                      mesh_size: int = 4096) -> RadialEigenResult:
    """Smallest positive eigenvalue by bracketing sweep plus bisection.

    The sweep multiplies lambda by 1.5 from 0.1*(pi/(R-r))^p until the
    shooting mismatch changes sign, which guards against landing on a higher
    mode; bisection then resolves lambda to the requested relative tolerance.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    p = problem.p.p
    lam = 0.1 * (math.pi / (problem.r_outer - problem.r_inner)) ** p
    m_prev, _ = _mismatch(problem, lam, mesh_size)
    if not math.isfinite(m_prev):
        raise ConvergenceError(f"shooting state non-finite at lambda={lam:g}")
    # below the first eigenvalue the mismatch is positive for these start
    # normalizations; walk down until that holds so the sweep cannot land on
    # a higher mode
    for _ in range(80):
        if m_prev > 0.0:
            break
        lam *= 0.5
        m_prev, _ = _mismatch(problem, lam, mesh_size)
        if not math.isfinite(m_prev):
            raise ConvergenceError(f"shooting state non-finite at lambda={lam:g}")
    else:
        raise BracketError("mismatch never positive: no fundamental bracket found")
    lo = lam
    hi = None
    for _ in range(200):
        lam *= 1.5
        m, _ = _mismatch(problem, lam, mesh_size)
        if not math.isfinite(m):
            raise BracketError(
                f"no sign change before shooting blew up (sweep ceiling {lam:g})")
        if m == 0.0:
            lo = hi = lam
            break
        if (m > 0.0) != (m_prev > 0.0):
            hi = lam
            break
        lo = lam
        m_prev = m
    if hi is None:
        raise BracketError(f"eigenvalue bracket not found below sweep ceiling {lam:g}")

    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        m, _ = _mismatch(problem, mid, mesh_size)
        if not math.isfinite(m):
            raise ConvergenceError(f"shooting state non-finite at lambda={mid:g}")
        if m == 0.0:
            lo = hi = mid
            break
        if (m > 0.0) == (m_prev > 0.0):
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    m, profile = _mismatch(problem, lam, mesh_size)
    sup = float(np.abs(profile).max())
    residual = abs(m) / max(sup, 1e-300)

    interior = profile[1:-1]
    significant = interior[np.abs(interior) > 1e-9 * sup]
    if significant.size and (significant.max() > 0.0) and (significant.min() < 0.0):
        raise ConvergenceError("converged profile changes sign: not the fundamental mode")
    if profile[np.argmax(np.abs(profile))] < 0.0:
        profile = -profile
    return RadialEigenResult(eigenvalue=lam, profile=profile,
                             shooting_residual=residual, mesh_size=mesh_size,
                             problem=problem)


def mixed_interval_eigenvalue(p, tol: float = 1e-10, mesh_size: int = 4096) -> float:
    """Fundamental eigenvalue on (0,1), Dirichlet at 0 and Neumann at 1.

    Equals pi^2/4 at p = 2.
    """
    return radial_eigenvalue(unit_interval_problem(p), tol=tol, mesh_size=mesh_size).eigenvalue


# ---------------------------------------------------------------------------
# Independent cross-check
# ---------------------------------------------------------------------------

def radial_fd_oracle(problem: RadialEigenProblem, mesh_size: int = 4096,
                     max_iter: int = 6000) -> float:
    """Discrete eigenvalue of the same radial problem, shooting-free.

    For p = 2 this assembles the symmetric tridiagonal finite-difference
    operator and extracts its smallest eigenvalue; for general p it minimizes
    the discrete radial Rayleigh quotient by normalized gradient descent.
    """
    if problem.p.p == 2.0:
        return _fd_eigenvalue_linear(problem, mesh_size)
    return _rayleigh_descent_radial(problem, min(mesh_size, 2048), max_iter)


def _radial_weights(problem: RadialEigenProblem, m: int):
    rho = np.linspace(problem.r_inner, problem.r_outer, m + 1)
    h = (problem.r_outer - problem.r_inner) / m
    if problem.d == 1:
        a_half = np.ones(m)
        b = np.ones(m + 1)
    else:
        a_half = (0.5 * (rho[:-1] + rho[1:])) ** (problem.d - 1)
        b = rho ** (problem.d - 1)
    return rho, h, a_half, b


def _end_flags(problem: RadialEigenProblem) -> tuple[bool, bool]:
    # (dirichlet at inner end, dirichlet at outer end)
    arr = problem.arrangement
    if arr is Arrangement.NEUMANN_INNER:
        return False, True
    if arr is Arrangement.DIRICHLET_BOTH:
        return True, True
    return True, False


def _fd_eigenvalue_linear(problem: RadialEigenProblem, m: int) -> float:
    _, h, a_half, b = _radial_weights(problem, m)
    d_in, d_out = _end_flags(problem)
    lo = 1 if d_in else 0
    hi = m - 1 if d_out else m
    idx = np.arange(lo, hi + 1)
    k = len(idx)
    diag = np.zeros(k)
    mass = b[idx].copy()
    left = idx - 1 >= 0
    right = idx + 1 <= m
    diag += np.where(left, np.concatenate([[0.0], a_half])[idx], 0.0)
    diag += np.where(right, np.concatenate([a_half, [0.0]])[idx], 0.0)
    diag /= h * h
    off = -a_half[idx[:-1]] / (h * h)
    # half-cell mass at Neumann endpoints
    if not d_in:
        mass[0] *= 0.5
    if not d_out:
        mass[-1] *= 0.5
    scale = 1.0 / np.sqrt(mass)
    d_t = diag * scale * scale
    e_t = off * scale[:-1] * scale[1:]
    vals = scipy.linalg.eigh_tridiagonal(d_t, e_t, select="i", select_range=(0, 0),
                                         eigvals_only=True)
    return float(vals[0])


def _descent_seed(problem: RadialEigenProblem, rho: np.ndarray) -> np.ndarray:
    span = problem.r_outer - problem.r_inner
    s = (rho - problem.r_inner) / span
    arr = problem.arrangement
    if arr is Arrangement.NEUMANN_INNER:
        return np.cos(0.5 * math.pi * s)
    if arr is Arrangement.DIRICHLET_BOTH:
        return np.sin(math.pi * s)
    return np.sin(0.5 * math.pi * s)


def _rayleigh_descent_radial(problem: RadialEigenProblem, m: int, max_iter: int) -> float:
    # coarse-to-fine cascade: plain descent stalls on the stiff quotient at
    # fine meshes, but converges fast when seeded from the coarser level
    meshes = [m]
    while meshes[-1] > 64:
        meshes.append(meshes[-1] // 2)
    u = None
    e = math.inf
    for mesh in reversed(meshes):
        rho = np.linspace(problem.r_inner, problem.r_outer, mesh + 1)
        if u is None:
            seed = _descent_seed(problem, rho)
        else:
            seed = np.interp(rho, prev_rho, u)
        u, e = _descend_radial_level(problem, mesh, seed, max_iter)
        prev_rho = rho
    return e


def _descend_radial_level(problem: RadialEigenProblem, m: int, seed: np.ndarray,
                          max_iter: int):
    p = problem.p.p
    rho, h, a_half, b = _radial_weights(problem, m)
    d_in, d_out = _end_flags(problem)
    w = b.copy()
    w[0] *= 0.5
    w[-1] *= 0.5
    free = np.ones(m + 1, dtype=bool)
    if d_in:
        free[0] = False
    if d_out:
        free[-1] = False

    def phi(g):
        out = np.zeros_like(g)
        nz = g != 0.0
        out[nz] = np.abs(g[nz]) ** (p - 2.0) * g[nz]
        return out

    def energy(u):
        g = np.diff(u) / h
        num = h * float(a_half @ np.abs(g) ** p)
        den = h * float(w @ np.abs(u) ** p)
        return num / den, num, den

    def gradient(u, e, num, den):
        g = np.diff(u) / h
        f = a_half * phi(g)
        gn = np.zeros(m + 1)
        gn[:-1] -= p * f
        gn[1:] += p * f
        gd = p * h * w * phi(u)
        grad = (gn - e * gd) / den
        grad[~free] = 0.0
        return grad

    u = seed.copy()
    u[~free] = 0.0
    u /= (h * float(w @ np.abs(u) ** p)) ** (1.0 / p)
    e, num, den = energy(u)
    step = 1.0
    stagnant = 0
    decrease = math.inf
    for _ in range(max_iter):
        grad = gradient(u, e, num, den)
        gnorm = float(np.abs(grad).max())
        if gnorm == 0.0:
            return u, e
        accepted = False
        for _ in range(40):
            trial = u - step * grad
            trial[~free] = 0.0
            norm = (h * float(w @ np.abs(trial) ** p)) ** (1.0 / p)
            if norm == 0.0:
                step *= 0.5
                continue
            trial /= norm
            e_t, num_t, den_t = energy(trial)
            if e_t < e:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            return u, e
        decrease = (e - e_t) / e
        stagnant = stagnant + 1 if decrease < 1e-12 else 0
        u, e, num, den = trial, e_t, num_t, den_t
        step *= 1.3
        if stagnant >= 20:
            return u, e
    if decrease > 1e-8:
        raise ConvergenceError(
            f"radial Rayleigh descent still moving after {max_iter} iterations")
    return u, e
