"""Independent numerical eigenvalue estimates on gridded domains.

A uniform Cartesian grid classifies lattice nodes against the domain; the
linear (p = 2) path runs inverse power iteration on the five-point Laplacian
with Dirichlet ghost elimination and Neumann mirror faces, and the general-p
path minimizes the discrete Rayleigh quotient.  These estimates referee every
bound certificate; they are tolerance-banded estimates, not certified values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import geometry
from ._kernels import cg_solve, stencil_apply
from .errors import ConvergenceError, ResolutionError
from .geometry import Domain
from .one_dim import as_exponent

OUTSIDE, INTERIOR, DIRICHLET_ADJACENT, NEUMANN_ADJACENT = 0, 1, 2, 3

DIRICHLET_FACE = -1
NEUMANN_FACE = -2


@dataclass(eq=False)
class Grid:
    """Uniform lattice over a domain with per-node classification.

    ``neighbors`` holds, per inside node, the flat indices of its four
    neighbours in (W, E, S, N) order, with DIRICHLET_FACE marking a ghost
    face (value 0 outside) and NEUMANN_FACE a mirror face.
    """

    domain: Domain
    h: float
    x0: float
    y0: float
    nx: int
    ny: int
    node_class: np.ndarray       # (ny, nx) int8
    index: np.ndarray            # (ny, nx) int32, -1 where not inside
    xy: np.ndarray               # (n_inside, 2)
    ij: np.ndarray               # (n_inside, 2) lattice (i, j)
    neighbors: np.ndarray        # (n_inside, 4) int32
    diag_count: np.ndarray       # (n_inside,) float64
    interior_mask: np.ndarray    # (n_inside,) bool: full-stencil nodes
    nearest_dirichlet: np.ndarray  # (n_inside,) bool
    nearest_normal: np.ndarray     # (n_inside, 2)

    @property
    def n_inside(self) -> int:
        return len(self.xy)

    @property
    def n_interior(self) -> int:
        return int(self.interior_mask.sum())

    def has_dirichlet_face(self) -> bool:
        return bool((self.neighbors == DIRICHLET_FACE).any())

    def cell_area(self) -> float:
        return self.h * self.h


@dataclass(eq=False)
class ScalarField:
    """One real value per inside node of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.grid.n_inside:
            raise ValueError("field length does not match grid")


def build_grid(domain: Domain, h: float) -> Grid:
    """Classify the covering lattice of a domain at spacing h."""
    if h <= 0.0:
        raise ValueError("grid spacing must be positive")
    if h > domain.diameter / 8.0:
        raise ValueError(f"grid spacing {h:g} exceeds diameter/8")
    xmin, ymin, xmax, ymax = domain.bbox
    nx = int(math.floor((xmax - xmin) / h + 1e-9)) + 1
    ny = int(math.floor((ymax - ymin) / h + 1e-9)) + 1
    xs = xmin + h * np.arange(nx)
    ys = ymin + h * np.arange(ny)
    px, py = np.meshgrid(xs, ys, indexing="xy")
    pts = np.column_stack([px.ravel(), py.ravel()])
    inside = geometry.points_inside(domain, pts).reshape(ny, nx)

    n_inside = int(inside.sum())
    if n_inside < 16:
        raise ResolutionError(f"grid resolves only {n_inside} inside nodes")

    index = np.full((ny, nx), -1, dtype=np.int32)
    jj, ii = np.nonzero(inside)
    index[jj, ii] = np.arange(n_inside, dtype=np.int32)
    xy = np.column_stack([xs[ii], ys[jj]])
    ij = np.column_stack([ii, jj]).astype(np.int32)

    samples = geometry.sample_boundary(domain, max(4096, 16 * domain.n_edges), "all")
    tree = cKDTree(samples.positions)
    _, nearest = tree.query(xy)
    nearest_dirichlet = samples.dirichlet[nearest]
    nearest_normal = samples.normals[nearest]

    # neighbour table with ghost-face labels decided at face midpoints
    neighbors = np.full((n_inside, 4), DIRICHLET_FACE, dtype=np.int32)
    offsets = ((-1, 0), (1, 0), (0, -1), (0, 1))  # W, E, S, N
    face_rows: list[np.ndarray] = []
    face_cols: list[int] = []
    face_mids: list[np.ndarray] = []
    for k, (di, dj) in enumerate(offsets):
        ni = ii + di
        nj = jj + dj
        ok = (ni >= 0) & (ni < nx) & (nj >= 0) & (nj < ny)
        nidx = np.full(n_inside, -1, dtype=np.int32)
        nidx[ok] = index[nj[ok], ni[ok]]
        neighbors[:, k] = nidx
        ghost = nidx < 0
        if ghost.any():
            rows = np.flatnonzero(ghost)
            mids = xy[rows] + 0.5 * h * np.array([di, dj])
            face_rows.append(rows)
            face_cols.append(k)
            face_mids.append(mids)
    if face_mids:
        all_mids = np.concatenate(face_mids)
        _, face_nearest = tree.query(all_mids)
        face_dirichlet = samples.dirichlet[face_nearest]
        pos = 0
        for rows, k in zip(face_rows, face_cols):
            m = len(rows)
            lab = face_dirichlet[pos:pos + m]
            neighbors[rows[~lab], k] = NEUMANN_FACE
            pos += m

    diag_count = 4.0 - (neighbors == NEUMANN_FACE).sum(axis=1).astype(float)
    interior_mask = (neighbors >= 0).all(axis=1)

    node_class = np.zeros((ny, nx), dtype=np.int8)
    classes = np.where(interior_mask, INTERIOR,
                       np.where(nearest_dirichlet, DIRICHLET_ADJACENT, NEUMANN_ADJACENT))
    node_class[jj, ii] = classes

    return Grid(domain=domain, h=h, x0=xmin, y0=ymin, nx=nx, ny=ny,
                node_class=node_class, index=index, xy=xy, ij=ij,
                neighbors=neighbors, diag_count=diag_count,
                interior_mask=interior_mask,
                nearest_dirichlet=nearest_dirichlet,
                nearest_normal=nearest_normal)


# ---------------------------------------------------------------------------
# Linear eigensolver (p = 2)
# ---------------------------------------------------------------------------

@dataclass
class LaplaceEigenResult:
    value: float
    field: ScalarField
    n_iterations: int
    residual: float
    warning: str | None = None


def _box_mode_seed(grid: Grid) -> np.ndarray:
    xmin, ymin, xmax, ymax = grid.domain.bbox
    lx = max(xmax - xmin, grid.h)
    ly = max(ymax - ymin, grid.h)
    x = grid.xy[:, 0]
    y = grid.xy[:, 1]
    seed = np.sin(math.pi * (x - xmin) / lx) * np.sin(math.pi * (y - ymin) / ly)
    sup = np.abs(seed).max()
    if sup <= 0.0:
        seed = np.ones(grid.n_inside)
    return seed


def _apply_stencil(grid: Grid, u: np.ndarray) -> np.ndarray:
    out = np.empty_like(u)
    stencil_apply(u, grid.neighbors, grid.diag_count, 1.0 / (grid.h * grid.h), out)
    return out


def laplace_eigen_p2(grid: Grid, eig_tol: float = 1e-8, cg_tol: float = 1e-10,
                     max_outer: int = 200) -> LaplaceEigenResult:
    """Smallest Dirichlet(-mixed) Laplacian eigenpair by inverse power
    iteration; inner solves by conjugate gradients to ``cg_tol`` relative
    residual.  With no Dirichlet boundary at all the fundamental eigenvalue
    is 0 and a constant mode is returned with a warning.
    """
    n = grid.n_inside
    inv_h2 = 1.0 / (grid.h * grid.h)
    if not grid.has_dirichlet_face():
        u = np.ones(n)
        u /= grid.h * np.linalg.norm(u)
        return LaplaceEigenResult(value=0.0, field=ScalarField(grid, u),
                                  n_iterations=0, residual=0.0,
                                  warning="pure Neumann boundary: fundamental eigenvalue is 0")

    max_cg = 60 * max(grid.nx, grid.ny) + 200
    x = _box_mode_seed(grid)
    x /= np.linalg.norm(x)
    lam = float(x @ _apply_stencil(grid, x))
    warm = x / lam
    n_iter = 0
    for outer in range(1, max_outer + 1):
        sol, cg_iters, cg_res = cg_solve(grid.neighbors, grid.diag_count, inv_h2,
                                         x, warm, cg_tol, max_cg)
        if cg_res > 10.0 * cg_tol:
            raise ConvergenceError(
                f"inner CG stalled at relative residual {cg_res:.2e} after {cg_iters} iterations")
        norm = np.linalg.norm(sol)
        x = sol / norm
        ax = _apply_stencil(grid, x)
        lam_new = float(x @ ax)
        n_iter = outer
        residual = float(np.linalg.norm(ax - lam_new * x))
        done = (abs(lam_new - lam) <= eig_tol * abs(lam_new)
                and residual <= 1e-6 * abs(lam_new))
        lam = lam_new
        if done:
            break
        warm = x / lam
    else:
        raise ConvergenceError(f"inverse power iteration: no convergence in {max_outer} steps")

    if x.sum() < 0.0:
        x = -x
    u = x / (grid.h * np.linalg.norm(x))   # quadrature norm h^2 sum u^2 = 1
    return LaplaceEigenResult(value=lam, field=ScalarField(grid, u),
                              n_iterations=n_iter, residual=residual)


# ---------------------------------------------------------------------------
# Discrete Rayleigh quotient machinery (shared stencil with the checks)
# ---------------------------------------------------------------------------

def face_gradients(grid: Grid, u: np.ndarray):
    """One-sided differences toward each of the four faces, with Dirichlet
    ghost zeros and natural Neumann faces (zero contribution).

    Returns (g_w, g_e, g_s, g_n): g_e[k] = (u_east - u_k)/h and
    g_w[k] = (u_k - u_west)/h, so both approximate du/dx at node k.
    """
    h = grid.h
    out = []
    for col, sign in ((0, -1.0), (1, 1.0), (2, -1.0), (3, 1.0)):
        nbr = grid.neighbors[:, col]
        g = np.zeros_like(u)
        ins = nbr >= 0
        g[ins] = sign * (u[nbr[ins]] - u[ins]) / h
        dir_face = nbr == DIRICHLET_FACE
        g[dir_face] = sign * (0.0 - u[dir_face]) / h
        out.append(g)
    return out[0], out[1], out[2], out[3]


def _face_weights(grid: Grid):
    """Quadrature weight per one-sided difference: interior faces are shared
    by two nodes (1/2 each), ghost faces belong to one node alone (1); with
    these weights the p = 2 energy is exactly the five-point form."""
    return tuple(np.where(grid.neighbors[:, col] >= 0, 0.5, 1.0) for col in range(4))


def gradient_square_average(grid: Grid, u: np.ndarray) -> np.ndarray:
    """Cell-averaged squared gradient: weighted mean of the one-sided
    difference squares, every Dirichlet jump charged exactly once."""
    g_w, g_e, g_s, g_n = face_gradients(grid, u)
    w_w, w_e, w_s, w_n = _face_weights(grid)
    return w_w * g_w * g_w + w_e * g_e * g_e + w_s * g_s * g_s + w_n * g_n * g_n


def centered_gradient(grid: Grid, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Centered differences with Dirichlet ghost zeros and Neumann mirrors."""
    h = grid.h
    out = []
    for lo_col, hi_col in ((0, 1), (2, 3)):
        lo = grid.neighbors[:, lo_col]
        hi = grid.neighbors[:, hi_col]
        u_lo = np.where(lo >= 0, u[np.maximum(lo, 0)], np.where(lo == NEUMANN_FACE, u, 0.0))
        u_hi = np.where(hi >= 0, u[np.maximum(hi, 0)], np.where(hi == NEUMANN_FACE, u, 0.0))
        out.append((u_hi - u_lo) / (2.0 * h))
    return out[0], out[1]


def centered_divergence(grid: Grid, qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
    """Centered divergence of a node-sampled vector field; defined (finite)
    only at full-stencil interior nodes."""
    h = grid.h
    nbr = grid.neighbors
    safe = np.maximum(nbr, 0)
    div = (qx[safe[:, 1]] - qx[safe[:, 0]] + qy[safe[:, 3]] - qy[safe[:, 2]]) / (2.0 * h)
    div[~grid.interior_mask] = np.nan
    return div


def _p_energy(grid: Grid, u: np.ndarray, p: float):
    faces = face_gradients(grid, u)
    weights = _face_weights(grid)
    s = sum(w * g * g for w, g in zip(weights, faces))
    area = grid.cell_area()
    num = area * float(np.sum(s ** (0.5 * p)))
    den = area * float(np.sum(np.abs(u) ** p))
    return num / den, num, den, faces, s


def _p_energy_gradient(grid: Grid, u, p, e, den, faces, s):
    n = grid.n_inside
    area = grid.cell_area()
    fac = np.zeros_like(s)
    nz = s > 0.0
    fac[nz] = p * s[nz] ** (0.5 * p - 1.0)
    h = grid.h
    weights = _face_weights(grid)
    grad_n = np.zeros(n)
    # own-node sensitivities: g_e, g_n fall with u_k, g_w, g_s rise with it;
    # zero entries (Neumann faces) drop out on their own
    own_signs = (1.0, -1.0, 1.0, -1.0)
    nbr_signs = (-1.0, 1.0, -1.0, 1.0)
    for col in range(4):
        wg = fac * weights[col] * faces[col] / h
        grad_n += own_signs[col] * wg
        nbr = grid.neighbors[:, col]
        ins = nbr >= 0
        grad_n += np.bincount(nbr[ins], weights=nbr_signs[col] * wg[ins], minlength=n)
    grad_n *= area
    grad_d = area * p * np.abs(u) ** (p - 1.0) * np.sign(u)
    return (grad_n - e * grad_d) / den


@dataclass
class RayleighEstimate:
    value: float
    field: ScalarField
    energy_history: list[float] = field(default_factory=list)
    n_iterations: int = 0
    converged: bool = True


def _descend(grid: Grid, p: float, u0: np.ndarray, max_iter: int):
    area = grid.cell_area()

    def normalize(u):
        nrm = (area * float(np.sum(np.abs(u) ** p))) ** (1.0 / p)
        return u / nrm if nrm > 0.0 else u

    u = normalize(u0.copy())
    e, num, den, faces, s = _p_energy(grid, u, p)
    history = [e]
    step = 1.0
    stagnant = 0
    iters = 0
    for iters in range(1, max_iter + 1):
        grad = _p_energy_gradient(grid, u, p, e, den, faces, s)
        gmax = float(np.abs(grad).max())
        if gmax == 0.0:
            break
        accepted = False
        for _ in range(40):
            trial = normalize(u - step * grad)
            e_t, num_t, den_t, faces_t, s_t = _p_energy(grid, trial, p)
            if e_t < e:
                accepted = True
                break
            step *= 0.5
            if step < 1e-15:
                break
        if not accepted:
            break
        stagnant = stagnant + 1 if (e - e_t) < 1e-12 * e else 0
        u, e, num, den, faces, s = trial, e_t, num_t, den_t, faces_t, s_t
        history.append(e)
        step *= 1.3
        if stagnant >= 15:
            break
    return u, e, history, iters


def _bilinear(grid: Grid, values: np.ndarray, points: np.ndarray,
              fill: float = 0.0, strict: bool = False) -> np.ndarray:
    """Bilinear interpolation of a node field.  Cell corners without values
    contribute ``fill``; in ``strict`` mode the available corners are
    reweighted instead, and a sample whose cell carries no values at all
    raises (outside the field's support)."""
    pts = np.atleast_2d(points)
    fx = (pts[:, 0] - grid.x0) / grid.h
    fy = (pts[:, 1] - grid.y0) / grid.h
    i0 = np.clip(np.floor(fx).astype(int), 0, grid.nx - 2)
    j0 = np.clip(np.floor(fy).astype(int), 0, grid.ny - 2)
    tx = np.clip(fx - i0, 0.0, 1.0)
    ty = np.clip(fy - j0, 0.0, 1.0)
    acc = np.zeros(len(pts))
    weight_seen = np.zeros(len(pts))
    for di, dj, w in ((0, 0, (1 - tx) * (1 - ty)), (1, 0, tx * (1 - ty)),
                      (0, 1, (1 - tx) * ty), (1, 1, tx * ty)):
        idx = grid.index[j0 + dj, i0 + di]
        ok = idx >= 0
        acc += np.where(ok, w * values[np.maximum(idx, 0)], 0.0)
        weight_seen += np.where(ok, w, 0.0)
    if strict:
        if np.any(weight_seen < 1e-9):
            raise ValueError("sample outside the field's support")
        return acc / weight_seen
    return acc + (1.0 - weight_seen) * fill


def rayleigh_minimize_p(grid: Grid, p, seed: ScalarField | None = None,
                        max_iter: int = 1200) -> RayleighEstimate:
    """Upper estimate of the discrete fundamental Rayleigh quotient.

    Normalized gradient descent with a backtracking line search; each
    accepted step strictly decreases the quotient.  Unless an explicit seed
    is given, the iteration is seeded through a deterministic coarse-to-fine
    cascade (box mode on the coarsest grid), which removes the smooth error
    components plain descent damps slowly.
    """
    p = as_exponent(p).p
    domain = grid.domain
    if seed is not None:
        u0 = seed.values.copy()
        levels = [grid]
    else:
        hs = [grid.h]
        while True:
            h2 = hs[-1] * 2.0
            if h2 > domain.diameter / 8.0:
                break
            hs.append(h2)
        levels = []
        for h_k in reversed(hs):
            if h_k == grid.h:
                levels.append(grid)
                continue
            try:
                levels.append(build_grid(domain, h_k))
            except (ResolutionError, ValueError):
                continue
        u0 = None

    u = u0
    history: list[float] = []
    total_iters = 0
    e = math.inf
    for level in levels:
        if u is None:
            u = _box_mode_seed(level)
        elif level is not levels[0]:
            u = _bilinear(prev_level, u, level.xy, fill=0.0)
            if np.abs(u).max() == 0.0:
                u = _box_mode_seed(level)
        u, e, history, iters = _descend(level, p, u, max_iter)
        total_iters += iters
        prev_level = level
    fld = ScalarField(grid, u)
    return RayleighEstimate(value=e, field=fld, energy_history=history,
                            n_iterations=total_iters, converged=True)


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------

def normal_derivative(grid: Grid, u: ScalarField, samples) -> np.ndarray:
    """Outward normal derivative of a node field at boundary samples
    (centered-difference gradients, bilinear interpolation)."""
    gx, gy = centered_gradient(grid, u.values)
    if isinstance(samples, geometry.BoundarySamples):
        positions = samples.positions
        normals = samples.normals
    else:
        positions = np.array([s.position for s in samples], dtype=float).reshape(-1, 2)
        normals = np.array([s.normal for s in samples], dtype=float).reshape(-1, 2)
    gxs = _bilinear(grid, gx, positions, strict=True)
    gys = _bilinear(grid, gy, positions, strict=True)
    return gxs * normals[:, 0] + gys * normals[:, 1]


def quadrature_check(grid: Grid, zeta: ScalarField, weight: ScalarField, p) -> tuple[float, float]:
    """(integral of |grad zeta|^p, integral of W |zeta|^p) with the same
    cell-averaged one-sided-difference quadrature the minimizer uses.  The
    Dirichlet ghost zeros extend zeta by zero across the Dirichlet part."""
    p = as_exponent(p).p
    s = gradient_square_average(grid, zeta.values)
    area = grid.cell_area()
    lhs = area * float(np.sum(s ** (0.5 * p)))
    rhs = area * float(np.sum(weight.values * np.abs(zeta.values) ** p))
    return lhs, rhs
