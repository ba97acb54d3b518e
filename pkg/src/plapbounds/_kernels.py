"""Hot numerical kernels with numba acceleration and pure-numpy fallbacks.

Setting the environment variable ``PLAPBOUNDS_NO_NUMBA=1`` (before import)
selects the numpy fallback path; otherwise numba is used when importable.
``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import math
import os

import numpy as np

_TWO_PI = 2.0 * math.pi


def _numba_disabled() -> bool:
    return os.environ.get("PLAPBOUNDS_NO_NUMBA", "").strip() not in ("", "0")


try:
    if _numba_disabled():
        raise ImportError("numba disabled by PLAPBOUNDS_NO_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    njit = None
    NUMBA_ENABLED = False


def backend() -> str:
    """Name of the active kernel backend."""
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# Averaged-distance weight field: uniform angular ray quadrature against the
# polygon, accumulating d^{-p} over directions whose first boundary hit lands
# on a Dirichlet edge.  Open segment semantics: edge parameter s in [0, 1).
# ---------------------------------------------------------------------------

def _ray_weight_loops(px, py, ax, ay, ex, ey, is_dirichlet, p, n_angles):
    n_pts = px.size
    n_edges = ax.size
    out = np.zeros(n_pts)
    wx = np.empty(n_angles)
    wy = np.empty(n_angles)
    for k in range(n_angles):
        th = _TWO_PI * (k + 0.5) / n_angles
        wx[k] = math.cos(th)
        wy[k] = math.sin(th)
    cx = np.empty(n_edges)
    cy = np.empty(n_edges)
    half = np.empty(n_edges)
    for e in range(n_edges):
        cx[e] = ax[e] + 0.5 * ex[e]
        cy[e] = ay[e] + 0.5 * ey[e]
        half[e] = 0.5 * math.sqrt(ex[e] * ex[e] + ey[e] * ey[e])
    for i in range(n_pts):
        acc = 0.0
        for k in range(n_angles):
            w_x = wx[k]
            w_y = wy[k]
            best_t = np.inf
            best_d = False
            for e in range(n_edges):
                # cheap rejection: edge entirely behind the ray origin
                if (cx[e] - px[i]) * w_x + (cy[e] - py[i]) * w_y + half[e] < 0.0:
                    continue
                denom = w_x * ey[e] - w_y * ex[e]
                if denom == 0.0:
                    continue
                rx = ax[e] - px[i]
                ry = ay[e] - py[i]
                t = (rx * ey[e] - ry * ex[e]) / denom
                if t <= 1e-12 or t >= best_t:
                    continue
                s = (rx * w_y - ry * w_x) / denom
                if 0.0 <= s < 1.0:
                    best_t = t
                    best_d = is_dirichlet[e] != 0
            if best_d and best_t < np.inf:
                acc += best_t ** (-p)
        out[i] = acc / n_angles
    return out


def _ray_weight_numpy(px, py, ax, ay, ex, ey, is_dirichlet, p, n_angles):
    n_pts = px.size
    out = np.zeros(n_pts)
    dirichlet = is_dirichlet.astype(bool)
    theta = _TWO_PI * (np.arange(n_angles) + 0.5) / n_angles
    block = max(1, int(2e6) // max(ax.size, 1))
    for k in range(n_angles):
        w_x = math.cos(theta[k])
        w_y = math.sin(theta[k])
        denom = w_x * ey - w_y * ex
        ok_e = denom != 0.0
        for lo in range(0, n_pts, block):
            hi = min(lo + block, n_pts)
            rx = ax[None, :] - px[lo:hi, None]
            ry = ay[None, :] - py[lo:hi, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                t = (rx * ey - ry * ex) / denom
                s = (rx * w_y - ry * w_x) / denom
            valid = ok_e & (t > 1e-12) & (s >= 0.0) & (s < 1.0)
            t = np.where(valid, t, np.inf)
            j = np.argmin(t, axis=1)
            rows = np.arange(hi - lo)
            tmin = t[rows, j]
            hit_d = dirichlet[j] & np.isfinite(tmin)
            contrib = np.zeros(hi - lo)
            contrib[hit_d] = tmin[hit_d] ** (-p)
            out[lo:hi] += contrib
    return out / n_angles


# ---------------------------------------------------------------------------
# Five-point stencil apply and conjugate-gradient solve.  ``nbrs`` holds, per
# node, the four neighbour indices with -1 for a Dirichlet ghost face (value
# 0 outside) and -2 for a Neumann mirror face (coupling dropped, diagonal
# reduced); ``diag`` is the per-node count of non-Neumann faces.
# ---------------------------------------------------------------------------

def _stencil_apply_loops(u, nbrs, diag, inv_h2, out):
    n = u.size
    for i in range(n):
        s = diag[i] * u[i]
        for k in range(4):
            j = nbrs[i, k]
            if j >= 0:
                s -= u[j]
        out[i] = s * inv_h2
    return out


def _stencil_apply_numpy(u, nbrs, diag, inv_h2, out):
    safe = np.maximum(nbrs, 0)
    gathered = u[safe]
    gathered[nbrs < 0] = 0.0
    np.multiply(diag, u, out=out)
    out -= gathered.sum(axis=1)
    out *= inv_h2
    return out


def _cg_solve_loops(nbrs, diag, inv_h2, b, x0, rel_tol, max_iter):
    n = b.size
    x = x0.copy()
    r = np.empty(n)
    q = np.empty(n)
    _stencil_apply_loops(x, nbrs, diag, inv_h2, r)
    for i in range(n):
        r[i] = b[i] - r[i]
    p = r.copy()
    rs = 0.0
    bs = 0.0
    for i in range(n):
        rs += r[i] * r[i]
        bs += b[i] * b[i]
    target2 = rel_tol * rel_tol * bs
    it = 0
    while it < max_iter and rs > target2:
        _stencil_apply_loops(p, nbrs, diag, inv_h2, q)
        pq = 0.0
        for i in range(n):
            pq += p[i] * q[i]
        if pq <= 0.0:
            break
        alpha = rs / pq
        rs_new = 0.0
        for i in range(n):
            x[i] += alpha * p[i]
            r[i] -= alpha * q[i]
            rs_new += r[i] * r[i]
        beta = rs_new / rs
        for i in range(n):
            p[i] = r[i] + beta * p[i]
        rs = rs_new
        it += 1
    return x, it, math.sqrt(rs / bs) if bs > 0.0 else 0.0


def _cg_solve_numpy(nbrs, diag, inv_h2, b, x0, rel_tol, max_iter):
    safe = np.maximum(nbrs, 0)
    mask = nbrs >= 0

    def apply_a(u):
        gathered = u[safe]
        gathered[~mask] = 0.0
        return (diag * u - gathered.sum(axis=1)) * inv_h2

    x = x0.copy()
    r = b - apply_a(x)
    p = r.copy()
    rs = float(r @ r)
    bs = float(b @ b)
    target2 = rel_tol * rel_tol * bs
    it = 0
    while it < max_iter and rs > target2:
        q = apply_a(p)
        pq = float(p @ q)
        if pq <= 0.0:
            break
        alpha = rs / pq
        x += alpha * p
        r -= alpha * q
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
        it += 1
    return x, it, math.sqrt(rs / bs) if bs > 0.0 else 0.0


# ---------------------------------------------------------------------------
# Fixed-step RK4 for the radial first-order system in the flux variables
# (u, v), v = rho^{d-1} * |u'|^{p-2} u'; the inverse map is applied pointwise
# so turning points of u' are crossed smoothly.
# ---------------------------------------------------------------------------

def _shoot_rk4_loops(r0, r1, n_steps, u0, v0, lam, p, d, profile):
    pm1 = p - 1.0
    pinv = 1.0 / pm1  # dual exponent minus one
    h = (r1 - r0) / n_steps
    u = u0
    v = v0
    profile[0] = u
    for i in range(n_steps):
        rho = r0 + i * h
        du1, dv1 = _radial_rhs(rho, u, v, lam, pm1, pinv, d)
        du2, dv2 = _radial_rhs(rho + 0.5 * h, u + 0.5 * h * du1, v + 0.5 * h * dv1, lam, pm1, pinv, d)
        du3, dv3 = _radial_rhs(rho + 0.5 * h, u + 0.5 * h * du2, v + 0.5 * h * dv2, lam, pm1, pinv, d)
        du4, dv4 = _radial_rhs(rho + h, u + h * du3, v + h * dv3, lam, pm1, pinv, d)
        u = u + (h / 6.0) * (du1 + 2.0 * du2 + 2.0 * du3 + du4)
        v = v + (h / 6.0) * (dv1 + 2.0 * dv2 + 2.0 * dv3 + dv4)
        if not (math.isfinite(u) and math.isfinite(v)):
            for j in range(i + 1, n_steps + 1):
                profile[j] = np.nan
            return np.nan, np.nan
        profile[i + 1] = u
    return u, v


def _radial_rhs(rho, u, v, lam, pm1, pinv, d):
    if d == 1:
        rf = 1.0
    else:
        rf = rho ** (d - 1)
    w = v / rf
    if w == 0.0:
        du = 0.0
    else:
        du = math.copysign(abs(w) ** pinv, w)
    if u == 0.0:
        dv = 0.0
    else:
        dv = -lam * rf * math.copysign(abs(u) ** pm1, u)
    return du, dv


# ---------------------------------------------------------------------------
# Minimum over ordered boundary-sample pairs (x, y) of
# ((y - x) . n_y) / |y - x|^power, the eccentricity scan.
# ---------------------------------------------------------------------------

def _pair_ratio_loops(xs, ys, nx, ny, power):
    n = xs.size
    best = np.inf
    bi = -1
    bj = -1
    for j in range(n):
        for i in range(n):
            if i == j:
                continue
            dx = xs[j] - xs[i]
            dy = ys[j] - ys[i]
            r2 = dx * dx + dy * dy
            if r2 <= 0.0:
                continue
            val = (dx * nx[j] + dy * ny[j]) / r2 ** (0.5 * power)
            if val < best:
                best = val
                bi = i
                bj = j
    return best, bi, bj


def _pair_ratio_numpy(xs, ys, nx, ny, power):
    n = xs.size
    best = np.inf
    bi = -1
    bj = -1
    block = max(1, int(4e6) // max(n, 1))
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        dx = xs[None, lo:hi] - xs[:, None]
        dy = ys[None, lo:hi] - ys[:, None]
        r2 = dx * dx + dy * dy
        num = dx * nx[lo:hi] + dy * ny[lo:hi]
        with np.errstate(divide="ignore", invalid="ignore"):
            val = num / r2 ** (0.5 * power)
        val[r2 <= 0.0] = np.inf
        k = int(np.argmin(val))
        i, j = np.unravel_index(k, val.shape)
        if val[i, j] < best:
            best = float(val[i, j])
            bi = int(i)
            bj = int(j + lo)
    return best, bi, bj


if NUMBA_ENABLED:
    _radial_rhs = njit(cache=True, inline="always")(_radial_rhs)
    ray_weight_field = njit(cache=True)(_ray_weight_loops)
    stencil_apply = njit(cache=True)(_stencil_apply_loops)
    _stencil_apply_loops = stencil_apply   # the jitted CG resolves this name
    cg_solve = njit(cache=True)(_cg_solve_loops)
    shoot_rk4 = njit(cache=True)(_shoot_rk4_loops)
    pair_ratio_min = njit(cache=True)(_pair_ratio_loops)
else:
    ray_weight_field = _ray_weight_numpy
    stencil_apply = _stencil_apply_numpy
    cg_solve = _cg_solve_numpy
    shoot_rk4 = _shoot_rk4_loops
    pair_ratio_min = _pair_ratio_numpy
