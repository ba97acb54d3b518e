"""Both kernel backends must agree; the active one is picked at import time
by PLAPBOUNDS_NO_NUMBA (see benchmarks/bench_kernels.py for timings)."""

import math

import numpy as np
import pytest

from plapbounds import _kernels as K


def test_backend_reports():
    assert K.backend() in ("numba", "numpy")


def _square_edges():
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    e = np.roll(verts, -1, axis=0) - verts
    lab = np.array([1, 1, 0, 1], dtype=np.uint8)
    return verts[:, 0].copy(), verts[:, 1].copy(), e[:, 0].copy(), e[:, 1].copy(), lab


def test_ray_weight_backends_agree():
    ax, ay, ex, ey, lab = _square_edges()
    rng = np.random.default_rng(2)
    px = rng.uniform(0.1, 0.9, 40)
    py = rng.uniform(0.1, 0.9, 40)
    ref = K._ray_weight_numpy(px, py, ax, ay, ex, ey, lab, 2.0, 64)
    loops = K._ray_weight_loops(px, py, ax, ay, ex, ey, lab, 2.0, 64)
    active = K.ray_weight_field(px, py, ax, ay, ex, ey, lab, 2.0, 64)
    assert np.allclose(ref, loops, rtol=1e-12, atol=1e-14)
    assert np.allclose(ref, active, rtol=1e-12, atol=1e-14)


def test_stencil_and_cg_backends_agree():
    rng = np.random.default_rng(3)
    n = 12 * 12
    nbrs = np.full((n, 4), -1, dtype=np.int32)
    idx = np.arange(n).reshape(12, 12)
    nbrs[idx[:, 1:].ravel(), 0] = idx[:, :-1].ravel()
    nbrs[idx[:, :-1].ravel(), 1] = idx[:, 1:].ravel()
    nbrs[idx[1:, :].ravel(), 2] = idx[:-1, :].ravel()
    nbrs[idx[:-1, :].ravel(), 3] = idx[1:, :].ravel()
    diag = np.full(n, 4.0)
    u = rng.standard_normal(n)
    out1 = np.empty(n)
    out2 = np.empty(n)
    K._stencil_apply_numpy(u, nbrs, diag, 169.0, out1)
    K.stencil_apply(u, nbrs, diag, 169.0, out2)
    assert np.allclose(out1, out2, rtol=1e-13)

    b = rng.standard_normal(n)
    x0 = np.zeros(n)
    xa, _, ra = K._cg_solve_numpy(nbrs, diag, 169.0, b, x0, 1e-12, 2000)
    xb, _, rb = K.cg_solve(nbrs, diag, 169.0, b, x0, 1e-12, 2000)
    assert ra <= 1e-12 and rb <= 1e-12
    assert np.allclose(xa, xb, rtol=1e-9, atol=1e-12)


def test_shoot_backends_agree():
    prof_a = np.empty(257)
    prof_b = np.empty(257)
    args = (0.5, 1.0, 256, 1.0, 0.0, 10.0, 2.5, 2)
    ua, va = K._shoot_rk4_loops(*args, prof_a)
    ub, vb = K.shoot_rk4(*args, prof_b)
    assert math.isfinite(ua)
    assert (ua, va) == pytest.approx((ub, vb), rel=1e-13)
    assert np.allclose(prof_a, prof_b, rtol=1e-13)


def test_pair_ratio_backends_agree():
    theta = 2 * math.pi * np.arange(64) / 64
    xs, ys = np.cos(theta), np.sin(theta)
    a = K._pair_ratio_numpy(xs, ys, xs, ys, 4.0)
    b = K._pair_ratio_loops(xs, ys, xs, ys, 4.0)
    c = K.pair_ratio_min(xs, ys, xs, ys, 4.0)
    assert a[0] == pytest.approx(b[0], rel=1e-13)
    assert a[0] == pytest.approx(c[0], rel=1e-13)
    assert a[0] == pytest.approx(1.0 / 8, rel=1e-12)
