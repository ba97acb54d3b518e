"""Lower bounds for the fundamental p-Laplacian eigenvalue on mixed
Dirichlet/Neumann planar domains.

Every bound returns a BoundCertificate recording the computed value, the
hypothesis checks performed (sampled evidence, not proof), the parameter
values used, and where the infimum was attained.  The common engine is the
divergence-field inequality

    lambda_1 >= inf over the domain of ( div Q - (p-1) |Q|^{p'} )

for any vector field Q with nu . Q <= 0 on the Neumann boundary part; the
named bounds instantiate Q geometrically (radial fields, slab profiles, a
comparison function) or avoid Q altogether (averaged-distance Hardy weight,
annulus comparison, convexity/eccentricity, restricted monotonicity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.spatial import cKDTree

from . import geometry, oracle
from ._kernels import ray_weight_field
from .geometry import Domain
from .one_dim import (Arrangement, Exponent, RadialEigenProblem, RadialEigenResult,
                      as_exponent, mixed_interval_eigenvalue, radial_eigenvalue)
from .oracle import Grid, ScalarField


def unit_sphere_measure(d: int) -> float:
    """Surface measure of the unit sphere in R^d (2*pi for d = 2)."""
    return 2.0 * math.pi ** (0.5 * d) / math.gamma(0.5 * d)


def hardy_constant(p: float) -> float:
    """The constant p^{-p} (p-1)^{p-2} in the averaged-distance bound."""
    return p ** (-p) * (p - 1.0) ** (p - 2.0)


# ---------------------------------------------------------------------------
# Vector field specifications
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class RadialOutward:
    """Q(x) = c x / |x|^p, pointing away from the origin (use for p < d)."""

    coefficient: float


@dataclass(eq=False)
class RadialInward:
    """Q(x) = -c x / |x|^p, pointing toward the origin (use for p > d)."""

    coefficient: float


@dataclass(eq=False)
class DirectionalProfileField:
    """Q(x) = q(x . u) u for a unit direction u and scalar profile q.

    The profile must be vectorized (accept numpy arrays); its derivative is
    taken by centered differences with step ``fd_step``.
    """

    direction: np.ndarray
    profile: Callable[[np.ndarray], np.ndarray]
    fd_step: float | None = None


@dataclass(eq=False)
class ComparisonField:
    """Q = -|grad(phi)|^{p-2} grad(phi) / phi^{p-1} for a positive
    comparison function sampled on a grid."""

    phi: ScalarField


@dataclass(eq=False)
class SampledVectorField:
    """A vector field sampled at the inside nodes of a grid."""

    grid: Grid
    qx: np.ndarray
    qy: np.ndarray


VectorFieldSpec = Union[RadialOutward, RadialInward, DirectionalProfileField,
                        ComparisonField, SampledVectorField]


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass
class HypothesisCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AdmissibilityReport:
    max_boundary_violation: float
    n_samples: int
    hypotheses: list[HypothesisCheck] = dataclass_field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(h.passed for h in self.hypotheses)

    def first_failure(self) -> HypothesisCheck | None:
        for h in self.hypotheses:
            if not h.passed:
                return h
        return None


@dataclass
class BoundCertificate:
    """One computed lower bound with its evidence trail."""

    method: str
    value: float | None                      # None when a hypothesis failed
    parameters: dict[str, float]
    admissibility: AdmissibilityReport
    infimum_witness: tuple[float, float] | None = None
    notes: tuple[str, ...] = ()

    @property
    def applicable(self) -> bool:
        return self.value is not None


def _certificate(method, hypotheses, violation, n_samples, value=None,
                 parameters=None, witness=None, notes=()):
    report = AdmissibilityReport(max_boundary_violation=violation,
                                 n_samples=n_samples, hypotheses=list(hypotheses))
    if not report.all_passed:
        value = None
    w = None if witness is None else (float(witness[0]), float(witness[1]))
    return BoundCertificate(method=method, value=value, parameters=dict(parameters or {}),
                            admissibility=report, infimum_witness=w, notes=tuple(notes))


# ---------------------------------------------------------------------------
# Field evaluation
# ---------------------------------------------------------------------------

def _radial_q_div(points: np.ndarray, c: float, sign: float, p: float, d: int):
    r2 = np.einsum("ij,ij->i", points, points)
    r = np.sqrt(r2)
    if np.any(r < 1e-9):
        raise ValueError("radial field evaluated within 1e-9 of the origin")
    scale = sign * c / r ** p
    q = points * scale[:, None]
    div = sign * c * (d - p) / r ** p
    return q[:, 0], q[:, 1], div


def _directional_arrays(spec: DirectionalProfileField, points: np.ndarray, extent_hint: float):
    u = np.asarray(spec.direction, dtype=float).reshape(2)
    u = u / math.hypot(u[0], u[1])
    s = points @ u
    q = np.asarray(spec.profile(s), dtype=float)
    delta = spec.fd_step if spec.fd_step is not None else 1e-6 * max(1.0, extent_hint)
    dq = (np.asarray(spec.profile(s + delta), dtype=float)
          - np.asarray(spec.profile(s - delta), dtype=float)) / (2.0 * delta)
    return u, s, q, q[:, None] * u[None, :], dq


def _comparison_arrays(spec: ComparisonField, p: float):
    grid = spec.phi.grid
    phi = spec.phi.values
    if np.any(phi <= 0.0):
        raise ValueError("comparison function must be positive at all inside nodes")
    gx, gy = oracle.centered_gradient(grid, phi)
    mag = np.hypot(gx, gy)
    fac = np.zeros_like(mag)
    nz = mag > 0.0
    fac[nz] = mag[nz] ** (p - 2.0)
    denom = phi ** (p - 1.0)
    qx = -fac * gx / denom
    qy = -fac * gy / denom
    return qx, qy


def _field_on_grid(spec: VectorFieldSpec, grid: Grid, p: float, d: int):
    """(qx, qy, div) at the inside nodes; div is NaN where its centered
    stencil leaves the inside set."""
    pts = grid.xy
    if isinstance(spec, RadialOutward):
        return _radial_q_div(pts, spec.coefficient, +1.0, p, d)
    if isinstance(spec, RadialInward):
        return _radial_q_div(pts, spec.coefficient, -1.0, p, d)
    if isinstance(spec, DirectionalProfileField):
        u = np.asarray(spec.direction, dtype=float).reshape(2)
        extent = geometry.directional_extent(grid.domain, u)
        _, _, q, qvec, dq = _directional_arrays(spec, pts, extent)
        return qvec[:, 0], qvec[:, 1], dq
    if isinstance(spec, ComparisonField):
        if spec.phi.grid is not grid:
            raise ValueError("comparison function lives on a different grid")
        qx, qy = _comparison_arrays(spec, p)
        return qx, qy, oracle.centered_divergence(grid, qx, qy)
    if isinstance(spec, SampledVectorField):
        if spec.grid is not grid:
            raise ValueError("sampled field lives on a different grid")
        qx = np.asarray(spec.qx, dtype=float)
        qy = np.asarray(spec.qy, dtype=float)
        return qx, qy, oracle.centered_divergence(grid, qx, qy)
    raise TypeError(f"unknown vector field spec {type(spec).__name__}")


def _interp_valid(grid: Grid, values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Bilinear interpolation ignoring NaN corners (weights renormalized)."""
    pts = np.atleast_2d(points)
    fx = (pts[:, 0] - grid.x0) / grid.h
    fy = (pts[:, 1] - grid.y0) / grid.h
    i0 = np.clip(np.floor(fx).astype(int), 0, grid.nx - 2)
    j0 = np.clip(np.floor(fy).astype(int), 0, grid.ny - 2)
    tx = np.clip(fx - i0, 0.0, 1.0)
    ty = np.clip(fy - j0, 0.0, 1.0)
    acc = np.zeros(len(pts))
    wsum = np.zeros(len(pts))
    for di, dj, w in ((0, 0, (1 - tx) * (1 - ty)), (1, 0, tx * (1 - ty)),
                      (0, 1, (1 - tx) * ty), (1, 1, tx * ty)):
        idx = grid.index[j0 + dj, i0 + di]
        ok = (idx >= 0)
        vals = values[np.maximum(idx, 0)]
        ok &= np.isfinite(vals)
        acc += np.where(ok, w * vals, 0.0)
        wsum += np.where(ok, w, 0.0)
    out = np.full(len(pts), np.nan)
    good = wsum > 1e-12
    out[good] = acc[good] / wsum[good]
    return out


def field_eval(spec: VectorFieldSpec, x, p, d: int = 2):
    """Evaluate (Q(x), div Q(x)) for a field specification at one point.

    Radial and directional fields are evaluated analytically (profile
    derivative by centered differences); grid-sampled fields by bilinear
    interpolation of node values.
    """
    p = as_exponent(p).p
    pt = np.asarray(x, dtype=float).reshape(1, 2)
    if isinstance(spec, (RadialOutward, RadialInward)):
        sign = 1.0 if isinstance(spec, RadialOutward) else -1.0
        qx, qy, div = _radial_q_div(pt, spec.coefficient, sign, p, d)
        return np.array([qx[0], qy[0]]), float(div[0])
    if isinstance(spec, DirectionalProfileField):
        _, _, _, qvec, dq = _directional_arrays(spec, pt, 1.0)
        return qvec[0], float(dq[0])
    grid = spec.phi.grid if isinstance(spec, ComparisonField) else spec.grid
    qx, qy, div = _field_on_grid(spec, grid, p, d)
    q = np.array([_interp_valid(grid, qx, pt)[0], _interp_valid(grid, qy, pt)[0]])
    return q, float(_interp_valid(grid, div, pt)[0])


def _field_at_samples(spec, samples: geometry.BoundarySamples,
                      p: float, d: int):
    """Q at boundary sample positions: analytic where possible, nearest
    inside node for grid-sampled fields."""
    pts = samples.positions
    if len(pts) == 0:
        return np.zeros((0, 2))
    if isinstance(spec, (RadialOutward, RadialInward)):
        sign = 1.0 if isinstance(spec, RadialOutward) else -1.0
        qx, qy, _ = _radial_q_div(pts, spec.coefficient, sign, p, d)
        return np.column_stack([qx, qy])
    if isinstance(spec, DirectionalProfileField):
        _, _, _, qvec, _ = _directional_arrays(spec, pts, 1.0)
        return qvec
    grid = spec.phi.grid if isinstance(spec, ComparisonField) else spec.grid
    qx, qy, _ = _field_on_grid(spec, grid, p, d)
    tree = cKDTree(grid.xy)
    _, nearest = tree.query(pts)
    return np.column_stack([qx[nearest], qy[nearest]])


def _admissibility_check(domain: Domain, q_at_samples: np.ndarray,
                         samples: geometry.BoundarySamples, tol: float):
    """nu . Q <= tol * field_scale on the sampled Neumann part."""
    if len(samples) == 0:
        check = HypothesisCheck("neumann-admissibility", True,
                                "no Neumann boundary part: vacuous")
        return check, 0.0, None
    nu_q = np.einsum("ij,ij->i", samples.normals, q_at_samples)
    scale = float(np.hypot(q_at_samples[:, 0], q_at_samples[:, 1]).max())
    violation = float(nu_q.max())
    k = int(np.argmax(nu_q))
    passed = violation <= tol * scale
    detail = (f"max nu.Q = {violation:.3e} over {len(samples)} samples "
              f"(field scale {scale:.3e})")
    return (HypothesisCheck("neumann-admissibility", passed, detail),
            violation, samples.positions[k])


def _infimum_over_interior(grid: Grid, w: np.ndarray):
    mask = grid.interior_mask & np.isfinite(w)
    if not mask.any():
        raise ValueError("no interior nodes with a defined field value")
    vals = w[mask]
    pts = grid.xy[mask]
    k = int(np.argmin(vals))
    return float(vals[k]), pts[k]


# ---------------------------------------------------------------------------
# Divergence-field bounds
# ---------------------------------------------------------------------------

def boggio_bound(domain: Domain, p, spec: VectorFieldSpec, grid: Grid,
                 n_boundary_samples: int = 2048, tol: float = 1e-9) -> BoundCertificate:
    """Divergence-field lower bound: inf over interior nodes of
    div Q - (p-1)|Q|^{p'}, admissible when nu . Q <= 0 on the Neumann part.

    A negative raw infimum is clamped to 0 in the headline value (a vacuous
    certificate, still sound); the raw infimum is kept in the parameters.
    """
    p = as_exponent(p)
    samples = geometry.sample_boundary(domain, n_boundary_samples, "neumann")
    q_b = _field_at_samples(spec, samples, p.p, 2)
    check, violation, worst = _admissibility_check(domain, q_b, samples, tol)
    params = {}
    if worst is not None:
        params["worst_violation_x"] = float(worst[0])
        params["worst_violation_y"] = float(worst[1])
    if not check.passed:
        return _certificate("Boggio", [check], violation, len(samples), parameters=params)
    qx, qy, div = _field_on_grid(spec, grid, p.p, 2)
    w = div - (p.p - 1.0) * (qx * qx + qy * qy) ** (0.5 * p.dual)
    raw, witness = _infimum_over_interior(grid, w)
    params["raw_infimum"] = raw
    return _certificate("Boggio", [check], violation, len(samples),
                        value=(raw if raw > 0.0 else 0.0), parameters=params, witness=witness)


def directional_boggio_bound(domain: Domain, p, direction, profile, grid: Grid,
                             n_boundary_samples: int = 2048, tol: float = 1e-9,
                             fd_step: float | None = None) -> BoundCertificate:
    """One-dimensional divergence bound: inf of q'(x.u) - (p-1) q(x.u)^{p'}.

    The exponent is applied to q literally (not |q|), so profiles that go
    negative anywhere on the domain make the certificate inapplicable.
    """
    p = as_exponent(p)
    u = np.asarray(direction, dtype=float).reshape(2)
    u = u / math.hypot(u[0], u[1])
    extent = geometry.directional_extent(domain, u)
    spec = DirectionalProfileField(direction=u, profile=profile,
                                   fd_step=fd_step if fd_step is not None
                                   else 1e-6 * max(1.0, extent))
    pts = grid.xy
    _, _, q, _, dq = _directional_arrays(spec, pts, extent)
    q_min = float(q.min())
    q_scale = max(float(np.abs(q).max()), 1e-300)
    positive = HypothesisCheck(
        "profile-nonnegative", q_min >= -tol * q_scale,
        f"min q over nodes = {q_min:.3e}; q^(p') is evaluated literally")

    samples = geometry.sample_boundary(domain, n_boundary_samples, "neumann")
    q_b = _field_at_samples(spec, samples, p.p, 2)
    adm, violation, worst = _admissibility_check(domain, q_b, samples, tol)
    params = {"extent": extent}
    if worst is not None:
        params["worst_violation_x"] = float(worst[0])
        params["worst_violation_y"] = float(worst[1])
    checks = [positive, adm]
    if not (positive.passed and adm.passed):
        return _certificate("Boggio", checks, violation, len(samples), parameters=params)
    w = dq - (p.p - 1.0) * q ** p.dual
    w_masked = np.where(grid.interior_mask, w, np.nan)
    raw, witness = _infimum_over_interior(grid, w_masked)
    params["raw_infimum"] = raw
    return _certificate("Boggio", checks, violation, len(samples),
                        value=(raw if raw > 0.0 else 0.0), parameters=params, witness=witness)


def optimize_scale(domain: Domain, p, spec: VectorFieldSpec, grid: Grid,
                   n_boundary_samples: int = 2048, tol: float = 1e-9) -> BoundCertificate:
    """Best multiple of a field: maximize over t > 0 the infimum of
    t div Q - (p-1) t^{p'} |Q|^{p'}.

    The objective is concave in t (an infimum of concave functions), so an
    expanding bracket plus golden-section search is exact to tolerance; the
    result can never fall below the unscaled certificate.
    """
    p = as_exponent(p)
    samples = geometry.sample_boundary(domain, n_boundary_samples, "neumann")
    q_b = _field_at_samples(spec, samples, p.p, 2)
    check, violation, worst = _admissibility_check(domain, q_b, samples, tol)
    params = {}
    if worst is not None:
        params["worst_violation_x"] = float(worst[0])
        params["worst_violation_y"] = float(worst[1])
    if not check.passed:
        return _certificate("Boggio", [check], violation, len(samples), parameters=params)

    qx, qy, div = _field_on_grid(spec, grid, p.p, 2)
    mask = grid.interior_mask & np.isfinite(div)
    if not mask.any():
        raise ValueError("no interior nodes with a defined field value")
    dvals = div[mask]
    mvals = (qx[mask] ** 2 + qy[mask] ** 2) ** (0.5 * p.dual)
    pts = grid.xy[mask]
    pm1 = p.p - 1.0
    pd = p.dual

    def g(t: float) -> float:
        return float(np.min(t * dvals - pm1 * t ** pd * mvals))

    t_hi = 1.0
    for _ in range(60):
        if g(2.0 * t_hi) <= g(t_hi):
            break
        t_hi *= 2.0
    t_lo = 1.0
    for _ in range(60):
        if g(0.5 * t_lo) <= g(t_lo):
            break
        t_lo *= 0.5
    a, b = 0.25 * t_lo, 4.0 * t_hi
    phi_ratio = 0.5 * (math.sqrt(5.0) - 1.0)
    c = b - phi_ratio * (b - a)
    d_pt = a + phi_ratio * (b - a)
    gc, gd = g(c), g(d_pt)
    for _ in range(120):
        if b - a <= 1e-12 * b:
            break
        if gc >= gd:
            b, d_pt, gd = d_pt, c, gc
            c = b - phi_ratio * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d_pt, gd
            d_pt = a + phi_ratio * (b - a)
            gd = g(d_pt)
    t_star = 0.5 * (a + b)
    g_star = g(t_star)
    g_one = g(1.0)
    if g_one > g_star:
        t_star, g_star = 1.0, g_one
    obj = t_star * dvals - pm1 * t_star ** pd * mvals
    k = int(np.argmin(obj))
    params.update({"t_star": t_star, "raw_infimum": g_star,
                   "value_at_t1": max(g_one, 0.0)})
    return _certificate("Boggio", [check], violation, len(samples),
                        value=(g_star if g_star > 0.0 else 0.0), parameters=params, witness=pts[k])


# ---------------------------------------------------------------------------
# Averaged-distance (Hardy) bounds
# ---------------------------------------------------------------------------

def _domain_edge_arrays(domain: Domain):
    v = domain.vertices
    e = domain.edge_vectors
    return (np.ascontiguousarray(v[:, 0]), np.ascontiguousarray(v[:, 1]),
            np.ascontiguousarray(e[:, 0]), np.ascontiguousarray(e[:, 1]),
            np.ascontiguousarray(domain.edge_dirichlet.astype(np.uint8)))


def hardy_weight(domain: Domain, x, p, n_angles: int = 720) -> float:
    """Angular average of d^{-p} over directions whose first boundary hit is
    Dirichlet: the weight 1/m(x)^p of the averaged distance m.  Zero when
    the Dirichlet sector of x is empty."""
    if n_angles < 8:
        raise ValueError("need at least 8 angular samples")
    pt = np.asarray(x, dtype=float).reshape(2)
    if not geometry.contains(domain, pt):
        raise ValueError("weight is defined for strictly interior points")
    p = as_exponent(p).p
    ax, ay, ex, ey, lab = _domain_edge_arrays(domain)
    w = ray_weight_field(np.array([pt[0]]), np.array([pt[1]]),
                         ax, ay, ex, ey, lab, p, n_angles)
    return float(w[0])


def hardy_weight_field(domain: Domain, grid: Grid, p, n_angles: int = 720) -> np.ndarray:
    """The averaged-distance weight at every full-stencil interior node."""
    p = as_exponent(p).p
    pts = grid.xy[grid.interior_mask]
    ax, ay, ex, ey, lab = _domain_edge_arrays(domain)
    return ray_weight_field(np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]),
                            ax, ay, ex, ey, lab, p, n_angles)


def hardy_bound(domain: Domain, p, grid: Grid, n_angles: int = 720,
                _weights: np.ndarray | None = None) -> BoundCertificate:
    """Averaged-distance lower bound p^{-p}(p-1)^{p-2} inf 1/m(x)^p.

    Holds for any regular domain; there is no boundary hypothesis.
    """
    p = as_exponent(p)
    weights = hardy_weight_field(domain, grid, p, n_angles) if _weights is None else _weights
    pts = grid.xy[grid.interior_mask]
    k = int(np.argmin(weights))
    c = hardy_constant(p.p)
    value = c * float(weights[k])
    params = {"constant": c, "weight_infimum": float(weights[k]),
              "n_angles": float(n_angles)}
    return _certificate("Hardy", [], 0.0, 0, value=value, parameters=params,
                        witness=pts[k])


def _radial_hypotheses(domain: Domain, p: Exponent, d: int, spec,
                       n_boundary_samples: int, tol: float):
    checks = []
    violation = 0.0
    n_samples = 0
    worst = None
    checks.append(HypothesisCheck("exponent-differs-from-dimension",
                                  abs(p.p - d) > 1e-12,
                                  "p = d has no radial weight: use the annulus bound"
                                  if abs(p.p - d) <= 1e-12 else ""))
    has_origin = domain.origin_hint is not None
    checks.append(HypothesisCheck("origin-present", has_origin))
    if has_origin:
        dist = float(geometry.boundary_distance(domain, domain.origin_hint.reshape(1, 2))[0])
        outside = (not geometry.contains(domain, domain.origin_hint)) and dist > 1e-12
        checks.append(HypothesisCheck("origin-outside", outside,
                                      f"origin-to-boundary distance {dist:.3e}"))
        if outside and domain.has_neumann():
            star = geometry.is_starlike_from_origin(domain, "neumann", 4096)
            detail = f"sampled with {star.n_rays} rays; max crossings {star.max_crossings}"
            checks.append(HypothesisCheck("neumann-starlike", star.holds, detail))
        elif outside:
            checks.append(HypothesisCheck("neumann-starlike", True,
                                          "no Neumann part: vacuous"))
    if all(c.passed for c in checks) and spec is not None:
        samples = geometry.sample_boundary(domain, n_boundary_samples, "neumann")
        q_b = _field_at_samples(spec, samples, p.p, d)
        adm, violation, worst = _admissibility_check(domain, q_b, samples, tol)
        checks.append(adm)
        n_samples = len(samples)
    return checks, violation, n_samples, worst


def _make_radial_spec(p: Exponent, d: int):
    c = (abs(d - p.p) / p.p) ** (p.p - 1.0)
    return (RadialOutward(c) if p.p < d else RadialInward(c)), c


def radial_hardy_bound(domain: Domain, p, d: int, grid: Grid,
                       n_boundary_samples: int = 2048,
                       tol: float = 1e-9) -> BoundCertificate:
    """Radial-weight lower bound (|d-p|/p)^p / sup_{x in domain} |x|^p.

    Needs the origin outside the domain, a starlike Neumann part, and the
    sign condition nu . Q <= 0 on the Neumann samples, which operationalizes
    on which side of the Neumann part the origin must lie (facing the origin
    for p < d, facing away for p > d).
    """
    p = as_exponent(p)
    if abs(p.p - d) > 1e-12:
        spec, c = _make_radial_spec(p, d)
    else:
        spec, c = None, 0.0
    checks, violation, n_samples, worst = _radial_hypotheses(
        domain, p, d, spec, n_boundary_samples, tol)
    params = {}
    if worst is not None:
        params["worst_violation_x"] = float(worst[0])
        params["worst_violation_y"] = float(worst[1])
    notes = ("headline value is the infimum over the closed domain of the "
             "pointwise radial weight, i.e. uses sup |x| over the domain",)
    if not all(ck.passed for ck in checks):
        return _certificate("RadialHardy", checks, violation, n_samples,
                            parameters=params, notes=notes)
    r_min, r_max = geometry.radial_extent(domain)
    value = (abs(d - p.p) / p.p) ** p.p / r_max ** p.p
    rel = domain.vertices - domain.origin_hint
    witness = domain.vertices[int(np.argmax(np.hypot(rel[:, 0], rel[:, 1])))]
    params.update({"coefficient": c, "r_min": r_min, "r_max": r_max})
    r_nodes = np.hypot(*(grid.xy[grid.interior_mask] - domain.origin_hint).T)
    params["node_weight_infimum"] = float(
        ((abs(d - p.p) / p.p) ** p.p / r_nodes ** p.p).min())
    return _certificate("RadialHardy", checks, violation, n_samples, value=value,
                        parameters=params, witness=witness, notes=notes)


def mixed_bound(domain: Domain, p, d: int, grid: Grid, n_angles: int = 720,
                gamma_steps: int = 65, n_boundary_samples: int = 2048,
                tol: float = 1e-9, _weights: np.ndarray | None = None) -> BoundCertificate:
    """Interpolated radial/averaged-distance bound: the best convex mix
    max over gamma of inf over the domain of
    gamma * radial_weight + (1 - gamma) * hardy_weight.

    Concave in gamma, so a gamma grid plus golden-section refinement around
    the best point is exact to refinement tolerance.  The endpoints gamma = 0
    and gamma = 1 reproduce the component bounds exactly.
    """
    p = as_exponent(p)
    if abs(p.p - d) > 1e-12:
        spec, c = _make_radial_spec(p, d)
    else:
        spec, c = None, 0.0
    checks, violation, n_samples, worst = _radial_hypotheses(
        domain, p, d, spec, n_boundary_samples, tol)
    params = {}
    if worst is not None:
        params["worst_violation_x"] = float(worst[0])
        params["worst_violation_y"] = float(worst[1])
    if not all(ck.passed for ck in checks):
        return _certificate("Mixed", checks, violation, n_samples, parameters=params)

    weights = hardy_weight_field(domain, grid, p, n_angles) if _weights is None else _weights
    pts = grid.xy[grid.interior_mask]
    origin = domain.origin_hint
    r_nodes = np.hypot(pts[:, 0] - origin[0], pts[:, 1] - origin[1])
    const = (abs(d - p.p) / p.p) ** p.p
    r_min, r_max = geometry.radial_extent(domain)

    # augment the node set with the geometric worst radial point so the
    # gamma = 1 endpoint matches the radial bound exactly; its (unknown,
    # arbitrarily large) hardy weight is +inf, which never binds for gamma < 1
    radial_vals = np.append(const / r_nodes ** p.p, const / r_max ** p.p)
    hardy_vals = np.append(hardy_constant(p.p) * weights, np.inf)
    rel = domain.vertices - origin
    far_vertex = domain.vertices[int(np.argmax(np.hypot(rel[:, 0], rel[:, 1])))]
    aug_pts = np.vstack([pts, far_vertex])

    def objective(gamma: float) -> float:
        if gamma >= 1.0:
            return float(radial_vals.min())
        return float(np.min(gamma * radial_vals + (1.0 - gamma) * hardy_vals))

    gammas = np.linspace(0.0, 1.0, gamma_steps)
    vals = np.array([objective(g) for g in gammas])
    params["value_gamma0"] = objective(0.0)   # reproduces the Hardy bound
    params["value_gamma1"] = objective(1.0)   # reproduces the radial bound
    k = int(np.argmax(vals))
    a = gammas[max(k - 1, 0)]
    b = gammas[min(k + 1, gamma_steps - 1)]
    phi_ratio = 0.5 * (math.sqrt(5.0) - 1.0)
    c_pt = b - phi_ratio * (b - a)
    d_pt = a + phi_ratio * (b - a)
    fc, fd = objective(c_pt), objective(d_pt)
    for _ in range(80):
        if b - a <= 1e-14:
            break
        if fc >= fd:
            b, d_pt, fd = d_pt, c_pt, fc
            c_pt = b - phi_ratio * (b - a)
            fc = objective(c_pt)
        else:
            a, c_pt, fc = c_pt, d_pt, fd
            d_pt = a + phi_ratio * (b - a)
            fd = objective(d_pt)
    g_star = 0.5 * (a + b)
    candidates = [(float(vals[k]), float(gammas[k])), (objective(g_star), g_star)]
    value, gamma_star = max(candidates)
    if gamma_star >= 1.0:
        mix = radial_vals
    else:
        mix = gamma_star * radial_vals + (1.0 - gamma_star) * hardy_vals
    j = int(np.argmin(mix))
    params.update({"gamma_star": gamma_star, "coefficient": c,
                   "r_max": r_max, "gamma_steps": float(gamma_steps)})
    return _certificate("Mixed", checks, violation, n_samples, value=(value if value > 0.0 else 0.0),
                        parameters=params, witness=aug_pts[j])


# ---------------------------------------------------------------------------
# Slab, annulus, convexity, monotonicity
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _interval_eigenvalue_cached(p: float, mesh_size: int) -> float:
    return mixed_interval_eigenvalue(Exponent(p), tol=1e-10, mesh_size=mesh_size)


def box_bound(domain: Domain, p, direction, grid: Grid | None = None,
              n_boundary_samples: int = 2048, tol: float = 1e-9,
              mesh_size: int = 4096) -> BoundCertificate:
    """Slab bound mu_p / L^p along a coordinate axis direction.

    Hypotheses: nu . direction <= 0 on the Neumann samples and the Neumann
    part is a graph over the orthogonal axis (each parallel line meets it at
    most once, line-sampled).  L is the domain's extent along the direction.
    """
    p = as_exponent(p)
    u = np.asarray(direction, dtype=float).reshape(2)
    u = u / math.hypot(u[0], u[1])
    if min(abs(u[0]), abs(u[1])) > 1e-12:
        raise ValueError("box direction must be a coordinate axis vector")

    samples = geometry.sample_boundary(domain, n_boundary_samples, "neumann")
    checks = []
    violation = 0.0
    if len(samples):
        nu_u = samples.normals @ u
        violation = float(nu_u.max())
        k = int(np.argmax(nu_u))
        checks.append(HypothesisCheck(
            "neumann-sign", violation <= tol,
            f"max nu.direction = {violation:.3e} at ({samples.positions[k][0]:.4g}, "
            f"{samples.positions[k][1]:.4g})"))
        checks.append(_graph_check(domain, u))
    else:
        checks.append(HypothesisCheck("neumann-sign", True, "no Neumann part: vacuous"))
    L = geometry.directional_extent(domain, u)
    mu = _interval_eigenvalue_cached(p.p, mesh_size)
    params = {"extent": L, "interval_eigenvalue": mu,
              "direction_x": float(u[0]), "direction_y": float(u[1])}
    if not all(c.passed for c in checks):
        return _certificate("Box", checks, violation, len(samples), parameters=params)
    return _certificate("Box", checks, violation, len(samples),
                        value=mu / L ** p.p, parameters=params)


def _graph_check(domain: Domain, u: np.ndarray, n_lines: int = 512) -> HypothesisCheck:
    orth = np.array([-u[1], u[0]])
    proj = domain.vertices @ orth
    lo, hi = float(proj.min()), float(proj.max())
    span = hi - lo
    offsets = lo + span * (np.arange(n_lines) + 0.5) / n_lines
    center = domain.vertices.mean(axis=0)
    reach = 2.0 * domain.diameter
    sel = ~domain.edge_dirichlet
    a = domain.vertices[sel]
    e = domain.edge_vectors[sel]
    worst = 0
    for off in offsets:
        origin = center + (off - center @ orth) * orth - reach * u
        rx = a[:, 0] - origin[0]
        ry = a[:, 1] - origin[1]
        denom = u[0] * e[:, 1] - u[1] * e[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (rx * e[:, 1] - ry * e[:, 0]) / denom
            s = (rx * u[1] - ry * u[0]) / denom
        crossings = int(np.sum((denom != 0.0) & (t > 1e-12) & (s >= 0.0) & (s < 1.0)))
        worst = max(worst, crossings)
        if worst > 1:
            break
    return HypothesisCheck("neumann-graph", worst <= 1,
                           f"max crossings per sampled line: {worst}")


def annulus_bound(domain: Domain, p, d: int = 2, tol: float = 1e-9,
                  mesh_size: int = 4096,
                  n_boundary_samples: int = 2048) -> BoundCertificate:
    """Comparison with the concentric annulus hull (r_min, r_max).

    The Neumann-inner arrangement applies when the Neumann part sits at
    smaller radii than the domain bulk, the Dirichlet-inner arrangement in
    the opposite case; the side is decided by comparing the mean radius of
    the Neumann samples with the mean radius of interior grid nodes, and a
    near-tie is reported as ambiguous.  Pure-Dirichlet domains fall back to
    the all-Dirichlet annulus by inclusion.
    """
    p = as_exponent(p)
    checks, violation, n_samples, _ = _radial_hypotheses(
        domain, p, d, None, n_boundary_samples, tol)
    checks = [c for c in checks if c.name != "exponent-differs-from-dimension"]
    params = {}
    notes = ()
    arrangement = None
    if all(c.passed for c in checks):
        r_min, r_max = geometry.radial_extent(domain)
        params.update({"r_min": r_min, "r_max": r_max})
        if not domain.has_neumann():
            arrangement = Arrangement.DIRICHLET_BOTH
            notes = ("pure Dirichlet boundary: compared with the all-Dirichlet annulus",)
            checks.append(HypothesisCheck("case-decided", True, "pure Dirichlet"))
        else:
            origin = domain.origin_hint
            samples = geometry.sample_boundary(domain, n_boundary_samples, "neumann")
            mean_n = float(np.hypot(*(samples.positions - origin).T).mean())
            grid_case = _case_grid(domain)
            mean_int = float(np.hypot(*(grid_case.xy - origin).T).mean())
            margin = 0.05 * (r_max - r_min)
            params.update({"mean_neumann_radius": mean_n,
                           "mean_interior_radius": mean_int})
            if abs(mean_n - mean_int) <= margin:
                checks.append(HypothesisCheck(
                    "case-decided", False,
                    f"Neumann samples straddle the domain radially "
                    f"(mean radii {mean_n:.4g} vs {mean_int:.4g})"))
            else:
                arrangement = (Arrangement.NEUMANN_INNER if mean_n < mean_int
                               else Arrangement.DIRICHLET_INNER)
                checks.append(HypothesisCheck(
                    "case-decided", True,
                    f"Neumann part radially {'inside' if mean_n < mean_int else 'outside'} "
                    f"the domain bulk"))
    if not all(c.passed for c in checks):
        return _certificate("Annulus", checks, violation, n_samples, parameters=params)
    problem = RadialEigenProblem(r_min, r_max, p, d, arrangement)
    result = radial_eigenvalue(problem, tol=tol, mesh_size=mesh_size)
    params["neumann_inner"] = 1.0 if arrangement is Arrangement.NEUMANN_INNER else 0.0
    params["shooting_residual"] = result.shooting_residual
    return _certificate("Annulus", checks, violation, n_samples,
                        value=result.eigenvalue, parameters=params, notes=notes)


def _case_grid(domain: Domain) -> Grid:
    last_err = None
    for frac in (32, 16, 12, 10):
        try:
            return oracle.build_grid(domain, domain.diameter / frac)
        except Exception as err:  # noqa: BLE001 - retry coarser
            last_err = err
    raise last_err


def convex_bound(domain: Domain, p, d: int = 2, grid: Grid | None = None,
                 n_angles: int = 720,
                 n_boundary_samples: int = 2048) -> BoundCertificate:
    """Eccentricity bound for strictly convex domains:
    p^{-p}(p-1)^{p-2} * eccentricity * |Dirichlet part| / omega_d.

    Polygons with plain edge normals honestly report eccentricity 0 (pairs
    on a common edge annihilate the numerator); nontrivial values need
    vertex-decorated analytic normals.
    """
    p = as_exponent(p)
    convex = HypothesisCheck("convex", geometry.is_convex(domain))
    if not convex.passed:
        return _certificate("Convex", [convex], 0.0, 0)
    raw, witness = geometry._eccentricity_scan(domain, p.p, d, n_boundary_samples)
    eps = raw if raw > 0.0 else 0.0
    length_d = domain.dirichlet_length
    c = hardy_constant(p.p)
    value = c * eps * length_d / unit_sphere_measure(d)
    params = {"eccentricity": eps, "raw_pair_minimum": raw,
              "dirichlet_length": length_d, "constant": c}
    return _certificate("Convex", [convex], 0.0, n_boundary_samples, value=value,
                        parameters=params, witness=witness)


def monotonicity_bound(inner: Domain, outer: Domain, p, h: float = 1.0 / 128,
                       tol_gradient: float | None = None,
                       n_boundary_samples: int = 512,
                       outer_solution: tuple[Grid, oracle.LaplaceEigenResult] | None = None
                       ) -> BoundCertificate:
    """Restricted monotonicity: lambda_1(inner) >= lambda_1(outer) whenever
    the outer fundamental eigenfunction has nonnegative outward normal
    derivative along the inner domain's Neumann part.

    Linear case only (p = 2): the hypothesis needs the gradient of the outer
    eigenfunction, which only the linear solver provides reliably.
    """
    p = as_exponent(p)
    if p.p != 2.0:
        raise ValueError("restricted monotonicity is implemented for p = 2 only")
    _require_contained(inner, outer)
    if outer_solution is None:
        grid_out = oracle.build_grid(outer, h)
        res = oracle.laplace_eigen_p2(grid_out)
    else:
        grid_out, res = outer_solution
    tol_g = 5.0 * grid_out.h if tol_gradient is None else tol_gradient

    samples = geometry.sample_boundary(inner, n_boundary_samples, "neumann")
    params = {"outer_lambda": res.value, "gradient_tolerance": tol_g}
    if len(samples) == 0:
        checks = [HypothesisCheck("normal-derivative-nonnegative", True,
                                  "no Neumann part: classical inclusion")]
        return _certificate("Monotonicity", checks, 0.0, 0, value=res.value,
                            parameters=params)
    nd = oracle.normal_derivative(grid_out, res.field, samples)
    k = int(np.argmin(nd))
    min_nd = float(nd[k])
    params["min_normal_derivative"] = min_nd
    passed = min_nd >= -tol_g
    checks = [HypothesisCheck(
        "normal-derivative-nonnegative", passed,
        f"min nu.grad(u1) = {min_nd:.4e} at ({samples.positions[k][0]:.4g}, "
        f"{samples.positions[k][1]:.4g}); tolerance {tol_g:.2e}")]
    value = res.value if passed else None
    return _certificate("Monotonicity", checks, max(-min_nd, 0.0), len(samples),
                        value=value, parameters=params,
                        witness=samples.positions[k] if not passed else None)


def _require_contained(inner: Domain, outer: Domain) -> None:
    tol = 1e-9 * max(outer.diameter, 1.0)
    b = geometry.sample_boundary(inner, 512, "all").positions
    pts = [b]
    try:
        coarse = oracle.build_grid(inner, inner.diameter / 16)
        pts.append(coarse.xy)
    except Exception:  # noqa: BLE001 - containment check only
        pass
    for arr in pts:
        ok = geometry.points_inside(outer, arr) | (geometry.boundary_distance(outer, arr) <= tol)
        if not ok.all():
            bad = arr[~ok][0]
            raise ValueError(f"inner domain is not contained in outer domain "
                             f"(point ({bad[0]:.6g}, {bad[1]:.6g}) escapes)")


# ---------------------------------------------------------------------------
# Comparison profile helper and the bound sweep
# ---------------------------------------------------------------------------

def interval_comparison_profile(result: RadialEigenResult, s_min: float, s_max: float,
                                neumann_at: str = "min") -> Callable[[np.ndarray], np.ndarray]:
    """Turn a mixed-end interval eigenfunction into the slab profile
    q = -phi_p(Phi') / Phi^{p-1} on [s_min, s_max], oriented so the Neumann
    end (q = 0) sits at the requested side.  Cubic-spline smoothness is
    enough for the centered-difference divergence the directional bound
    takes."""
    if neumann_at not in ("min", "max"):
        raise ValueError("neumann_at must be 'min' or 'max'")
    prob = result.problem
    p = prob.p.p
    base = np.linspace(prob.r_inner, prob.r_outer, result.mesh_size + 1)
    span = s_max - s_min
    scale = (prob.r_outer - prob.r_inner) / span
    spline = CubicSpline(base, result.profile)

    def q(s):
        s = np.asarray(s, dtype=float)
        if neumann_at == "max":
            # Dirichlet end of the interval problem is at r_inner
            ref = prob.r_inner + (s - s_min) * scale
        else:
            ref = prob.r_inner + (s_max - s) * scale
        ref = np.clip(ref, prob.r_inner, prob.r_outer)
        val = np.maximum(spline(ref), 1e-300)
        der = spline(ref, 1) * scale * (1.0 if neumann_at == "max" else -1.0)
        return -np.sign(der) * np.abs(der) ** (p - 1.0) / val ** (p - 1.0)

    return q


_AXES = (np.array([1.0, 0.0]), np.array([-1.0, 0.0]),
         np.array([0.0, 1.0]), np.array([0.0, -1.0]))


def best_bound(domain: Domain, p, d: int = 2, grid_h: float = 1.0 / 128,
               n_angles: int = 720, n_boundary_samples: int = 2048,
               tol: float = 1e-9, gamma_steps: int = 65,
               mesh_size: int = 4096) -> list[BoundCertificate]:
    """Run every bound the configuration allows and sort the certificates,
    applicable ones first by decreasing value.  Inapplicable bounds are kept
    with their failed hypotheses; nothing is silently dropped."""
    p = as_exponent(p)
    grid = oracle.build_grid(domain, grid_h)
    certs: list[BoundCertificate] = []

    if d == 2:
        weights = hardy_weight_field(domain, grid, p, n_angles)
        certs.append(hardy_bound(domain, p, grid, n_angles, _weights=weights))
        certs.append(radial_hardy_bound(domain, p, d, grid, n_boundary_samples, tol))
        certs.append(mixed_bound(domain, p, d, grid, n_angles, gamma_steps,
                                 n_boundary_samples, tol, _weights=weights))
    else:
        planar = HypothesisCheck("planar-weight", False,
                                 "the angular distance weight is built for d = 2")
        certs.append(_certificate("Hardy", [planar], 0.0, 0))
        certs.append(radial_hardy_bound(domain, p, d, grid, n_boundary_samples, tol))
        certs.append(_certificate("Mixed", [planar], 0.0, 0))
    for axis in _AXES:
        certs.append(box_bound(domain, p, axis, grid, n_boundary_samples, tol,
                               mesh_size=mesh_size))
    certs.append(annulus_bound(domain, p, d, tol, mesh_size, n_boundary_samples))
    certs.append(convex_bound(domain, p, d, grid, n_angles, n_boundary_samples))

    comparison_ok = p.p == 2.0 and d == 2 and grid.has_dirichlet_face()
    if comparison_ok:
        eig = oracle.laplace_eigen_p2(grid)
        comparison_ok = eig.warning is None and float(eig.field.values.min()) > 0.0
    if comparison_ok:
        spec = ComparisonField(eig.field)
        cert = optimize_scale(domain, p, spec, grid, n_boundary_samples, tol)
        cert.parameters["oracle_lambda"] = eig.value
        certs.append(cert)
    else:
        detail = ("a positive comparison function is only available from the "
                  "linear (p = 2) eigensolver on a Dirichlet-anchored grid")
        certs.append(_certificate(
            "Boggio",
            [HypothesisCheck("comparison-function-available", False, detail)],
            0.0, 0))

    certs.sort(key=lambda c: (-1.0, -c.value) if c.applicable else (1.0, 0.0))
    return certs
