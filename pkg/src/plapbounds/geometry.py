"""Planar mixed-boundary domains as labeled polylines, and the geometric
queries the eigenvalue bounds rely on: containment, first boundary hit along
a ray, starlikeness, convexity, extents, and the boundary-pair eccentricity.

Conventions: vertices are counterclockwise, edge i joins vertex i to vertex
i+1 (mod n) and carries exactly one label (Dirichlet or Neumann).  Points on
the boundary itself count as outside.  Optional per-vertex unit normals let a
fine polyline stand in for a smooth domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._kernels import pair_ratio_min

BOUNDARY_EPS = 1e-12

DIRICHLET = "D"
NEUMANN = "N"


@dataclass(eq=False)
class Domain:
    """A validated simple closed polyline with labeled edges."""

    vertices: np.ndarray            # (n, 2), counterclockwise
    edge_dirichlet: np.ndarray      # (n,) bool; edge i = vertices[i] -> vertices[i+1]
    normals: np.ndarray | None = None   # (n, 2) per-vertex outward unit normals
    origin_hint: np.ndarray | None = None

    @property
    def n_edges(self) -> int:
        return len(self.vertices)

    @cached_property
    def edge_starts(self) -> np.ndarray:
        return self.vertices

    @cached_property
    def edge_vectors(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        return np.hypot(self.edge_vectors[:, 0], self.edge_vectors[:, 1])

    @cached_property
    def edge_normals(self) -> np.ndarray:
        # outward for a counterclockwise polyline
        ev = self.edge_vectors
        n = np.column_stack([ev[:, 1], -ev[:, 0]])
        return n / self.edge_lengths[:, None]

    @cached_property
    def area(self) -> float:
        return signed_area(self.vertices)

    @cached_property
    def perimeter(self) -> float:
        return float(self.edge_lengths.sum())

    @cached_property
    def dirichlet_length(self) -> float:
        return float(self.edge_lengths[self.edge_dirichlet].sum())

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        v = self.vertices
        return (float(v[:, 0].min()), float(v[:, 1].min()),
                float(v[:, 0].max()), float(v[:, 1].max()))

    @cached_property
    def diameter(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0)

    def edge_labels(self) -> list[str]:
        return [DIRICHLET if d else NEUMANN for d in self.edge_dirichlet]

    def has_neumann(self) -> bool:
        return bool((~self.edge_dirichlet).any())

    def has_dirichlet(self) -> bool:
        return bool(self.edge_dirichlet.any())


@dataclass
class BoundaryPoint:
    """A point on the polyline with its outward normal and edge label."""

    edge_index: int
    parameter: float        # in [0, 1] along the edge
    position: np.ndarray
    normal: np.ndarray
    label: str              # DIRICHLET or NEUMANN


@dataclass
class BoundarySamples:
    """Arrays of boundary sample points (vectorized BoundaryPoint set)."""

    positions: np.ndarray    # (m, 2)
    normals: np.ndarray      # (m, 2)
    edge_index: np.ndarray   # (m,) int
    parameter: np.ndarray    # (m,)
    dirichlet: np.ndarray    # (m,) bool

    def __len__(self) -> int:
        return len(self.positions)


@dataclass
class StarlikeReport:
    holds: bool
    witness: np.ndarray | None   # a failing ray direction, if any
    n_rays: int
    max_crossings: int


def signed_area(vertices: np.ndarray) -> float:
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _parse_labels(labels) -> np.ndarray:
    out = np.empty(len(labels), dtype=bool)
    for i, lab in enumerate(labels):
        if isinstance(lab, str):
            s = lab.strip().upper()
            if s in ("D", "DIRICHLET"):
                out[i] = True
            elif s in ("N", "NEUMANN"):
                out[i] = False
            else:
                raise ValueError(f"edge label {lab!r} is neither Dirichlet nor Neumann")
        else:
            out[i] = bool(lab)
    return out


def _check_simple(vertices: np.ndarray) -> None:
    n = len(vertices)
    a = vertices
    b = np.roll(vertices, -1, axis=0)
    e = b - a
    scale = max(np.abs(vertices).max(), 1.0)

    def cross2(u, v):
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

    # d1[i,j] = cross(e_j, a_i - a_j) etc.; edges i and j cross properly iff
    # the endpoints of each straddle the other's line
    d1 = cross2(e[None, :, :], a[:, None, :] - a[None, :, :])
    d2 = cross2(e[None, :, :], b[:, None, :] - a[None, :, :])
    proper = (d1 * d2 < 0.0) & (d1.T * d2.T < 0.0)
    idx = np.arange(n)
    sep = np.abs(idx[:, None] - idx[None, :])
    adjacent = (sep <= 1) | (sep == n - 1)
    bad = proper & ~adjacent
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(f"polyline is self-intersecting (edges {i} and {j} cross)")
    # improper contact: a vertex lying on a non-incident edge
    tol = 1e-12 * scale
    for i in range(n):
        d = _segment_distance(vertices, a[i], b[i])
        d[i] = np.inf
        d[(i + 1) % n] = np.inf
        if np.any(d <= tol):
            j = int(np.argmin(d))
            raise ValueError(f"polyline is degenerate: vertex {j} touches edge {i}")


def _segment_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    e = b - a
    ee = float(e @ e)
    if ee == 0.0:
        return np.hypot(points[:, 0] - a[0], points[:, 1] - a[1])
    t = np.clip(((points - a) @ e) / ee, 0.0, 1.0)
    foot = a + t[:, None] * e
    return np.hypot(points[:, 0] - foot[:, 0], points[:, 1] - foot[:, 1])


def validate_domain(vertices, labels, normals=None, origin=None) -> Domain:
    """Validate raw input and return an immutable counterclockwise Domain.

    Clockwise input is reoriented; self-intersecting or zero-area polylines,
    label-count mismatches, and non-unit normals are rejected.
    """
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2:
        raise ValueError("vertices must be an (n, 2) array")
    n = len(v)
    if n < 3:
        raise ValueError("a domain needs at least 3 vertices")
    lab = _parse_labels(labels)
    if len(lab) != n:
        raise ValueError(f"expected {n} edge labels, got {len(lab)}")

    lens = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
    scale = max(np.abs(v).max(), 1.0)
    if np.any(lens <= 1e-14 * scale):
        raise ValueError("degenerate zero-length edge")

    nrm = None
    if normals is not None:
        nrm = np.asarray(normals, dtype=float)
        if nrm.shape != (n, 2):
            raise ValueError("normals must be one unit vector per vertex")
        mags = np.hypot(nrm[:, 0], nrm[:, 1])
        if np.any(np.abs(mags - 1.0) > 1e-12):
            raise ValueError("normals must be unit length to within 1e-12")

    area = signed_area(v)
    if area < 0.0:
        v = v[::-1].copy()
        lab = lab[(n - 2 - np.arange(n)) % n]
        if nrm is not None:
            nrm = nrm[::-1].copy()

    _check_simple(v)
    if abs(area) <= 1e-12 * scale * scale:
        raise ValueError("polyline encloses zero area")

    org = None if origin is None else np.asarray(origin, dtype=float).reshape(2)
    for arr in (v, lab, nrm):
        if arr is not None:
            arr.setflags(write=False)
    return Domain(vertices=v, edge_dirichlet=lab, normals=nrm, origin_hint=org)


# ---------------------------------------------------------------------------
# Containment
# ---------------------------------------------------------------------------

def points_inside(domain: Domain, points: np.ndarray) -> np.ndarray:
    """Strict interior test for many points (boundary counts as outside)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    v = domain.vertices
    x0, y0 = v[-1]
    for x1, y1 in v:
        cond = (y0 > y) != (y1 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        inside ^= cond & (x < xi)
        x0, y0 = x1, y1
    near = boundary_distance(domain, pts) <= BOUNDARY_EPS
    return inside & ~near


def boundary_distance(domain: Domain, points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    best = np.full(len(pts), np.inf)
    a = domain.vertices
    b = np.roll(a, -1, axis=0)
    for i in range(domain.n_edges):
        np.minimum(best, _segment_distance(pts, a[i], b[i]), out=best)
    return best


def contains(domain: Domain, point) -> bool:
    """True iff the point is strictly inside (within 1e-12 of the boundary
    counts as outside)."""
    return bool(points_inside(domain, np.asarray(point, dtype=float).reshape(1, 2))[0])


# ---------------------------------------------------------------------------
# Rays
# ---------------------------------------------------------------------------

def _normal_at(domain: Domain, edge: int, s: float) -> np.ndarray:
    if domain.normals is not None:
        n0 = domain.normals[edge]
        n1 = domain.normals[(edge + 1) % domain.n_edges]
        n = (1.0 - s) * n0 + s * n1
        mag = math.hypot(n[0], n[1])
        if mag > 0.0:
            return n / mag
    return domain.edge_normals[edge]


def _ray_all_hits(domain: Domain, point: np.ndarray, direction: np.ndarray):
    a = domain.vertices
    e = domain.edge_vectors
    denom = direction[0] * e[:, 1] - direction[1] * e[:, 0]
    r = a - point
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (r[:, 0] * e[:, 1] - r[:, 1] * e[:, 0]) / denom
        s = (r[:, 0] * direction[1] - r[:, 1] * direction[0]) / denom
    valid = (denom != 0.0) & (t > 1e-12) & (s >= 0.0) & (s < 1.0)
    return t, s, valid


def first_hit(domain: Domain, point, direction):
    """First boundary crossing of the ray from an interior point.

    Returns (distance, BoundaryPoint) or None on numerical failure.  Rays
    grazing a vertex are retried from a laterally nudged origin so that
    measure-zero coincidences cannot abort quadrature.
    """
    p0 = np.asarray(point, dtype=float).reshape(2)
    w = np.asarray(direction, dtype=float).reshape(2)
    w = w / math.hypot(w[0], w[1])
    perp = np.array([-w[1], w[0]])
    delta = 1e-9 * max(domain.diameter, 1.0)
    vertex_eps = 1e-9
    for attempt, shift in enumerate((0.0, delta, -delta, 2 * delta)):
        p = p0 + shift * perp
        t, s, valid = _ray_all_hits(domain, p, w)
        if not valid.any():
            continue
        tv = np.where(valid, t, np.inf)
        k = int(np.argmin(tv))
        sk = float(s[k])
        if attempt < 3 and (sk < vertex_eps or sk > 1.0 - vertex_eps):
            continue  # grazing a vertex: retry perturbed
        pos = domain.vertices[k] + sk * domain.edge_vectors[k]
        dist = float(math.hypot(pos[0] - p0[0], pos[1] - p0[1]))
        label = DIRICHLET if domain.edge_dirichlet[k] else NEUMANN
        return dist, BoundaryPoint(edge_index=k, parameter=sk, position=pos,
                                   normal=_normal_at(domain, k, sk), label=label)
    return None


def is_starlike_from_origin(domain: Domain, which: str = "neumann",
                            n_rays: int = 4096) -> StarlikeReport:
    """Sampled starlikeness of a boundary part with respect to origin_hint.

    Casts n_rays directions from the origin and counts crossings with the
    selected part; the part is starlike (as sampled) iff no ray crosses it
    more than once.
    """
    if domain.origin_hint is None:
        raise ValueError("domain has no origin_hint")
    origin = domain.origin_hint
    if which == "neumann":
        sel = ~domain.edge_dirichlet
    elif which in ("all", "boundary"):
        sel = np.ones(domain.n_edges, dtype=bool)
    else:
        raise ValueError(f"unknown boundary part {which!r}")
    theta = 2.0 * math.pi * (np.arange(n_rays) + 0.5) / n_rays
    wx = np.cos(theta)
    wy = np.sin(theta)
    counts = np.zeros(n_rays, dtype=np.int64)
    a = domain.vertices[sel]
    e = domain.edge_vectors[sel]
    rx = a[:, 0] - origin[0]
    ry = a[:, 1] - origin[1]
    for i in range(len(a)):
        denom = wx * e[i, 1] - wy * e[i, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (rx[i] * e[i, 1] - ry[i] * e[i, 0]) / denom
            s = (rx[i] * wy - ry[i] * wx) / denom
        counts += ((denom != 0.0) & (t > 1e-12) & (s >= 0.0) & (s < 1.0)).astype(np.int64)
    worst = int(counts.max()) if n_rays else 0
    if worst <= 1:
        return StarlikeReport(holds=True, witness=None, n_rays=n_rays, max_crossings=worst)
    k = int(np.argmax(counts))
    return StarlikeReport(holds=False, witness=np.array([wx[k], wy[k]]),
                          n_rays=n_rays, max_crossings=worst)


# ---------------------------------------------------------------------------
# Shape predicates and scalars
# ---------------------------------------------------------------------------

def is_convex(domain: Domain) -> bool:
    """Counterclockwise convexity: every consecutive edge turn is >= -1e-12."""
    e = domain.edge_vectors
    e_next = np.roll(e, -1, axis=0)
    cross = e[:, 0] * e_next[:, 1] - e[:, 1] * e_next[:, 0]
    return bool(np.all(cross >= -1e-12))


def sample_boundary(domain: Domain, n: int, which: str = "all") -> BoundarySamples:
    """Sample boundary points by arclength (at least one per selected edge)."""
    if which == "all":
        sel = np.ones(domain.n_edges, dtype=bool)
    elif which == "neumann":
        sel = ~domain.edge_dirichlet
    elif which == "dirichlet":
        sel = domain.edge_dirichlet
    else:
        raise ValueError(f"unknown boundary part {which!r}")
    edges = np.flatnonzero(sel)
    if len(edges) == 0:
        empty2 = np.empty((0, 2))
        empty1 = np.empty(0)
        return BoundarySamples(empty2, empty2.copy(), np.empty(0, dtype=int),
                               empty1, np.empty(0, dtype=bool))
    lens = domain.edge_lengths[edges]
    total = lens.sum()
    counts = np.maximum(1, np.rint(n * lens / total).astype(int))
    pos, nor, eidx, par = [], [], [], []
    for e, c in zip(edges, counts):
        s = (np.arange(c) + 0.5) / c
        pts = domain.vertices[e] + s[:, None] * domain.edge_vectors[e]
        pos.append(pts)
        if domain.normals is not None:
            n0 = domain.normals[e]
            n1 = domain.normals[(e + 1) % domain.n_edges]
            raw = (1.0 - s)[:, None] * n0 + s[:, None] * n1
            mags = np.hypot(raw[:, 0], raw[:, 1])[:, None]
            nor.append(np.where(mags > 0, raw / mags, domain.edge_normals[e]))
        else:
            nor.append(np.tile(domain.edge_normals[e], (c, 1)))
        eidx.append(np.full(c, e, dtype=int))
        par.append(s)
    eidx = np.concatenate(eidx)
    return BoundarySamples(positions=np.concatenate(pos),
                           normals=np.concatenate(nor),
                           edge_index=eidx,
                           parameter=np.concatenate(par),
                           dirichlet=domain.edge_dirichlet[eidx])


def _eccentricity_scan(domain: Domain, p: float, d: int, n_boundary_samples: int):
    if not is_convex(domain):
        raise ValueError("eccentricity is defined for convex domains only")
    if domain.normals is not None:
        # vertex positions carry the exact analytic normals; sampling there
        # avoids the spurious negative chords interpolated normals create
        # for nearly collinear same-edge pairs
        stride = max(1, domain.n_edges // max(n_boundary_samples, 1))
        xs = domain.vertices[::stride]
        ns = domain.normals[::stride]
    else:
        samples = sample_boundary(domain, n_boundary_samples, "all")
        xs = samples.positions
        ns = samples.normals
    raw, i, j = pair_ratio_min(np.ascontiguousarray(xs[:, 0]), np.ascontiguousarray(xs[:, 1]),
                               np.ascontiguousarray(ns[:, 0]), np.ascontiguousarray(ns[:, 1]),
                               float(p + d))
    witness = xs[j] if j >= 0 else None
    return float(raw), witness


def eccentricity(domain: Domain, p: float, d: int = 2,
                 n_boundary_samples: int = 2048) -> float:
    """Minimum of ((y-x).n_y)/|y-x|^(p+d) over sampled boundary pairs,
    clamped below at zero (convexity makes the true numerator nonnegative)."""
    raw, _ = _eccentricity_scan(domain, p, d, n_boundary_samples)
    return raw if raw > 0.0 else 0.0


def directional_extent(domain: Domain, direction) -> float:
    """Width of the domain's projection onto a unit direction."""
    u = np.asarray(direction, dtype=float).reshape(2)
    u = u / math.hypot(u[0], u[1])
    proj = domain.vertices @ u
    return float(proj.max() - proj.min())


def radial_extent(domain: Domain) -> tuple[float, float]:
    """(r_min, r_max) of |x - origin_hint| over the closed region."""
    if domain.origin_hint is None:
        raise ValueError("domain has no origin_hint")
    o = domain.origin_hint
    r_max = float(np.hypot(*(domain.vertices - o).T).max())
    if contains(domain, o):
        return 0.0, r_max
    r_min = float(boundary_distance(domain, o.reshape(1, 2))[0])
    return r_min, r_max
