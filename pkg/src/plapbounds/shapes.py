"""Polygon factories for the standard test and example domains."""

from __future__ import annotations

import math

import numpy as np

from .geometry import DIRICHLET, NEUMANN, Domain, validate_domain


def square(side: float = 1.0, labels=None, origin=None) -> Domain:
    v = np.array([[0.0, 0.0], [side, 0.0], [side, side], [0.0, side]])
    return validate_domain(v, labels or [DIRICHLET] * 4, origin=origin)


def square_neumann_west(side: float = 1.0) -> Domain:
    # edges: south, east, north, west
    return square(side, labels=[DIRICHLET, DIRICHLET, DIRICHLET, NEUMANN])


def rectangle(width: float, height: float, labels=None, origin=None) -> Domain:
    v = np.array([[0.0, 0.0], [width, 0.0], [width, height], [0.0, height]])
    return validate_domain(v, labels or [DIRICHLET] * 4, origin=origin)


def regular_polygon_disk(n: int = 256, radius: float = 1.0, center=(0.0, 0.0),
                         analytic_normals: bool = True, labels=None,
                         origin=None) -> Domain:
    """Inscribed regular n-gon; with analytic normals it stands in for the
    disk of the given radius."""
    theta = 2.0 * math.pi * np.arange(n) / n
    c = np.asarray(center, dtype=float)
    v = c + radius * np.column_stack([np.cos(theta), np.sin(theta)])
    normals = np.column_stack([np.cos(theta), np.sin(theta)]) if analytic_normals else None
    return validate_domain(v, labels or [DIRICHLET] * n, normals=normals, origin=origin)


def disk_half_neumann(n: int = 256, radius: float = 1.0) -> Domain:
    """Disk polygon, Dirichlet on the eastern half circle, Neumann on the
    western half (split by edge-midpoint angle)."""
    theta_mid = 2.0 * math.pi * (np.arange(n) + 0.5) / n
    labels = [DIRICHLET if math.cos(t) >= 0.0 else NEUMANN for t in theta_mid]
    return regular_polygon_disk(n, radius, labels=labels)


def quarter_annulus(r_inner: float = 1.0, r_outer: float = 2.0, n_arc: int = 64,
                    neumann_side: str = "inner") -> Domain:
    """First-quadrant annulus sector; the chosen arc is Neumann, the other
    arc and the two radial edges are Dirichlet.  Origin hint at the center."""
    if neumann_side not in ("inner", "outer"):
        raise ValueError("neumann_side must be 'inner' or 'outer'")
    t_out = np.linspace(0.0, 0.5 * math.pi, n_arc + 1)
    outer = r_outer * np.column_stack([np.cos(t_out), np.sin(t_out)])
    t_in = np.linspace(0.5 * math.pi, 0.0, n_arc + 1)
    inner = r_inner * np.column_stack([np.cos(t_in), np.sin(t_in)])
    v = np.vstack([outer, inner])
    labels = []
    labels += [NEUMANN if neumann_side == "outer" else DIRICHLET] * n_arc  # outer arc
    labels += [DIRICHLET]                                                  # radial at x = 0
    labels += [NEUMANN if neumann_side == "inner" else DIRICHLET] * n_arc  # inner arc
    labels += [DIRICHLET]                                                  # radial at y = 0
    return validate_domain(v, labels, origin=(0.0, 0.0))


def annulus_keyhole(r_inner: float = 0.5, r_outer: float = 1.0,
                    n_outer: int = 128, n_inner: int = 96,
                    slit_half_angle: float = 0.02) -> Domain:
    """Annulus with a thin radial slit: outer circle Dirichlet, inner circle
    and slit sides Neumann.

    The slit sides are radial, so the radial fundamental mode of the true
    annulus satisfies the Neumann condition on them exactly and the slit
    domain shares the annulus eigenvalue; this makes the annulus comparison
    testable on a simple polyline.
    """
    a0 = slit_half_angle
    a1 = 2.0 * math.pi - slit_half_angle
    t_out = np.linspace(a0, a1, n_outer + 1)
    outer = r_outer * np.column_stack([np.cos(t_out), np.sin(t_out)])
    t_in = np.linspace(a1, a0, n_inner + 1)
    inner = r_inner * np.column_stack([np.cos(t_in), np.sin(t_in)])
    v = np.vstack([outer, inner])
    labels = [DIRICHLET] * n_outer          # outer arc
    labels += [NEUMANN]                     # slit side (outer end -> inner)
    labels += [NEUMANN] * n_inner           # inner arc
    labels += [NEUMANN]                     # slit side (inner -> outer start)
    return validate_domain(v, labels, origin=(0.0, 0.0))


def lshape(labels=None) -> Domain:
    """Unit square minus its upper-right quarter (reentrant corner)."""
    v = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 0.5], [0.5, 0.5],
                  [0.5, 1.0], [0.0, 1.0]])
    return validate_domain(v, labels or [DIRICHLET] * 6)


def scaled(domain: Domain, s: float) -> Domain:
    """Dilation about the origin by a factor s (labels and normals kept)."""
    origin = None if domain.origin_hint is None else domain.origin_hint * s
    return validate_domain(domain.vertices * s, domain.edge_labels(),
                           normals=domain.normals, origin=origin)
