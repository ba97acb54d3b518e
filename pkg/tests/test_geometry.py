import math

import numpy as np
import pytest

import plapbounds as pb
from plapbounds import geometry, shapes
from plapbounds.geometry import DIRICHLET, NEUMANN


SQ = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]


def test_validate_square():
    dom = pb.validate_domain(SQ, ["D"] * 4)
    assert dom.area == pytest.approx(1.0)
    assert dom.edge_labels() == ["D", "D", "D", "D"]


def test_validate_reorients_clockwise():
    cw = SQ[::-1]
    dom = pb.validate_domain(cw, ["D", "N", "D", "D"])
    assert dom.area > 0
    assert np.array_equal(dom.vertices, np.asarray(SQ, float))  # = cw reversed
    # a round trip through validation preserves geometry
    again = pb.validate_domain(dom.vertices, dom.edge_labels())
    assert np.array_equal(again.vertices, dom.vertices)


def test_validate_relabels_consistently_on_reversal():
    # mark the edge x=0 Neumann, feed clockwise, and find it again by midpoint
    cw = [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]
    labels = ["N", "D", "D", "D"]  # first CW edge runs along x=0
    dom = pb.validate_domain(cw, labels)
    mids = dom.vertices + 0.5 * dom.edge_vectors
    west = np.isclose(mids[:, 0], 0.0)
    assert not dom.edge_dirichlet[west].any()
    assert dom.edge_dirichlet[~west].all()


def test_validate_rejects_bowtie():
    with pytest.raises(ValueError, match="self-intersect"):
        pb.validate_domain([[0, 0], [1, 1], [1, 0], [0, 1]], ["D"] * 4)


def test_validate_rejects_bad_input():
    with pytest.raises(ValueError):
        pb.validate_domain([[0, 0], [1, 0]], ["D", "D"])
    with pytest.raises(ValueError):
        pb.validate_domain(SQ, ["D"] * 3)
    with pytest.raises(ValueError):
        pb.validate_domain(SQ, ["D", "D", "D", "X"])
    with pytest.raises(ValueError):  # collinear: degenerate contact or zero area
        pb.validate_domain([[0, 0], [1, 0], [2, 0]], ["D"] * 3)
    with pytest.raises(ValueError, match="unit length"):
        pb.validate_domain(SQ, ["D"] * 4, normals=[[1, 0], [0, 1], [1, 1], [0, 1]])


def test_validate_idempotent():
    dom = pb.validate_domain(SQ, ["D", "N", "D", "D"])
    dom2 = pb.validate_domain(dom.vertices, dom.edge_labels(), origin=dom.origin_hint)
    assert np.array_equal(dom.vertices, dom2.vertices)
    assert np.array_equal(dom.edge_dirichlet, dom2.edge_dirichlet)


def test_contains():
    dom = pb.validate_domain(SQ, ["D"] * 4)
    assert pb.contains(dom, (0.5, 0.5))
    assert not pb.contains(dom, (1.5, 0.5))
    assert not pb.contains(dom, (1.0, 0.5))  # boundary counts as outside
    assert not pb.contains(dom, (0.5, 1.0 - 1e-13))


def test_first_hit_axis():
    dom = pb.validate_domain(SQ, ["D"] * 4)
    dist, bp = pb.first_hit(dom, (0.5, 0.5), (1.0, 0.0))
    assert dist == pytest.approx(0.5, abs=1e-12)
    assert bp.label == DIRICHLET
    assert np.allclose(bp.position, [1.0, 0.5])
    assert np.allclose(bp.normal, [1.0, 0.0])


def test_first_hit_corner_graze():
    dom = pb.validate_domain(SQ, ["D"] * 4)
    dist, bp = pb.first_hit(dom, (0.5, 0.5), (1.0, 1.0))
    assert dist == pytest.approx(math.sqrt(2) / 2, abs=1e-7)
    assert np.allclose(bp.position, [1.0, 1.0], atol=1e-6)


def _brute_force_first_hit(dom, point, direction, n_sub=400):
    """Independent oracle: densely subdivide each edge and intersect the ray
    with every sub-segment by solving the 2x2 linear system."""
    point = np.asarray(point, float)
    w = np.asarray(direction, float)
    w = w / np.hypot(*w)
    best = np.inf
    for a, e in zip(dom.vertices, dom.edge_vectors):
        for k in range(n_sub):
            s0, s1 = k / n_sub, (k + 1) / n_sub
            a0 = a + s0 * e
            seg = (s1 - s0) * e
            mat = np.array([[w[0], -seg[0]], [w[1], -seg[1]]])
            if abs(np.linalg.det(mat)) < 1e-14:
                continue
            t, s = np.linalg.solve(mat, a0 - point)
            if t > 1e-9 and -1e-12 <= s <= 1 + 1e-12:
                best = min(best, t)
    return best


def test_first_hit_lshape_reentrant():
    # the line keeps crossing the boundary after the notch; the first
    # crossing (on the notch floor, next to the reentrant corner) must win
    dom = shapes.lshape()
    point = (0.75, 0.25)
    direction = np.array([-0.15, 0.25])
    direction = direction / np.hypot(*direction)
    dist, bp = pb.first_hit(dom, point, direction)
    expected = _brute_force_first_hit(dom, point, direction)
    assert dist == pytest.approx(expected, abs=1e-7)
    assert dist == pytest.approx(np.hypot(0.15, 0.25), abs=1e-9)


def test_first_hit_convex_random():
    rng = np.random.default_rng(7)
    theta = np.sort(rng.uniform(0, 2 * math.pi, 9))
    radii = rng.uniform(0.5, 1.0, 9)
    verts = np.column_stack([radii * np.cos(theta), radii * np.sin(theta)])
    dom = pb.validate_domain(verts, ["D"] * 9)
    for _ in range(50):
        pt = rng.uniform(-0.2, 0.2, 2)
        if not pb.contains(dom, pt):
            continue
        ang = rng.uniform(0, 2 * math.pi)
        w = np.array([math.cos(ang), math.sin(ang)])
        hit = pb.first_hit(dom, pt, w)
        assert hit is not None
        dist, bp = hit
        assert dist > 0
        assert geometry.boundary_distance(dom, bp.position.reshape(1, 2))[0] <= 1e-9 * dom.diameter
        mid = pt + 0.5 * dist * w
        assert pb.contains(dom, mid)


def test_starlike_annulus_sector():
    dom = shapes.quarter_annulus(1.0, 2.0, 48, "inner")
    rep = pb.is_starlike_from_origin(dom, "neumann", 2048)
    assert rep.holds and rep.witness is None


def test_starlike_square_neumann_edge():
    dom = pb.validate_domain(SQ, ["N", "D", "D", "D"], origin=(0.5, -2.0))
    rep = pb.is_starlike_from_origin(dom, "neumann", 2048)
    assert rep.holds


def _crossing_count(vertices, mask, origin, w):
    a = vertices[mask]
    e = (np.roll(vertices, -1, axis=0) - vertices)[mask]
    count = 0
    for ai, ei in zip(a, e):
        denom = w[0] * ei[1] - w[1] * ei[0]
        if denom == 0:
            continue
        r = ai - origin
        t = (r[0] * ei[1] - r[1] * ei[0]) / denom
        s = (r[0] * w[1] - r[1] * w[0]) / denom
        if t > 1e-12 and 0 <= s < 1:
            count += 1
    return count


def test_starlike_zigzag_fails_with_witness():
    # the Neumann path backtracks in angle as seen from the origin, so rays
    # in the folded range cross it three times
    verts = [[1.0, 1.0], [1.0, 2.0], [0.3, 1.5], [0.55, 1.95], [0.0, 2.0],
             [-1.0, 2.0], [-1.0, 1.0]]
    labels = [DIRICHLET, NEUMANN, NEUMANN, NEUMANN, DIRICHLET, DIRICHLET,
              DIRICHLET]
    dom = pb.validate_domain(verts, labels, origin=(0.0, 0.0))
    rep = pb.is_starlike_from_origin(dom, "neumann", 4096)
    assert not rep.holds
    assert rep.witness is not None
    n = _crossing_count(dom.vertices, ~dom.edge_dirichlet, np.zeros(2), rep.witness)
    assert n >= 2


def test_is_convex():
    assert pb.is_convex(pb.validate_domain(SQ, ["D"] * 4))
    assert not pb.is_convex(shapes.lshape())
    assert pb.is_convex(shapes.regular_polygon_disk(64))


def test_eccentricity_disk():
    disk = shapes.regular_polygon_disk(256)
    # chord property of the circle: (y-x).n_y = |y-x|^2/2, minimized on the
    # diameter, giving 1/(2*2^2) = 1/8
    assert pb.eccentricity(disk, 2.0, 2, 256) == pytest.approx(1.0 / 8, abs=1e-9)


def test_eccentricity_disk_radius_scaling():
    # chord computation on the radius-r circle: (y-x).n_y = |y-x|^2/(2r),
    # minimized on the diameter: 1/(8 r^3); matches the s^(1-p-d) dilation law
    for r in (0.5, 2.0):
        disk = shapes.regular_polygon_disk(256, radius=r)
        assert pb.eccentricity(disk, 2.0, 2, 256) == pytest.approx(1.0 / (8 * r ** 3), rel=1e-9)


def test_eccentricity_rigid_motion_invariance():
    rng = np.random.default_rng(3)
    disk = shapes.regular_polygon_disk(128)
    base = pb.eccentricity(disk, 2.5, 2, 128)
    ang = rng.uniform(0, 2 * math.pi)
    rot = np.array([[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]])
    shift = rng.uniform(-3, 3, 2)
    moved = pb.validate_domain(disk.vertices @ rot.T + shift, disk.edge_labels(),
                               normals=disk.normals @ rot.T)
    assert pb.eccentricity(moved, 2.5, 2, 128) == pytest.approx(base, rel=1e-10)


def test_eccentricity_polygon_edge_normals_zero():
    assert pb.eccentricity(pb.validate_domain(SQ, ["D"] * 4), 2.0, 2, 64) == 0.0
    assert pb.eccentricity(shapes.regular_polygon_disk(64, analytic_normals=False),
                           3.0, 2, 128) == 0.0


def test_eccentricity_rejects_nonconvex():
    with pytest.raises(ValueError, match="convex"):
        pb.eccentricity(shapes.lshape(), 2.0, 2, 64)


def test_directional_extent():
    dom = pb.validate_domain(SQ, ["D"] * 4)
    assert pb.directional_extent(dom, (1, 0)) == pytest.approx(1.0)
    assert pb.directional_extent(dom, (1, 1)) == pytest.approx(math.sqrt(2))
    rect = shapes.rectangle(2.0, 1.0)
    assert pb.directional_extent(rect, (1, 0)) == pytest.approx(2.0)


def test_radial_extent():
    dom = pb.validate_domain(SQ, ["D"] * 4, origin=(-1.0, 0.5))
    r_min, r_max = pb.radial_extent(dom)
    assert r_min == pytest.approx(1.0)
    assert r_max == pytest.approx(math.sqrt(4.0 + 0.25))

    centered = pb.validate_domain(np.array(SQ) - 0.5, ["D"] * 4, origin=(0.0, 0.0))
    r_min, r_max = pb.radial_extent(centered)
    assert r_min == 0.0
    assert r_max == pytest.approx(math.sqrt(0.5))


def test_radial_extent_annulus_sector():
    dom = shapes.quarter_annulus(1.0, 2.0, 64, "inner")
    r_min, r_max = pb.radial_extent(dom)
    samples = geometry.sample_boundary(dom, 4096, "all").positions
    radii = np.hypot(samples[:, 0], samples[:, 1])
    assert r_min == pytest.approx(radii.min(), abs=1e-6)
    assert r_max == pytest.approx(2.0, abs=1e-12)
    assert 0.99 < r_min <= 1.0


def test_extents_monotone_under_inclusion():
    big = shapes.rectangle(2.0, 2.0, origin=(-1.0, -1.0))
    small = pb.validate_domain([[0.5, 0.5], [1.5, 0.5], [1.5, 1.5], [0.5, 1.5]],
                               ["D"] * 4, origin=(-1.0, -1.0))
    for u in ((1, 0), (0, 1), (1, 1)):
        assert pb.directional_extent(small, u) <= pb.directional_extent(big, u) + 1e-12
    r0 = pb.radial_extent(small)
    r1 = pb.radial_extent(big)
    assert r0[0] >= r1[0] - 1e-12
    assert r0[1] <= r1[1] + 1e-12
