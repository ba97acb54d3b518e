import math

import numpy as np
import pytest

import plapbounds as pb
from plapbounds import bounds, shapes
from plapbounds.geometry import DIRICHLET, NEUMANN

PI2 = math.pi ** 2


# ---------------------------------------------------------------------------
# field_eval
# ---------------------------------------------------------------------------

def test_field_eval_radial_cancellation():
    q, div = pb.field_eval(pb.RadialOutward(1.0), (2.0, 0.0), 2.0, 2)
    assert np.allclose(q, [0.5, 0.0])
    assert div == pytest.approx(0.0, abs=1e-15)   # d = p cancels


def test_field_eval_radial_p15():
    _, div = pb.field_eval(pb.RadialOutward(1.0), (1.0, 0.0), 1.5, 2)
    assert div == pytest.approx(0.5)
    _, div_in = pb.field_eval(pb.RadialInward(1.0), (1.0, 0.0), 3.0, 2)
    assert div_in == pytest.approx(1.0)   # c (p - d) at |x| = 1


def test_field_eval_radial_origin_guard():
    with pytest.raises(ValueError, match="origin"):
        pb.field_eval(pb.RadialOutward(1.0), (1e-12, 0.0), 2.0, 2)


def test_field_eval_sampled_linear(repo):
    g = repo.grid("square", 1.0 / 32)
    spec = pb.SampledVectorField(g, g.xy[:, 0] / 2, g.xy[:, 1] / 2)
    for pt in ((0.3, 0.4), (0.5, 0.5), (0.71, 0.22)):
        q, div = pb.field_eval(spec, pt, 2.0)
        assert np.allclose(q, np.asarray(pt) / 2, atol=1e-12)
        assert div == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# divergence-field bounds
# ---------------------------------------------------------------------------

def test_boggio_zero_field(repo):
    g = repo.grid("square", 1.0 / 32)
    spec = pb.SampledVectorField(g, np.zeros(g.n_inside), np.zeros(g.n_inside))
    cert = pb.boggio_bound(repo.domains["square"], 2.0, spec, g)
    assert cert.applicable
    assert cert.value == 0.0


def test_boggio_disk_linear_field(repo):
    g = repo.grid("disk", 1.0 / 64)
    spec = pb.SampledVectorField(g, g.xy[:, 0] / 2, g.xy[:, 1] / 2)
    cert = pb.boggio_bound(repo.domains["disk"], 2.0, spec, g)
    # W = 1 - |x|^2/4; the node infimum sits just inside the rim
    assert cert.applicable
    assert cert.value == pytest.approx(0.75, abs=0.03)
    assert np.hypot(*cert.infimum_witness) > 0.9
    assert cert.admissibility.n_samples == 0   # no Neumann part: vacuous


def test_boggio_admissibility_failure(repo):
    # outward field on a Neumann edge violates nu . Q <= 0
    dom = shapes.square(labels=[DIRICHLET, NEUMANN, DIRICHLET, DIRICHLET])
    g = pb.build_grid(dom, 1.0 / 32)
    spec = pb.SampledVectorField(g, np.ones(g.n_inside), np.zeros(g.n_inside))
    cert = pb.boggio_bound(dom, 2.0, spec, g)
    assert not cert.applicable
    assert cert.admissibility.first_failure().name == "neumann-admissibility"
    assert cert.admissibility.max_boundary_violation == pytest.approx(1.0)
    assert cert.parameters["worst_violation_x"] == pytest.approx(1.0)


def test_boggio_standard_form_recovery_coarse(repo):
    g = repo.grid("square", 1.0 / 64)
    eig = repo.eig("square", 1.0 / 64)
    cert = pb.boggio_bound(repo.domains["square"], 2.0, pb.ComparisonField(eig.field), g)
    assert cert.applicable
    assert 0.9 * eig.value <= cert.value <= 1.02 * eig.value


def test_optimize_scale_disk(repo):
    g = repo.grid("disk", 1.0 / 64)
    spec = pb.SampledVectorField(g, g.xy[:, 0] / 2, g.xy[:, 1] / 2)
    plain = pb.boggio_bound(repo.domains["disk"], 2.0, spec, g)
    cert = pb.optimize_scale(repo.domains["disk"], 2.0, spec, g)
    assert cert.parameters["t_star"] == pytest.approx(2.0, rel=0.1)
    assert cert.value == pytest.approx(1.0, rel=0.1)
    assert cert.value >= plain.value


def test_optimize_scale_zero_field(repo):
    g = repo.grid("square", 1.0 / 32)
    spec = pb.SampledVectorField(g, np.zeros(g.n_inside), np.zeros(g.n_inside))
    cert = pb.optimize_scale(repo.domains["square"], 2.0, spec, g)
    assert cert.applicable
    assert cert.value == 0.0


def test_optimize_scale_positive_divergence_property(repo):
    # any admissible field with inf div Q > 0 yields a strictly positive
    # bound after scaling
    g = repo.grid("square", 1.0 / 32)
    rng = np.random.default_rng(11)
    x, y = g.xy[:, 0], g.xy[:, 1]
    for _ in range(10):
        a, b = rng.uniform(0.5, 2.0, 2)
        c = rng.uniform(-1.0, 1.0)
        qx = a * x + c * np.sin(2 * y)
        qy = b * y + c * np.cos(3 * x)
        spec = pb.SampledVectorField(g, qx, qy)
        cert = pb.optimize_scale(repo.domains["square"], 2.0, spec, g)
        assert cert.applicable
        assert cert.value > 0.0


def test_directional_slope_profiles(repo):
    g = repo.grid("square", 1.0 / 64)
    dom = repo.domains["square"]
    vals = {}
    for k in (0.25, 0.5, 0.75):
        cert = pb.directional_boggio_bound(dom, 2.0, (1.0, 0.0),
                                           lambda s, k=k: k * s, g)
        assert cert.applicable
        # node infimum reaches only s = 1 - 2h, inflating by ~ 4 h k^2
        assert cert.value == pytest.approx(k - k * k, abs=0.005 + 4.5 * k * k / 64)
        vals[k] = cert.value
    assert vals[0.5] > vals[0.25] and vals[0.5] > vals[0.75]


def test_directional_zero_profile(repo):
    g = repo.grid("square", 1.0 / 32)
    cert = pb.directional_boggio_bound(repo.domains["square"], 2.0, (1.0, 0.0),
                                       lambda s: np.zeros_like(np.asarray(s, float)), g)
    assert cert.applicable and cert.value == 0.0


def test_directional_negative_profile_rejected(repo):
    g = repo.grid("square", 1.0 / 32)
    cert = pb.directional_boggio_bound(repo.domains["square"], 2.0, (1.0, 0.0),
                                       lambda s: np.asarray(s) - 0.5, g)
    assert not cert.applicable
    assert cert.admissibility.first_failure().name == "profile-nonnegative"


def test_directional_interval_profile_recovers_box(repo):
    g = repo.grid("square_nw", 1.0 / 128)
    dom = repo.domains["square_nw"]
    for p in (2.0, 3.0):
        res = pb.radial_eigenvalue(pb.unit_interval_problem(p), tol=1e-10)
        q = pb.interval_comparison_profile(res, 0.0, 1.0, neumann_at="min")
        cert = pb.directional_boggio_bound(dom, p, (1.0, 0.0), q, g)
        mu = pb.mixed_interval_eigenvalue(p)
        assert cert.applicable
        assert cert.value == pytest.approx(mu, rel=0.01)


# ---------------------------------------------------------------------------
# averaged-distance weight and Hardy bound
# ---------------------------------------------------------------------------

def test_weight_disk_center(repo):
    w = pb.hardy_weight(repo.domains["disk"], (0.0, 0.0), 2.0, 720)
    assert w == pytest.approx(1.0, abs=1e-3)


def test_weight_square_center_quadrature():
    # closed chord geometry: (1/2pi) integral d^-2 = 2 + 4/pi for the unit
    # square seen from its center
    w = pb.hardy_weight(shapes.square(), (0.5, 0.5), 2.0, 100000)
    assert w == pytest.approx(2.0 + 4.0 / math.pi, abs=5e-4)


def test_weight_shadowed_dirichlet_sector():
    labels = [NEUMANN] * 6
    labels[3] = DIRICHLET   # the notch wall x=0.5, y in [0.5, 1]
    dom = shapes.lshape(labels=labels)
    assert pb.hardy_weight(dom, (0.75, 0.25), 2.0, 720) == 0.0


def test_weight_dominated_by_boundary_distance(repo):
    # every segment reaching the Dirichlet part is at least as long as the
    # straight-line distance, so the weight never exceeds dist^-p
    dom = repo.domains["square_nw"]
    rng = np.random.default_rng(9)
    a = dom.vertices
    b = np.roll(a, -1, axis=0)
    for _ in range(25):
        x = rng.uniform(0.05, 0.95, 2)
        p = float(rng.choice([1.5, 2.0, 3.0]))
        w = pb.hardy_weight(dom, x, p, 360)
        dist_d = min(
            float(np.linalg.norm(x - (ai + np.clip((x - ai) @ (bi - ai)
                                                   / ((bi - ai) @ (bi - ai)), 0, 1)
                                      * (bi - ai))))
            for ai, bi, d_lab in zip(a, b, dom.edge_dirichlet) if d_lab)
        assert w <= dist_d ** (-p) * (1 + 1e-12)


def test_weight_requires_interior_point(repo):
    with pytest.raises(ValueError):
        pb.hardy_weight(repo.domains["square"], (1.5, 0.5), 2.0, 64)
    with pytest.raises(ValueError):
        pb.hardy_weight(repo.domains["square"], (0.5, 0.5), 2.0, 4)


def test_hardy_constant_arithmetic():
    assert pb.hardy_constant(2.0) == pytest.approx(0.25)
    assert pb.hardy_constant(3.0) == pytest.approx(2.0 / 27.0)


def test_hardy_bound_disk(repo):
    g = repo.grid("disk", 1.0 / 64)
    cert = pb.hardy_bound(repo.domains["disk"], 2.0, g, n_angles=180)
    lam = repo.eig("disk", 1.0 / 64).value
    assert cert.applicable
    assert 0.0 < cert.value <= lam
    # the infimum of the weight sits at the center (value 1), so the bound
    # is within quadrature error of the bare constant
    assert cert.value == pytest.approx(0.25, rel=1e-2)


def test_hardy_bound_zero_at_shadowed_node(repo):
    # a node whose whole Dirichlet sector is blocked by the reentrant notch
    # drags the infimum (and hence the bound) to zero
    labels = [NEUMANN] * 6
    labels[3] = DIRICHLET
    dom = shapes.lshape(labels=labels)
    g = pb.build_grid(dom, 1.0 / 32)
    cert = pb.hardy_bound(dom, 2.0, g, n_angles=180)
    assert cert.applicable
    assert cert.value == 0.0
    wx, wy = cert.infimum_witness
    assert wx >= 0.5 and wy < 0.5   # witness sits in the shadowed leg


def test_hardy_bound_zero_weight_when_no_dirichlet(repo):
    g = repo.grid("square_nall", 1.0 / 32)
    cert = pb.hardy_bound(repo.domains["square_nall"], 2.0, g, n_angles=90)
    assert cert.applicable and cert.value == 0.0


# ---------------------------------------------------------------------------
# radial and mixed bounds
# ---------------------------------------------------------------------------

def test_radial_quarter_annulus_values(repo):
    g_in = repo.grid("quarter_nin", 1.0 / 64)
    g_out = repo.grid("quarter_nout", 1.0 / 64)
    c15 = pb.radial_hardy_bound(repo.domains["quarter_nin"], 1.5, 2, g_in)
    assert c15.applicable
    assert c15.value == pytest.approx(3.0 ** -1.5 / 2.0 ** 1.5, rel=1e-12)
    c3 = pb.radial_hardy_bound(repo.domains["quarter_nout"], 3.0, 2, g_out)
    assert c3.applicable
    assert c3.value == pytest.approx((1.0 / 27.0) / 8.0, rel=1e-12)


def test_radial_neumann_inner_rejected_for_p_above_d(repo):
    # the inward field of the p > d case points toward the origin, so a
    # Neumann part facing the origin has nu . Q > 0: hypothesis fails
    g = repo.grid("quarter_nin", 1.0 / 64)
    cert = pb.radial_hardy_bound(repo.domains["quarter_nin"], 3.0, 2, g)
    assert not cert.applicable
    assert cert.admissibility.first_failure().name == "neumann-admissibility"


def test_radial_p_equals_d_inapplicable(repo):
    g = repo.grid("quarter_nin", 1.0 / 64)
    cert = pb.radial_hardy_bound(repo.domains["quarter_nin"], 2.0, 2, g)
    assert not cert.applicable
    assert cert.admissibility.first_failure().name == "exponent-differs-from-dimension"


def test_radial_needs_exterior_origin():
    dom = shapes.square(labels=["D"] * 4, origin=(0.5, 0.5))
    g = pb.build_grid(dom, 1.0 / 32)
    cert = pb.radial_hardy_bound(dom, 1.5, 2, g)
    assert not cert.applicable
    assert cert.admissibility.first_failure().name == "origin-outside"


def test_radial_below_rayleigh_estimate(repo):
    cert = pb.radial_hardy_bound(repo.domains["quarter_nout"], 3.0, 2,
                                 repo.grid("quarter_nout", 1.0 / 64))
    est = repo.rayleigh("quarter_nout", 3.0, 1.0 / 64)
    assert cert.value <= est.value


def test_mixed_endpoint_consistency(repo):
    dom = repo.domains["quarter_nin"]
    g = repo.grid("quarter_nin", 1.0 / 64)
    weights = pb.hardy_weight_field(dom, g, 1.5, 120)
    hardy = pb.hardy_bound(dom, 1.5, g, 120, _weights=weights)
    radial = pb.radial_hardy_bound(dom, 1.5, 2, g)
    mixed = pb.mixed_bound(dom, 1.5, 2, g, 120, _weights=weights)
    assert mixed.applicable
    # gamma grid contains both endpoints, so the mix can never fall below
    assert mixed.value >= max(hardy.value, radial.value) - 1e-12
    # and the endpoints themselves reproduce the component bounds exactly
    assert bounds.mixed_bound(dom, 1.5, 2, g, 120, gamma_steps=2,
                              _weights=weights).value >= \
        max(hardy.value, radial.value) - 1e-12


def test_mixed_gamma_endpoints_reproduce_components(repo):
    dom = repo.domains["quarter_nin"]
    g = repo.grid("quarter_nin", 1.0 / 64)
    weights = pb.hardy_weight_field(dom, g, 1.5, 120)
    hardy = pb.hardy_bound(dom, 1.5, g, 120, _weights=weights)
    radial = pb.radial_hardy_bound(dom, 1.5, 2, g)
    mixed = pb.mixed_bound(dom, 1.5, 2, g, 120, _weights=weights)
    assert mixed.parameters["value_gamma0"] == hardy.value
    assert mixed.parameters["value_gamma1"] == radial.value


def test_mixed_inapplicable_when_radial_is(repo):
    g = repo.grid("keyhole", 1.0 / 64)
    cert = pb.mixed_bound(repo.domains["keyhole"], 2.0, 2, g, 90)
    assert not cert.applicable


# ---------------------------------------------------------------------------
# box bound
# ---------------------------------------------------------------------------

def test_box_square_neumann_west(repo):
    g = repo.grid("square_nw", 1.0 / 64)
    cert = pb.box_bound(repo.domains["square_nw"], 2.0, (1.0, 0.0), g)
    assert cert.applicable
    assert cert.value == pytest.approx(PI2 / 4, abs=1e-8)
    lam = repo.eig("square_nw", 1.0 / 128).value
    assert cert.value <= lam


def test_box_rectangle(repo):
    g = repo.grid("rect21", 1.0 / 32)
    cert = pb.box_bound(repo.domains["rect21"], 2.0, (1.0, 0.0), g)
    assert cert.value == pytest.approx(PI2 / 16, rel=1e-9)


def test_box_sign_hypothesis_fails():
    dom = shapes.square(labels=[DIRICHLET, NEUMANN, DIRICHLET, DIRICHLET])
    g = pb.build_grid(dom, 1.0 / 32)
    cert = pb.box_bound(dom, 2.0, (1.0, 0.0), g)   # Neumann on x=1 faces +x
    assert not cert.applicable
    assert cert.admissibility.first_failure().name == "neumann-sign"


def test_box_graph_hypothesis_fails():
    # square ring with a slit: two west-facing Neumann walls on the same
    # horizontal lines pass the sign test but fail the graph test
    verts = [[0, 0], [1.45, 0], [1.45, 1], [1, 1], [1, 2], [2, 2], [2, 1],
             [1.55, 1], [1.55, 0], [3, 0], [3, 3], [0, 3]]
    labels = ["D", "D", "D", "D", "D", "N", "D", "D", "D", "D", "D", "N"]
    dom = pb.validate_domain(verts, labels)
    g = pb.build_grid(dom, 1.0 / 16)
    cert = pb.box_bound(dom, 2.0, (1.0, 0.0), g)
    assert not cert.applicable
    assert cert.admissibility.first_failure().name == "neumann-graph"


def test_box_requires_axis_direction(repo):
    with pytest.raises(ValueError, match="axis"):
        pb.box_bound(repo.domains["square_nw"], 2.0, (1.0, 1.0))


# ---------------------------------------------------------------------------
# annulus bound
# ---------------------------------------------------------------------------

def test_annulus_keyhole_case_and_value(repo):
    cert = pb.annulus_bound(repo.domains["keyhole"], 2.0, 2)
    assert cert.applicable
    assert cert.parameters["neumann_inner"] == 1.0
    prob = pb.RadialEigenProblem(cert.parameters["r_min"], cert.parameters["r_max"],
                                 pb.Exponent(2.0), 2, pb.Arrangement.NEUMANN_INNER)
    assert cert.value == pytest.approx(pb.radial_eigenvalue(prob).eigenvalue, rel=1e-9)


def test_annulus_quarter_sector_below_oracle(repo):
    cert = pb.annulus_bound(repo.domains["quarter_nin"], 1.5, 2)
    est = repo.rayleigh("quarter_nin", 1.5, 1.0 / 64)
    assert cert.applicable
    assert cert.parameters["neumann_inner"] == 1.0
    assert cert.value <= est.value


def test_annulus_beta_case(repo):
    cert = pb.annulus_bound(repo.domains["quarter_nout"], 3.0, 2)
    assert cert.applicable
    assert cert.parameters["neumann_inner"] == 0.0


def test_annulus_dilation(repo):
    base = pb.annulus_bound(repo.domains["keyhole"], 2.0, 2)
    doubled = pb.annulus_bound(shapes.scaled(repo.domains["keyhole"], 2.0), 2.0, 2)
    assert doubled.value == pytest.approx(base.value / 4.0, rel=1e-6)


def test_hardy_dilation_matched_resolution(repo):
    # grid bounds scale as s^-p too when the lattice is scaled with the
    # domain (dyadic factors keep the node set geometrically identical)
    dom = repo.domains["square_nw"]
    base_grid = repo.grid("square_nw", 1.0 / 32)
    base = pb.hardy_bound(dom, 1.5, base_grid, n_angles=90)
    for s in (0.5, 2.0):
        scaled_dom = shapes.scaled(dom, s)
        cert = pb.hardy_bound(scaled_dom, 1.5, pb.build_grid(scaled_dom, s / 32),
                              n_angles=90)
        assert cert.value == pytest.approx(base.value * s ** -1.5, rel=1e-6)


def test_annulus_needs_origin(repo):
    cert = pb.annulus_bound(repo.domains["square_nw"], 2.0, 2)
    assert not cert.applicable
    assert cert.admissibility.first_failure().name == "origin-present"


# ---------------------------------------------------------------------------
# convexity bound
# ---------------------------------------------------------------------------

def test_convex_disk(repo):
    cert = pb.convex_bound(repo.domains["disk"], 2.0, 2)
    lam = repo.eig("disk", 1.0 / 128).value
    assert cert.value == pytest.approx(1.0 / 32.0, rel=1e-2)
    assert cert.value <= lam


def test_convex_half_neumann_halves(repo):
    full = pb.convex_bound(repo.domains["disk"], 2.0, 2)
    half = pb.convex_bound(repo.domains["disk_half"], 2.0, 2)
    assert half.value == pytest.approx(0.5 * full.value, rel=1e-9)
    assert half.value == pytest.approx(1.0 / 64.0, rel=1e-2)


def test_convex_polygon_without_analytic_normals(repo):
    cert = pb.convex_bound(repo.domains["square"], 2.0, 2)
    assert cert.applicable
    assert cert.value == 0.0


def test_convex_rejects_nonconvex(repo):
    cert = pb.convex_bound(repo.domains["lshape"], 2.0, 2)
    assert not cert.applicable


# ---------------------------------------------------------------------------
# restricted monotonicity
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def outer_solution(repo):
    return repo.grid("square", 1.0 / 64), repo.eig("square", 1.0 / 64)


def test_monotonicity_equality_case(repo, outer_solution):
    inner = shapes.rectangle(0.5, 1.0, labels=["D", "N", "D", "D"])
    cert = pb.monotonicity_bound(inner, repo.domains["square"], 2.0,
                                 outer_solution=outer_solution)
    assert cert.applicable
    assert cert.value == pytest.approx(2 * PI2, rel=1e-2)
    assert abs(cert.parameters["min_normal_derivative"]) <= 5.0 / 64


def test_monotonicity_strict_case(repo, outer_solution):
    inner = shapes.rectangle(0.25, 1.0, labels=["D", "N", "D", "D"])
    cert = pb.monotonicity_bound(inner, repo.domains["square"], 2.0,
                                 outer_solution=outer_solution)
    assert cert.applicable
    lam_inner = PI2 / (4 * 0.0625) + PI2   # separated mode of the strip
    assert cert.value <= lam_inner


def test_monotonicity_sign_failure(repo, outer_solution):
    inner = pb.validate_domain([[0, 0], [0.75, 0], [0.75, 1], [0, 1]],
                               ["D", "N", "D", "D"])
    cert = pb.monotonicity_bound(inner, repo.domains["square"], 2.0,
                                 outer_solution=outer_solution)
    assert not cert.applicable
    assert cert.parameters["min_normal_derivative"] < -1.0
    assert cert.infimum_witness is not None


def test_monotonicity_containment_failure(repo, outer_solution):
    inner = shapes.rectangle(1.5, 1.0)
    with pytest.raises(ValueError, match="contained"):
        pb.monotonicity_bound(inner, repo.domains["square"], 2.0,
                              outer_solution=outer_solution)


def test_monotonicity_linear_only(repo, outer_solution):
    inner = shapes.rectangle(0.5, 1.0, labels=["D", "N", "D", "D"])
    with pytest.raises(ValueError, match="p = 2"):
        pb.monotonicity_bound(inner, repo.domains["square"], 3.0,
                              outer_solution=outer_solution)


# ---------------------------------------------------------------------------
# the sweep and global soundness
# ---------------------------------------------------------------------------

def test_best_bound_gating_pure_dirichlet_square(repo):
    certs = pb.best_bound(repo.domains["square"], 2.0, grid_h=1.0 / 64,
                          n_angles=90, n_boundary_samples=256)
    by_method = {}
    for c in certs:
        by_method.setdefault(c.method, []).append(c)
    assert any(c.applicable for c in by_method["Hardy"])
    assert any(c.applicable for c in by_method["Boggio"])
    assert not any(c.applicable for c in by_method["RadialHardy"])
    assert not any(c.applicable for c in by_method["Annulus"])
    values = [c.value for c in certs if c.applicable]
    assert values == sorted(values, reverse=True)


def test_best_bound_annulus_sector_all_radial_family(repo):
    certs = pb.best_bound(repo.domains["quarter_nin"], 1.5, grid_h=1.0 / 64,
                          n_angles=90, n_boundary_samples=256)
    ok = {c.method for c in certs if c.applicable}
    assert {"RadialHardy", "Mixed", "Annulus", "Hardy"} <= ok


def test_best_bound_nonplanar_dimension_reported(repo):
    certs = pb.best_bound(repo.domains["quarter_nin"], 1.5, d=3,
                          grid_h=1.0 / 32, n_angles=90, n_boundary_samples=128)
    methods = {c.method: c for c in certs if c.method in ("Hardy", "Mixed")}
    assert not methods["Hardy"].applicable
    assert not methods["Mixed"].applicable
    radial = [c for c in certs if c.method == "RadialHardy"][0]
    assert radial.applicable
    assert radial.value == pytest.approx((1.5 / 1.5) ** 1.5 / 2.0 ** 1.5)


def test_best_bound_fuzz_random_star_domains(repo):
    """Random star-shaped polygons with random labels must produce
    certificates (or clean inapplicability) without blowing up, and every
    applicable value must respect a generous oracle band."""
    rng = np.random.default_rng(2024)
    for trial in range(12):
        n = int(rng.integers(5, 24))
        theta = np.sort(rng.uniform(0, 2 * math.pi, n))
        if np.min(np.diff(theta)) < 1e-3:
            continue
        radii = rng.uniform(0.5, 1.5, n)
        center = rng.uniform(-0.5, 0.5, 2)
        verts = center + np.column_stack([radii * np.cos(theta),
                                          radii * np.sin(theta)])
        labels = ["D" if rng.random() < 0.7 else "N" for _ in range(n)]
        if "D" not in labels:
            labels[0] = "D"
        origin = center + np.array([4.0, 0.0]) if rng.random() < 0.5 else None
        dom = pb.validate_domain(verts, labels, origin=origin)
        p = float(rng.uniform(1.2, 3.5))
        h = dom.diameter / 48
        certs = pb.best_bound(dom, p, grid_h=h, n_angles=60,
                              n_boundary_samples=128, mesh_size=1024)
        est = pb.rayleigh_minimize_p(pb.build_grid(dom, h), p).value
        for c in certs:
            if c.applicable:
                assert c.value <= 1.25 * est, (trial, c.method, c.value, est)


@pytest.mark.parametrize("name,p", [
    ("square", 2.0), ("square_nw", 2.0), ("rect21", 2.0), ("disk", 2.0),
    ("disk_half", 2.0), ("keyhole", 2.0), ("lshape", 2.0),
    ("quarter_nin", 1.5), ("quarter_nout", 3.0),
])
def test_soundness_master(repo, name, p):
    """Every applicable certificate stays below the oracle estimate plus
    three tolerance bands."""
    h = 1.0 / 64
    if p == 2.0:
        estimate = repo.eig(name, h).value
    else:
        estimate = repo.rayleigh(name, p, h).value
    certs = pb.best_bound(repo.domains[name], p, grid_h=h, n_angles=90,
                          n_boundary_samples=256)
    band = 0.02 * estimate
    for c in certs:
        if c.applicable:
            assert c.value <= estimate + 3 * band, (c.method, c.value, estimate)
