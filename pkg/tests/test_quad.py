import json
import math

import numpy as np
import pytest
from scipy.special import gammaln

from conftest import random_unit
from sphdesigns import quad
from sphdesigns.cycles import GeodesicArc, circle_curve, euler_cycle
from sphdesigns.errors import QuadratureNotConverged, WeightsNotNormalized
from sphdesigns.invariants import invariant_poly, p4_B
from sphdesigns.orthogroup import PHI
from sphdesigns.polytope import SOLIDS_R3, build_polytope

SQ5 = math.sqrt(5.0)


def unit(*v):
    v = np.array(v, dtype=float)
    return v / np.linalg.norm(v)


def gamma_moment(alpha):
    """Gamma-ratio form of the normalized monomial integral."""
    alpha = np.asarray(alpha)
    if np.any(alpha % 2):
        return 0.0
    n = len(alpha)
    log = gammaln(n / 2) - gammaln((alpha.sum() + n) / 2)
    log += np.sum(gammaln((alpha + 1) / 2)) - n * gammaln(0.5)
    return float(np.exp(log))


def test_moment_examples():
    assert quad.sphere_moment((2, 0, 0)) == pytest.approx(1 / 3, abs=1e-15)
    assert quad.sphere_moment((1, 1, 0)) == 0.0
    assert quad.sphere_moment((4, 0, 0, 0)) == pytest.approx(1 / 8, abs=1e-15)
    assert quad.sphere_moment((0, 0, 0), d=2) == 1.0
    with pytest.raises(ValueError):
        quad.sphere_moment((2, 0, 0), d=3)


@pytest.mark.parametrize("nvars", [2, 3, 4, 6])
def test_moments_against_gamma_formula(nvars):
    ex, _ = quad.monomials_up_to(nvars, 10)
    ours = quad.sphere_moments(ex)
    ref = np.array([gamma_moment(e) for e in ex])
    assert np.allclose(ours, ref, rtol=1e-12, atol=1e-15)


def test_moments_against_monte_carlo():
    x = random_unit(np.random.default_rng(2024), 2_000_000, 4)
    for alpha in [(4, 0, 0, 0), (2, 2, 0, 0), (2, 2, 2, 0), (6, 2, 0, 0)]:
        vals = np.prod(x ** np.array(alpha), axis=1)
        err = 5 * vals.std() / math.sqrt(len(vals))
        assert abs(vals.mean() - quad.sphere_moment(alpha)) < err


@pytest.mark.parametrize("nvars", [2, 3, 4, 5, 7])
def test_pure_squares_sum_to_one(nvars):
    total = sum(quad.sphere_moment(2 * np.eye(nvars, dtype=int)[i]) for i in range(nvars))
    assert total == pytest.approx(1.0, abs=1e-15)


def test_monomial_enumeration():
    ex, degs = quad.monomials_up_to(4, 19)
    assert len(ex) == 8855 == math.comb(23, 4)
    assert np.all(ex.sum(axis=1) == degs)
    assert len({tuple(e) for e in ex}) == len(ex)


# --- integrals of the invariants ----------------------------------------------


def test_arc_integral_octahedron_edge():
    arc = GeodesicArc(unit(1, 0, 0), unit(0, 1, 0))
    assert quad.arc_integral(arc, p4_B(3), normalized=True) == pytest.approx(3 / 20, abs=1e-13)


def test_arc_integral_600cell_edge():
    arc = GeodesicArc(unit(1, 0, 0, 0), 0.5 * np.array([PHI, 1.0, 1 / PHI, 0.0]))
    val = quad.arc_integral(arc, invariant_poly("H4"), normalized=True)
    assert val == pytest.approx(11 / 25, abs=1e-10)


def test_arc_integral_constant_is_length():
    arc = GeodesicArc(unit(1, 2, 2), unit(0, 1, -1))
    assert quad.arc_integral(arc, 1.0, degree=0) == pytest.approx(arc.length, abs=1e-14)


def test_arc_integral_not_converged():
    arc = GeodesicArc(unit(1, -1, 0), unit(1, 1, 0))
    with pytest.raises(QuadratureNotConverged):
        quad.arc_integral(arc, lambda x: np.abs(x[:, 1]), degree=1)


def test_cycle_average_24cell():
    cyc = euler_cycle(build_polytope("24-cell"))
    assert quad.cycle_average(cyc, invariant_poly("F4")) == pytest.approx(-5 / 9, abs=1e-12)


@pytest.mark.parametrize("name, group", [(r[0], r[1]) for r in SOLIDS_R3] + [("24-cell", "F4")])
def test_cycle_average_equals_single_arc(name, group):
    p = build_polytope(name)
    cyc = euler_cycle(p)
    poly = invariant_poly(group)
    i, j = p.edges[0]
    single = quad.arc_integral(GeodesicArc(p.vertices[i], p.vertices[j]), poly, normalized=True)
    assert quad.cycle_average(cyc, poly) == pytest.approx(single, abs=1e-12)


def test_point_averages():
    assert quad.point_average(build_polytope("cube").vertices, p4_B(3)) == pytest.approx(-4 / 15, abs=1e-14)
    x = build_polytope("icosidodecahedron").vertices
    assert quad.point_average(x, invariant_poly("H3")) == pytest.approx((2 + SQ5) / 21, abs=1e-13)
    assert quad.point_average(x, 1.0) == 1.0
    with pytest.raises(ValueError):
        quad.point_average(np.zeros((0, 3)), 1.0)


def test_circle_moments():
    c = circle_curve(1 / 3)
    assert quad.cycle_average(c, lambda x: x[:, 2], degree=1) == pytest.approx(1 / 3, abs=1e-15)
    assert quad.cycle_average(c, lambda x: x[:, 2] ** 2, degree=2) == pytest.approx(1 / 9, abs=1e-15)


# --- certification ---------------------------------------------------------------


def test_certify_octahedron():
    rep = quad.certify_design(cycle=euler_cycle(build_polytope("octahedron")), t=3)
    assert rep.certified and rep.max_residual < 1e-10
    assert len(rep.residuals_by_degree) == 5
    assert rep.first_failing_degree == 4  # strength exactly 3


def test_certify_equator_and_poles():
    pts = np.array([[0, 0, 1.0], [0, 0, -1.0]])
    rep = quad.certify_design(cycle=circle_curve(0.0), points=pts, beta=1 / 3, t=3, d=2)
    assert rep.certified


@pytest.mark.parametrize("name", ["tetrahedron", "icosahedron"])
def test_certify_fails_above_strength(name):
    p = build_polytope(name)
    t = {"tetrahedron": 2, "icosahedron": 5}[name]
    rep = quad.certify_design(cycle=euler_cycle(p), t=t + 1)
    assert not rep.certified
    assert rep.first_failing_degree == t + 1


def test_cubature_single_orbit():
    rep = quad.weighted_point_cubature([(build_polytope("icosahedron").vertices, 1.0)], 5)
    assert rep.certified


def test_cubature_single_point_fails():
    rep = quad.weighted_point_cubature([(np.array([[1.0, 0.0, 0.0]]), 1.0)], 1)
    assert not rep.certified and rep.first_failing_degree == 1


def test_cubature_weights_normalized():
    x = build_polytope("icosahedron").vertices
    with pytest.raises(WeightsNotNormalized):
        quad.weighted_point_cubature([(x, 0.5), (x, 0.4)], 2)


def test_certify_argument_checks():
    cyc = circle_curve(0.0)
    pts = np.array([[0, 0, 1.0]])
    with pytest.raises(ValueError):
        quad.certify_design()
    with pytest.raises(ValueError):
        quad.certify_design(cyc, pts, t=1)
    with pytest.raises(ValueError):
        quad.certify_design(cyc, pts, beta=1.5, t=1)
    with pytest.raises(ValueError):
        quad.certify_design(cyc, t=1, d=3)


def test_report_json():
    rep = quad.certify_design(cycle=euler_cycle(build_polytope("octahedron")), t=3)
    data = json.loads(rep.dumps())
    assert set(data) == {"claimed_t", "tol", "residuals_by_degree", "certified", "first_failing_degree"}
    assert json.dumps(data, sort_keys=True) == rep.dumps()


def test_rounding_gate():
    assert quad.rounding_gate(100) == quad.QUAD_GATE
    assert quad.rounding_gate(10**8) > quad.QUAD_GATE
