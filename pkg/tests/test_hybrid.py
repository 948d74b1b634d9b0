import json
import math

import numpy as np
import pytest

from sphdesigns import hybrid, quad
from sphdesigns.cycles import GeodesicArc, euler_cycle
from sphdesigns.errors import DegenerateBalance, IncompatibleSigns, RootNotBracketed, UnknownPair
from sphdesigns.hybrid import MultiOrbitSpec, balance_multi, balance_single, beta_formulas_d
from sphdesigns.invariants import invariant_poly, p4_B
from sphdesigns.orthogroup import PHI
from sphdesigns.polytope import build_polytope

SQ2, SQ3, SQ5 = math.sqrt(2), math.sqrt(3), math.sqrt(5)
AC13 = math.acos(1 / 3)
RT = math.acos(math.sqrt(1 / 3 + 2 / (3 * SQ5)))

# (primal, dual, s, closed form, two-digit value)
DUAL_PAIRS = [
    ("tetrahedron", "tetrahedron-dual", 3, 4 / (4 + 3 * SQ2 * math.acos(-1 / 3)), 0.33),
    ("octahedron", "cube", 5, 9 / 25, 0.36),
    ("cube", "octahedron", 5, (10 * SQ2 + 3 * AC13) / (10 * SQ2 + 35 * AC13), 0.31),
    ("rhombic dodecahedron", "cuboctahedron", 5,
     (10 - 3 * SQ2 * math.acos(1 / SQ3)) / (10 + 5 * SQ2 * math.acos(1 / SQ3)), 0.35),
    ("dodecahedron", "icosahedron", 9,
     (1190 * SQ5 - 675 * math.acos(SQ5 / 3)) / (1190 * SQ5 + 6237 * math.acos(SQ5 / 3)), 0.30),
    ("icosahedron", "dodecahedron", 9,
     (126 + 45 * math.acos(1 / SQ5)) / (126 + 301 * math.acos(1 / SQ5)), 0.38),
    ("rhombic triacontahedron", "icosidodecahedron", 9,
     (7 * (17 * SQ5 - 27) + 135 * RT) / (7 * (17 * SQ5 - 27) + 567 * RT), 0.37),
]

ORBIT_UNIONS = [
    ("cuboctahedron", "rhombic dodecahedron", 5, 21 / 25),
    ("cuboctahedron", "octahedron", 5, 1 / 5),
    ("icosidodecahedron", "rhombic triacontahedron", 9, 45 / 49),
    ("icosidodecahedron", "icosahedron", 9, 5 / 21),
]


def unit(*v):
    v = np.array(v, dtype=float)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize("primal, dual, s, closed, approx", DUAL_PAIRS)
def test_dual_pair_beta(primal, dual, s, closed, approx):
    pair = hybrid.get_pair(primal, dual)
    beta, _, _ = hybrid.pair_balance(pair)
    assert pair.s == s
    assert abs(beta - closed) < 1e-12
    assert round(beta, 2) == approx


@pytest.mark.parametrize("primal, dual, s, closed", ORBIT_UNIONS)
def test_orbit_union_beta(primal, dual, s, closed):
    beta, _, _ = hybrid.pair_balance(hybrid.get_pair(primal, dual))
    assert abs(beta - closed) < 1e-12


def test_balance_single_examples():
    oct_edge = GeodesicArc(unit(1, 0, 0), unit(0, 1, 0))
    assert balance_single(p4_B(3), unit(1, 1, 1), oct_edge) == pytest.approx(9 / 25, abs=1e-14)
    edge600 = GeodesicArc(unit(1, 0, 0, 0), 0.5 * np.array([PHI, 1, 1 / PHI, 0]))
    assert balance_single(invariant_poly("H4"), unit(0, 0, 1, 1), edge600) == pytest.approx(176 / 301, abs=1e-12)
    edge24 = GeodesicArc(unit(1, 1, 0, 0), unit(1, 0, 1, 0))
    assert balance_single(invariant_poly("F4"), unit(1, 0, 0, 0), edge24) == pytest.approx(5 / 14, abs=1e-13)


def test_balance_single_zero_arc_integral():
    arc = GeodesicArc(unit(1, 0, 0), unit(0, 1, 0))
    p = p4_B(3) - 3 / 20  # shifted so the arc average vanishes
    assert balance_single(p, unit(1, 1, 1), arc) == 0.0


def test_balance_single_degenerate():
    # p4(x0) = 3/20 equals the octahedron-edge average at angle pi/8
    x0 = unit(math.cos(math.pi / 8), math.sin(math.pi / 8), 0)
    with pytest.raises(DegenerateBalance):
        balance_single(p4_B(3), x0, GeodesicArc(unit(1, 0, 0), unit(0, 1, 0)))


def test_balance_multi_two_orbits():
    arc = GeodesicArc(unit(1, 1, 0), unit(1, 0, -1))
    spec = MultiOrbitSpec(((unit(1, 1, 1), 8), (unit(1, 0, 0), 6)), ((arc, 24),), 48)
    assert balance_multi(spec, p4_B(3)) == pytest.approx(21 / 25, abs=1e-13)
    assert spec.curve_measure(p4_B(3)) == pytest.approx(-1 / 10, abs=1e-14)
    assert spec.point_measure(p4_B(3)) == pytest.approx(2 / 105, abs=1e-14)


def test_balance_multi_reduces_to_single():
    arc = GeodesicArc(unit(1, 0, 0), unit(0, 1, 0))
    x0 = unit(1, 1, 1)
    spec = MultiOrbitSpec(((x0, 8),), ((arc, 12),), 48)
    assert balance_multi(spec, p4_B(3)) == pytest.approx(balance_single(p4_B(3), x0, arc), abs=1e-14)


def test_balance_multi_incompatible_signs():
    arc = GeodesicArc(unit(1, 0, 0), unit(0, 1, 0))  # average +3/20
    spec = MultiOrbitSpec(((unit(1, 0, 0), 6),), ((arc, 12),), 48)  # p4(e1) = +2/5
    with pytest.raises(IncompatibleSigns):
        balance_multi(spec, p4_B(3))


def test_orbit_size_must_divide():
    arc = GeodesicArc(unit(1, 0, 0), unit(0, 1, 0))
    with pytest.raises(ValueError):
        MultiOrbitSpec(((unit(1, 0, 0), 7),), ((arc, 12),), 48)


def test_beta_formulas():
    oc, co = beta_formulas_d(4)
    assert oc == pytest.approx(0.5, abs=1e-15)
    assert co == pytest.approx(3 * SQ3 / (3 * SQ3 + 4 * math.pi), abs=1e-14)
    assert beta_formulas_d(3)[0] == pytest.approx(9 / 25, abs=1e-15)
    assert beta_formulas_d(2)[0] == 0.0


@pytest.mark.parametrize("d", range(3, 7))
def test_beta_formulas_match_built(d):
    oc, co = beta_formulas_d(d)
    o_name = "octahedron" if d == 3 else f"{d}-octahedron"
    c_name = "cube" if d == 3 else f"{d}-cube"
    assert hybrid.pair_balance(hybrid.get_pair(o_name, c_name))[0] == pytest.approx(oc, abs=1e-10)
    assert hybrid.pair_balance(hybrid.get_pair(c_name, o_name))[0] == pytest.approx(co, abs=1e-10)


def test_cube_octahedron_consistency():
    beta = hybrid.build_hybrid("cube", "octahedron").beta
    assert abs(beta - beta_formulas_d(3)[1]) < 1e-12


@pytest.mark.parametrize("pair", [("tetrahedron", "tetrahedron-dual"), ("cube", "octahedron"),
                                  ("24-cell", "24-cell-dual"), ("4-tetrahedron", "4-tetrahedron-dual"),
                                  ("5-cube", "5-octahedron")])
def test_build_hybrid_certifies(pair):
    design = hybrid.build_hybrid(*pair)
    assert design.cert is not None and design.cert.certified
    assert design.cert.max_residual < 1e-9
    assert design.invariant_check["passed"]
    assert 0 <= design.beta <= 1


def test_build_hybrid_default_dual():
    design = hybrid.build_hybrid("octahedron")
    assert design.beta == pytest.approx(9 / 25, abs=1e-14)


def test_600_120_fast_check():
    design = hybrid.build_hybrid("600-cell", "120-cell")
    assert design.cert is None
    chk = design.invariant_check
    assert chk["passed"] and chk["two_dimensional"]
    assert chk["invariant_residual"] < 1e-12
    assert design.beta == pytest.approx(176 / 301, abs=1e-12)


def test_unknown_pair():
    with pytest.raises(UnknownPair):
        hybrid.get_pair("cube", "icosahedron")


def test_hybrid_json():
    design = hybrid.build_hybrid("octahedron", "cube")
    data = json.loads(design.dumps())
    assert {"provenance", "beta", "claimed_t", "cycle", "points", "cert_report"} <= set(data)
    assert len(data["points"]) == 8


# --- designs from circles and triangles -------------------------------------------


def test_elementary_hybrids():
    i, ii, iii = hybrid.elementary_hybrids()
    assert i.beta == pytest.approx(0.25, abs=1e-15) and i.cert.certified and i.claimed_t == 2
    a_hat = ii.invariant_check["a_hat"]
    assert abs(a_hat - 1.359) < 2e-3 and abs(ii.beta - 0.249) < 2e-3
    assert ii.cert.certified
    assert iii.beta == pytest.approx(1 / 3) and iii.cert.certified and iii.claimed_t == 3


def test_triangle_beta_at_equator():
    # at a = pi/2 the weight formula degenerates (sin 2a = 0) toward beta = 0
    assert hybrid.beta_triangle(math.pi / 2 - 1e-9) < 1e-8


def test_root_not_bracketed():
    with pytest.raises(RootNotBracketed):
        hybrid.solve_triangle(0.1, 0.2)


# --- covering radius --------------------------------------------------------------


def test_covering_single_point():
    delta = hybrid.covering_radius(np.array([[0.0, 0.0, 1.0]]), n_test=100_000)
    assert abs(delta - math.pi) < 2e-2


def test_covering_dense_support():
    support = hybrid.fibonacci_sphere(50_000)
    assert hybrid.covering_radius(support, n_test=2000) < 0.02


def test_covering_points_help():
    cyc = euler_cycle(build_polytope("octahedron"))
    cube = build_polytope("cube").vertices
    alone = hybrid.covering_radius(hybrid.support_samples(cyc), n_test=20000)
    both = hybrid.covering_radius(hybrid.support_samples(cyc, cube), n_test=20000)
    assert both < alone


def test_covering_s3_seeded():
    support = hybrid.support_samples(points=build_polytope("600-cell").vertices)
    a = hybrid.covering_radius(support, n_test=5000, seed=3)
    b = hybrid.covering_radius(support, n_test=5000, seed=3)
    assert a == b and 0 < a < math.pi / 2


def test_support_needs_something():
    with pytest.raises(ValueError):
        hybrid.support_samples()
