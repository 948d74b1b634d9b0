"""Hybrid designs: a closed curve plus a point set mixed by a balancing factor."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect
from scipy.spatial import cKDTree

from . import quad
from .cycles import GeodesicArc, circle_curve, euler_cycle, triangle_arc_length, triangle_curve
from .errors import DegenerateBalance, IncompatibleSigns, RootNotBracketed, UnknownPair
from .invariants import invariant_degree, invariant_poly
from .orthogroup import PHI, get_group, molien_dims
from .polytope import build_polytope, lookup

SQ2, SQ3, SQ5 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(5.0)
DENOM_FLOOR = 1e-14
AUTO_SWEEP_LIMIT = 5000


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


# --- balancing factors ---------------------------------------------------------


def balance_single(p_inv, x0, arc0):
    """``beta = -A / (p(x0) - A)`` with ``A`` the normalized arc integral.

    The mixture ``beta * p(x0) + (1 - beta) * A`` then vanishes.
    """
    a = quad.arc_integral(arc0, p_inv, normalized=True)
    px = float(p_inv(np.asarray(x0, dtype=float)))
    if abs(a) < DENOM_FLOOR:
        return 0.0
    den = px - a
    if abs(den) < DENOM_FLOOR:
        raise DegenerateBalance(f"p(x0) = {px!r} equals the arc average")
    return -a / den


@dataclass(frozen=True)
class MultiOrbitSpec:
    """Orbit representatives with their orbit sizes.

    ``point_orbits`` is ``[(seed, size), ...]``; ``arc_orbits`` is
    ``[(arc, size), ...]``. When ``group_order`` is given every size must
    divide it.
    """

    point_orbits: tuple
    arc_orbits: tuple
    group_order: int | None = None

    def __post_init__(self):
        if self.group_order:
            for _, size in list(self.point_orbits) + list(self.arc_orbits):
                if self.group_order % size:
                    raise ValueError(f"orbit size {size} does not divide {self.group_order}")

    def point_measure(self, p):
        total = sum(size for _, size in self.point_orbits)
        return math.fsum(size / total * float(p(np.asarray(x, float))) for x, size in self.point_orbits)

    def curve_measure(self, p):
        total = math.fsum(size * arc.length for arc, size in self.arc_orbits)
        return math.fsum(
            size * arc.length / total * quad.arc_integral(arc, p, normalized=True)
            for arc, size in self.arc_orbits
        )


def balance_multi(spec, p_inv):
    """``beta = -I1 / (I0 - I1)`` for the point measure ``I0`` and curve measure ``I1``."""
    i0 = spec.point_measure(p_inv)
    i1 = spec.curve_measure(p_inv)
    if abs(i1) < DENOM_FLOOR:
        return 0.0
    if abs(i0) < DENOM_FLOOR:
        return 1.0
    if (i0 > 0) == (i1 > 0):
        raise IncompatibleSigns(f"point and curve integrals share a sign ({i0:.3g}, {i1:.3g})")
    return -i1 / (i0 - i1)


def beta_formulas_d(d):
    """Closed-form ``(beta_oct/cube, beta_cube/oct)`` for the d-octahedron/d-cube pair."""
    if d < 2:
        raise ValueError("d must be at least 2")
    oct_cube = 3 * d * (d - 2) / (3 * d * d + 2 * d - 8)
    ac = math.acos((d - 2) / d)
    r = math.sqrt(d - 1)
    cube_oct = (
        3 * (d - 2) / (d + 2)
        * (2 * (d + 2) * r - d * (d - 4) * ac)
        / (6 * (d - 2) * r + d * (5 * d - 8) * ac)
    )
    return oct_cube, cube_oct


# --- pair registry -------------------------------------------------------------


@dataclass(frozen=True)
class HybridPair:
    """Registered (curve polytope, point polytope) combination.

    ``arc`` fixes the representative edge used for the balancing factor
    (None: first edge of the built polytope). ``point_seeds`` lists one
    representative per point orbit; more than one seed switches to the
    multi-orbit balance.
    """

    primal: str
    dual: str
    group: str
    s: int
    beta_closed: float
    provenance: str
    point_seeds: tuple
    arc: tuple | None = None


def _x(*v):
    return tuple(_unit(v).tolist())


def _pairs():
    ac13 = math.acos(1 / 3)
    x_ico, x_dode = _x(PHI, 1, 0), _x(1, 1, 1)
    rt = math.acos(math.sqrt(1 / 3 + 2 / (3 * SQ5)))
    u1 = _x(0, 0, 1, -1)
    u2 = tuple((np.array([0.0, -SQ5, PHI - 1, PHI]) / (2 * SQ2)).tolist())
    out = [
        HybridPair("tetrahedron", "tetrahedron-dual", "A3", 3,
                   4 / (4 + 3 * SQ2 * math.acos(-1 / 3)), "dual pair, tetrahedron",
                   (_x(1, 1, -1),), (_x(1, 1, 1), _x(1, -1, -1))),
        HybridPair("cube", "octahedron", "B3", 5,
                   (10 * SQ2 + 3 * ac13) / (10 * SQ2 + 35 * ac13), "dual pair, cube/octahedron",
                   ((1.0, 0.0, 0.0),), (_x(-1, 1, 1), _x(1, 1, 1))),
        HybridPair("rhombic dodecahedron", "cuboctahedron", "B3", 5,
                   (10 - 3 * SQ2 * math.acos(1 / SQ3)) / (10 + 5 * SQ2 * math.acos(1 / SQ3)),
                   "dual pair, rhombic dodecahedron/cuboctahedron",
                   (_x(1, 1, 0),), (_x(1, 1, 1), (1.0, 0.0, 0.0))),
        HybridPair("dodecahedron", "icosahedron", "H3", 9,
                   (1190 * SQ5 - 675 * math.acos(SQ5 / 3)) / (1190 * SQ5 + 6237 * math.acos(SQ5 / 3)),
                   "dual pair, dodecahedron/icosahedron", (x_ico,)),
        HybridPair("icosahedron", "dodecahedron", "H3", 9,
                   (126 + 45 * math.acos(1 / SQ5)) / (126 + 301 * math.acos(1 / SQ5)),
                   "dual pair, icosahedron/dodecahedron", (x_dode,)),
        HybridPair("rhombic triacontahedron", "icosidodecahedron", "H3", 9,
                   (7 * (17 * SQ5 - 27) + 135 * rt) / (7 * (17 * SQ5 - 27) + 567 * rt),
                   "dual pair, rhombic triacontahedron/icosidodecahedron", ((1.0, 0.0, 0.0),)),
        HybridPair("cuboctahedron", "rhombic dodecahedron", "B3", 5, 21 / 25,
                   "orbit union, cuboctahedron/rhombic dodecahedron",
                   (_x(1, 1, 1), (1.0, 0.0, 0.0)), (_x(1, 1, 0), _x(1, 0, -1))),
        HybridPair("cuboctahedron", "octahedron", "B3", 5, 1 / 5,
                   "orbit union, cuboctahedron/octahedron",
                   ((1.0, 0.0, 0.0),), (_x(1, 1, 0), _x(1, 0, -1))),
        HybridPair("icosidodecahedron", "rhombic triacontahedron", "H3", 9, 45 / 49,
                   "orbit union, icosidodecahedron/rhombic triacontahedron", (x_ico, x_dode)),
        HybridPair("icosidodecahedron", "icosahedron", "H3", 9, 5 / 21,
                   "orbit union, icosidodecahedron/icosahedron", (x_ico,)),
        HybridPair("600-cell", "120-cell", "H4", 19, 176 / 301, "dual pair, 600-cell/120-cell",
                   (_x(0, 0, 1, 1),), ((1.0, 0.0, 0.0, 0.0), tuple((np.array([PHI, 1, 1 / PHI, 0]) / 2).tolist()))),
        HybridPair("24-cell", "24-cell-dual", "F4", 7, 5 / 14, "dual pair, 24-cell",
                   ((1.0, 0.0, 0.0, 0.0),)),
        HybridPair("4-tetrahedron", "4-tetrahedron-dual", "A4", 3,
                   8 * math.sqrt(15) / (8 * math.sqrt(15) + 27 * math.acos(-1 / 4)),
                   "dual pair, 4-tetrahedron", (tuple((-np.array(u1)).tolist()),), (u1, u2)),
    ]
    for d in range(3, 7):
        oc, co = beta_formulas_d(d)
        o_name = "octahedron" if d == 3 else f"{d}-octahedron"
        c_name = "cube" if d == 3 else f"{d}-cube"
        ones = tuple(_unit(np.ones(d)).tolist())
        flip = np.ones(d)
        flip[0] = -1
        e1, e2 = tuple(np.eye(d)[0]), tuple(np.eye(d)[1])
        out.append(HybridPair(o_name, c_name, f"B{d}", 5, oc, f"dual pair, {d}-octahedron/{d}-cube",
                              (ones,), (e1, e2)))
        if d > 3:
            out.append(HybridPair(c_name, o_name, f"B{d}", 5, co, f"dual pair, {d}-cube/{d}-octahedron",
                                  (e1,), (tuple(_unit(flip).tolist()), ones)))
    return {(p.primal, p.dual): p for p in out}


_PAIRS = None


def pairs():
    global _PAIRS
    if _PAIRS is None:
        _PAIRS = _pairs()
    return _PAIRS


#: dual pairs on S^2 (cycle polytope, point polytope), and the orbit-union pairs
DUAL_PAIRS = (
    ("tetrahedron", "tetrahedron-dual"),
    ("octahedron", "cube"),
    ("cube", "octahedron"),
    ("rhombic dodecahedron", "cuboctahedron"),
    ("dodecahedron", "icosahedron"),
    ("icosahedron", "dodecahedron"),
    ("rhombic triacontahedron", "icosidodecahedron"),
)
ORBIT_UNION_PAIRS = (
    ("cuboctahedron", "rhombic dodecahedron"),
    ("cuboctahedron", "octahedron"),
    ("icosidodecahedron", "rhombic triacontahedron"),
    ("icosidodecahedron", "icosahedron"),
)


def get_pair(primal, dual=None):
    primal = lookup(primal).name
    if dual is None:
        dual = lookup(primal).dual_name
    else:
        dual = lookup(dual).name
    try:
        return pairs()[(primal, dual)]
    except KeyError:
        raise UnknownPair(f"{primal}/{dual}") from None


# --- assembled designs ---------------------------------------------------------


@dataclass(eq=False)
class HybridDesign:
    cycle: object
    points: np.ndarray
    beta: float
    claimed_t: int
    provenance: str
    beta_closed: float | None = None
    cert: quad.CertReport | None = None
    invariant_check: dict = field(default_factory=dict)

    @property
    def certified(self):
        if self.cert is not None:
            return self.cert.certified
        return bool(self.invariant_check.get("passed", False))

    def to_json(self):
        return {
            "provenance": self.provenance,
            "beta": self.beta,
            "claimed_t": self.claimed_t,
            "cycle": self.cycle.to_json(),
            "points": np.asarray(self.points).tolist(),
            "cert_report": self.cert.to_json() if self.cert is not None else None,
            "invariant_check": self.invariant_check,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _representative_arc(pair, primal):
    if pair.arc is not None:
        a, b = (np.array(v) for v in pair.arc)
        i = int(np.argmin(np.linalg.norm(primal.vertices - a, axis=1)))
        j = int(np.argmin(np.linalg.norm(primal.vertices - b, axis=1)))
        if not np.any(np.all(np.sort(primal.edges, axis=1) == sorted((i, j)), axis=1)):
            raise ValueError(f"{pair.primal}: registered arc is not an edge")
        return GeodesicArc(a, b)
    i, j = primal.edges[0]
    return GeodesicArc(primal.vertices[i], primal.vertices[j])


def pair_balance(pair):
    """``(beta, multi-orbit spec, arc)`` for a registered pair."""
    group = get_group(pair.group)
    primal = build_polytope(pair.primal)
    dual = build_polytope(pair.dual)
    p_inv = invariant_poly(pair.group)
    arc = _representative_arc(pair, primal)
    seeds = [np.array(s) for s in pair.point_seeds]
    if len(seeds) == 1:
        spec = MultiOrbitSpec(((seeds[0], len(dual.vertices)),), ((arc, len(primal.edges)),), group.order)
        beta = balance_single(p_inv, seeds[0], arc)
    else:
        sizes = [int(np.sum(dual.orbit_labels == k)) for k in range(len(seeds))]
        spec = MultiOrbitSpec(tuple(zip(seeds, sizes)), ((arc, len(primal.edges)),), group.order)
        beta = balance_multi(spec, p_inv)
    return beta, spec, arc


def invariant_space_check(group_name, s, spec, beta, tol=1e-10):
    """Cheap certificate: the invariants up to degree ``s`` are spanned by 1 and
    ``p_inv``, and the mixture integrates ``p_inv`` to zero."""
    group = get_group(group_name)
    dims = molien_dims(group, s).dims
    deg = invariant_degree(group_name)
    two_dim = dims[0] == 1 and dims[deg] == 1 and sum(dims[1:]) == 1
    p_inv = invariant_poly(group_name)
    residual = abs(beta * spec.point_measure(p_inv) + (1 - beta) * spec.curve_measure(p_inv))
    return {
        "molien_dims": list(dims),
        "two_dimensional": bool(two_dim),
        "invariant_residual": residual,
        "passed": bool(two_dim and residual < tol),
    }


def build_hybrid(primal, dual=None, full_sweep=None, tol=1e-10):
    """Assemble and certify a registered hybrid design.

    The invariant-space check always runs. The full monomial sweep runs
    when ``full_sweep`` is True, or when it is None and the sweep has at
    most ``AUTO_SWEEP_LIMIT`` monomials.
    """
    pair = get_pair(primal, dual)
    beta, spec, _ = pair_balance(pair)
    if not 0.0 <= beta <= 1.0:
        raise IncompatibleSigns(f"{pair.primal}/{pair.dual}: beta = {beta} outside [0, 1]")
    cycle = euler_cycle(build_polytope(pair.primal))
    points = build_polytope(pair.dual).vertices
    check = invariant_space_check(pair.group, pair.s, spec, beta, tol)
    design = HybridDesign(cycle, points, beta, pair.s, pair.provenance, pair.beta_closed, None, check)
    if full_sweep is None:
        full_sweep = math.comb(cycle.dim + pair.s + 1, cycle.dim) <= AUTO_SWEEP_LIMIT
    if full_sweep:
        design.cert = quad.certify_design(cycle, points, beta, pair.s, tol=tol)
    return design


# --- designs from a circle or triangle and the poles ---------------------------

SOUTH = np.array([0.0, 0.0, -1.0])
NORTH = np.array([0.0, 0.0, 1.0])


def beta_triangle(a):
    """Balancing factor that makes the triangle + south pole integrate ``z``."""
    s2 = math.sin(2 * a)
    return 1.0 / (1.0 + math.sqrt(5 + 3 * math.cos(2 * a)) / (math.sqrt(6) * s2) * triangle_arc_length(a))


def _triangle_gap(a):
    # E_1(a) - E_3(a): mixture of x^2 minus mixture of z^2
    beta = beta_triangle(a)
    cyc = triangle_curve(a)
    ex2 = quad.cycle_average(cyc, lambda x: x[:, 0] ** 2, degree=2)
    ez2 = quad.cycle_average(cyc, lambda x: x[:, 2] ** 2, degree=2)
    return (1 - beta) * ex2 - (beta * 1.0 + (1 - beta) * ez2)


def solve_triangle(lo=1e-3, hi=math.pi / 2 - 1e-3, xtol=1e-12):
    """Height parameter ``a`` at which the triangle + south pole is a 2-design."""
    flo, fhi = _triangle_gap(lo), _triangle_gap(hi)
    if flo * fhi > 0:
        raise RootNotBracketed(f"E1 - E3 keeps its sign on [{lo}, {hi}]")
    a = bisect(_triangle_gap, lo, hi, xtol=xtol)
    return a, beta_triangle(a)


def elementary_hybrids(tol=1e-10):
    """The three small hybrids on S^2 built from circles, a triangle and the poles."""
    out = []
    r = 1.0 / 3.0
    beta = r / (1 + r)
    cyc = circle_curve(r)
    pts = SOUTH[None, :]
    out.append(HybridDesign(cyc, pts, beta, 2, "circle at height 1/3 + south pole", 0.25,
                            quad.certify_design(cyc, pts, beta, 2, tol=tol)))
    a, beta = solve_triangle()
    cyc = triangle_curve(a)
    d = HybridDesign(cyc, pts, beta, 2, f"triangle at a={a:.6f} + south pole", None,
                     quad.certify_design(cyc, pts, beta, 2, tol=tol))
    d.invariant_check = {"a_hat": a}
    out.append(d)
    cyc = circle_curve(0.0)
    pts = np.stack([NORTH, SOUTH])
    out.append(HybridDesign(cyc, pts, 1 / 3, 3, "equator + both poles", 1 / 3,
                            quad.certify_design(cyc, pts, 1 / 3, 3, tol=tol)))
    return out


# --- covering radius -----------------------------------------------------------


def fibonacci_sphere(n):
    """Quasi-uniform Fibonacci lattice on S^2."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    phi = math.pi * (3.0 - SQ5) * k
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def probe_points(dim, n, seed=0):
    if dim == 3:
        return fibonacci_sphere(n)
    x = np.random.default_rng(seed).standard_normal((n, dim))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def support_samples(cycle=None, points=None, per_arc=64):
    """Point cloud for the support of a design (arcs sampled at ``per_arc`` points)."""
    parts = []
    if cycle is not None:
        parts.append(cycle.polyline(max(per_arc, 64)).reshape(-1, cycle.dim))
    if points is not None:
        parts.append(np.atleast_2d(np.asarray(points, dtype=float)))
    if not parts:
        raise ValueError("empty support")
    return np.concatenate(parts)


def covering_radius(support, n_test=20000, seed=0):
    """Estimated ``sup_x min_y dist(x, y)`` over quasi-uniform test points.

    This is an estimate from below, limited by the test-point spacing and by
    the arc sampling of the support.
    """
    support = np.atleast_2d(np.asarray(support, dtype=float))
    tests = probe_points(support.shape[1], n_test, seed)
    chord, _ = cKDTree(support).query(tests)
    return float(np.max(2.0 * np.arcsin(np.minimum(chord / 2.0, 1.0))))
