"""Closed curves on the sphere built from geodesic arcs and circle pieces."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DegenerateArrangement, DisconnectedGraph, OddDegreeWithoutDoubling
from .orthogroup import dedup_indices

CHAIN_TOL = 1e-10


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def sphere_distance(a, b):
    """Geodesic distance, stable near 0 and pi."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    return 2.0 * math.atan2(np.linalg.norm(a - b), np.linalg.norm(a + b))


@dataclass(frozen=True, eq=False)
class GeodesicArc:
    """Shortest great-circle arc from ``a`` to ``b`` with unit-speed parameter."""

    a: np.ndarray
    b: np.ndarray
    length: float = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("arc endpoints must be vectors of equal length")
        if abs(np.linalg.norm(a) - 1) > 1e-9 or abs(np.linalg.norm(b) - 1) > 1e-9:
            raise ValueError("arc endpoints must be unit vectors")
        length = sphere_distance(a, b)
        if not 1e-12 < length < math.pi - 1e-9:
            raise ValueError(f"arc endpoints must be distinct and not antipodal (dist={length})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "length", length)

    @property
    def start(self):
        return self.a

    @property
    def end(self):
        return self.b

    @property
    def dim(self):
        return self.a.shape[0]

    def at(self, s):
        """Points at arc-length parameters ``s`` (scalar or array)."""
        s = np.asarray(s, dtype=float)
        L = self.length
        sl = math.sin(L)
        return (np.sin(L - s)[..., None] * self.a + np.sin(s)[..., None] * self.b) / sl

    def nodes(self, n):
        """Gauss-Legendre nodes and weights; weights sum to ``length``."""
        x, w = np.polynomial.legendre.leggauss(n)
        half = 0.5 * self.length
        return self.at(half * (x + 1.0)), half * w

    def sample(self, k):
        return self.at(np.linspace(0.0, self.length, k))

    def reversed(self):
        return GeodesicArc(self.b, self.a)

    def transform(self, q):
        return GeodesicArc(q @ self.a, q @ self.b)

    def to_json(self):
        return {"type": "geodesic", "a": self.a.tolist(), "b": self.b.tolist()}


@dataclass(frozen=True, eq=False)
class CircleArc:
    """Piece of the circle ``{height*axis + rho*(cos t u + sin t v)}``.

    ``sweep`` is the parameter range in radians starting at ``theta0``; the
    speed is ``rho = sqrt(1 - height^2)``, so ``length = rho * sweep``.
    """

    axis: np.ndarray
    u: np.ndarray
    v: np.ndarray
    height: float
    theta0: float = 0.0
    sweep: float = 2.0 * math.pi

    def __post_init__(self):
        if not 0.0 <= abs(self.height) < 1.0:
            raise ValueError("height must lie in [0, 1)")
        if not 0.0 < self.sweep <= 2.0 * math.pi + 1e-15:
            raise ValueError("sweep must lie in (0, 2pi]")
        for name in ("axis", "u", "v"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        frame = np.stack([self.axis, self.u, self.v])
        if np.max(np.abs(frame @ frame.T - np.eye(3))) > 1e-12:
            raise ValueError("axis, u, v must be orthonormal")

    @property
    def rho(self):
        return math.sqrt(1.0 - self.height**2)

    @property
    def length(self):
        return self.rho * self.sweep

    @property
    def closed(self):
        return abs(self.sweep - 2.0 * math.pi) < 1e-15

    @property
    def dim(self):
        return self.axis.shape[0]

    def at_angle(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (
            self.height * self.axis
            + self.rho * (np.cos(theta)[..., None] * self.u + np.sin(theta)[..., None] * self.v)
        )

    @property
    def start(self):
        return self.at_angle(self.theta0)

    @property
    def end(self):
        return self.at_angle(self.theta0 + self.sweep)

    def nodes(self, n):
        """Quadrature nodes; weights sum to ``length``.

        A full circle uses the periodic trapezoid rule, exact for
        trigonometric polynomials of degree below ``n``; a partial arc uses
        Gauss-Legendre in the angle.
        """
        if self.closed:
            theta = self.theta0 + 2.0 * math.pi * np.arange(n) / n
            return self.at_angle(theta), np.full(n, self.length / n)
        x, w = np.polynomial.legendre.leggauss(n)
        half = 0.5 * self.sweep
        return self.at_angle(self.theta0 + half * (x + 1.0)), self.rho * half * w

    def sample(self, k):
        return self.at_angle(self.theta0 + np.linspace(0.0, self.sweep, k))

    def reversed(self):
        # t -> -t flips the orientation: swap the sign of v
        return CircleArc(self.axis, self.u, -self.v, self.height, -(self.theta0 + self.sweep), self.sweep)

    def transform(self, q):
        return CircleArc(q @ self.axis, q @ self.u, q @ self.v, self.height, self.theta0, self.sweep)

    def to_json(self):
        return {
            "type": "circle",
            "axis": self.axis.tolist(),
            "u": self.u.tolist(),
            "v": self.v.tolist(),
            "height": self.height,
            "theta0": self.theta0,
            "sweep": self.sweep,
        }


@dataclass(frozen=True, eq=False)
class GeodesicCycle:
    """Closed curve made of consecutive segments (geodesic or circle pieces).

    ``path`` optionally records the vertex indices visited, for cycles that
    come from a graph.
    """

    arcs: tuple
    path: tuple | None = None
    label: str = ""

    def __post_init__(self):
        arcs = tuple(self.arcs)
        if not arcs:
            raise ValueError("a cycle needs at least one segment")
        object.__setattr__(self, "arcs", arcs)
        n = len(arcs)
        for k in range(n):
            gap = np.max(np.abs(arcs[k].end - arcs[(k + 1) % n].start))
            if gap > CHAIN_TOL:
                raise ValueError(f"segments {k} and {(k + 1) % n} do not chain (gap {gap:.2e})")

    @property
    def total_length(self):
        return float(math.fsum(a.length for a in self.arcs))

    @property
    def dim(self):
        return self.arcs[0].dim

    def __len__(self):
        return len(self.arcs)

    def nodes(self, n):
        """Concatenated nodes of every segment; weights sum to ``total_length``."""
        pts, wts = zip(*(a.nodes(n) for a in self.arcs))
        return np.concatenate(pts), np.concatenate(wts)

    def transform(self, q):
        return GeodesicCycle(tuple(a.transform(q) for a in self.arcs), self.path, self.label)

    def reversed(self):
        return GeodesicCycle(tuple(a.reversed() for a in reversed(self.arcs)), None, self.label)

    def polyline(self, samples_per_arc=32):
        """Array ``(n_arcs, samples_per_arc, dim)`` of points along each segment."""
        return np.stack([a.sample(samples_per_arc) for a in self.arcs])

    def to_json(self):
        return {
            "label": self.label,
            "arcs": [a.to_json() for a in self.arcs],
            "total_length": self.total_length,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


# --- Euler cycles ------------------------------------------------------------


def is_connected(n_vertices, edges):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if n_vertices == 0:
        return True
    g = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n_vertices, n_vertices))
    ncomp, _ = connected_components(g, directed=False)
    return ncomp == 1


def euler_circuit(n_vertices, edges, start=0):
    """Vertex sequence of an Euler circuit (first vertex repeated at the end).

    Iterative Hierholzer; at every vertex the unused edge with the lowest
    neighbour index (then lowest edge id) is taken, so the result is
    reproducible.
    """
    edges = [tuple(map(int, e)) for e in edges]
    adj = [[] for _ in range(n_vertices)]
    for k, (i, j) in enumerate(edges):
        adj[i].append((j, k))
        adj[j].append((i, k))
    if any(len(a) % 2 for a in adj):
        raise OddDegreeWithoutDoubling("graph has vertices of odd degree")
    if not is_connected(n_vertices, edges):
        raise DisconnectedGraph("edge graph is not connected")
    for a in adj:
        a.sort()
    used = [False] * len(edges)
    ptr = [0] * n_vertices
    stack, circuit = [start], []
    while stack:
        v = stack[-1]
        nbrs = adj[v]
        while ptr[v] < len(nbrs) and used[nbrs[ptr[v]][1]]:
            ptr[v] += 1
        if ptr[v] == len(nbrs):
            circuit.append(stack.pop())
        else:
            w, k = nbrs[ptr[v]]
            used[k] = True
            stack.append(w)
    circuit.reverse()
    return circuit


def cycle_from_path(vertices, path, label=""):
    vertices = np.asarray(vertices, dtype=float)
    arcs = tuple(GeodesicArc(vertices[i], vertices[j]) for i, j in zip(path[:-1], path[1:]))
    return GeodesicCycle(arcs, tuple(int(i) for i in path), label)


def euler_cycle(polytope, allow_doubling=True):
    """Geodesic Euler cycle through the projected edges of ``polytope``.

    If some vertex has odd degree every edge is doubled (when allowed), so
    each original edge is traversed exactly twice.
    """
    edges = [tuple(e) for e in polytope.edges]
    n = len(polytope.vertices)
    deg = np.bincount(np.asarray(edges).ravel(), minlength=n)
    if np.any(deg % 2):
        if not allow_doubling:
            raise OddDegreeWithoutDoubling(f"{polytope.name}: odd vertex degrees and doubling disabled")
        edges = edges + edges
    path = euler_circuit(n, edges)
    return cycle_from_path(polytope.vertices, path, label=polytope.name)


# --- great-circle arrangements -----------------------------------------------


def _pole_representatives(points, tol=1e-9):
    pts = np.asarray(points, dtype=float)
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    poles = []
    for p in pts:
        if any(np.linalg.norm(np.cross(p, q)) < tol for q in poles):
            continue
        poles.append(p)
    for p in pts:
        if np.min(np.linalg.norm(pts + p, axis=1)) > 1e-7:
            raise DegenerateArrangement("point set is not closed under x -> -x")
    return np.array(poles)


def great_circle_cycle(antipodal_points, tol=1e-9):
    """Euler cycle through the arrangement of great circles with the given poles.

    Every intersection of two circles is a vertex of degree 4, so the
    arrangement graph always has an Euler cycle.
    """
    poles = _pole_representatives(antipodal_points, tol)
    if poles.shape[1] != 3:
        raise ValueError("great-circle arrangements are implemented on S^2")
    n = len(poles)
    if n < 2:
        raise DegenerateArrangement("need at least two distinct great circles")
    cand = []
    for i in range(n):
        for j in range(i + 1, n):
            c = np.cross(poles[i], poles[j])
            c /= np.linalg.norm(c)
            cand.extend([c, -c])
    cand = np.array(cand)
    keep = dedup_indices(cand, tol)
    verts = cand[keep]
    on_circle = np.abs(verts @ poles.T) < 1e-9
    if np.any(on_circle.sum(axis=1) > 2):
        raise DegenerateArrangement("three or more circles meet at one point")
    edges = []
    for c in range(n):
        idx = np.flatnonzero(on_circle[:, c])
        u = verts[idx[0]]
        v = np.cross(poles[c], u)
        ang = np.mod(np.arctan2(verts[idx] @ v, verts[idx] @ u), 2.0 * math.pi)
        order = idx[np.argsort(ang)]
        ang = np.sort(ang)
        gaps = np.diff(np.append(ang, 2.0 * math.pi))
        for k in range(len(order)):
            a_idx, b_idx = int(order[k]), int(order[(k + 1) % len(order)])
            if gaps[k] >= math.pi - 1e-9:
                # arc of length >= pi: insert the midpoint as a degree-2 vertex
                mid = math.cos(ang[k] + gaps[k] / 2) * u + math.sin(ang[k] + gaps[k] / 2) * v
                verts = np.vstack([verts, mid])
                m = len(verts) - 1
                edges.extend([(a_idx, m), (m, b_idx)])
            else:
                edges.append((a_idx, b_idx))
    path = euler_circuit(len(verts), edges)
    return cycle_from_path(verts, path, label=f"great-circles({n})")


# --- curves used by the elementary hybrids -----------------------------------


def circle_curve(height, axis=None):
    """Latitude circle at ``height`` around ``axis`` (default e3) on S^2."""
    if not 0.0 <= height < 1.0:
        raise ValueError("height must lie in [0, 1)")
    axis = np.array([0.0, 0.0, 1.0]) if axis is None else _unit(axis)
    helper = np.eye(3)[int(np.argmin(np.abs(axis)))]
    u = _unit(helper - (helper @ axis) * axis)
    v = np.cross(axis, u)
    return GeodesicCycle((CircleArc(axis, u, v, float(height)),), label=f"circle(r={height:g})")


def triangle_points(a):
    s, c = math.sin(a), math.cos(a)
    r3 = math.sqrt(3.0) / 2.0
    return np.array([[s, 0.0, c], [-0.5 * s, r3 * s, c], [-0.5 * s, -r3 * s, c]])


def triangle_curve(a):
    """Regular geodesic triangle around the north pole with vertices at height ``cos a``."""
    if not 0.0 < a <= math.pi / 2 + 1e-15:
        raise ValueError("a must lie in (0, pi/2]")
    u = triangle_points(a)
    arcs = tuple(GeodesicArc(u[k], u[(k + 1) % 3]) for k in range(3))
    return GeodesicCycle(arcs, label=f"triangle(a={a:.6g})")


def triangle_arc_length(a):
    return math.acos(0.25 + 0.75 * math.cos(2.0 * a))


# --- distances between traces ------------------------------------------------


def point_arc_distance(x, arc):
    """Geodesic distance from each row of ``x`` to a geodesic arc."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    u = arc.a
    v = _unit(arc.b - (arc.a @ arc.b) * arc.a)
    pu, pv = x @ u, x @ v
    rest = np.linalg.norm(x - np.outer(pu, u) - np.outer(pv, v), axis=1)
    theta = np.arctan2(pv, pu)
    inside = (theta >= 0.0) & (theta <= arc.length)
    to_circle = np.arctan2(rest, np.hypot(pu, pv))
    ends = np.minimum(
        2 * np.arctan2(np.linalg.norm(x - arc.a, axis=1), np.linalg.norm(x + arc.a, axis=1)),
        2 * np.arctan2(np.linalg.norm(x - arc.b, axis=1), np.linalg.norm(x + arc.b, axis=1)),
    )
    return np.where(inside, to_circle, ends)


def trace_distance(c1, c2, samples_per_arc=16):
    """Symmetric Hausdorff distance between two geodesic traces, on samples."""

    def one_way(src, dst):
        pts = src.polyline(samples_per_arc).reshape(-1, src.dim)
        best = np.full(len(pts), np.inf)
        for arc in dst.arcs:
            best = np.minimum(best, point_arc_distance(pts, arc))
        return float(best.max())

    return max(one_way(c1, c2), one_way(c2, c1))
