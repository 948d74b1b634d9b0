"""Sphere moments, path and point averages, and design certification."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import QuadratureNotConverged, WeightsNotNormalized

QUAD_GATE = 1e-13
EXTRA_NODES = 10


def double_factorial(k):
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def sphere_moment(exponents, d=None):
    """Normalized integral of ``x^alpha`` over the unit sphere in R^n.

    ``n = len(exponents)``; when ``d`` is given it must equal ``n - 1``.
    Zero if any exponent is odd, else
    ``prod (a_i - 1)!! / prod_{k < |a|/2} (n + 2k)``.
    """
    alpha = [int(a) for a in exponents]
    n = len(alpha)
    if d is not None and d != n - 1:
        raise ValueError(f"exponent vector of length {n} does not live on S^{d}")
    if any(a < 0 for a in alpha):
        raise ValueError("exponents must be non-negative")
    if any(a % 2 for a in alpha):
        return 0.0
    half = sum(alpha) // 2
    num = math.prod(double_factorial(a - 1) for a in alpha)
    den = math.prod(n + 2 * k for k in range(half))
    return num / den


@lru_cache(maxsize=None)
def monomials_of_degree(nvars, degree):
    """Exponent rows of total degree ``degree``, lexicographically descending."""
    rows = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        rows.append(tuple(e))
    rows.sort(reverse=True)
    out = np.array(rows, dtype=np.int64).reshape(len(rows), nvars)
    out.setflags(write=False)
    return out


def monomials_up_to(nvars, degree):
    """All exponents of degree ``0..degree`` and the degree of each row."""
    blocks = [monomials_of_degree(nvars, k) for k in range(degree + 1)]
    degs = np.concatenate([np.full(len(b), k) for k, b in enumerate(blocks)])
    return np.concatenate(blocks), degs


def sphere_moments(exponents):
    return np.array([sphere_moment(e) for e in exponents])


# --- integrals of single functions -------------------------------------------


def _evaluator(p):
    return p if callable(p) else (lambda x: np.full(len(x), float(p)))


def _degree(p, default):
    return getattr(p, "degree", default)


def _gated(segment_nodes, p, n):
    """Integrate with ``n`` and ``2n`` nodes, retrying once at ``2n``/``4n``."""
    f = _evaluator(p)
    for m in (n, 2 * n):
        pts, w = segment_nodes(m)
        coarse = float(w @ f(pts))
        pts, w = segment_nodes(2 * m)
        fine = float(w @ f(pts))
        if abs(fine - coarse) < QUAD_GATE * max(1.0, abs(fine)):
            return fine
    raise QuadratureNotConverged(f"node doubling changed the integral by {abs(fine - coarse):.2e}")


def arc_integral(arc, p, normalized=False, degree=None):
    """``int_arc p`` along the unit-speed parametrization (optionally ``/ length``).

    ``p`` is a MultiPoly, any vectorized callable on ``(m, dim)`` arrays, or
    a constant. Gauss-Legendre with ``deg + 10`` nodes, accepted when
    doubling the node count changes the value by less than ``1e-13``.
    """
    deg = degree if degree is not None else _degree(p, 20)
    val = _gated(arc.nodes, p, deg + EXTRA_NODES)
    return val / arc.length if normalized else val


def cycle_average(cycle, p, degree=None):
    """Length-normalized path integral over a closed curve."""
    deg = degree if degree is not None else _degree(p, 20)
    return _gated(cycle.nodes, p, deg + EXTRA_NODES) / cycle.total_length


def point_average(points, p):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) == 0:
        raise ValueError("empty point set")
    return float(np.mean(_evaluator(p)(pts)))


# --- certification -------------------------------------------------------------


@dataclass
class CertReport:
    claimed_t: int
    tol: float
    residuals_by_degree: list
    certified: bool
    first_failing_degree: int | None
    n_monomials: int = 0
    backend: str = field(default_factory=lambda: kernels.BACKEND)

    @property
    def max_residual(self):
        return max(self.residuals_by_degree[: self.claimed_t + 1])

    @property
    def strict(self):
        """True when degree ``t + 1`` is not integrated (informational only)."""
        return self.residuals_by_degree[-1] >= self.tol

    def to_json(self):
        return {
            "claimed_t": self.claimed_t,
            "tol": self.tol,
            "residuals_by_degree": [float(r) for r in self.residuals_by_degree],
            "certified": self.certified,
            "first_failing_degree": self.first_failing_degree,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _report(residuals, degs, t, tol):
    by_deg = [float(np.max(residuals[degs == k])) for k in range(t + 2)]
    failing = [k for k, r in enumerate(by_deg) if not r < tol]
    certified = all(r < tol for r in by_deg[: t + 1])
    return CertReport(t, tol, by_deg, certified, failing[0] if failing else None, len(residuals))


def rounding_gate(n_nodes):
    """Node-doubling gate: ``1e-13``, widened to the rounding floor of an
    ``n_nodes``-term sum (``16 eps sqrt(n)``) for very long cycles."""
    return max(QUAD_GATE, 16.0 * np.finfo(float).eps * math.sqrt(n_nodes))


def curve_moments(cycle, exponents, max_degree):
    """Normalized curve moments with the node-doubling gate applied to all at once."""
    n = max_degree + EXTRA_NODES
    for m in (n, 2 * n):
        pts, w = cycle.nodes(m)
        coarse = kernels.monomial_moments(pts, w / cycle.total_length, exponents)
        pts, w = cycle.nodes(2 * m)
        fine = kernels.monomial_moments(pts, w / cycle.total_length, exponents)
        gap = float(np.max(np.abs(fine - coarse)))
        if gap < rounding_gate(len(w)):
            return fine
    raise QuadratureNotConverged(f"curve moments moved by {gap:.2e} under node doubling")


def point_moments(points, exponents, weights=None):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    w = np.full(len(pts), 1.0 / len(pts)) if weights is None else np.asarray(weights, float)
    return kernels.monomial_moments(pts, w, exponents)


def certify_design(cycle=None, points=None, beta=None, t=1, d=None, tol=1e-10):
    """Check ``beta * point average + (1 - beta) * curve average = sphere integral``.

    Every monomial of degree ``0..t+1`` is swept; the design is certified
    when all residuals of degree ``<= t`` are below ``tol``. Degree ``t+1``
    is reported but not part of the verdict.
    """
    if cycle is None and points is None:
        raise ValueError("need a cycle, a point set, or both")
    if beta is None:
        beta = 1.0 if cycle is None else (0.0 if points is None else None)
        if beta is None:
            raise ValueError("beta is required for a hybrid design")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    nvars = cycle.dim if cycle is not None else np.atleast_2d(points).shape[1]
    if d is not None and d + 1 != nvars:
        raise ValueError(f"design lives in R^{nvars}, not on S^{d}")
    ex, degs = monomials_up_to(nvars, t + 1)
    total = -sphere_moments(ex)
    if cycle is not None and beta < 1.0:
        total += (1.0 - beta) * curve_moments(cycle, ex, t + 1)
    if points is not None and beta > 0.0:
        total += beta * point_moments(points, ex)
    return _report(np.abs(total), degs, t, tol)


def weighted_point_cubature(orbits, t, d=None, tol=1e-10):
    """Certify ``sum_i w_i * mean over X_i`` for ``orbits = [(X_i, w_i), ...]``."""
    weights = [float(w) for _, w in orbits]
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise WeightsNotNormalized(f"weights sum to {math.fsum(weights)!r}")
    pts = [np.atleast_2d(np.asarray(x, dtype=float)) for x, _ in orbits]
    nvars = pts[0].shape[1]
    if d is not None and d + 1 != nvars:
        raise ValueError(f"points live in R^{nvars}, not on S^{d}")
    allp = np.concatenate(pts)
    allw = np.concatenate([np.full(len(x), w / len(x)) for x, w in zip(pts, weights)])
    ex, degs = monomials_up_to(nvars, t + 1)
    res = np.abs(kernels.monomial_moments(allp, allw, ex) - sphere_moments(ex))
    return _report(res, degs, t, tol)
