"""Finite reflection groups as explicit sets of orthogonal matrices.

Groups are generated by closing a set of reflections (or other orthogonal
generators) under multiplication. Elements are deduplicated at a small
tolerance, so groups with irrational entries (H3, H4) need no exact
arithmetic.
"""
from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .errors import ClosureOverflow, NonIntegerCoefficient, UnknownGroup

PHI = (1.0 + math.sqrt(5.0)) / 2.0

#: group orders for the named groups (exact)
KNOWN_ORDERS = {
    "A3": 24,
    "B3": 48,
    "H3": 120,
    "A4": 120,
    "F4": 1152,
    "H4": 14400,
}

_FAMILY = re.compile(r"^([ABD])(\d+)$")


def known_order(name):
    """Order of a named group, or ``None`` for unlabeled groups."""
    if name in KNOWN_ORDERS:
        return KNOWN_ORDERS[name]
    m = _FAMILY.match(name or "")
    if not m:
        return None
    kind, d = m.group(1), int(m.group(2))
    if kind == "A":
        return math.factorial(d + 1)
    if kind == "B":
        return 2**d * math.factorial(d)
    return 2 ** (d - 1) * math.factorial(d)


def homogeneity(name):
    """Largest t for which every orbit of the named group is a t-design."""
    if name in ("H3", "F4"):
        return 5
    if name == "H4":
        return 11
    m = _FAMILY.match(name or "")
    if m:
        return 2 if m.group(1) == "A" else 3
    return None


def reflection(v):
    """Householder reflection ``I - 2 v v^T / |v|^2``."""
    v = np.asarray(v, dtype=float)
    nrm2 = float(v @ v)
    if nrm2 == 0.0:
        raise ValueError("root must be nonzero")
    return np.eye(v.size) - (2.0 / nrm2) * np.outer(v, v)


_HASH_MIX = np.random.default_rng(20240601).integers(1, 2**62, size=4096, dtype=np.int64) | 1


def grid_hashes(rows, tol):
    """Two integer hashes per row: rounded to the ``tol`` grid, and to the
    same grid shifted by half a cell.

    Two rows closer than a small fraction of ``tol`` share at least one of
    the hashes unless they straddle cell boundaries of both grids at once.
    """
    u = np.asarray(rows, dtype=float) / tol
    mix = _HASH_MIX[: u.shape[1]]
    # wrapping integer arithmetic is intended here
    with np.errstate(over="ignore"):
        ha = np.round(u).astype(np.int64) @ mix
        hb = np.round(u + 0.5).astype(np.int64) @ mix
    return ha, hb


def dedup_indices(rows, tol):
    """Indices of representative rows, in order of first appearance.

    Rows sharing either grid hash (see ``grid_hashes``) are identified, and
    the identification is closed transitively.
    """
    rows = np.asarray(rows, dtype=float)
    if len(rows) == 0:
        return np.zeros(0, dtype=int)
    ha, hb = grid_hashes(rows, tol)
    _, inv_a = np.unique(ha, return_inverse=True)
    _, inv_b = np.unique(hb, return_inverse=True)
    inv_a, inv_b = inv_a.reshape(-1), inv_b.reshape(-1)
    label = inv_a.copy()
    while True:
        low_b = np.full(inv_b.max() + 1, len(rows))
        np.minimum.at(low_b, inv_b, label)
        low_a = np.full(inv_a.max() + 1, len(rows))
        np.minimum.at(low_a, inv_a, low_b[inv_b])
        new = low_a[inv_a]
        if np.array_equal(new, label):
            break
        label = new
    _, idx = np.unique(label, return_index=True)
    idx.sort()
    return idx


def sort_points(points, tol=1e-9):
    """Deterministic order: lexicographically descending coordinates."""
    keys = np.round(np.asarray(points) / tol).astype(np.int64)
    order = np.lexsort((-keys).T[::-1])
    return np.asarray(points)[order]


@dataclass(frozen=True, eq=False)
class FiniteOrthGroup:
    """A finite group of orthogonal matrices, stored element by element."""

    name: str
    elements: np.ndarray = field(repr=False)
    generators: np.ndarray = field(repr=False)
    homogeneity_t: int | None = None

    @property
    def dim(self):
        return self.elements.shape[1]

    @property
    def order(self):
        return self.elements.shape[0]

    def __len__(self):
        return self.order

    def act(self, x):
        """All images ``g x``; shape ``(|G|, dim)``."""
        return self.elements @ np.asarray(x, dtype=float)

    def contains(self, m, tol=1e-9):
        diff = np.abs(self.elements - np.asarray(m)[None]).reshape(self.order, -1)
        return bool((diff.max(axis=1) < tol).any())

    def vertex_permutations(self, vertices, tol=1e-9):
        """Permutation ``perm[g, i]`` with ``g v_i = v_{perm[g, i]}``.

        Raises ``ValueError`` if some image is not among the vertices.
        """
        v = np.asarray(vertices, dtype=float)
        images = np.einsum("gij,kj->gki", self.elements, v)
        dist, idx = cKDTree(v).query(images.reshape(-1, v.shape[1]), p=np.inf)
        if dist.max() > 1e-7:
            raise ValueError("vertex set is not invariant under the group")
        return idx.reshape(self.order, len(v))

    def to_json(self):
        return {
            "name": self.name,
            "dim": int(self.dim),
            "order": int(self.order),
            "elements": [[float(a) for a in g.ravel()] for g in self.elements],
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def close_group(generators, dedup_tol=1e-9, name="", cap=None, homogeneity_t=None):
    """Closure of ``generators`` under matrix product (breadth-first).

    Parameters
    ----------
    generators : sequence of (n, n) orthogonal matrices
    dedup_tol : float
        Elements whose entries agree to this tolerance are identified.
    name : str
        Group label. Labels with a known order are checked against it.
    cap : int, optional
        Element cap; defaults to ten times the known order, else 100000.
    """
    gens = np.asarray(generators, dtype=float)
    if gens.ndim == 2:
        gens = gens[None]
    n = gens.shape[1]
    expected = known_order(name)
    if cap is None:
        cap = 10 * expected if expected else 100_000

    gidx = dedup_indices(gens.reshape(len(gens), -1), dedup_tol)
    gens = gens[gidx]

    flat = np.eye(n).reshape(1, -1)
    known_a, known_b = grid_hashes(flat, dedup_tol)
    frontier = np.eye(n)[None]
    while len(frontier):
        cand = np.einsum("fij,gjk->fgik", frontier, gens).reshape(-1, n * n)
        cand = cand[dedup_indices(cand, dedup_tol)]
        ha, hb = grid_hashes(cand, dedup_tol)
        new = ~(np.isin(ha, known_a) | np.isin(hb, known_b))
        fresh = cand[new]
        if not len(fresh):
            break
        flat = np.concatenate([flat, fresh])
        known_a = np.concatenate([known_a, ha[new]])
        known_b = np.concatenate([known_b, hb[new]])
        if len(flat) > cap:
            raise ClosureOverflow(
                f"closure of {name or 'unlabeled'} generators exceeded {cap} elements"
            )
        frontier = fresh.reshape(-1, n, n)

    elems = flat.reshape(-1, n, n)
    if expected is not None and len(elems) != expected:
        raise ClosureOverflow(
            f"group {name} closed with {len(elems)} elements, expected {expected}"
        )
    return FiniteOrthGroup(name, elems, gens, homogeneity_t or homogeneity(name))


def generate_group(roots, dedup_tol=1e-9, name="", cap=None):
    """Group generated by the reflections in the given roots."""
    return close_group([reflection(r) for r in roots], dedup_tol, name, cap)


def orbit(group, seed, tol=1e-9):
    """Distinct points ``g seed``, sorted deterministically."""
    pts = group.act(seed)
    return sort_points(pts[dedup_indices(pts, tol)], tol)


def reynolds_eval(group, p, x):
    """Group average ``(1/|G|) sum_g p(g x)``.

    ``p`` takes an ``(m, dim)`` array and returns ``m`` values. ``x`` may be a
    single point or a stack of points.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    xs = np.atleast_2d(x)
    imgs = np.einsum("gij,kj->kgi", group.elements, xs).reshape(-1, group.dim)
    vals = np.asarray(p(imgs), dtype=float).reshape(len(xs), group.order)
    out = vals.mean(axis=1)
    return float(out[0]) if single else out


@dataclass(frozen=True)
class MolienTable:
    group: str
    dims: list


def molien_dims(group, l_max, int_tol=1e-6):
    """Dimensions of the invariant harmonic spaces, degrees ``0..l_max``.

    Expands ``(1/|G|) sum_g (1 - w^2) / det(I - w g)`` as a power series.
    Each ``1/det(I - w g)`` is the reciprocal of a polynomial with constant
    term 1, expanded by the usual recurrence.
    """
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    n = group.dim
    eig = np.linalg.eigvals(group.elements)  # (N, n)
    # det(I - w g) = prod (1 - lambda w), coefficients in ascending powers
    c = np.zeros((group.order, n + 1), dtype=complex)
    c[:, 0] = 1.0
    for i in range(n):
        c[:, 1:] = c[:, 1:] - eig[:, i : i + 1] * c[:, :-1]
    r = np.zeros((group.order, l_max + 1), dtype=complex)
    r[:, 0] = 1.0
    for k in range(1, l_max + 1):
        top = min(k, n)
        r[:, k] = -np.einsum("gj,gj->g", c[:, 1 : top + 1], r[:, k - 1 :: -1][:, :top])
    series = r.mean(axis=0)
    harmonic = series.copy()
    harmonic[2:] -= series[:-2]
    real = harmonic.real
    rounded = np.rint(real)
    bad = np.flatnonzero((np.abs(real - rounded) > int_tol) | (np.abs(harmonic.imag) > int_tol))
    if len(bad):
        k = int(bad[0])
        raise NonIntegerCoefficient(
            f"Molien coefficient {k} of {group.name} is {harmonic[k]!r}, not an integer"
        )
    return MolienTable(group.name, [int(v) for v in rounded])


# --- named groups -----------------------------------------------------------


def _signed_unit(n):
    return [np.eye(n)[i] for i in range(n)]


def roots_B(d):
    """Root system of B_d: all ``+-e_i`` and ``+-e_i +- e_j``."""
    e = np.eye(d)
    roots = [s * e[i] for i in range(d) for s in (1, -1)]
    for i, j in itertools.combinations(range(d), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            roots.append(si * e[i] + sj * e[j])
    return roots


def roots_D(d):
    e = np.eye(d)
    roots = []
    for i, j in itertools.combinations(range(d), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            roots.append(si * e[i] + sj * e[j])
    return roots


def even_permutations(n):
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        if inversions % 2 == 0:
            yield perm


def roots_H4():
    """The 120 vertices of the 600-cell, used as the H4 root system."""
    roots = [0.5 * np.array(s, dtype=float) for s in itertools.product((1, -1), repeat=4)]
    roots += [s * np.eye(4)[i] for i in range(4) for s in (1, -1)]
    base = (PHI, 1.0, 1.0 / PHI, 0.0)
    for perm in even_permutations(4):
        for signs in itertools.product((1, -1), repeat=3):
            v = np.zeros(4)
            vals = [signs[0] * base[0], signs[1] * base[1], signs[2] * base[2], 0.0]
            for src, dst in enumerate(perm):
                v[dst] = vals[src]
            roots.append(0.5 * v)
    return roots


def simplex_basis(d):
    """Orthonormal basis (columns) of the sum-zero hyperplane in R^{d+1}."""
    m = np.eye(d + 1) - 1.0 / (d + 1)
    q, _ = np.linalg.qr(m[:, :d])
    return q


def _group_A(d):
    if d == 3:
        # permutations with an even number of sign changes (index 2 in B3)
        return generate_group(roots_D(3), name="A3")
    if d == 4:
        roots = [np.eye(4)[0], np.eye(4)[1], np.ones(4), np.array([0.0, 1 - PHI, PHI - 2, 1.0])]
        return generate_group(roots, name="A4")
    q = simplex_basis(d)
    e = np.eye(d + 1)
    simple = [q.T @ (e[i] - e[i + 1]) for i in range(d)]
    return generate_group(simple, name=f"A{d}")


def _group_B(d):
    e = np.eye(d)
    simple = [e[i] - e[i + 1] for i in range(d - 1)] + [e[d - 1]]
    return generate_group(simple, name=f"B{d}")


def _group_D(d):
    e = np.eye(d)
    simple = [e[i] - e[i + 1] for i in range(d - 1)] + [e[d - 2] + e[d - 1]]
    return generate_group(simple, name=f"D{d}")


def _group_H3():
    # sign changes and even (cyclic) coordinate permutations, plus the
    # reflection in (phi, 1/phi, 1)
    cyc = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    gens = [reflection(v) for v in _signed_unit(3)] + [cyc]
    gens.append(reflection([PHI, 1.0 / PHI, 1.0]))
    return close_group(gens, name="H3")


def _group_F4():
    roots = [
        [0.0, 1.0, -1.0, 0.0],
        [0.0, 0.0, 1.0, -1.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, -1.0, -1.0, -1.0],
    ]
    return generate_group(roots, name="F4")


@lru_cache(maxsize=None)
def get_group(name):
    """Named group: ``A3, B3, H3, A4, F4, H4`` or a family member ``Ad, Bd, Dd``.

    For the families the index is the ambient dimension (``B4`` acts on R^4).
    """
    if name == "H3":
        return _group_H3()
    if name == "F4":
        return _group_F4()
    if name == "H4":
        return generate_group(roots_H4(), name="H4")
    m = _FAMILY.match(name)
    if m:
        kind, d = m.group(1), int(m.group(2))
        if kind == "A" and d >= 2:
            return _group_A(d)
        if kind == "B" and d >= 2:
            return _group_B(d)
        if kind == "D" and d >= 4:
            return _group_D(d)
    raise UnknownGroup(name)
