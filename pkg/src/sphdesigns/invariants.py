"""Sparse polynomials and the explicit invariants of the reflection groups."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

from . import kernels
from .errors import UnknownGroup, VanishingAverage
from .orthogroup import PHI, orbit

SQRT5 = math.sqrt(5.0)


class MultiPoly:
    """Polynomial in ``nvars`` variables stored as ``{exponents: coefficient}``.

    Zero coefficients are never stored. Evaluation accepts one point or an
    ``(m, nvars)`` stack and goes through the monomial kernel.
    """

    __slots__ = ("nvars", "terms", "_packed")

    def __init__(self, terms, nvars):
        self.nvars = int(nvars)
        clean = {}
        for exps, c in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError(f"exponent {exps} has wrong length for {nvars} variables")
            if c != 0:
                clean[exps] = clean.get(exps, 0.0) + float(c)
        self.terms = {k: v for k, v in clean.items() if v != 0.0}
        self._packed = None

    # constructors
    @classmethod
    def const(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1.0}, nvars)

    @classmethod
    def monomial(cls, exps, coefficient=1.0):
        return cls({tuple(exps): coefficient}, len(exps))

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable counts differ")
            return other
        if isinstance(other, Number):
            return MultiPoly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return MultiPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({k: -v for k, v in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                out[k] = out.get(k, 0.0) + va * vb
        return MultiPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0 or int(k) != k:
            raise ValueError("only non-negative integer powers")
        out = MultiPoly.const(1.0, self.nvars)
        for _ in range(int(k)):
            out = out * self
        return out

    def scale(self, c):
        return MultiPoly({k: c * v for k, v in self.terms.items()}, self.nvars)

    # queries
    @property
    def degree(self):
        return max((sum(k) for k in self.terms), default=0)

    def __len__(self):
        return len(self.terms)

    def packed(self):
        """``(exponents, coefficients)`` arrays in sorted term order."""
        if self._packed is None:
            keys = sorted(self.terms)
            ex = np.array(keys, dtype=np.int64).reshape(len(keys), self.nvars)
            co = np.array([self.terms[k] for k in keys], dtype=float)
            self._packed = (ex, co)
        return self._packed

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        ex, co = self.packed()
        vals = kernels.poly_eval(np.ascontiguousarray(np.atleast_2d(x)), ex, co)
        return float(vals[0]) if single else vals

    def sphere_integral(self):
        """Normalized integral over the unit sphere, term by term."""
        from .quad import sphere_moment

        return float(sum(c * sphere_moment(k) for k, c in self.terms.items()))

    def max_abs_diff(self, other):
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) for k in keys), default=0.0)

    def __repr__(self):
        return f"MultiPoly(nvars={self.nvars}, terms={len(self.terms)}, degree={self.degree})"

    def to_json(self):
        return {
            "nvars": self.nvars,
            "terms": [
                {"exponents": list(k), "coefficient": self.terms[k]} for k in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls({tuple(t["exponents"]): t["coefficient"] for t in data["terms"]}, data["nvars"])


def variables(n):
    return [MultiPoly.var(i, n) for i in range(n)]


def monomial_symmetric(partition, nvars):
    """Monomial symmetric polynomial: sum of the distinct monomials whose
    exponent multiset is ``partition`` (padded with zeros)."""
    parts = list(partition) + [0] * (nvars - len(partition))
    if len(parts) != nvars:
        raise ValueError("partition longer than the number of variables")
    return MultiPoly({p: 1.0 for p in set(itertools.permutations(parts))}, nvars)


def vandermonde_squares(nvars):
    """``prod_{i<j} (x_i^2 - x_j^2)``."""
    xs = variables(nvars)
    out = MultiPoly.const(1.0, nvars)
    for i, j in itertools.combinations(range(nvars), 2):
        out = out * (xs[i] ** 2 - xs[j] ** 2)
    return out


# --- Gegenbauer polynomials with alpha = 1 ----------------------------------


@dataclass(frozen=True)
class GegenbauerC1:
    """``C^(1)_l`` (Chebyshev of the second kind), ascending coefficients."""

    degree: int
    coefficients: np.ndarray

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)


def gegenbauer_c1(l):
    """``C^(1)_l`` from ``U_{k+1} = 2x U_k - U_{k-1}``; ``C^(1)_l(1) = l + 1``."""
    if l < 0:
        raise ValueError("degree must be non-negative")
    prev, cur = np.zeros(1), np.array([1.0])
    for _ in range(l):
        nxt = np.zeros(len(cur) + 1)
        nxt[1:] = 2.0 * cur
        nxt[: len(prev)] -= prev
        prev, cur = cur, nxt
    return GegenbauerC1(l, cur)


class AveragedGegenbauer:
    """``x -> (1/|G|) sum_g C^(1)_l(<a, g x>)``.

    The average over ``g`` equals the average over the orbit of ``a`` under
    the transposes, which is the orbit of ``a`` itself since the group is
    closed under transposition; each orbit point carries equal multiplicity.
    """

    def __init__(self, group, a, l):
        self.group = group
        self.l = l
        self.a = np.asarray(a, dtype=float) / np.linalg.norm(a)
        self.directions = orbit(group, self.a)
        self.poly = gegenbauer_c1(l)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        vals = self.poly(np.atleast_2d(x) @ self.directions.T).mean(axis=1)
        return float(vals[0]) if single else vals


def averaged_gegenbauer(group, a, l, n_test=32, seed=0):
    """Group-averaged Gegenbauer invariant of degree ``l`` seeded at ``a``."""
    f = AveragedGegenbauer(group, a, l)
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n_test, group.dim))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    if np.max(np.abs(f(pts))) < 1e-12:
        raise VanishingAverage(f"average of C_{l} over {group.name} vanishes for a={a}")
    return f


# --- the explicit invariants -------------------------------------------------


def p3_A3():
    x, y, z = variables(3)
    return x * y * z


def p4_B(d):
    """``x_1^4 + ... + x_d^4 - 3/(d+2)``."""
    xs = variables(d)
    return sum((v**4 for v in xs), MultiPoly.const(0.0, d)) - 3.0 / (d + 2)


def p0_H3():
    x, y, z = variables(3)
    f = PHI**2
    return (f * x**2 - y**2) * (f * y**2 - z**2) * (f * z**2 - x**2)


def p6_H3():
    return p0_H3() + (2.0 + SQRT5) / 21.0


def p6_F4():
    xs = variables(4)
    s6 = sum((v**6 for v in xs), MultiPoly.const(0.0, 4))
    s4 = sum((v**4 for v in xs), MultiPoly.const(0.0, 4))
    return 16.0 * s6 - 20.0 * s4 + 5.0


def p3_A4():
    x1, x2, x3, x4 = variables(4)
    return (
        PHI * (x1**2 * x3 - x2**2 * x4)
        + (1.0 - PHI) * (x2**2 * x3 - x1**2 * x4)
        + x3 * x4 * (x3 - x4)
    )


H4_EXPANSION = (
    ((12,), 1),
    ((10, 2), -22),
    ((8, 4), 99),
    ((8, 2, 2), 198),
    ((6, 6), -176),
    ((6, 4, 2), -66),
    ((6, 2, 2, 2), -4752),
    ((4, 4, 4), -330),
    ((4, 4, 2, 2), 3960),
)


def p12_H4(delta_sign=1):
    """Degree-12 H4 invariant in monomial-symmetric form.

    ``delta_sign=-1`` gives the variant with ``-462 sqrt(5) Delta_4``, which
    is *not* invariant; it exists for the sign check.
    """
    out = MultiPoly.const(0.0, 4)
    for part, c in H4_EXPANSION:
        out = out + monomial_symmetric(part, 4).scale(c)
    return out + vandermonde_squares(4).scale(delta_sign * 462.0 * SQRT5)


def invariant_poly(group):
    """The distinguished invariant for ``group`` (label).

    ``A3 -> xyz``, ``B3``/``Bd -> sum x_i^4 - 3/(d+2)``, ``H3 -> p_6``,
    ``A4 -> p_3``, ``F4 -> p_6``, ``H4 -> p_12``.
    """
    name = group if isinstance(group, str) else group.name
    if name == "A3":
        return p3_A3()
    if name == "H3":
        return p6_H3()
    if name == "A4":
        return p3_A4()
    if name == "F4":
        return p6_F4()
    if name == "H4":
        return p12_H4()
    if name.startswith("B") and name[1:].isdigit() and int(name[1:]) >= 2:
        return p4_B(int(name[1:]))
    raise UnknownGroup(name)


#: the degree of each distinguished invariant
INVARIANT_DEGREE = {"A3": 3, "B": 4, "H3": 6, "A4": 3, "F4": 6, "H4": 12}


def invariant_degree(name):
    if name.startswith("B"):
        return 4
    try:
        return INVARIANT_DEGREE[name]
    except KeyError:
        raise UnknownGroup(name) from None


def ratio_spread(f, g, points, floor=1e-6):
    """Relative spread ``(max - min) / |mean|`` of ``f/g`` where ``|g| > floor``."""
    fv, gv = np.asarray(f(points)), np.asarray(g(points))
    mask = np.abs(gv) > floor
    r = fv[mask] / gv[mask]
    return float((r.max() - r.min()) / abs(r.mean())), float(r.mean())


def sign_error_check(n_points=100, seed=1):
    """Compare both signs of the ``Delta_4`` term against the H4 group average.

    Returns a dict with the relative ratio spreads; the ``+`` form should be
    proportional (spread ~ 1e-13), the ``-`` form not.
    """
    from .orthogroup import get_group

    h4 = get_group("H4")
    avg = averaged_gegenbauer(h4, np.eye(4)[0], 12)
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n_points, 4))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    plus_spread, plus_ratio = ratio_spread(avg, p12_H4(+1), pts)
    minus_spread, minus_ratio = ratio_spread(avg, p12_H4(-1), pts)
    return {
        "plus_spread": plus_spread,
        "plus_ratio": plus_ratio,
        "minus_spread": minus_spread,
        "minus_ratio": minus_ratio,
        "plus_proportional": plus_spread < 1e-8,
        "minus_proportional": minus_spread < 1e-3,
    }
