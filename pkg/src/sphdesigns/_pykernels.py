"""Numpy implementations of the monomial kernels (fallback for ``_ckernels``)."""
import numpy as np


def _power_table(points, maxdeg):
    # table[i, e, j] = points[j, i] ** e
    pts = np.asarray(points, dtype=np.float64)
    table = np.empty((pts.shape[1], maxdeg + 1, pts.shape[0]))
    table[:, 0, :] = 1.0
    for e in range(1, maxdeg + 1):
        table[:, e, :] = table[:, e - 1, :] * pts.T
    return table


def monomial_moments(points, weights, exponents):
    """Return ``sum_j w_j * prod_i x_ji ** a_mi`` for every exponent row ``a_m``.

    Monomials sharing all but the last exponent are batched into one
    matrix-vector product against the last coordinate's power table.
    """
    pts = np.asarray(points, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    ex = np.asarray(exponents, dtype=np.int64)
    if ex.ndim != 2 or ex.shape[1] != pts.shape[1]:
        raise ValueError("exponent width does not match point dimension")
    if w.shape[0] != pts.shape[0]:
        raise ValueError("weights and points disagree in length")
    out = np.zeros(ex.shape[0])
    if ex.shape[0] == 0 or pts.shape[0] == 0:
        return out
    table = _power_table(pts, int(ex.max()))
    last = table[-1]
    prefixes, inverse = np.unique(ex[:, :-1], axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    for p, prefix in enumerate(prefixes):
        rows = np.flatnonzero(inverse == p)
        wp = w.copy()
        for i, e in enumerate(prefix):
            if e:
                wp *= table[i, e]
        out[rows] = last[ex[rows, -1]] @ wp
    return out


def poly_eval(points, exponents, coefficients):
    """Evaluate ``sum_m c_m * x ** a_m`` at every row of ``points``."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    ex = np.asarray(exponents, dtype=np.int64)
    c = np.asarray(coefficients, dtype=np.float64)
    out = np.zeros(pts.shape[0])
    if c.size == 0:
        return out
    if ex.shape[1] != pts.shape[1]:
        raise ValueError("exponent width does not match point dimension")
    table = _power_table(pts, int(ex.max()))
    for coef, row in zip(c, ex):
        term = np.full(pts.shape[0], coef)
        for i, e in enumerate(row):
            if e:
                term *= table[i, e]
        out += term
    return out
