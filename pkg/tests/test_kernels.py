import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_unit
from sphdesigns import _pykernels, kernels, quad

try:
    from sphdesigns import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


def direct_moments(points, weights, exponents):
    return np.array([weights @ np.prod(points**e, axis=1) for e in exponents])


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("dim, deg", [(2, 6), (3, 9), (4, 7), (5, 4)])
def test_moments_against_direct(backend, dim, deg):
    rng = np.random.default_rng(dim * 10 + deg)
    pts = random_unit(rng, 300, dim)
    w = rng.random(300)
    ex, _ = quad.monomials_up_to(dim, deg)
    assert np.allclose(backend.monomial_moments(pts, w, ex), direct_moments(pts, w, ex), rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_poly_eval_against_direct(backend):
    rng = np.random.default_rng(4)
    pts = random_unit(rng, 200, 4)
    ex = rng.integers(0, 6, size=(30, 4))
    co = rng.standard_normal(30)
    want = np.prod(pts[:, None, :] ** ex[None], axis=2) @ co
    assert np.allclose(backend.poly_eval(pts, ex, co), want, rtol=1e-12, atol=1e-13)


@pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")
def test_backends_agree_on_large_sweep():
    rng = np.random.default_rng(0)
    pts = random_unit(rng, 4000, 4)
    w = np.full(4000, 1 / 4000)
    ex, _ = quad.monomials_up_to(4, 12)
    a = _ckernels.monomial_moments(pts, w, ex)
    b = _pykernels.monomial_moments(pts, w, ex)
    assert np.max(np.abs(a - b)) < 1e-13


def test_empty_inputs():
    out = _pykernels.monomial_moments(np.zeros((0, 3)), np.zeros(0), np.zeros((2, 3), dtype=np.int64))
    assert out.tolist() == [0.0, 0.0]


def test_shape_errors():
    with pytest.raises(ValueError):
        _pykernels.monomial_moments(np.ones((3, 3)), np.ones(3), np.ones((2, 4), dtype=np.int64))
    with pytest.raises(ValueError):
        _pykernels.monomial_moments(np.ones((3, 3)), np.ones(2), np.ones((2, 3), dtype=np.int64))


def test_backend_label():
    assert kernels.BACKEND in {"cython", "numpy"}
    want = "cython" if _ckernels is not None and not os.environ.get("SPHDESIGNS_PURE") else "numpy"
    assert kernels.BACKEND == want


def test_pure_switch():
    env = dict(os.environ, SPHDESIGNS_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from sphdesigns import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
