"""Kernel dispatch.

The compiled ``_ckernels`` extension is used when importable; otherwise the
numpy versions from ``_pykernels`` are used. Setting the environment
variable ``SPHDESIGNS_PURE=1`` forces the numpy path.
"""
import os

from . import _pykernels

BACKEND = "numpy"
monomial_moments = _pykernels.monomial_moments
poly_eval = _pykernels.poly_eval

if not os.environ.get("SPHDESIGNS_PURE"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        monomial_moments = _ckernels.monomial_moments
        poly_eval = _ckernels.poly_eval

__all__ = ["BACKEND", "monomial_moments", "poly_eval"]
