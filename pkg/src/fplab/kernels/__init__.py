"""Backend-dispatching entry points for the hot kernels.

Callers import from here; each call forwards to the numba kernel or its numpy
twin according to :func:`fplab._backend.use_numba`. The numba module is only
imported on first use so that ``FPLAB_NO_NUMBA=1`` never pays the import.
"""
from __future__ import annotations

import numpy as np

from .. import _backend
from . import _np

_numba_module = None


def _impl():
    global _numba_module
    if not _backend.use_numba():
        return _np
    if _numba_module is None:
        from . import _nb

        _numba_module = _nb
    return _numba_module


def _i64(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.int64)


def ratio_histogram(U, lam: int, p: int) -> np.ndarray:
    """``h[r] = #{(u,v,w) in U^3 : u != lam*w, (u-lam*v)/(u-lam*w) = r}``."""
    return _impl().ratio_histogram(_i64(U), int(lam), int(p))


def line_histogram(A, B, p: int, dtype=np.int64) -> np.ndarray:
    out = np.zeros((p, p), dtype=dtype)
    return _impl().line_histogram(_i64(A), _i64(B), int(p), out)


def iota_sums(A, B, lam: int, mu: int, p: int) -> tuple[int, int, int, int]:
    """Streaming ``(sum i, sum i', sum i*i', sum i*i'^2)`` over all lines,
    where ``i = iota(l_{a,b})`` and ``i' = iota(l_{lam a, mu b})``."""
    res = _impl().iota_sums(_i64(A), _i64(B), int(lam), int(mu), int(p))
    return tuple(int(v) for v in res)


def product_histogram(U, V, p: int) -> np.ndarray:
    return _impl().product_histogram(_i64(U), _i64(V), int(p))


def difference_histogram(U, p: int) -> np.ndarray:
    return _impl().difference_histogram(_i64(U), int(p))


def multiplicative_convolution(h, p: int) -> np.ndarray:
    """``out[t] = sum_{x*y = t} h[x] h[y]`` over all of ``F_p``."""
    return _impl().multiplicative_convolution(_i64(h), int(p))


def sparse_sum(powers, coeffs, exps, j: int, p: int) -> complex:
    re, im = _impl().sparse_sum(_i64(powers), _i64(coeffs), _i64(exps), int(j), int(p))
    return complex(re, im)


def decomposed_sum(xk, xl, xm, xdl, yl, ym, ydl, zk, zm, zdl, a, b, c, j, p) -> complex:
    arrays = [_i64(v) for v in (xk, xl, xm, xdl, yl, ym, ydl, zk, zm, zdl)]
    re, im = _impl().decomposed_sum(*arrays, int(a), int(b), int(c), int(j), int(p))
    return complex(re, im)


def trilinear_sum(F, G, H, a: int, rho, sigma, tau, p: int) -> complex:
    weights = [np.ascontiguousarray(w, dtype=np.complex128) for w in (rho, sigma, tau)]
    return complex(_impl().trilinear_sum(_i64(F), _i64(G), _i64(H), int(a), *weights, int(p)))


def sumset_mask(A, B, p: int) -> np.ndarray:
    return _impl().sumset_mask(_i64(A), _i64(B), int(p))


def productset_mask(A, B, p: int) -> np.ndarray:
    return _impl().productset_mask(_i64(A), _i64(B), int(p))


def ratio_set_mask(G, lam: int, mu: int, p: int) -> tuple[np.ndarray, bool]:
    mask, nonempty = _impl().ratio_set_mask(_i64(G), int(lam), int(mu), int(p))
    return mask, bool(nonempty)
