"""Vectorised numpy kernels mirroring ``_nb`` one for one.

Loops run over one axis in Python and vectorise the rest; large index
batches are flushed through ``np.bincount`` in chunks to bound memory.
"""
import math

import numpy as np

TWO_PI = 2.0 * np.pi
_CHUNK = 1 << 22


def powmod(base, e, p):
    """Elementwise ``base**e mod p`` for an int64 array and scalar ``e``."""
    base = np.asarray(base, dtype=np.int64) % p
    result = np.ones_like(base)
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


class _Counter:
    """Accumulates index batches into a dense histogram of length ``p``."""

    def __init__(self, p):
        self.p = p
        self.hist = np.zeros(p, dtype=np.int64)
        self._pending = []
        self._size = 0

    def add(self, idx):
        self._pending.append(idx.ravel())
        self._size += idx.size
        if self._size >= _CHUNK:
            self.flush()

    def flush(self):
        if self._pending:
            batch = np.concatenate(self._pending)
            self.hist += np.bincount(batch, minlength=self.p)
            self._pending = []
            self._size = 0
        return self.hist


def ratio_histogram(U, lam, p):
    counter = _Counter(p)
    lam_u = lam * U % p
    for u in U:
        num = (u - lam_u) % p
        den = num[num != 0]
        if den.size == 0:
            continue
        inv = powmod(den, p - 2, p)
        counter.add(np.multiply.outer(inv, num) % p)
    return counter.flush()


def line_histogram(A, B, p, out):
    xs = np.repeat(A, B.size)
    ys = np.tile(B, A.size)
    for a in range(p):
        out[a] = np.bincount((ys - a * xs) % p, minlength=p)
    return out


def iota_sums(A, B, lam, mu, p):
    xs = np.repeat(A, B.size)
    ys = np.tile(B, A.size)
    perm = mu * np.arange(p, dtype=np.int64) % p
    m1 = m1s = m2 = m3 = 0
    for a in range(p):
        row = np.bincount((ys - a * xs) % p, minlength=p)
        scaled = np.bincount((ys - (lam * a % p) * xs) % p, minlength=p)[perm]
        m1 += int(row.sum())
        m1s += int(scaled.sum())
        m2 += int(row @ scaled)
        m3 += int(row @ (scaled * scaled))
    return m1, m1s, m2, m3


def product_histogram(U, V, p):
    counter = _Counter(p)
    step = max(1, _CHUNK // max(V.size, 1))
    for i in range(0, U.size, step):
        counter.add(np.multiply.outer(U[i : i + step], V) % p)
    return counter.flush()


def difference_histogram(U, p):
    counter = _Counter(p)
    step = max(1, _CHUNK // max(U.size, 1))
    for i in range(0, U.size, step):
        counter.add(np.subtract.outer(U[i : i + step], U) % p)
    return counter.flush()


def multiplicative_convolution(h, p):
    out = np.zeros(p, dtype=np.int64)
    total = int(h.sum())
    out[0] = 2 * int(h[0]) * total - int(h[0]) ** 2
    support = np.flatnonzero(h[1:]) + 1
    weights = h[support]
    for x in support:
        # x * support is a permutation of distinct residues, so no index repeats
        out[x * support % p] += h[x] * weights
    return out


def sparse_sum(powers, coeffs, exps, j, p):
    n = p - 1
    re_parts = []
    im_parts = []
    for start in range(0, n, _CHUNK):
        t = np.arange(start, min(n, start + _CHUNK), dtype=np.int64)
        psi = np.zeros_like(t)
        for a, k in zip(coeffs.tolist(), exps.tolist()):
            psi = (psi + a * powers[t * k % n]) % p
        theta = TWO_PI * ((j * t % n) / n + psi / p)
        re_parts.append(math.fsum(np.cos(theta)))
        im_parts.append(math.fsum(np.sin(theta)))
    return math.fsum(re_parts), math.fsum(im_parts)


def decomposed_sum(xk, xl, xm, xdl, yl, ym, ydl, zk, zm, zdl, a, b, c, j, p):
    n = p - 1
    re_parts = []
    im_parts = []
    # rows index z, columns index y
    for ix in range(xk.size):
        first = (a * xk[ix] % p) * zk % p
        second = (b * xl[ix] % p) * yl % p
        third = np.multiply.outer((c * xm[ix] % p) * zm % p, ym) % p
        psi = (first[:, None] + second[None, :] + third) % p
        ind = j * ((xdl[ix] + zdl[:, None] + ydl[None, :]) % n) % n
        theta = TWO_PI * (ind / n + psi / p)
        re_parts.append(math.fsum(np.cos(theta).ravel()))
        im_parts.append(math.fsum(np.sin(theta).ravel()))
    return math.fsum(re_parts), math.fsum(im_parts)


def trilinear_sum(F, G, H, a, rho, sigma, tau, p):
    total = 0j
    for i in range(F.size):
        phase = np.multiply.outer(a * F[i] % p * G % p, H) % p
        chars = np.exp(1j * TWO_PI * phase / p)
        total += np.sum(rho[i][:, None] * sigma[i][None, :] * tau * chars)
    return total


def sumset_mask(A, B, p):
    mask = np.zeros(p, dtype=np.bool_)
    step = max(1, _CHUNK // max(B.size, 1))
    for i in range(0, A.size, step):
        mask[np.add.outer(A[i : i + step], B) % p] = True
    return mask


def productset_mask(A, B, p):
    mask = np.zeros(p, dtype=np.bool_)
    step = max(1, _CHUNK // max(B.size, 1))
    for i in range(0, A.size, step):
        mask[np.multiply.outer(A[i : i + step], B) % p] = True
    return mask


def ratio_set_mask(G, lam, mu, p):
    mask = np.zeros(p, dtype=np.bool_)
    den = (G - mu) % p
    den = den[den != 0]
    if den.size == 0:
        return mask, False
    inv = powmod(den, p - 2, p)
    mask[np.multiply.outer((G - lam) % p, inv) % p] = True
    return mask, True
