"""Numba-compiled counting and summation kernels.

Every function here has a twin of the same signature in ``_np``. Inputs are
int64 residue arrays already reduced to ``[0, p-1]``; ``p < 2**31`` keeps all
pairwise products inside int64.
"""
import numpy as np
from numba import njit

TWO_PI = 2.0 * np.pi


@njit(cache=True, inline="always")
def _powmod(b, e, p):
    r = 1
    b = b % p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def ratio_histogram(U, lam, p):
    n = U.shape[0]
    hist = np.zeros(p, dtype=np.int64)
    num = np.empty(n, dtype=np.int64)
    for i in range(n):
        u = U[i]
        for k in range(n):
            num[k] = (u - lam * U[k] % p + p) % p
        for k in range(n):
            den = num[k]
            if den == 0:
                continue
            inv = _powmod(den, p - 2, p)
            for m in range(n):
                hist[num[m] * inv % p] += 1
    return hist


@njit(cache=True)
def line_histogram(A, B, p, out):
    for a in range(p):
        row = out[a]
        for x in A:
            ax = a * x % p
            for y in B:
                row[(y - ax + p) % p] += 1
    return out


@njit(cache=True)
def _line_row(A, B, a, p, row):
    row[:] = 0
    for x in A:
        ax = a * x % p
        for y in B:
            row[(y - ax + p) % p] += 1


@njit(cache=True)
def iota_sums(A, B, lam, mu, p):
    row = np.zeros(p, dtype=np.int64)
    scaled = np.zeros(p, dtype=np.int64)
    m1 = 0
    m1s = 0
    m2 = 0
    m3 = 0
    for a in range(p):
        _line_row(A, B, a, p, row)
        _line_row(A, B, lam * a % p, p, scaled)
        for b in range(p):
            r = row[b]
            s = scaled[mu * b % p]
            m1 += r
            m1s += s
            m2 += r * s
            m3 += r * s * s
    return m1, m1s, m2, m3


@njit(cache=True)
def product_histogram(U, V, p):
    hist = np.zeros(p, dtype=np.int64)
    for u in U:
        for v in V:
            hist[u * v % p] += 1
    return hist


@njit(cache=True)
def difference_histogram(U, p):
    hist = np.zeros(p, dtype=np.int64)
    for u in U:
        for v in U:
            hist[(u - v + p) % p] += 1
    return hist


@njit(cache=True)
def multiplicative_convolution(h, p):
    out = np.zeros(p, dtype=np.int64)
    total = 0
    for x in range(p):
        total += h[x]
    out[0] = 2 * h[0] * total - h[0] * h[0]
    support = np.flatnonzero(h[1:]) + 1
    for x in support:
        hx = h[x]
        for y in support:
            out[x * y % p] += hx * h[y]
    return out


@njit(cache=True)
def sparse_sum(powers, coeffs, exps, j, p):
    n = p - 1
    re = 0.0
    im = 0.0
    cre = 0.0
    cim = 0.0
    for t in range(n):
        psi = 0
        for i in range(coeffs.shape[0]):
            psi = (psi + coeffs[i] * powers[t * exps[i] % n]) % p
        theta = TWO_PI * ((j * t % n) / n + psi / p)
        y = np.cos(theta) - cre
        s = re + y
        cre = (s - re) - y
        re = s
        y = np.sin(theta) - cim
        s = im + y
        cim = (s - im) - y
        im = s
    return re, im


@njit(cache=True)
def decomposed_sum(xk, xl, xm, xdl, yl, ym, ydl, zk, zm, zdl, a, b, c, j, p):
    n = p - 1
    re = 0.0
    im = 0.0
    cre = 0.0
    cim = 0.0
    for ix in range(xk.shape[0]):
        axk = a * xk[ix] % p
        bxl = b * xl[ix] % p
        cxm = c * xm[ix] % p
        for iz in range(zk.shape[0]):
            first = axk * zk[iz] % p
            cxz = cxm * zm[iz] % p
            for iy in range(yl.shape[0]):
                psi = (first + bxl * yl[iy] % p + cxz * ym[iy] % p) % p
                ind = (j * ((xdl[ix] + ydl[iy] + zdl[iz]) % n)) % n
                theta = TWO_PI * (ind / n + psi / p)
                y = np.cos(theta) - cre
                s = re + y
                cre = (s - re) - y
                re = s
                y = np.sin(theta) - cim
                s = im + y
                cim = (s - im) - y
                im = s
    return re, im


@njit(cache=True)
def trilinear_sum(F, G, H, a, rho, sigma, tau, p):
    total = 0j
    for i in range(F.shape[0]):
        au = a * F[i] % p
        for k in range(G.shape[0]):
            auv = au * G[k] % p
            r = rho[i, k]
            for m in range(H.shape[0]):
                phase = auv * H[m] % p
                theta = TWO_PI * phase / p
                total += r * sigma[i, m] * tau[k, m] * complex(np.cos(theta), np.sin(theta))
    return total


@njit(cache=True)
def sumset_mask(A, B, p):
    mask = np.zeros(p, dtype=np.bool_)
    for x in A:
        for y in B:
            mask[(x + y) % p] = True
    return mask


@njit(cache=True)
def productset_mask(A, B, p):
    mask = np.zeros(p, dtype=np.bool_)
    for x in A:
        for y in B:
            mask[x * y % p] = True
    return mask


@njit(cache=True)
def ratio_set_mask(G, lam, mu, p):
    mask = np.zeros(p, dtype=np.bool_)
    any_pair = False
    for v in G:
        den = (v - mu + p) % p
        if den == 0:
            continue
        inv = _powmod(den, p - 2, p)
        any_pair = True
        for u in G:
            mask[(u - lam + p) % p * inv % p] = True
    return mask, any_pair
