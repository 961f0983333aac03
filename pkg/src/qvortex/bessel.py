"""Bessel functions of the first kind and their positive zeros.

J_l is evaluated three ways depending on the argument: the ascending power
series near the origin, Miller's backward recurrence (normalised with
J_0 + 2*sum J_2k = 1) in the bulk, and Hankel's asymptotic expansion far out.
Zeros are bracketed by a sign-change scan whose extent is set by McMahon's
expansion, then polished with a safeguarded Newton iteration.
"""

from functools import lru_cache
import math

import numpy as np

SERIES_MAX = 2.0
HANKEL_MIN = 2000.0
_RESCALE = 1e250


def _series(order, x):
    # J_0..J_order by the ascending series; x <= SERIES_MAX keeps every term small.
    out = np.zeros((order + 1, x.size))
    half = 0.5 * x
    mhalf2 = -half * half
    for ell in range(order + 1):
        term = np.ones_like(x)
        for i in range(1, ell + 1):
            term = term * half / i
        acc = term.copy()
        for kk in range(1, 40):
            term = term * mhalf2 / (kk * (kk + ell))
            acc += term
            if np.all(np.abs(term) <= 1e-17 * np.abs(acc)):
                break
        out[ell] = acc
    return out


def _miller(order, x):
    top = max(order, float(x.max()))
    start = int(top + math.sqrt(160.0 * top)) + 16
    start += start % 2
    out = np.zeros((order + 1, x.size))
    bjp = np.zeros_like(x)
    bj = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    for j in range(start, 0, -1):
        bjm = (2.0 * j / x) * bj - bjp
        bjp, bj = bj, bjm
        big = np.abs(bj) > _RESCALE
        if big.any():
            scale = np.where(big, 1.0 / _RESCALE, 1.0)
            bj *= scale
            bjp *= scale
            norm *= scale
            out *= scale
        n = j - 1
        if n <= order:
            out[n] = bj
        if n > 0 and n % 2 == 0:
            norm += 2.0 * bj
    norm += bj
    return out / norm


def _hankel(order, x):
    out = np.empty((order + 1, x.size))
    for ell in range(order + 1):
        mu = 4.0 * ell * ell
        p = np.ones_like(x)
        q = np.zeros_like(x)
        term = np.ones_like(x)
        for kk in range(1, 30):
            term = term * (mu - (2 * kk - 1) ** 2) / (kk * 8.0 * x)
            if kk % 2 == 1:
                q += term if (kk // 2) % 2 == 0 else -term
            else:
                p += -term if (kk // 2) % 2 == 1 else term
            if np.all(np.abs(term) < 1e-17):
                break
        chi = x - (0.5 * ell + 0.25) * math.pi
        out[ell] = np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))
    return out


def bessel_j_table(order, x):
    """Return J_0(x), ..., J_order(x) as an array of shape ``(order + 1,) + x.shape``.

    ``x`` must be non-negative.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    if np.any(flat < 0) or not np.all(np.isfinite(flat)):
        raise ValueError("bessel_j_table requires finite x >= 0")
    out = np.zeros((order + 1, flat.size))
    small = flat <= SERIES_MAX
    far = (flat >= HANKEL_MIN) & (flat > 4.0 * order * order)
    mid = ~(small | far)
    if small.any():
        out[:, small] = _series(order, flat[small])
    if mid.any():
        out[:, mid] = _miller(order, flat[mid])
    if far.any():
        out[:, far] = _hankel(order, flat[far])
    return out.reshape((order + 1,) + x.shape)


def bessel_j(ell, x):
    """Bessel function of the first kind J_ell(x) for integer ell >= 0 and x >= 0."""
    return bessel_j_table(ell, x)[ell]


def _j_and_derivative(ell, x):
    tab = bessel_j_table(ell + 1, x)
    j = tab[ell]
    if ell == 0:
        dj = -tab[1]
    else:
        dj = tab[ell - 1] - ell / x * j
    return j, dj


def mcmahon_estimate(ell, k):
    """McMahon's large-k expansion for the k-th positive zero of J_ell."""
    beta = (k + 0.5 * ell - 0.25) * math.pi
    mu = 4.0 * ell * ell
    b8 = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8**3)
        - 32.0 * (mu - 1.0) * (83.0 * mu**2 - 982.0 * mu + 3779.0) / (15.0 * b8**5)
    )


def _seed(ell, k):
    est = mcmahon_estimate(ell, k)
    if k == 1 and ell > 0:
        # McMahon degrades when ell >> k; Olver's leading terms are better there.
        olver = ell + 1.8557571 * ell ** (1.0 / 3.0) + 1.033150 * ell ** (-1.0 / 3.0)
        if abs(olver - est) > 0.5:
            est = olver
    return est


def _polish(ell, lo, hi, x0, tol=1e-15, maxiter=60):
    lo = lo.copy()
    hi = hi.copy()
    flo = bessel_j(ell, lo)
    x = np.where((x0 > lo) & (x0 < hi), x0, 0.5 * (lo + hi))
    for _ in range(maxiter):
        j, dj = _j_and_derivative(ell, x)
        step = np.where(dj != 0.0, j / np.where(dj != 0.0, dj, 1.0), 0.0)
        # shrink bracket with the current sign before stepping
        same = np.sign(j) == np.sign(flo)
        lo = np.where(same, x, lo)
        flo = np.where(same, j, flo)
        hi = np.where(same, hi, x)
        newton = x - step
        bad = (newton <= lo) | (newton >= hi) | (dj == 0.0)
        x_new = np.where(bad, 0.5 * (lo + hi), newton)
        done = np.abs(x_new - x) <= tol * np.maximum(1.0, x)
        x = x_new
        if np.all(done | (j == 0.0)):
            break
    return x


@lru_cache(maxsize=256)
def _zeros_cached(ell, kmax):
    start = float(ell) if ell > 0 else 0.5
    stop = _seed(ell, kmax) + 2.0 * math.pi
    step = 1.0
    while True:
        xs = np.arange(start, stop + step, step)
        vals = bessel_j(ell, xs)
        flips = np.nonzero(vals[:-1] * vals[1:] <= 0.0)[0]
        # a grid point landing on a zero shows up in two consecutive products
        flips = flips[np.concatenate(([True], np.diff(flips) > 1))] if flips.size else flips
        if flips.size >= kmax:
            break
        stop += 4.0 * math.pi * (kmax - flips.size + 1)
    flips = flips[:kmax]
    lo = xs[flips]
    hi = xs[flips + 1]
    seeds = np.array([_seed(ell, kk) for kk in range(1, kmax + 1)])
    roots = _polish(ell, lo, hi, seeds)
    roots.setflags(write=False)
    return roots


def bessel_zeros(ell, kmax):
    """First ``kmax`` positive zeros of J_ell, ascending."""
    if ell < 0 or kmax < 1:
        raise ValueError("need ell >= 0 and kmax >= 1")
    kmax = int(kmax)
    size = max(8, 1 << (kmax - 1).bit_length())
    return _zeros_cached(int(ell), size)[:kmax].copy()


def bessel_zero(ell, k):
    """k-th positive zero of J_ell (k >= 1), absolute accuracy about 1e-13."""
    if ell < 0 or k < 1:
        raise ValueError("need ell >= 0 and k >= 1")
    k = int(k)
    # round the table length up so neighbouring k share one cache entry
    size = max(8, 1 << (k - 1).bit_length())
    return float(_zeros_cached(int(ell), size)[k - 1])


def asymptotic_zero_residuals(ell, k):
    """Compare a computed zero with two closed-form large-index approximations.

    ``offset_3pi4`` is (3*pi/4) + (pi/2)*ell + pi*k; ``mcmahon_leading`` is
    pi*k + (pi/2)*ell - pi/4. Residuals are zero minus approximation.
    """
    z = bessel_zero(ell, k)
    a = 0.75 * math.pi + 0.5 * math.pi * ell + math.pi * k
    b = math.pi * k + 0.5 * math.pi * ell - 0.25 * math.pi
    return {"zero": z, "offset_3pi4": z - a, "mcmahon_leading": z - b}


def bessel_i0(x, tol=1e-17):
    """Modified Bessel function I_0(x) by its ascending series (moderate x)."""
    x = float(x)
    q = 0.25 * x * x
    term = 1.0
    acc = 1.0
    kk = 0
    while True:
        kk += 1
        term *= q / (kk * kk)
        acc += term
        if term <= tol * acc:
            return acc


def sign_scan_zeros(ell, kmax, step=1e-2, tol=1e-14):
    """Reference zeros from a fine sign-change scan refined by plain bisection.

    Slow and deliberately naive: it shares only the J_ell evaluator with
    :func:`bessel_zeros`, so the two can check each other.
    """
    x_hi = ell + 2.0
    found = np.empty(0)
    while found.size < kmax:
        x_hi += math.pi * (kmax - found.size + 2)
        xs = np.arange(step, x_hi, step)
        vals = bessel_j(ell, xs)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0.0)[0]
        found = idx
    lo = xs[found[:kmax]]
    hi = xs[found[:kmax] + 1]
    flo = bessel_j(ell, lo)
    while np.max(hi - lo) > tol * np.max(hi):
        mid = 0.5 * (lo + hi)
        fm = bessel_j(ell, mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)
