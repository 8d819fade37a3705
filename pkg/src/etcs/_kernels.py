"""Hot numeric loops, with a numba path and a pure-numpy path.

Set ``ETCS_DISABLE_NUMBA=1`` in the environment to force the numpy path (the
numpy path is also used when numba is not installed).  Both paths compute the
same integer / float results; ``benchmarks/bench_kernels.py`` compares them.

Kernels:

* ``gluing_scan``   -- integer gluing matrices satisfying the determinant,
  sign and congruence constraints, for every pair of unit representatives.
* ``eta_qseries``   -- truncated sum of sigma_{-1}(n) q^n for many tau.
* ``eq8_scan``      -- brute-force search for integer (ind D, p2) solving the
  two closed-manifold relations, one (p^2, sigma) pair at a time.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("ETCS_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def sigma_minus_one_table(n: int) -> np.ndarray:
    """sigma_{-1}(k) for k = 0..n (entry 0 unused), by a divisor sieve."""
    out = np.zeros(n + 1)
    for d in range(1, n + 1):
        out[d::d] += 1.0 / d
    return out


# --------------------------------------------------------------------- numpy


def _gluing_scan_numpy(k_plus, k_minus, eps_plus, eps_minus, bound):
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    m, n, p, q = (a.ravel() for a in np.meshgrid(r, r, r, r, indexing="ij"))
    base = (m * q - p * n == -k_plus * k_minus) & (m * n * p * q <= 0)
    rows = []
    for ep in eps_plus:
        c_plus = base & ((ep * m - n) % k_plus == 0) & ((ep * p - q) % k_plus == 0)
        for em in eps_minus:
            ok = c_plus & ((em * p + m) % k_minus == 0) & ((em * q + n) % k_minus == 0)
            idx = np.nonzero(ok)[0]
            if idx.size:
                block = np.empty((idx.size, 6), dtype=np.int64)
                block[:, 0] = ep
                block[:, 1] = em
                block[:, 2] = m[idx]
                block[:, 3] = n[idx]
                block[:, 4] = p[idx]
                block[:, 5] = q[idx]
                rows.append(block)
    if not rows:
        return np.empty((0, 6), dtype=np.int64)
    return np.concatenate(rows)


def _eta_qseries_numpy(re, im, nterms):
    sig = sigma_minus_one_table(nterms)[1:]
    k = np.arange(1, nterms + 1)
    tau = np.asarray(re) + 1j * np.asarray(im)
    q = np.exp(2j * np.pi * np.outer(tau, k))
    return q @ sig


def _eq8_scan_numpy(p_sq, sigma, ind_bound):
    ind = np.arange(-ind_bound, ind_bound + 1, dtype=np.int64)
    out = np.zeros(len(p_sq), dtype=np.bool_)
    for i in range(len(p_sq)):
        p2 = 7 * p_sq[i] - 1440 * ind
        out[i] = bool(np.any(7 * p2 == 4 * p_sq[i] + 45 * sigma[i]))
    return out


# --------------------------------------------------------------------- numba

if HAVE_NUMBA:

    @njit(cache=True)
    def _gluing_ok(k_plus, k_minus, ep, em, m, n, p, q):
        if m * q - p * n != -k_plus * k_minus:
            return False
        if m * n * p * q > 0:
            return False
        if (ep * m - n) % k_plus != 0 or (ep * p - q) % k_plus != 0:
            return False
        if (em * p + m) % k_minus != 0 or (em * q + n) % k_minus != 0:
            return False
        return True

    @njit(cache=True)
    def _gluing_scan_numba(k_plus, k_minus, eps_plus, eps_minus, bound):
        count = 0
        for a in range(eps_plus.size):
            for b in range(eps_minus.size):
                for m in range(-bound, bound + 1):
                    for n in range(-bound, bound + 1):
                        for p in range(-bound, bound + 1):
                            for q in range(-bound, bound + 1):
                                if _gluing_ok(k_plus, k_minus, eps_plus[a], eps_minus[b], m, n, p, q):
                                    count += 1
        out = np.empty((count, 6), dtype=np.int64)
        i = 0
        for a in range(eps_plus.size):
            for b in range(eps_minus.size):
                for m in range(-bound, bound + 1):
                    for n in range(-bound, bound + 1):
                        for p in range(-bound, bound + 1):
                            for q in range(-bound, bound + 1):
                                if _gluing_ok(k_plus, k_minus, eps_plus[a], eps_minus[b], m, n, p, q):
                                    out[i, 0] = eps_plus[a]
                                    out[i, 1] = eps_minus[b]
                                    out[i, 2] = m
                                    out[i, 3] = n
                                    out[i, 4] = p
                                    out[i, 5] = q
                                    i += 1
        return out

    @njit(cache=True)
    def _eta_qseries_numba(re, im, sig):
        out = np.empty(re.size, dtype=np.complex128)
        for j in range(re.size):
            q = np.exp(2j * np.pi * complex(re[j], im[j]))
            qn = 1.0 + 0j
            acc = 0.0 + 0j
            for k in range(1, sig.size):
                qn *= q
                acc += sig[k] * qn
            out[j] = acc
        return out

    @njit(cache=True)
    def _eq8_scan_numba(p_sq, sigma, ind_bound):
        out = np.zeros(p_sq.size, dtype=np.bool_)
        for i in range(p_sq.size):
            rhs = 4 * p_sq[i] + 45 * sigma[i]
            for ind in range(-ind_bound, ind_bound + 1):
                p2 = 7 * p_sq[i] - 1440 * ind
                if 7 * p2 == rhs:
                    out[i] = True
                    break
        return out


# ------------------------------------------------------------------ dispatch


def gluing_scan(k_plus: int, k_minus: int, eps_plus, eps_minus, bound: int, backend: str | None = None) -> np.ndarray:
    """Rows (eps_plus, eps_minus, m, n, p, q) passing the gluing constraints."""
    ep = np.asarray(eps_plus, dtype=np.int64)
    em = np.asarray(eps_minus, dtype=np.int64)
    if (backend or BACKEND) == "numba":
        out = _gluing_scan_numba(int(k_plus), int(k_minus), ep, em, int(bound))
    else:
        out = _gluing_scan_numpy(int(k_plus), int(k_minus), ep, em, int(bound))
    return out[np.lexsort(out.T[::-1])]


def eta_qseries(re, im, nterms: int, backend: str | None = None) -> np.ndarray:
    """sum_{n=1}^{nterms} sigma_{-1}(n) exp(2 pi i n tau) for tau = re + i im."""
    re = np.atleast_1d(np.asarray(re, dtype=np.float64))
    im = np.atleast_1d(np.asarray(im, dtype=np.float64))
    if (backend or BACKEND) == "numba":
        return _eta_qseries_numba(re, im, sigma_minus_one_table(nterms))
    return _eta_qseries_numpy(re, im, nterms)


def eq8_scan(p_sq, sigma, ind_bound: int = 10_000, backend: str | None = None) -> np.ndarray:
    """For each (p^2, sigma): does some |ind D| <= ind_bound give an integer solution?"""
    p_sq = np.asarray(p_sq, dtype=np.int64)
    sigma = np.asarray(sigma, dtype=np.int64)
    if (backend or BACKEND) == "numba":
        return _eq8_scan_numba(p_sq, sigma, int(ind_bound))
    return _eq8_scan_numpy(p_sq, sigma, int(ind_bound))


def available_backends() -> list[str]:
    return ["numpy", "numba"] if HAVE_NUMBA else ["numpy"]
