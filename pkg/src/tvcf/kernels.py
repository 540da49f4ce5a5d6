"""complex128 kernels for quick screening runs.

The multiprecision engine in :mod:`tvcf.accel` is authoritative; these kernels
repeat the backward fold and the row update in hardware floating point, which
saturates near 15 digits but is orders of magnitude faster.  numba is used when
importable unless ``TVCF_NUMBA=0``; otherwise a numpy implementation runs.
"""
from __future__ import annotations

import os

import numpy as np

from .cf import TwoVariantCF


def _numba_wanted() -> bool:
    return os.environ.get("TVCF_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


try:
    if not _numba_wanted():
        raise ImportError("disabled by TVCF_NUMBA")
    from numba import njit
except ImportError:  # pragma: no cover - depends on environment
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


def sequences(cf: TwoVariantCF, n_max: int):
    """Arrays a, b, a', b' of length n_max + 2, indexed directly by n (slot 0 unused)."""
    n = np.arange(n_max + 2, dtype=np.float64)

    def ev(poly):
        out = np.zeros_like(n, dtype=np.complex128)
        for c in reversed(poly.coeffs):
            out = out * n + complex(c)
        return out

    return ev(cf.a), ev(cf.b), ev(cf.a_prime), ev(cf.b_prime)


# -- pure numpy ------------------------------------------------------------

def _fold_odd_np(a, b, ap, bp, n, omegas):
    """Backward fold of quotients 2n-1 .. 1 for every omega in the batch."""
    v = np.asarray(omegas, dtype=np.complex128).copy()
    for m in range(n, 0, -1):
        if m < n:
            v = ap[m] / (bp[m] + v)
        v = a[m] / (b[m] + v)
    return v


def _accel_row_np(a, b, ap, bp, row, order, start):
    k = row.shape[0] - 1
    n = np.arange(start, start + k, dtype=np.float64)
    idx = n.astype(np.int64)
    u, u_next = row[:-1], row[1:]
    inner = b[idx + 1] + u_next
    u_plus = ap[idx] / (bp[idx] + a[idx + 1] / inner)
    d = a[idx + 1] + bp[idx] * inner
    psi = ap[idx] * a[idx + 1] / (d * d)
    phi = 1.0 + order / n
    return (phi * u_plus - psi * u) / (phi - psi)


# -- numba -----------------------------------------------------------------

if njit is not None:

    @njit(cache=False)
    def _fold_odd_nb(a, b, ap, bp, n, omegas):
        out = np.empty(omegas.shape[0], dtype=np.complex128)
        for i in range(omegas.shape[0]):
            v = omegas[i]
            for m in range(n, 0, -1):
                if m < n:
                    v = ap[m] / (bp[m] + v)
                v = a[m] / (b[m] + v)
            out[i] = v
        return out

    @njit(cache=False)
    def _accel_row_nb(a, b, ap, bp, row, order, start):
        k = row.shape[0] - 1
        out = np.empty(k, dtype=np.complex128)
        for i in range(k):
            n = start + i
            inner = b[n + 1] + row[i + 1]
            u_plus = ap[n] / (bp[n] + a[n + 1] / inner)
            d = a[n + 1] + bp[n] * inner
            psi = ap[n] * a[n + 1] / (d * d)
            phi = 1.0 + order / n
            out[i] = (phi * u_plus - psi * row[i]) / (phi - psi)
        return out

    fold_odd_kernel = _fold_odd_nb
    accel_row_kernel = _accel_row_nb
else:  # pragma: no cover - depends on environment
    fold_odd_kernel = _fold_odd_np
    accel_row_kernel = _accel_row_np


def _apply_outer(cf: TwoVariantCF, core_values):
    v = complex(cf.b0_prime) + core_values
    for c, d in reversed(cf.prefix):
        v = complex(c) / (complex(d) + v)
    return v


def odd_approximants_fast(cf: TwoVariantCF, n: int, omegas) -> np.ndarray:
    """S_{2n-1}(omega) in complex128 for a batch of omegas."""
    a, b, ap, bp = sequences(cf, n + 1)
    omegas = np.atleast_1d(np.asarray(omegas, dtype=np.complex128))
    return _apply_outer(cf, fold_odd_kernel(a, b, ap, bp, n, omegas))


def accelerate_fast(cf: TwoVariantCF, N: int, J: int, model) -> complex:
    """S_1(u_{1,J}) in complex128; ``model`` supplies the initial row and exponents."""
    if J < 0 or N < J + 1:
        raise ValueError(f"need 0 <= J <= N - 1, got N={N}, J={J}")
    a, b, ap, bp = sequences(cf, N + 1)
    n = np.arange(1, N + 1, dtype=np.float64)
    row = np.zeros(N, dtype=np.complex128)
    for j, t in model.tau.items():
        row += complex(t) * n ** (-j / 2)
    for j in range(J):
        row = accel_row_kernel(a, b, ap, bp, row, float(model.order(j)), 1)
    return complex(odd_approximants_fast(cf, 1, row[:1])[0])


__all__ = [
    "BACKEND", "sequences", "odd_approximants_fast", "accelerate_fast",
    "fold_odd_kernel", "accel_row_kernel",
]
