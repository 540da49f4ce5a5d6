"""Reference values computed without the continued-fraction engine.

* digamma: upward recurrence followed by the asymptotic Bernoulli series
* incomplete-gamma ratio and the Jacobi ``cn`` Laplace transform: tanh-sinh
  quadrature (mpmath) at 1.2x the target digits
* arctan: argument halving followed by the Taylor series
* ``cn(t; k)``: descending arithmetic-geometric mean (Landen) scheme
"""
from __future__ import annotations

import math
import threading
from functools import lru_cache

from ..numerics import PrecisionContext


def _work(ctx: PrecisionContext, factor=1.2, extra=10):
    return PrecisionContext(int(math.ceil(ctx.digits * factor)) + extra)


@lru_cache(maxsize=None)
def _bernoulli_even(k: int):
    """B_{2k} as an exact (numerator, denominator) pair."""
    import mpmath

    # mpmath computes and caches exact Bernoulli numbers internally
    q = mpmath.libmp.bernfrac(2 * k)
    return int(q[0]), int(q[1])


def digamma(z, ctx: PrecisionContext):
    """psi(z) for complex z away from the poles 0, -1, -2, ..."""
    wctx = _work(ctx, 1.0, 12)
    mp = wctx.mp
    z = wctx.mpc(z)
    lift = 10 + 0.6 * ctx.digits
    shift = mp.mpc(0)
    while z.real < lift:
        if z == 0:
            raise ZeroDivisionError("digamma pole")
        shift -= 1 / z
        z += 1
    total = mp.log(z) - 1 / (2 * z)
    z2 = z * z
    zpow = z2
    tol = mp.mpf(10) ** (-(ctx.digits + 8))
    for k in range(1, 10 * ctx.digits):
        num, den = _bernoulli_even(k)
        term = mp.mpf(num) / den / (2 * k * zpow)
        total -= term
        if abs(term) < tol * abs(total):
            break
        zpow *= z2
    return ctx.mpc(total + shift)


def digamma_ratio(x, nu, ctx: PrecisionContext):
    """4/(psi((x+3+nu)/4) + psi((x+3-nu)/4) - psi((x+1+nu)/4) - psi((x+1-nu)/4))."""
    wctx = _work(ctx, 1.0, 12)
    x, nu = wctx.mpc(x), wctx.mpc(nu)
    s = (digamma((x + 3 + nu) / 4, wctx) + digamma((x + 3 - nu) / 4, wctx)
         - digamma((x + 1 + nu) / 4, wctx) - digamma((x + 1 - nu) / 4, wctx))
    return ctx.mpc(4 / s)


def incgamma_ratio(z, alpha, ctx: PrecisionContext):
    """(z**(alpha-1) e**z int_z^inf e**-v v**-alpha dv)**-1 by tanh-sinh quadrature."""
    wctx = _work(ctx)
    mp = wctx.mp
    z, alpha = wctx.mpf(z), wctx.mpf(alpha)
    # geometric splits resolve the v**-alpha scale near a small lower limit
    points = [z]
    while points[-1] < 1:
        points.append(points[-1] * 4)
    cut = z + ctx.digits * mp.log(10)
    step = max(points[-1], mp.mpf(4))
    while points[-1] + step < cut:
        points.append(points[-1] + step)
    points += [cut, mp.inf]
    integral = mp.quad(lambda v: mp.exp(-v) * v ** (-alpha), points, method="tanh-sinh")
    return ctx.mpc(1 / (z ** (alpha - 1) * mp.exp(z) * integral))


def log_ratio(x, ctx: PrecisionContext):
    """x / log(1 + x), principal branch."""
    wctx = _work(ctx, 1.0, 12)
    x = wctx.mpc(x)
    return ctx.mpc(x / wctx.mp.log(1 + x))


def arctan(x, ctx: PrecisionContext):
    """arctan by repeated argument halving and the Taylor series."""
    wctx = _work(ctx, 1.0, 20)
    mp = wctx.mp
    x = wctx.mpc(x)
    halvings = 0
    threshold = mp.mpf(2) ** -12
    while abs(x) > threshold:
        x = x / (1 + mp.sqrt(1 + x * x))
        halvings += 1
    x2 = x * x
    term, total, k = x, x, 0
    tol = mp.mpf(10) ** (-(wctx.digits))
    while abs(term) > tol * abs(total):
        k += 1
        term *= -x2
        total += term / (2 * k + 1)
    return ctx.mpc(total * 2 ** halvings)


class JacobiCn:
    """cn(t; k) by the descending AGM sequence for a fixed modulus 0 < k < 1."""

    def __init__(self, k, ctx: PrecisionContext):
        mp = ctx.mp
        self.ctx = ctx
        a, b, c = mp.mpf(1), mp.sqrt(1 - ctx.mpf(k) ** 2), ctx.mpf(k)
        tol = mp.mpf(10) ** (-ctx.digits)
        self.a, self.c = [a], [c]
        while abs(c) > tol:
            a, b, c = (a + b) / 2, mp.sqrt(a * b), (a - b) / 2
            self.a.append(a)
            self.c.append(c)
        # complete elliptic integral of the first kind
        self.K = mp.pi / (2 * self.a[-1])

    def __call__(self, t):
        mp = self.ctx.mp
        N = len(self.a) - 1
        phi = 2 ** N * self.a[N] * t
        for i in range(N, 0, -1):
            phi = (phi + mp.asin(self.c[i] / self.a[i] * mp.sin(phi))) / 2
        return mp.cos(phi)


def cn_laplace(x, k, ctx: PrecisionContext):
    """int_0^inf exp(-t x) cn(t; k) dt.

    cn(t + 2K) = -cn(t) folds the half-line onto one half-period:
    the integral equals I_{2K} / (1 + exp(-2 K x)) with I_{2K} = int_0^{2K}.
    """
    wctx = _work(ctx)
    mp = wctx.mp
    x = wctx.mpf(x)
    cn = JacobiCn(k, wctx)
    K = cn.K
    points = [mp.mpf(0), K / 2, K, 3 * K / 2, 2 * K]
    half_period = mp.quad(lambda t: mp.exp(-t * x) * cn(t), points, method="tanh-sinh")
    return ctx.mpc(half_period / (1 + mp.exp(-2 * K * x)))


def cn_laplace_truncated(x, k, ctx: PrecisionContext):
    """Direct quadrature over [0, T], T = digits*ln(10)/x (slow cross-check)."""
    wctx = _work(ctx)
    mp = wctx.mp
    x = wctx.mpf(x)
    cn = JacobiCn(k, wctx)
    T = wctx.digits * mp.log(10) / x
    points = [mp.mpf(0)]
    while points[-1] + cn.K < T:
        points.append(points[-1] + cn.K)
    points.append(T)
    return ctx.mpc(mp.quad(lambda t: mp.exp(-t * x) * cn(t), points, method="tanh-sinh"))


class OracleCache:
    """Memo table keyed by (id, params, digits); access is lock-protected."""

    def __init__(self):
        self._data = {}
        self._lock = threading.Lock()

    def get_or_compute(self, key, compute):
        with self._lock:
            if key in self._data:
                return self._data[key]
        value = compute()
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        with self._lock:
            return len(self._data)
