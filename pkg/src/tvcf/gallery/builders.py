"""Continued-fraction expansions used as worked examples."""
from __future__ import annotations

from fractions import Fraction

from ..cf import TwoVariantCF, regroup_one_variant
from ..errors import DomainError
from ..numerics import ONE, ZERO, Poly, QComplex


def _q(value) -> QComplex:
    return QComplex.of(value)


def perron_digamma(x, nu) -> TwoVariantCF:
    """x + K((2n-1)^2 - nu^2 / x ; (2n)^2 / x), valid for Re x > 0."""
    x, nu = _q(x), _q(nu)
    if x.re <= 0:
        raise DomainError("perron_digamma needs Re x > 0", x=str(x))
    a = Poly((ONE - nu * nu, QComplex(-4), QComplex(4)))
    return TwoVariantCF(
        x, a=a, b=Poly((x,)), a_prime=Poly((ZERO, ZERO, QComplex(4))), b_prime=Poly((x,)),
        label=f"perron_digamma(x={x}, nu={nu})",
    )


def perron_incgamma(z, alpha) -> TwoVariantCF:
    """z + K(n + alpha - 1 / 1 ; n / z) for real z > 0 and real alpha."""
    z, alpha = _q(z), _q(alpha)
    if not z.is_real or z.re <= 0:
        raise DomainError("perron_incgamma needs real z > 0", z=str(z))
    if not alpha.is_real:
        raise DomainError("perron_incgamma needs real alpha", alpha=str(alpha))
    return TwoVariantCF(
        z, a=Poly((alpha - 1, ONE)), b=Poly((ONE,)), a_prime=Poly((ZERO, ONE)), b_prime=Poly((z,)),
        label=f"perron_incgamma(z={z}, alpha={alpha})",
    )


def perron_log(x) -> TwoVariantCF:
    """1 + K(n^2 x / 2n ; n^2 x / 2n+1) for x off the ray (-inf, -1] and x != 0."""
    x = _q(x)
    if x.is_real and x.re <= -1:
        raise DomainError("perron_log needs x outside (-inf, -1]", x=str(x))
    if not x:
        raise DomainError("perron_log degenerates at x = 0 (zero partial numerators)")
    a = Poly((ZERO, ZERO, x))
    return TwoVariantCF(
        ONE, a=a, b=Poly((ZERO, QComplex(2))), a_prime=a, b_prime=Poly((ONE, QComplex(2))),
        label=f"perron_log(x={x})",
    )


def perron_cn(x, k) -> TwoVariantCF:
    """1/x + K((2n-1)^2 / x ; (2n)^2 k^2 / x) for x > 0, 0 < k < 1.

    Stored as the core ``x + K(...)`` behind a unit prefix quotient ``1/(0 + core)``.
    """
    x, k = _q(x), _q(k)
    if not x.is_real or x.re <= 0:
        raise DomainError("perron_cn needs real x > 0", x=str(x))
    if not k.is_real or not (0 < k.re < 1):
        raise DomainError("perron_cn needs real 0 < k < 1", k=str(k))
    return TwoVariantCF(
        x,
        a=Poly((ONE, QComplex(-4), QComplex(4))),
        b=Poly((x,)),
        a_prime=Poly((ZERO, ZERO, k * k * 4)),
        b_prime=Poly((x,)),
        label=f"perron_cn(x={x}, k={k})",
        prefix=((ONE, ZERO),),
    )


def arctan_cf(x) -> TwoVariantCF:
    """x/(1 + K((2m-1)^2 x^2 / 2m+1-(2m-1) x^2)), regrouped in pairs of quotients."""
    x = _q(x)
    modulus_sq = x.re * x.re + x.im * x.im
    if modulus_sq > 1:
        raise DomainError("arctan_cf needs |x| <= 1", x=str(x))
    if x.re == 0 and abs(x.im) == 1:
        raise DomainError("arctan_cf is singular at x = +-i", x=str(x))
    if not x:
        raise DomainError("arctan_cf degenerates at x = 0")
    x2 = x * x
    # c(m) = (2m-1)^2 x^2, d(m) = 2m+1-(2m-1) x^2
    c = Poly((x2, x2 * -4, x2 * 4))
    d = Poly((ONE + x2, QComplex(2) - x2 * 2))
    return regroup_one_variant(ZERO, c, d, label=f"arctan_cf(x={x})", prefix=((x, ONE),))
