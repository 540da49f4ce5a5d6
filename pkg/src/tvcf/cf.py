"""Two-variant continued fractions and their approximants.

A :class:`TwoVariantCF` represents::

    prefix( b0' + a_1/(b_1 + a'_1/(b'_1 + a_2/(b_2 + a'_2/(b'_2 + ...))))) )

Partial quotient number ``2m-1`` is ``a_m/b_m`` and number ``2m`` is
``a'_m/b'_m``.  The optional prefix is a list of outer quotients ``(c, d)``
meaning ``c/(d + inner)``, applied outermost-first.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegreeOutOfRange, DomainError, ZeroDenominator
from .numerics import ONE, ZERO, Poly, PrecisionContext, QComplex

SCHEMA = "tvcf/1"
ALLOWED_K = (1, 2)
ALLOWED_L = (0, 1)


def _check_degrees(a: Poly, b: Poly, a_prime: Poly, b_prime: Poly):
    k, kp, l, lp = a.degree, a_prime.degree, b.degree, b_prime.degree
    if k != kp or l != lp or k not in ALLOWED_K or l not in ALLOWED_L:
        raise DegreeOutOfRange(
            f"degrees (deg a, deg a', deg b, deg b') = ({k}, {kp}, {l}, {lp}); "
            f"need deg a = deg a' in {ALLOWED_K} and deg b = deg b' in {ALLOWED_L}",
            k=k, k_prime=kp, l=l, l_prime=lp,
        )
    return k, l


def _positive_integer_roots(p: Poly) -> list[int]:
    """Positive integers n with p(n) == 0 (exact)."""
    if p.degree <= 0:
        return []
    lead = abs(complex(p.coeffs[-1]))
    bound = 1 + max(abs(complex(c)) / lead for c in p.coeffs[:-1])
    return [n for n in range(1, int(math.ceil(bound)) + 1) if not p(n)]


@dataclass(frozen=True)
class TwoVariantCF:
    b0_prime: QComplex
    a: Poly
    b: Poly
    a_prime: Poly
    b_prime: Poly
    label: str = ""
    prefix: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "b0_prime", QComplex.of(self.b0_prime))
        for name in ("a", "b", "a_prime", "b_prime"):
            object.__setattr__(self, name, Poly.of(getattr(self, name)))
        object.__setattr__(
            self, "prefix",
            tuple((QComplex.of(c), QComplex.of(d)) for c, d in self.prefix),
        )
        _check_degrees(self.a, self.b, self.a_prime, self.b_prime)
        for name in ("a", "a_prime"):
            roots = _positive_integer_roots(getattr(self, name))
            if roots:
                raise DomainError(
                    f"partial numerator {name}(n) vanishes at n = {roots[0]}",
                    index=roots[0],
                )
        for c, _ in self.prefix:
            if not c:
                raise DomainError("prefix quotient with zero numerator")

    @property
    def k(self) -> int:
        return self.a.degree

    @property
    def l(self) -> int:
        return self.b.degree

    def quotient(self, position: int, ctx: PrecisionContext):
        """(numerator, denominator) of partial quotient ``position`` >= 1."""
        m, odd = divmod(position + 1, 2)
        if odd == 0:
            return self.a.eval_mp(m, ctx), self.b.eval_mp(m, ctx)
        return self.a_prime.eval_mp(m, ctx), self.b_prime.eval_mp(m, ctx)

    def apply_prefix(self, core_value, ctx: PrecisionContext):
        v = core_value
        for c, d in reversed(self.prefix):
            den = ctx.mpc(d) + v
            if den == 0:
                raise ZeroDenominator("zero denominator in prefix quotient", position=0)
            v = ctx.mpc(c) / den
        return v

    def core(self) -> "TwoVariantCF":
        """The same CF without its prefix quotients."""
        return TwoVariantCF(self.b0_prime, self.a, self.b, self.a_prime, self.b_prime,
                            label=self.label)

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA,
            "label": self.label,
            "b0_prime": self.b0_prime.pair(),
            "a": self.a.to_pairs(),
            "b": self.b.to_pairs(),
            "a_prime": self.a_prime.to_pairs(),
            "b_prime": self.b_prime.to_pairs(),
        }
        if self.prefix:
            out["prefix"] = [[c.pair(), d.pair()] for c, d in self.prefix]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "TwoVariantCF":
        def poly(key):
            return Poly(tuple(QComplex.of(c) for c in data[key]))

        return cls(
            QComplex.of(data.get("b0_prime", [0, 0])),
            poly("a"), poly("b"), poly("a_prime"), poly("b_prime"),
            label=data.get("label", ""),
            prefix=tuple((QComplex.of(c), QComplex.of(d)) for c, d in data.get("prefix", ())),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "TwoVariantCF":
        return cls.from_dict(json.loads(text))


def fold(cf: TwoVariantCF, start: int, stop: int, omega, ctx: PrecisionContext):
    """Fold partial quotients ``start`` down to ``stop`` (inclusive) around ``omega``.

    Returns ``num_stop/(den_stop + ... num_start/(den_start + omega))``.
    """
    v = omega
    for position in range(start, stop - 1, -1):
        num, den = cf.quotient(position, ctx)
        d = den + v
        if d == 0:
            raise ZeroDenominator(f"zero denominator at partial quotient {position}",
                                  position=position)
        v = num / d
    return v


def modified_approximant(cf: TwoVariantCF, n: int, omega, ctx: PrecisionContext):
    """S_n(omega), by backward evaluation from the innermost quotient."""
    if n < 0:
        raise ValueError("n must be non-negative")
    v = fold(cf, n, 1, ctx.mpc(omega), ctx)
    return cf.apply_prefix(ctx.mpc(cf.b0_prime) + v, ctx)


def classical_approximant(cf: TwoVariantCF, n: int, ctx: PrecisionContext):
    return modified_approximant(cf, n, 0, ctx)


def u_plus(cf: TwoVariantCF, n: int, u_next, ctx: PrecisionContext):
    """a'_n / (b'_n + a_{n+1}/(b_{n+1} + u_next))."""
    a1 = cf.a.eval_mp(n + 1, ctx)
    b1 = cf.b.eval_mp(n + 1, ctx)
    inner = b1 + u_next
    if inner == 0:
        raise ZeroDenominator("b_{n+1} + u_{n+1} vanishes", position=2 * n + 1, n=n)
    outer = cf.b_prime.eval_mp(n, ctx) + a1 / inner
    if outer == 0:
        raise ZeroDenominator("b'_n + a_{n+1}/(...) vanishes", position=2 * n, n=n)
    return cf.a_prime.eval_mp(n, ctx) / outer


def odd_tail_residual(cf: TwoVariantCF, n: int, x_n, x_next, ctx: PrecisionContext):
    """Left-hand side of the bilinear recurrence satisfied by consecutive odd tails."""
    ap = cf.a_prime.eval_mp(n, ctx)
    bp = cf.b_prime.eval_mp(n, ctx)
    a1 = cf.a.eval_mp(n + 1, ctx)
    b1 = cf.b.eval_mp(n + 1, ctx)
    return (bp * b1 + a1) * x_n + bp * x_n * x_next - ap * x_next - ap * b1


def regroup_one_variant(b0, c: Poly, d: Poly, label: str = "", prefix: Sequence = ()) -> TwoVariantCF:
    """Split ``b0 + K(c_m/d_m)`` into the two-variant form (odd/even indices)."""
    c, d = Poly.of(c), Poly.of(d)
    return TwoVariantCF(
        QComplex.of(b0),
        a=c.compose_linear(2, -1),
        b=d.compose_linear(2, -1),
        a_prime=c.compose_linear(2, 0),
        b_prime=d.compose_linear(2, 0),
        label=label,
        prefix=tuple(prefix),
    )


__all__ = [
    "SCHEMA", "TwoVariantCF", "fold", "modified_approximant", "classical_approximant",
    "u_plus", "odd_tail_residual", "regroup_one_variant", "ONE", "ZERO",
]
