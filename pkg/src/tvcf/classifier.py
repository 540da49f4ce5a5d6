"""Shifted coefficients and subclass membership tests.

Subclass tags:

======  =====================================================
De10    deg a = 1, deg b = 0, p_{-1} = p'_{-1}
Dn10    deg a = 1, deg b = 0, |p_{-1}| != |p'_{-1}|
D11     deg a = 1, deg b = 1
De20    deg a = 2, deg b = 0, p_{-2} = p'_{-2}
Dn20    deg a = 2, deg b = 0, |p_{-2}| != |p'_{-2}|
Dt21    deg a = 2, deg b = 1, fixed-point roots at distinct distances
======  =====================================================

``p_{-k}`` is the coefficient of ``n**k`` in ``a_{n+1}``, ``p'_{-k}`` that of
``a'_n``; ``q``/``q'`` likewise for ``b_{n+1}``/``b'_n``.  Note that the
constant term of ``b'_n`` is read as ``q'_0`` (the source table prints
``q_0`` in that slot, which the surrounding formulas contradict).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cf import TwoVariantCF
from .errors import DegenerateCoefficient, DegreeOutOfRange, NotInClassD
from .numerics import PrecisionContext, QComplex, quadratic_roots

TAGS = ("De10", "Dn10", "D11", "De20", "Dn20", "Dt21")


@dataclass(frozen=True)
class ShiftedCoeffs:
    """Coefficients of a_{n+1}, a'_n, b_{n+1}, b'_n keyed by -power.

    ``p[-2]`` multiplies ``n**2`` in ``a_{n+1}``; ``q[1]`` (the ``n**-1``
    coefficient) is always zero for polynomial sequences.
    """

    p: dict
    pp: dict
    q: dict
    qp: dict
    k: int
    l: int

    def to_mp(self, ctx: PrecisionContext) -> "ShiftedCoeffs":
        conv = lambda d: {i: ctx.mpc(v) for i, v in d.items()}
        return ShiftedCoeffs(conv(self.p), conv(self.pp), conv(self.q), conv(self.qp),
                             self.k, self.l)

    def as_dict(self) -> dict:
        def name(prefix, i):
            return f"{prefix}{i}"
        out = {}
        for prefix, d in (("p", self.p), ("pp", self.pp), ("q", self.q), ("qp", self.qp)):
            for i, v in d.items():
                out[name(prefix, i)] = v
        return out


def _by_power(poly, keys):
    return {key: poly.coeff(-key) if key <= 0 else QComplex() for key in keys}


def shifted_coeffs(cf: TwoVariantCF) -> ShiftedCoeffs:
    """Exact coefficients aligned so that entry ``-k`` multiplies ``n**k``."""
    return ShiftedCoeffs(
        p=_by_power(cf.a.shift(), (-2, -1, 0)),
        pp=_by_power(cf.a_prime, (-2, -1, 0)),
        q=_by_power(cf.b.shift(), (-2, -1, 0, 1)),
        qp=_by_power(cf.b_prime, (-2, -1, 0, 1)),
        k=cf.k,
        l=cf.l,
    )


@dataclass(frozen=True)
class SubclassTag:
    name: str
    witness: dict = field(default_factory=dict)

    def __str__(self):
        return self.name

    def __eq__(self, other):
        if isinstance(other, str):
            return self.name == other
        if isinstance(other, SubclassTag):
            return self.name == other.name
        return NotImplemented

    def __hash__(self):
        return hash(self.name)


def rel_equal(x, y, ctx: PrecisionContext) -> bool:
    return abs(x - y) <= ctx.eps_rel * max(abs(x), abs(y))


def is_nonpositive_real(w, ctx: PrecisionContext) -> bool:
    """Numerically on (-inf, 0]: tiny imaginary part and non-positive real part."""
    scale = abs(w)
    return abs(w.imag) <= ctx.eps_rel * scale and w.real <= ctx.eps_rel * scale


def _moduli_differ(x, y, ctx) -> bool:
    return abs(abs(x) - abs(y)) > ctx.eps_rel * max(abs(x), abs(y))


def _require_nonzero(value, what):
    if value == 0:
        raise DegenerateCoefficient(f"{what} vanishes")


def dt21_quadratic(sc: ShiftedCoeffs):
    """(alpha, beta, gamma) of q'_{-1} x^2 + (p_{-2}-p'_{-2}+q_{-1}q'_{-1}) x - q_{-1}p'_{-2}."""
    p, pp, q, qp = sc.p, sc.pp, sc.q, sc.qp
    return qp[-1], p[-2] - pp[-2] + q[-1] * qp[-1], -q[-1] * pp[-2]


def dt21_roots(sc: ShiftedCoeffs, ctx: PrecisionContext):
    """Roots (chosen, rejected) and their distances to p'_{-2}/q'_{-1}."""
    alpha, beta, gamma = dt21_quadratic(sc)
    _require_nonzero(alpha, "q'_{-1}")
    x0, x1 = quadratic_roots(alpha, beta, gamma, ctx)
    target = sc.pp[-2] / sc.qp[-1]
    d0, d1 = abs(target - x0), abs(target - x1)
    if abs(d0 - d1) <= ctx.eps_rel * max(d0, d1):
        raise NotInClassD("Dt21 roots are equidistant from p'_{-2}/q'_{-1}",
                          distance=str(d0))
    if d1 < d0:
        x0, x1, d0, d1 = x1, x0, d1, d0
    return x0, x1, d0, d1


def classify(sc: ShiftedCoeffs, ctx: PrecisionContext) -> SubclassTag:
    """Decide the subclass; raise NotInClassD when no condition holds."""
    if sc.k not in (1, 2) or sc.l not in (0, 1):
        raise DegreeOutOfRange(f"(k, l) = ({sc.k}, {sc.l}) is not supported", k=sc.k, l=sc.l)
    s = sc if not isinstance(sc.p[-1], QComplex) else sc.to_mp(ctx)
    p, pp, q, qp = s.p, s.pp, s.q, s.qp

    if (sc.k, sc.l) == (1, 0):
        _require_nonzero(qp[0], "q'_0")
        if rel_equal(p[-1], pp[-1], ctx):
            w = q[0] * qp[0] / p[-1]
            if is_nonpositive_real(w, ctx):
                raise NotInClassD("q_0 q'_0 / p_{-1} lies on (-inf, 0]", quotient=str(w))
            return SubclassTag("De10", {"quotient": w})
        if _moduli_differ(p[-1], pp[-1], ctx):
            return SubclassTag("Dn10", {"abs_p": abs(p[-1]), "abs_pp": abs(pp[-1])})
        raise NotInClassD("|p'_{-1}| = |p_{-1}| but p'_{-1} != p_{-1}")

    if (sc.k, sc.l) == (1, 1):
        _require_nonzero(qp[-1], "q'_{-1}")
        return SubclassTag("D11", {})

    if (sc.k, sc.l) == (2, 0):
        _require_nonzero(qp[0], "q'_0")
        if rel_equal(p[-2], pp[-2], ctx):
            alpha, beta, gamma = qp[0], p[-1] - pp[-1] - p[-2], -p[-2] * q[0]
            disc = beta * beta - 4 * alpha * gamma
            w = disc / (p[-2] * p[-2])
            if is_nonpositive_real(w, ctx):
                raise NotInClassD("(beta^2 - 4 alpha gamma)/p_{-2}^2 lies on (-inf, 0]",
                                  quotient=str(w))
            return SubclassTag("De20", {"discriminant": disc, "quotient": w})
        if _moduli_differ(p[-2], pp[-2], ctx):
            return SubclassTag("Dn20", {"abs_p": abs(p[-2]), "abs_pp": abs(pp[-2])})
        raise NotInClassD("|p'_{-2}| = |p_{-2}| but p'_{-2} != p_{-2}")

    x0, x1, d0, d1 = dt21_roots(s, ctx)
    return SubclassTag("Dt21", {"root": x0, "other_root": x1, "distance": d0,
                                "other_distance": d1})


def classify_cf(cf: TwoVariantCF, ctx: PrecisionContext) -> SubclassTag:
    return classify(shifted_coeffs(cf), ctx)
