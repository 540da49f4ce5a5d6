"""Asymptotic model of the odd tails and the initial approximations u_{n0}.

The odd tails behave like ``u_n = sum_j tau_j * n**(-j/2)`` starting at the
beginning coefficient ``tau_{-mu}``.  :func:`initial_tail` returns the model
used to seed the iteration; :func:`extended_coefficients` exposes the further
closed-form coefficients that are only used for validation.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .classifier import (
    ShiftedCoeffs, SubclassTag, classify, dt21_roots, shifted_coeffs,
)
from .errors import BoundaryCondition, DegenerateCoefficient
from .numerics import PrecisionContext, QComplex

MU = {"De10": 1, "Dn10": 2, "D11": 2, "De20": 2, "Dn20": 4, "Dt21": 2}
INITIAL_M = {"De10": 1, "Dn10": 2, "D11": 2, "De20": 0, "Dn20": 0, "Dt21": 2}
THETA = {"De10": 1, "Dn10": 2, "D11": 4, "De20": 1, "Dn20": 2, "Dt21": 2}
# Exponent of the leading term of phi - psi (order n**-eta).
ETA = {"De10": Fraction(1, 2), "De20": Fraction(1), "Dn10": Fraction(0),
       "D11": Fraction(0), "Dn20": Fraction(0), "Dt21": Fraction(0)}


@dataclass(frozen=True)
class TailModel:
    tag: SubclassTag
    mu: int
    m: int
    theta: int
    tau: dict
    alpha: object
    beta: object
    gamma: object

    @property
    def beginning(self):
        return self.tau.get(-self.mu, 0)

    def order(self, j: int) -> Fraction:
        """Order of u_{nj}: m/2 + j*theta (exact)."""
        return Fraction(self.m, 2) + j * self.theta

    def with_tau(self, **updates) -> "TailModel":
        """Copy with replaced coefficients, e.g. ``with_tau(**{"-2": value})``."""
        tau = dict(self.tau)
        tau.update({int(k): v for k, v in updates.items()})
        return replace(self, tau=tau)

    def to_dict(self) -> dict:
        pair = lambda z: [str(z.real), str(z.imag)]
        return {
            "tag": self.tag.name,
            "mu": self.mu,
            "m": self.m,
            "theta": self.theta,
            "tau": {str(j): pair(v) for j, v in sorted(self.tau.items())},
            "alpha": pair(self.alpha),
            "beta": pair(self.beta),
            "gamma": pair(self.gamma),
        }


def eval_initial(model: TailModel, n: int, ctx: PrecisionContext):
    """u_{n0} = sum over stored tau_j of tau_j * n**(-j/2)."""
    mp = ctx.mp
    total = mp.mpc(0)
    root = None
    for j, t in model.tau.items():
        if t == 0:
            continue
        if j % 2 == 0:
            total += t * mp.mpf(n) ** (-j // 2)
        else:
            if root is None:
                root = mp.sqrt(mp.mpf(n))
            total += t * root ** (-j)
    return total


def _mp(sc: ShiftedCoeffs, ctx) -> ShiftedCoeffs:
    return sc.to_mp(ctx) if isinstance(sc.p[-1], QComplex) else sc


def _name(tag) -> str:
    return tag.name if isinstance(tag, SubclassTag) else str(tag)


def table2_row(tag, sc: ShiftedCoeffs, ctx: PrecisionContext):
    """(alpha, beta, gamma) of the quadratic satisfied by the beginning coefficient."""
    s = _mp(sc, ctx)
    p, pp, q, qp = s.p, s.pp, s.q, s.qp
    name = _name(tag)
    rows = {
        "De10": lambda: (qp[0], 0 * qp[0], -q[0] * p[-1]),
        "Dn10": lambda: (qp[0], p[-1] - pp[-1], 0 * qp[0]),
        "D11": lambda: (qp[-1], q[-1] * qp[-1], 0 * qp[0]),
        "De20": lambda: (qp[0], p[-1] - pp[-1] - p[-2], -q[0] * p[-2]),
        "Dn20": lambda: (qp[0], p[-2] - pp[-2], 0 * qp[0]),
        "Dt21": lambda: (qp[-1], p[-2] - pp[-2] + q[-1] * qp[-1], -q[-1] * pp[-2]),
    }
    alpha, beta, gamma = rows[name]()
    if alpha == 0:
        raise DegenerateCoefficient(f"alpha vanishes for {name}")
    return alpha, beta, gamma


def _sign_of_real(w, ctx, what):
    if abs(w.real) <= ctx.eps_rel * abs(w):
        raise BoundaryCondition(f"Re({what}) vanishes: subclass boundary", value=str(w))
    return 1 if w.real > 0 else -1


def _div(num, den, what):
    if den == 0:
        raise DegenerateCoefficient(f"zero denominator in {what}")
    return num / den


def beginning_coefficient(tag, sc: ShiftedCoeffs, ctx: PrecisionContext):
    """tau_{-mu}, with the branch selected by the subclass rule."""
    mp = ctx.mp
    s = _mp(sc, ctx)
    p, pp, q, qp = s.p, s.pp, s.q, s.qp
    name = _name(tag)
    if name == "De10":
        r = mp.sqrt(_div(q[0] * p[-1], qp[0], "tau_{-1}"))
        return _sign_of_real(qp[0] * r / p[-1], ctx, "q'_0 sqrt(.)/p_{-1}") * r
    if name == "Dn10":
        if abs(pp[-1]) < abs(p[-1]):
            return mp.mpc(0)
        return _div(pp[-1] - p[-1], qp[0], "tau_{-2}")
    if name == "D11":
        return mp.mpc(0)
    if name == "De20":
        alpha, beta, gamma = table2_row("De20", s, ctx)
        r = mp.sqrt(beta * beta - 4 * alpha * gamma)
        sgn = _sign_of_real(r / p[-2], ctx, "sqrt(beta^2-4 alpha gamma)/p_{-2}")
        num, other = -beta + sgn * r, -beta - sgn * r
        if abs(num) >= abs(other):
            return num / (2 * alpha)
        # tau * tau_other = gamma/alpha; avoids cancellation in num
        return 2 * gamma / other
    if name == "Dn20":
        if abs(pp[-2]) < abs(p[-2]):
            return mp.mpc(0)
        return _div(pp[-2] - p[-2], qp[0], "tau_{-4}")
    if name == "Dt21":
        return dt21_roots(s, ctx)[0]
    raise ValueError(f"unknown subclass {name!r}")


def _dt21_tau0(s, t):
    p, pp, q, qp = s.p, s.pp, s.q, s.qp
    num = (pp[-2] * q[0] + pp[-1] * q[-1]
           - (qp[-1] * q[0] + qp[0] * q[-1] - pp[-1] + p[-1] - pp[-2]) * t
           - (qp[-1] + qp[0]) * t * t)
    den = 2 * qp[-1] * t + p[-2] - pp[-2] + qp[-1] * q[-1]
    return _div(num, den, "Dt21 tau_0")


def _dn10_tau0(s, tau_m2):
    p, pp, q, qp = s.p, s.pp, s.q, s.qp
    if tau_m2 == 0:
        return _div(pp[-1] * q[0], p[-1] - pp[-1], "Dn10 tau_0")
    return (_div(p[-1] * q[0], pp[-1] - p[-1], "Dn10 tau_0")
            + (p[-1] + pp[0] - p[0]) / qp[0]
            + (p[-1] - pp[-1]) * qp[1] / (qp[0] * qp[0]))


def _dn20_tau_m2(s, tau_m4):
    p, pp, qp = s.p, s.pp, s.qp
    if tau_m4 == 0:
        return 0 * p[-2]
    return ((2 * p[-2] + pp[-1] - p[-1]) / qp[0]
            + qp[1] * (p[-2] - pp[-2]) / (qp[0] * qp[0]))


def initial_tail(tag, sc: ShiftedCoeffs, ctx: PrecisionContext) -> TailModel:
    """Tail model whose :func:`eval_initial` gives the initial approximants u_{n0}."""
    s = _mp(sc, ctx)
    p, pp, q, qp = s.p, s.pp, s.q, s.qp
    name = _name(tag)
    if not isinstance(tag, SubclassTag):
        tag = SubclassTag(name)
    alpha, beta, gamma = table2_row(name, s, ctx)
    lead = beginning_coefficient(tag, s, ctx)
    if name == "De10":
        tau = {-1: lead, 0: (2 * pp[0] - 2 * qp[0] * q[0] + p[-1] - 2 * p[0]) / (4 * qp[0])}
    elif name == "Dn10":
        tau = {-2: lead, 0: _dn10_tau0(s, lead)}
    elif name == "D11":
        tau = {0: pp[-1] / qp[-1]}
    elif name == "De20":
        tau = {-2: lead}
    elif name == "Dn20":
        tau = {-4: lead, -2: _dn20_tau_m2(s, lead)}
    else:
        tau = {-2: lead, 0: _dt21_tau0(s, lead)}
    return TailModel(tag=tag, mu=MU[name], m=INITIAL_M[name], theta=THETA[name],
                     tau=tau, alpha=alpha, beta=beta, gamma=gamma)


def extended_coefficients(tag, sc: ShiftedCoeffs, ctx: PrecisionContext) -> dict:
    """Every tau_j available in closed form for the subclass (validation targets)."""
    s = _mp(sc, ctx)
    p, pp, q, qp = s.p, s.pp, s.q, s.qp
    name = _name(tag)
    zero = 0 * p[-1]
    lead = beginning_coefficient(tag, s, ctx)
    out = {j: zero for j in range(-4, -MU[name])}
    if name == "De10":
        out.update({-2: zero, -1: lead,
                    0: (2 * pp[0] - 2 * qp[0] * q[0] + p[-1] - 2 * p[0]) / (4 * qp[0])})
    elif name == "Dn10":
        out.update({-2: lead, -1: zero, 0: _dn10_tau0(s, lead), 1: zero})
    elif name == "D11":
        tau0 = pp[-1] / qp[-1] if lead == 0 else q[-1] - q[0] - p[-1] / qp[-1]
        out.update({-2: lead, -1: zero, 0: tau0, 1: zero})
    elif name == "De20":
        den = 2 * lead * qp[0] + p[-1] - pp[-1]
        num = (pp[-1] * q[0] + p[-2] * q[1] - (qp[1] + qp[0]) * lead * lead
               + (pp[-1] + pp[0] - p[0] - qp[0] * q[0]) * lead)
        out.update({-4: zero, -3: zero, -2: lead, -1: zero,
                    0: _div(num, den, "De20 tau_0"), 1: zero})
    elif name == "Dn20":
        out.update({-4: lead, -3: zero, -2: _dn20_tau_m2(s, lead), -1: zero})
    else:
        out.update({-3: zero, -2: lead, -1: zero, 0: _dt21_tau0(s, lead), 1: zero})
    return out


def tail_model(cf, ctx: PrecisionContext) -> TailModel:
    """Classify ``cf`` (its core) and build the initial tail model."""
    sc = shifted_coeffs(cf)
    return initial_tail(classify(sc, ctx), sc, ctx)
