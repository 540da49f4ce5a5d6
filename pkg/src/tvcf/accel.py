"""Iterated improvement of tail approximations (the triangular array u_{nj}).

Each sweep combines the current approximation ``u_{nj}`` with the one-step
back-substituted value ``u+_{nj}``::

    u_{n,j+1} = (phi * u+ - psi * u_{nj}) / (phi - psi)
    phi = 1 + (m/2 + j*theta) / n
    psi = a'_n a_{n+1} / (a_{n+1} + b'_n b_{n+1} + b'_n u_{n+1,j})**2

and consumes one trailing entry of the row.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cf import TwoVariantCF, fold, modified_approximant
from .errors import DomainError, RowExhausted, ZeroDenominator
from .numerics import PrecisionContext, acc
from .tails import TailModel, eval_initial, tail_model


@dataclass
class TailTable:
    """rows[j][i] holds u_{start+i, j}; row j has N - j entries."""

    rows: list
    model: TailModel
    N: int
    J: int
    start: int = 1

    def cell(self, n: int, j: int):
        return self.rows[j][n - self.start]


@dataclass
class AccelResult:
    cf: TwoVariantCF
    value: object
    table: TailTable
    reference: object = None
    diagnostics: Optional[list] = None

    @property
    def headline_acc(self) -> Optional[float]:
        if self.diagnostics is None:
            return None
        return self.diagnostics[0][self.table.J]


def initial_row(model: TailModel, N: int, ctx: PrecisionContext, start: int = 1) -> list:
    return [eval_initial(model, n, ctx) for n in range(start, start + N)]


def iterate_once(cf: TwoVariantCF, model: TailModel, row: Sequence, j: int,
                 ctx: PrecisionContext, start: int = 1) -> list:
    """Row j+1 from row j; entry n uses u_{nj} and u_{n+1,j} only."""
    if len(row) < 2:
        raise RowExhausted(f"row {j} has {len(row)} entries; need at least 2", j=j)
    mp = ctx.mp
    order = model.order(j)
    order_mp = mp.mpf(order.numerator) / order.denominator
    out = []
    for i in range(len(row) - 1):
        n = start + i
        u, u_next = row[i], row[i + 1]
        ap = cf.a_prime.eval_mp(n, ctx)
        bp = cf.b_prime.eval_mp(n, ctx)
        a1 = cf.a.eval_mp(n + 1, ctx)
        b1 = cf.b.eval_mp(n + 1, ctx)
        inner = b1 + u_next
        if inner == 0:
            raise ZeroDenominator("b_{n+1} + u_{n+1,j} vanishes", n=n, j=j)
        outer = bp + a1 / inner
        if outer == 0:
            raise ZeroDenominator("b'_n + a_{n+1}/(b_{n+1} + u_{n+1,j}) vanishes", n=n, j=j)
        u_plus = ap / outer
        d = a1 + bp * inner
        # d == outer * inner, already known to be nonzero
        psi = ap * a1 / (d * d)
        phi = 1 + order_mp / n
        gap = phi - psi
        if gap == 0:
            raise ZeroDenominator("phi - psi vanishes", n=n, j=j)
        out.append((phi * u_plus - psi * u) / gap)
    return out


def build_table(cf: TwoVariantCF, model: TailModel, N: int, J: int, ctx: PrecisionContext,
                start: int = 1, row0: Optional[Sequence] = None, keep_rows: bool = True) -> TailTable:
    if J < 0 or N < J + 1:
        raise DomainError(f"need 0 <= J <= N - 1, got N={N}, J={J}", N=N, J=J)
    row = list(row0) if row0 is not None else initial_row(model, N, ctx, start)
    if len(row) != N:
        raise DomainError(f"row 0 must have N={N} entries, got {len(row)}")
    rows = [row]
    for j in range(J):
        row = iterate_once(cf, model, row, j, ctx, start)
        if keep_rows:
            rows.append(row)
        else:
            rows = [row]
    if not keep_rows:
        # keep only the final row, padded so that rows[J] is addressable
        rows = [None] * J + rows
    return TailTable(rows=rows, model=model, N=N, J=J, start=start)


def odd_approximants(cf: TwoVariantCF, omegas: Sequence, ctx: PrecisionContext) -> list:
    """S_{2n-1}(omegas[n-1]) for n = 1..len(omegas)."""
    return [modified_approximant(cf, 2 * n - 1, w, ctx) for n, w in enumerate(omegas, start=1)]


def delta_table(result: AccelResult, reference, ctx: PrecisionContext) -> list:
    """acc(S_{2n-1}(u_{nj})) for every retained cell; rows indexed by n, columns by j."""
    ref = ctx.mpc(reference)
    if ref == 0:
        raise DomainError("reference value is zero")
    table = result.table
    cf = result.cf
    out = []
    for n in range(1, table.N + 1):
        cells = []
        for j in range(0, table.N - n + 1):
            if j > table.J or table.rows[j] is None:
                break
            w = table.cell(n, j)
            cells.append(acc(modified_approximant(cf, 2 * n - 1, w, ctx), ref, ctx))
        out.append(cells)
    return out


def accelerate(cf: TwoVariantCF, N: int, J: int, ctx: PrecisionContext, reference=None,
               model: Optional[TailModel] = None, diagnostics: Optional[bool] = None) -> AccelResult:
    """Run the main loop and return S_1(u_{1,J}) with the retained table.

    ``diagnostics`` defaults to True whenever a reference value is supplied.
    """
    if J < 0 or N < J + 1:
        raise DomainError(f"need 0 <= J <= N - 1, got N={N}, J={J}", N=N, J=J)
    if model is None:
        model = tail_model(cf.core(), ctx)
    if diagnostics is None:
        diagnostics = reference is not None
    table = build_table(cf, model, N, J, ctx, keep_rows=diagnostics)
    value = modified_approximant(cf, 1, table.cell(1, J), ctx)
    result = AccelResult(cf=cf, value=value, table=table, reference=reference)
    if diagnostics and reference is not None:
        result.diagnostics = delta_table(result, reference, ctx)
    return result
