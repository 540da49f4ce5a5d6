from fractions import Fraction

import pytest

from reference_tables import DIGAMMA_HALF_ROW, DIGAMMA_ONE_TABLE
from tvcf.accel import accelerate, build_table, delta_table, initial_row, iterate_once
from tvcf.cf import modified_approximant
from tvcf.errors import DomainError, RowExhausted, ZeroDenominator
from tvcf.gallery import build, oracle_value
from tvcf.numerics import PrecisionContext, acc, round_half_away
from tvcf.tails import tail_model
from tvcf.validation import numeric_tails

V1 = "1.327052799890558739735"
DIG1 = ("perron_digamma", {"x": "1", "nu": "1/2"})


def ex1():
    return build(*DIG1)


def test_hand_iteration_step(ctx64):
    # u_{1,0} = 2, u_{2,0} = 4 for the digamma CF at x=1; evaluate the three formulas exactly
    a2, b2, ap1, bp1 = Fraction(35, 4), 1, 4, 1
    u1, u2 = Fraction(2), Fraction(4)
    u_plus = ap1 / (bp1 + a2 / (b2 + u2))
    psi = ap1 * a2 / (a2 + bp1 * b2 + bp1 * u2) ** 2
    phi = 1
    expected = (phi * u_plus - psi * u1) / (phi - psi)
    assert u_plus == Fraction(16, 11) and expected == Fraction(656, 493)
    cf = ex1()
    model = tail_model(cf, ctx64)
    row = iterate_once(cf, model, [ctx64.mpc(2), ctx64.mpc(4)], 0, ctx64)
    assert len(row) == 1
    assert abs(row[0] - ctx64.mpc(expected)) < 1e-60
    assert round_half_away(acc(modified_approximant(cf, 1, row[0], ctx64), V1, ctx64)) == "2.40"


def test_row_exhausted(ctx64):
    cf = ex1()
    with pytest.raises(RowExhausted):
        iterate_once(cf, tail_model(cf, ctx64), [ctx64.mpc(1)], 3, ctx64)


def test_table_shape_and_row0(ctx64):
    cf = ex1()
    model = tail_model(cf, ctx64)
    table = build_table(cf, model, 9, 5, ctx64)
    assert [len(r) for r in table.rows] == [9, 8, 7, 6, 5, 4]
    assert table.rows[0] == initial_row(model, 9, ctx64)
    lean = build_table(cf, model, 9, 5, ctx64, keep_rows=False)
    assert lean.rows[:5] == [None] * 5 and lean.rows[5] == table.rows[5]


def test_rows_validation(ctx64):
    with pytest.raises(DomainError):
        accelerate(ex1(), 3, 3, ctx64)
    with pytest.raises(DomainError):
        accelerate(ex1(), 3, -1, ctx64)


def test_j0_value_is_s1_of_initial(ctx64):
    cf = ex1()
    res = accelerate(cf, 1, 0, ctx64)
    assert res.value == modified_approximant(cf, 1, ctx64.mpc(2), ctx64)


def test_digamma_table_reproduced(ctx128):
    res = accelerate(ex1(), 11, 10, ctx128, reference=V1)
    for n, printed in DIGAMMA_ONE_TABLE.items():
        got = [float(round_half_away(d)) for d in res.diagnostics[n - 1]]
        assert got == pytest.approx(list(printed), abs=0.0101), f"row {n}"
    # printed S_1(u_{1,10}) = 1.327052799780862...
    assert abs(res.value - ctx128.mpc("1.327052799780862")) < 1e-15


def test_digamma_half_first_row(ctx128):
    cf = build("perron_digamma", {"x": "1/2", "nu": "1/2"})
    res = accelerate(cf, 11, 10, ctx128, reference="0.883414269615")
    got = [float(round_half_away(d)) for d in res.diagnostics[0]]
    assert got == pytest.approx(list(DIGAMMA_HALF_ROW), abs=0.0101)


def test_u_n1_expansion_coefficient(ctx64):
    # u_{n1} = 2n - 15/16 + (225/512)/n + O(n^-2) for the digamma CF at x=1
    cf = ex1()
    model = tail_model(cf, ctx64)
    n = 4000
    table = build_table(cf, model, 2, 1, ctx64, start=n)
    coeff = (table.rows[1][0] - 2 * n + ctx64.mpc(Fraction(15, 16))) * n
    assert abs(coeff - ctx64.mpc(Fraction(225, 512))) < 1e-3


def test_tables_monotone_in_j(ctx128):
    res = accelerate(ex1(), 11, 10, ctx128, reference=V1)
    for row in res.diagnostics:
        assert all(b > a for a, b in zip(row, row[1:]))


def test_reference_equal_to_value_caps(ctx64):
    cf = ex1()
    res = accelerate(cf, 4, 3, ctx64, diagnostics=True)
    cells = delta_table(res, res.value, ctx64)
    assert cells[0][3] == ctx64.acc_cap
    with pytest.raises(DomainError):
        delta_table(res, 0, ctx64)


def test_exact_tails_are_a_fixed_point(ctx40):
    for gid, params in (DIG1, ("perron_log", {"x": "1"}), ("perron_incgamma",
                                                        {"z": "1/16", "alpha": "4"})):
        cf = build(gid, params).core()
        model = tail_model(cf, ctx40)
        tails = numeric_tails(cf, 21, ctx40)
        row = [tails[n] for n in range(1, 21)]
        for j in range(3):
            nxt = iterate_once(cf, model, row, j, ctx40)
            for i, x in enumerate(nxt):
                assert abs(x - row[i]) <= 10 * ctx40.eps_rel * abs(row[i])
            row = nxt


def test_rational_loop_precision_stable():
    # rational inputs and rational row 0: doubling precision moves cells only at roundoff
    cf = ex1()
    lo, hi = PrecisionContext(40), PrecisionContext(80)
    a = build_table(cf, tail_model(cf, lo), 8, 7, lo)
    b = build_table(cf, tail_model(cf, hi), 8, 7, hi)
    for ra, rb in zip(a.rows, b.rows):
        for x, y in zip(ra, rb):
            assert abs(lo.mpc(x) - lo.mpc(y)) <= lo.eps_rel * abs(lo.mpc(y))


def test_zero_gap_surfaces_with_position(ctx64):
    cf = ex1()
    model = tail_model(cf, ctx64)
    # choose u_{2,0} so that b_2 + u_{2,0} = 0
    with pytest.raises(ZeroDenominator) as err:
        iterate_once(cf, model, [ctx64.mpc(1), ctx64.mpc(-1)], 0, ctx64)
    assert err.value.details["n"] == 1 and err.value.details["j"] == 0


def test_acceleration_beats_classical(ctx64):
    from tvcf.cf import classical_approximant
    from tvcf.gallery import INVARIANT_CASES

    for gid, params in INVARIANT_CASES:
        cf = build(gid, params)
        v = oracle_value(gid, params, ctx64)
        fast = acc(accelerate(cf, 12, 8, ctx64).value, v, ctx64)
        slow = acc(classical_approximant(cf, 23, ctx64), v, ctx64)
        assert fast >= slow, (gid, params, fast, slow)


def test_log_complex_table_monotone_and_corner(ctx128):
    params = {"x": "-1.5+0.01i"}
    ref = oracle_value("perron_log", params, ctx128)
    res = accelerate(build("perron_log", params), 15, 14, ctx128, reference=ref)
    assert round_half_away(res.diagnostics[0][14], 1) == "16.2"
    for row in res.diagnostics:
        assert all(b > a for a, b in zip(row, row[1:]))


def test_each_row_gains_order(ctx40):
    cf = build(*DIG1).core()
    model = tail_model(cf, ctx40)
    tails = numeric_tails(cf, 70, ctx40)
    table = build_table(cf, model, 67, 3, ctx40)
    for j in range(3):
        ratios = [abs(table.cell(n, j + 1) - tails[n]) / abs(table.cell(n, j) - tails[n])
                  for n in (8, 16, 32, 64)]
        assert all(b < a for a, b in zip(ratios, ratios[1:])), (j, ratios)
