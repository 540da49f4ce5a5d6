from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from tvcf.errors import DomainError
from tvcf.numerics import (
    Poly, PrecisionContext, QComplex, acc, format_number, parse_number, quadratic_roots,
    round_half_away,
)

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
gaussian = st.builds(QComplex, fractions, fractions)


@pytest.mark.parametrize("text, re, im", [
    ("1/16", Fraction(1, 16), 0),
    ("-1.5+0.01i", Fraction(-3, 2), Fraction(1, 100)),
    ("2i", 0, 2),
    ("-i", 0, -1),
    ("3-i", 3, -1),
    ("0.9", Fraction(9, 10), 0),
    ("1e-2", Fraction(1, 100), 0),
    ("1/2+3/4i", Fraction(1, 2), Fraction(3, 4)),
])
def test_parse_number_exact(text, re, im):
    assert parse_number(text) == QComplex(re, im)


@pytest.mark.parametrize("bad", ["", "abc", "1+", "1 ++2i", "i2"])
def test_parse_number_rejects(bad):
    with pytest.raises(DomainError):
        parse_number(bad)


@given(gaussian)
def test_format_parse_round_trip(z):
    assert parse_number(format_number(z)) == z


@given(gaussian, gaussian)
def test_qcomplex_matches_python_complex(x, y):
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), rel=1e-12, abs=1e-12)
    if y:
        assert complex(x / y) == pytest.approx(complex(x) / complex(y), rel=1e-12, abs=1e-12)


@given(st.lists(gaussian, min_size=1, max_size=4), st.integers(-20, 20))
def test_poly_shift_is_translation(coeffs, n):
    p = Poly(tuple(coeffs))
    assert p.shift()(n) == p(n + 1)


@given(st.lists(gaussian, min_size=1, max_size=3), fractions, fractions, st.integers(-9, 9))
def test_compose_linear(coeffs, s, t, n):
    p = Poly(tuple(coeffs))
    assert p.compose_linear(s, t)(n) == p(s * n + t)


def test_poly_degree_and_trim():
    assert Poly((1, 2, 0, 0)).degree == 1
    assert Poly((0,)).degree == -1
    assert Poly(()).degree == -1


def test_poly_eval_mp_matches_exact(ctx64):
    p = Poly(("1/3", "2-i", "5/7"))
    exact = p(Fraction(11))
    assert abs(p.eval_mp(11, ctx64) - ctx64.mpc(exact)) < ctx64.mpf(10) ** -60


def test_precision_context_is_isolated():
    a, b = PrecisionContext(20), PrecisionContext(100)
    assert a.mp.prec < b.mp.prec
    assert mpmath.mp.prec == 53  # global context untouched
    assert a.eps_rel == a.mp.mpf(10) ** -10


def test_precision_context_rejects_tiny():
    with pytest.raises(ValueError):
        PrecisionContext(4)


def test_acc_definition(ctx64):
    assert acc("1.001", 1, ctx64) == pytest.approx(3.0, abs=1e-12)
    assert acc(1, 1, ctx64) == ctx64.acc_cap
    with pytest.raises(DomainError):
        acc(1, 0, ctx64)


@pytest.mark.parametrize("value, shown", [
    (1.245, "1.25"), (1.2449, "1.24"), (-1.245, "-1.25"), (10.075, "10.08"), (3.0, "3.00"),
])
def test_round_half_away(value, shown):
    assert round_half_away(value) == shown


@given(gaussian, gaussian, gaussian)
def test_quadratic_roots_solve_equation(alpha, beta, gamma):
    if not alpha:
        return
    ctx = PrecisionContext(40)
    a, b, c = ctx.mpc(alpha), ctx.mpc(beta), ctx.mpc(gamma)
    r1, r2 = quadratic_roots(a, b, c, ctx)
    scale = max(abs(a) * abs(r1) ** 2, abs(b) * abs(r1), abs(c), 1)
    assert abs(a * r1 * r1 + b * r1 + c) <= ctx.mpf(10) ** -30 * scale
    # Vieta: product of roots
    assert abs(r1 * r2 * a - c) <= ctx.mpf(10) ** -30 * max(abs(c), abs(a * r1 * r2), 1)
    assert abs(r1) >= abs(r2) * (1 - ctx.mpf(10) ** -30)
