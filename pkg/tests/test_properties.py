"""Randomised checks of the modified-approximant identity and Wallis agreement."""
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from tvcf.cf import TwoVariantCF, modified_approximant, u_plus
from tvcf.numerics import Poly, PrecisionContext

CTX = PrecisionContext(40)
small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
positive = st.fractions(min_value=Fraction(1, 4), max_value=5, max_denominator=7)


@st.composite
def cfs(draw):
    # positive coefficients keep denominators away from zero
    da = draw(st.integers(1, 2))
    db = draw(st.integers(0, 1))

    def poly(deg):
        return Poly(tuple(draw(positive) for _ in range(deg + 1)))

    return TwoVariantCF(draw(small), poly(da), poly(db), poly(da), poly(db))


@settings(max_examples=200)
@given(cfs(), st.integers(min_value=1, max_value=12), positive)
def test_one_step_identity(cf, n, w):
    # S_{2n-1}(u+(w)) == S_{2n+1}(w)
    lhs = modified_approximant(cf, 2 * n - 1, u_plus(cf, n, CTX.mpc(w), CTX), CTX)
    rhs = modified_approximant(cf, 2 * n + 1, CTX.mpc(w), CTX)
    assert abs(lhs - rhs) <= 1e3 * CTX.eps_rel ** 2 * max(abs(rhs), 1)


def _exact(cf, positions, w):
    v = Fraction(w)
    for pos in range(positions, 0, -1):
        m = (pos + 1) // 2
        num, den = (cf.a, cf.b) if pos % 2 else (cf.a_prime, cf.b_prime)
        v = Fraction(num(m).re) / (Fraction(den(m).re) + v)
    return Fraction(cf.b0_prime.re) + v


@settings(max_examples=60)
@given(cfs(), st.integers(min_value=1, max_value=15), positive)
def test_against_exact_fold(cf, n, w):
    assert abs(modified_approximant(cf, n, CTX.mpc(w), CTX) - CTX.mpc(_exact(cf, n, w))) \
        <= 1e3 * CTX.eps_rel ** 2
