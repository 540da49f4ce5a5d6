import pytest

from tvcf.cf import classical_approximant
from tvcf.errors import DomainError
from tvcf.gallery import GALLERY, ORACLE_CACHE, build, get_entry, oracle_value, parse_params
from tvcf.gallery import oracles
from tvcf.numerics import PrecisionContext, acc


def close(x, y, ctx, slack=100):
    return abs(ctx.mpc(x) - ctx.mpc(y)) <= slack * ctx.eps_rel ** 2 * max(abs(ctx.mpc(y)), 1)


@pytest.fixture
def mp60():
    ctx = PrecisionContext(60)
    return ctx, ctx.mp


def test_digamma_matches_builtin(mp60):
    ctx, mp = mp60
    for z in ("0.3", "1", "7.25", "2+3i", "0.1-0.5i"):
        assert close(oracles.digamma(ctx.mpc(z), ctx), mp.digamma(ctx.mpc(z)), ctx)


def test_incgamma_matches_builtin(mp60):
    ctx, mp = mp60
    for z, a in (("0.0625", 4), ("2", "0.5"), ("0.5", "-1.5")):
        zz, aa = ctx.mpf(z), ctx.mpf(a)
        # int_z^inf e^-v v^-a dv = Gamma(1-a, z)
        expect = 1 / (zz ** (aa - 1) * mp.exp(zz) * mp.gammainc(1 - aa, zz))
        assert close(oracles.incgamma_ratio(zz, aa, ctx), expect, ctx, slack=1e4)


def test_cn_matches_builtin(mp60):
    ctx, mp = mp60
    cn = oracles.JacobiCn(ctx.mpf("0.9"), ctx)
    for t in ("0.1", "1.3", "5"):
        ref = mp.ellipfun("cn", ctx.mpf(t), m=ctx.mpf("0.81"))
        assert close(cn(ctx.mpf(t)), ref, ctx, slack=1e3)


def test_cn_folding_matches_truncated_quadrature():
    ctx = PrecisionContext(30)
    a = oracles.cn_laplace("0.8", "0.9", ctx)
    b = oracles.cn_laplace_truncated("0.8", "0.9", ctx)
    assert acc(a, b, ctx) > 25


def test_arctan_and_log(mp60):
    ctx, mp = mp60
    for x in ("1", "1/2", "-0.3+0.4i", "0.999i"):
        v = ctx.mpc(x) if "/" not in x else ctx.mpf(1) / 2
        assert close(oracles.arctan(v, ctx), mp.atan(v), ctx)
    for x in ("1", "-1.5+0.01i", "3i"):
        v = ctx.mpc(x)
        assert close(oracles.log_ratio(v, ctx), v / mp.log(1 + v), ctx)


@pytest.mark.parametrize("gid", sorted(GALLERY))
def test_literals_agree_with_oracles(gid):
    entry = get_entry(gid)
    ctx = PrecisionContext(40)
    for key, text in entry.literals.items():
        params = dict(zip(entry.params, key))
        digits = len(text.replace(".", "").lstrip("0"))
        value = oracle_value(gid, params, ctx).real
        assert ctx.mp.nstr(value, digits, strip_zeros=False) == text


@pytest.mark.parametrize("gid", sorted(GALLERY))
def test_defaults_build_and_converge(gid):
    ctx = PrecisionContext(30)
    v = oracle_value(gid, None, ctx)
    cf = build(gid)
    assert acc(classical_approximant(cf, 401, ctx), v, ctx) > 1


@pytest.mark.parametrize("gid,params", [
    ("perron_digamma", {"x": "-1"}),
    ("perron_incgamma", {"z": "-1"}),
    ("perron_incgamma", {"z": "1", "alpha": "1+i"}),
    ("perron_log", {"x": "-2"}),
    ("perron_log", {"x": "0"}),
    ("perron_cn", {"k": "1"}),
    ("perron_cn", {"x": "0"}),
    ("arctan", {"x": "2"}),
    ("arctan", {"x": "i"}),
    ("arctan", {"x": "0"}),
])
def test_domain_errors(gid, params):
    with pytest.raises(DomainError):
        build(gid, params)
    with pytest.raises(DomainError):
        oracle_value(gid, params, PrecisionContext(20))


def test_unknown_ids_and_params():
    with pytest.raises(DomainError):
        get_entry("nope")
    with pytest.raises(DomainError):
        build("arctan", {"y": "1"})
    with pytest.raises(DomainError):
        parse_params(["x"])
    assert parse_params(["x = 1/2"])["x"].re == pytest.approx(0.5)


def test_cache_reuses_values():
    ctx = PrecisionContext(24)
    ORACLE_CACHE.clear()
    a = oracle_value("perron_log", {"x": "1"}, ctx)
    b = oracle_value("perron_log", {"x": "1"}, ctx)
    assert a is b and len(ORACLE_CACHE) == 1
