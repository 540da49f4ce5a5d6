import numpy as np
import pytest

from tvcf import kernels
from tvcf.accel import accelerate
from tvcf.cf import modified_approximant
from tvcf.gallery import INVARIANT_CASES, build
from tvcf.numerics import PrecisionContext
from tvcf.tails import tail_model


@pytest.fixture(scope="module")
def ctx():
    return PrecisionContext(32)


@pytest.mark.parametrize("gid,params", INVARIANT_CASES)
def test_fold_matches_mpmath(gid, params, ctx):
    cf = build(gid, params)
    omegas = np.array([0, 1.5, 2 - 1j])
    fast = kernels.odd_approximants_fast(cf, 20, omegas)
    for w, f in zip(omegas, fast):
        slow = complex(modified_approximant(cf, 39, ctx.mpc(complex(w)), ctx))
        assert abs(f - slow) <= 1e-12 * max(abs(slow), 1)


@pytest.mark.parametrize("gid,params", INVARIANT_CASES)
def test_accelerate_matches_mpmath(gid, params, ctx):
    cf = build(gid, params)
    model = tail_model(cf.core(), ctx)
    fast = kernels.accelerate_fast(cf, 12, 6, model)
    slow = complex(accelerate(cf, 12, 6, ctx, model=model).value)
    assert abs(fast - slow) <= 1e-10 * max(abs(slow), 1)


def test_numpy_and_compiled_rows_agree(ctx):
    cf = build("perron_digamma", {"x": "1", "nu": "1/2"})
    a, b, ap, bp = kernels.sequences(cf, 40)
    row = np.linspace(1, 3, 39).astype(np.complex128) + 0.1j
    ref = kernels._accel_row_np(a, b, ap, bp, row, 2.0, 1)
    got = kernels.accel_row_kernel(a, b, ap, bp, row, 2.0, 1)
    assert np.allclose(ref, got, rtol=1e-14)
    v = np.array([0.5 + 0j])
    assert np.allclose(kernels._fold_odd_np(a, b, ap, bp, 30, v),
                       kernels.fold_odd_kernel(a, b, ap, bp, 30, v), rtol=1e-14)


def test_bad_shape_rejected(ctx):
    cf = build("arctan", {"x": "1"})
    with pytest.raises(ValueError):
        kernels.accelerate_fast(cf, 3, 3, tail_model(cf.core(), ctx))


def test_backend_name():
    assert kernels.BACKEND in ("numba", "numpy")
