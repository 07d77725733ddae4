import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from volconj.numeric import (
    ExtArray,
    ExtComplex,
    RootContext,
    UnitPoint,
    ext_add,
    ext_log_abs,
    ext_mul,
    lobachevsky,
)

CATALAN = 0.915965594177219015054603514932


def test_mul_identity():
    one = ExtComplex(1.0, 0)
    r = ext_mul(one, one)
    assert (r.mantissa, r.exponent) == (1.0, 0)


def test_mul_exact_binary():
    a = ExtComplex(1.5, 10)
    r = ext_mul(a, a)
    assert (r.mantissa, r.exponent) == (1.125, 21)


def test_mul_by_zero():
    assert ext_mul(ExtComplex(1.7 - 0.2j, 55), ExtComplex()).is_zero


def test_add_zero_identity():
    x = ExtComplex(1.25 + 0.5j, -7)
    r = ext_add(x, ExtComplex())
    assert (r.mantissa, r.exponent) == (x.mantissa, x.exponent)


def test_add_one_plus_one():
    r = ext_add(ExtComplex(1.0, 0), ExtComplex(1.0, 0))
    assert (r.mantissa, r.exponent) == (1.0, 1)


def test_add_swamping_returns_larger():
    big = ExtComplex(1.0, 200)
    r = ext_add(big, ExtComplex(1.0, 0))
    assert (r.mantissa, r.exponent) == (1.0, 200)
    r = ext_add(ExtComplex(1.0, 0), big)
    assert (r.mantissa, r.exponent) == (1.0, 200)


def test_log_abs_values():
    assert ext_log_abs(ExtComplex(1.0, 0)) == 0.0
    assert ext_log_abs(ExtComplex(1.0, 100)) == pytest.approx(100 * math.log(2), rel=1e-12)
    assert ext_log_abs(ExtComplex.from_complex(math.e)) == pytest.approx(1.0, rel=1e-12)


def test_log_abs_zero_raises():
    with pytest.raises(ValueError):
        ext_log_abs(ExtComplex())


def test_normalization_and_roundtrip():
    for z in (3.0 + 4.0j, -1e-300 + 0j, 1e300j, 0.75 - 0.1j):
        x = ExtComplex.from_complex(z)
        assert 1 <= abs(x.mantissa) < 2
        assert x.to_complex() == z
    zero = ExtComplex.from_complex(0)
    assert zero.mantissa == 0 and zero.exponent == 0


def test_huge_exponents_do_not_overflow():
    a = ExtComplex(1.5, 2**40)
    b = ext_mul(a, a)
    assert b.exponent == 2**41 + 1
    assert not b.fits_double()
    with pytest.raises(OverflowError):
        b.to_complex()


def test_from_log_roundtrip():
    x = ExtComplex.from_log(5000.0, 0.3)
    assert x.log_abs() == pytest.approx(5000.0, rel=1e-14)
    assert x.arg() == pytest.approx(0.3, abs=1e-12)


def test_extarray_sum_matches_plain():
    rng = np.random.default_rng(1)
    v = rng.normal(size=50) + 1j * rng.normal(size=50)
    arr = ExtArray(v.copy())
    arr.imul(np.full(50, 2.0**600))
    arr.imul(np.full(50, 2.0**600))
    s = arr.sum()
    assert s.exponent > 1100
    back = ExtComplex(s.mantissa, s.exponent - 1200).to_complex()
    assert back == pytest.approx(v.sum(), rel=1e-13)


def test_root_context_cache_is_exact():
    ctx = RootContext(12)
    assert ctx.power(12) == 1
    assert ctx.power(0) == 1
    assert ctx.power(3) == pytest.approx(1j, abs=1e-16)


def test_root_powers_compose():
    ctx = RootContext(17)
    ulp = math.ulp(1.0)
    for j in range(17):
        for k in range(17):
            assert ctx.power(j + k) == ctx.power((j + k) % 17)
            d = ctx.power(j) * ctx.power(k) - ctx.power((j + k) % 17)
            # one rounding in each cached factor plus the product itself
            assert max(abs(d.real), abs(d.imag)) <= 3 * ulp


@pytest.mark.parametrize("N", [3, 10, 97, 1000])
def test_geometric_sum_vanishes(N):
    ctx = RootContext(N)
    total = sum(ctx.power(j) for j in range(N))
    assert abs(total) <= N * 1e-12


def test_fractional_powers_follow_angle_convention():
    t = UnitPoint(Fraction(1, 2))  # t = -1
    assert t.pow(1, 2) == pytest.approx(1j, abs=1e-16)
    assert t.pow(-1, 2) == pytest.approx(-1j, abs=1e-16)
    assert t.pow(5, 2) == pytest.approx(1j, abs=1e-16)
    assert t.pow(Fraction(1, 2)) == t.pow(1, 2)
    with pytest.raises(TypeError):
        t.pow(0.5)


def test_large_power_reduction_is_exact():
    t = UnitPoint(Fraction(1, 7))
    assert t.pow(7 * 10**30 + 1) == pytest.approx(t.pow(1), abs=1e-15)
    arr = t.pow(np.array([7 * 10**15 + 2, 3], dtype=np.int64))
    assert arr[0] == pytest.approx(t.pow(2), abs=1e-15)


def test_conjugate_context():
    ctx = RootContext(9)
    bar = RootContext(9, -1)
    assert bar.power(2) == pytest.approx(ctx.power(2).conjugate(), abs=1e-16)


def test_lobachevsky_special_values():
    assert lobachevsky(0.0) == 0.0
    assert abs(lobachevsky(math.pi / 2)) <= 1e-13
    assert abs(lobachevsky(math.pi)) <= 1e-13
    assert lobachevsky(math.pi / 4) == pytest.approx(CATALAN / 2, abs=1e-13)
    assert 8 * lobachevsky(math.pi / 4) == pytest.approx(3.6638623767088760, abs=1e-12)


def test_lobachevsky_against_clausen_oracle():
    xs = np.linspace(0.0, math.pi, 61)
    ours = lobachevsky(xs, 1e-13)
    for x, v in zip(xs, ours):
        assert abs(v - float(oracles.lobachevsky_mp(x))) <= 1e-13


def test_lobachevsky_domain():
    with pytest.raises(ValueError):
        lobachevsky(-0.1)
    with pytest.raises(ValueError):
        lobachevsky(math.pi + 0.1)


def test_lobachevsky_reflection_grid():
    x = np.linspace(0.0, math.pi, 1000)
    assert np.abs(lobachevsky(x, 1e-13) + lobachevsky(math.pi - x, 1e-13)).max() <= 2e-13
