"""Randomized invariants."""

import math
from fractions import Fraction

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from volconj.cyclotomic import CycloElem, cyclo_field
from volconj.jones import TorusKnotSpec, jones_torus
from volconj.numeric import ExtComplex, UnitPoint, ext_add, ext_mul, lobachevsky

finite = st.floats(min_value=-1e100, max_value=1e100, allow_nan=False, allow_infinity=False)
moderate = st.complex_numbers(min_magnitude=1e-100, max_magnitude=1e100, allow_nan=False, allow_infinity=False)
mantissas = st.complex_numbers(min_magnitude=1.0, max_magnitude=1.9, allow_nan=False, allow_infinity=False)
exponents = st.integers(min_value=-(2**40), max_value=2**40)


def close(a: complex, b: complex, rel: float) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b))


@given(moderate, moderate)
def test_ext_mul_matches_complex(a, b):
    r = ext_mul(ExtComplex.from_complex(a), ExtComplex.from_complex(b)).to_complex()
    assert close(r, a * b, 1e-13)


@given(moderate, moderate)
def test_ext_add_matches_complex(a, b):
    exact = a + b
    assume(abs(exact) > 1e-3 * max(abs(a), abs(b)))
    r = ext_add(ExtComplex.from_complex(a), ExtComplex.from_complex(b)).to_complex()
    assert close(r, exact, 1e-13)


@given(mantissas, exponents, mantissas, exponents)
def test_ext_mul_commutes_exactly(ma, ea, mb, eb):
    a, b = ExtComplex(ma, ea), ExtComplex(mb, eb)
    x, y = ext_mul(a, b), ext_mul(b, a)
    assert (x.mantissa, x.exponent) == (y.mantissa, y.exponent)


@given(mantissas, exponents, mantissas, exponents, mantissas, exponents)
def test_ext_mul_associative(ma, ea, mb, eb, mc, ec):
    a, b, c = ExtComplex(ma, ea), ExtComplex(mb, eb), ExtComplex(mc, ec)
    x = ext_mul(ext_mul(a, b), c)
    y = ext_mul(a, ext_mul(b, c))
    d = x.exponent - y.exponent
    assert abs(d) <= 1
    ym = y.mantissa * 2.0**-d
    assert abs(x.mantissa - ym) <= 4 * math.ulp(2.0) * 2


@given(mantissas, exponents)
def test_ext_normalized(m, e):
    x = ExtComplex(m * 3.7, e)
    assert 1 <= abs(x.mantissa) < 2


@given(st.floats(min_value=0.0, max_value=math.pi))
def test_lobachevsky_reflection(x):
    tol = 1e-13
    assert abs(lobachevsky(x, tol) + lobachevsky(math.pi - x, tol)) <= 2 * tol


def small_elems(m):
    deg = cyclo_field(m).degree
    return st.lists(st.integers(-20, 20), min_size=deg, max_size=deg).map(lambda c: CycloElem(cyclo_field(m), c))


@settings(max_examples=60)
@given(st.sampled_from([3, 4, 5, 8, 12, 15, 24, 28]).flatmap(lambda m: st.tuples(small_elems(m), small_elems(m))))
def test_embedding_is_a_ring_homomorphism(pair):
    a, b = pair
    for direction in (1, -1):
        ea, eb = a.embed(direction), b.embed(direction)
        scale = max(1.0, abs(ea) * abs(eb))
        assert abs((a * b).embed(direction) - ea * eb) <= 1e-10 * scale
        assert abs((a + b).embed(direction) - (ea + eb)) <= 1e-10 * max(1.0, abs(ea) + abs(eb))


@settings(max_examples=60)
@given(
    st.sampled_from([(p, q) for p in range(1, 36) for q in range(1, 36) if p * q <= 35 and math.gcd(p, q) == 1]),
    st.integers(1, 30),
    st.integers(1, 200),
    st.integers(2, 211),
)
def test_torus_order_symmetry(pq, n, j, M):
    p, q = pq
    t = UnitPoint(Fraction(j, M))
    assume(not t.angle_multiple_is_integer(n))
    den = abs(t.pow(n, 2) - t.pow(-n, 2))
    assume(den > 1e-6)
    a = jones_torus(TorusKnotSpec(p, q), n, t).to_complex()
    b = jones_torus(TorusKnotSpec(q, p), n, t).to_complex()
    assert abs(a - b) <= 1e-10 * max(1.0, abs(a)) / den


@settings(max_examples=40)
@given(st.integers(1, 10**6), st.integers(2, 10**6), st.integers(-(10**12), 10**12))
def test_unit_point_matches_angle(j, M, e):
    t = UnitPoint(Fraction(j, M))
    expected = np.exp(2j * np.pi * float(Fraction(e * j, M) % 1))
    assert abs(t.pow(e) - expected) <= 1e-9
