"""Numeric substrate: extended-range complex scalars, unit-circle powers, and
the Lobachevsky function.

Values of colored Jones polynomials at roots of unity grow like e^{0.58 N},
which leaves the double range around N = 1200.  :class:`ExtComplex` keeps a
double mantissa and an unbounded power-of-two exponent; :class:`ExtArray` is
the vectorized counterpart used inside the O(N^2) summation loops.

Every power of ``t`` is computed from an exactly reduced angle, never by
repeated multiplication.  Fractional powers follow one global convention:
for ``t = exp(2*pi*i*theta)`` and rational ``x``, ``t**x = exp(2*pi*i*x*theta)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

__all__ = [
    "ExtComplex",
    "ExtArray",
    "UnitPoint",
    "RootContext",
    "ext_mul",
    "ext_add",
    "ext_log_abs",
    "lobachevsky",
    "MANTISSA_BITS",
]

MANTISSA_BITS = 53
LOG2 = math.log(2.0)
TWO_PI = 2.0 * math.pi


def _normalize(m: complex, e: int) -> tuple[complex, int]:
    if m == 0:
        return 0j, 0
    re, im = m.real, m.imag
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ValueError(f"non-finite mantissa {m!r}")
    # scale by the larger component first so abs() cannot overflow
    _, k = math.frexp(max(abs(re), abs(im)))
    re, im = math.ldexp(re, -k), math.ldexp(im, -k)
    e += k
    a = math.hypot(re, im)
    while a >= 2.0:
        re, im, a, e = re * 0.5, im * 0.5, a * 0.5, e + 1
    while a < 1.0:
        re, im, a, e = re * 2.0, im * 2.0, a * 2.0, e - 1
    return complex(re, im), e


class ExtComplex:
    """Complex number ``mantissa * 2**exponent`` with ``1 <= |mantissa| < 2``.

    Zero is stored as mantissa 0 and exponent 0.  Instances are immutable.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: complex = 0j, exponent: int = 0):
        m, e = _normalize(complex(mantissa), int(exponent))
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    def __setattr__(self, name, value):
        raise AttributeError("ExtComplex is immutable")

    @classmethod
    def from_complex(cls, z: complex) -> "ExtComplex":
        return cls(complex(z), 0)

    @classmethod
    def from_log(cls, log_abs: float, arg: float) -> "ExtComplex":
        """Build from natural log of the modulus and the argument."""
        e = math.floor(log_abs / LOG2)
        r = math.exp(log_abs - e * LOG2)
        return cls(complex(r * math.cos(arg), r * math.sin(arg)), e)

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def to_complex(self) -> complex:
        """Convert to a Python complex; raises OverflowError out of range."""
        if self.is_zero:
            return 0j
        if self.exponent > 1024:
            raise OverflowError("value exceeds double range")
        return complex(
            math.ldexp(self.mantissa.real, self.exponent),
            math.ldexp(self.mantissa.imag, self.exponent),
        )

    def fits_double(self) -> bool:
        return self.is_zero or -1000 < self.exponent < 1000

    def log_abs(self) -> float:
        return ext_log_abs(self)

    def arg(self) -> float:
        return math.atan2(self.mantissa.imag, self.mantissa.real)

    def conjugate(self) -> "ExtComplex":
        return ExtComplex(self.mantissa.conjugate(), self.exponent)

    def scale(self, z: complex) -> "ExtComplex":
        """Multiply by an ordinary complex number."""
        return ExtComplex(self.mantissa * complex(z), self.exponent)

    def __mul__(self, other):
        if not isinstance(other, ExtComplex):
            if isinstance(other, (int, float, complex)):
                return self.scale(other)
            return NotImplemented
        return ext_mul(self, other)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ExtComplex):
            if isinstance(other, (int, float, complex)):
                other = ExtComplex.from_complex(other)
            else:
                return NotImplemented
        return ext_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return ExtComplex(-self.mantissa, self.exponent)

    def __sub__(self, other):
        return self + (-other)

    def __truediv__(self, other):
        if isinstance(other, ExtComplex):
            if other.is_zero:
                raise ZeroDivisionError("division by zero ExtComplex")
            return ExtComplex(self.mantissa / other.mantissa, self.exponent - other.exponent)
        return ExtComplex(self.mantissa / complex(other), self.exponent)

    def __abs__(self):
        return abs(self.mantissa) * 2.0 ** self.exponent if self.exponent < 1000 else math.inf

    def __eq__(self, other):
        if not isinstance(other, ExtComplex):
            return NotImplemented
        return self.mantissa == other.mantissa and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.mantissa, self.exponent))

    def __repr__(self):
        return f"ExtComplex({self.mantissa!r}, {self.exponent})"


def ext_mul(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    if a.is_zero or b.is_zero:
        return ExtComplex()
    return ExtComplex(a.mantissa * b.mantissa, a.exponent + b.exponent)


def ext_add(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    """Sum of two extended values.

    When the exponents are more than the mantissa width apart the larger
    operand is returned unchanged.
    """
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a.exponent < b.exponent:
        a, b = b, a
    d = a.exponent - b.exponent
    if d > MANTISSA_BITS:
        return a
    m = a.mantissa + complex(math.ldexp(b.mantissa.real, -d), math.ldexp(b.mantissa.imag, -d))
    return ExtComplex(m, a.exponent)


def ext_log_abs(a: ExtComplex) -> float:
    if a.is_zero:
        raise ValueError("log of zero")
    return math.log(abs(a.mantissa)) + a.exponent * LOG2


class ExtArray:
    """Array of extended complex values with one exponent per element.

    Used for the running products of the double sums; mantissas are kept
    with max(|re|, |im|) in [0.5, 1).
    """

    __slots__ = ("mant", "exp")

    def __init__(self, mant, exp=None):
        self.mant = np.asarray(mant, dtype=np.complex128)
        self.exp = np.zeros(self.mant.shape, dtype=np.int64) if exp is None else np.asarray(exp, dtype=np.int64)
        self._renormalize()

    @classmethod
    def ones(cls, n: int) -> "ExtArray":
        return cls(np.ones(n, dtype=np.complex128))

    def _renormalize(self):
        m = self.mant
        big = np.maximum(np.abs(m.real), np.abs(m.imag))
        _, k = np.frexp(big)
        k = k.astype(np.int64)
        self.mant = np.ldexp(m.real, -k) + 1j * np.ldexp(m.imag, -k)
        self.exp = self.exp + k

    def __len__(self):
        return self.mant.shape[0]

    def __getitem__(self, item) -> "ExtArray":
        out = ExtArray.__new__(ExtArray)
        out.mant = self.mant[item]
        out.exp = self.exp[item]
        return out

    def imul(self, factors) -> "ExtArray":
        """In-place multiplication by an ordinary complex array."""
        self.mant = self.mant * factors
        self._renormalize()
        return self

    def sum(self, weights=None) -> ExtComplex:
        """Return sum(values * weights) as an ExtComplex."""
        m = self.mant if weights is None else self.mant * weights
        if m.size == 0:
            return ExtComplex()
        nz = m != 0
        if not nz.any():
            return ExtComplex()
        emax = int(self.exp[nz].max())
        shift = self.exp - emax
        s = np.ldexp(m.real, shift).sum() + 1j * np.ldexp(m.imag, shift).sum()
        return ExtComplex(complex(s), emax)

    def to_ext(self, i: int) -> ExtComplex:
        return ExtComplex(complex(self.mant[i]), int(self.exp[i]))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"turns must be rational, got {type(x).__name__}")


class UnitPoint:
    """A point ``t = exp(2*pi*i*turns)`` on the unit circle, ``turns`` rational.

    ``pow(num, den)`` returns ``t**(num/den)`` under the global convention,
    reducing the angle exactly with integer arithmetic.  ``num`` may be an
    integer or an integer numpy array.
    """

    def __init__(self, turns):
        self.turns = _as_fraction(turns)

    @classmethod
    def from_ratio(cls, j: int, M: int) -> "UnitPoint":
        if M == 0:
            raise ValueError("M must be nonzero")
        return cls(Fraction(j, M))

    def __repr__(self):
        return f"{type(self).__name__}(turns={self.turns})"

    def _reduce(self, num, den: int):
        p, q = self.turns.numerator, self.turns.denominator
        if isinstance(num, Fraction):
            num, den = num.numerator, num.denominator * den
        mod = den * q
        if np.isscalar(num) or isinstance(num, int):
            if int(num) != num:
                raise TypeError(f"exponent numerator must be an integer, got {num!r}")
            r = (int(num) * p) % mod
            if 2 * r >= mod:
                r -= mod
            return r / mod
        num = np.asarray(num)
        bound = int(np.abs(num).max()) * abs(p) if num.size else 0
        if bound >= 2**62 or mod >= 2**53:
            out = []
            for v in num.ravel():
                r = (int(v) * p) % mod
                out.append((r - mod if 2 * r >= mod else r) / mod)
            return np.array(out, dtype=np.float64).reshape(num.shape)
        r = (num.astype(np.int64) * p) % mod
        r = np.where(2 * r >= mod, r - mod, r)
        return r / mod

    def pow(self, num, den: int = 1):
        frac = self._reduce(num, den)
        if np.isscalar(frac):
            a = TWO_PI * frac
            return complex(math.cos(a), math.sin(a))
        return np.exp(1j * TWO_PI * frac)

    def angle_multiple_is_integer(self, num: int, den: int = 1) -> bool:
        """True when ``(num/den) * turns`` is an integer, i.e. ``t**(num/den) == 1``."""
        return (Fraction(num, den) * self.turns).denominator == 1

    def conjugate(self) -> "UnitPoint":
        return UnitPoint(-self.turns)


class RootContext(UnitPoint):
    """The root ``t = exp(2*pi*i*direction/N)`` with a cached power table.

    ``direction = -1`` gives the complex-conjugate root.
    """

    def __init__(self, order: int, direction: int = 1):
        if order < 1:
            raise ValueError(f"order must be positive, got {order}")
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        super().__init__(Fraction(direction, order))
        self.order = order
        self.direction = direction
        j = np.arange(order)
        self.powers = super().pow(j)
        self.powers[0] = 1.0

    def __repr__(self):
        return f"RootContext(order={self.order}, direction={self.direction})"

    def power(self, e):
        """Integer power ``t**e`` from the cache (``e`` int or int array)."""
        return self.powers[np.mod(e, self.order)]

    def conjugate(self) -> "RootContext":
        return RootContext(self.order, -self.direction)


# -- Lobachevsky function ----------------------------------------------------

_MAX_TERMS = 150
_REDUCE_AT = 0.75 * math.pi


@lru_cache(maxsize=None)
def _bernoulli_even(kmax: int) -> tuple[Fraction, ...]:
    # B_0..B_{2*kmax} via the standard recurrence; returns B_{2k}, k=0..kmax
    n = 2 * kmax
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        c = 1  # binomial(m+1, k)
        for k in range(m):
            acc += c * B[k]
            c = c * (m + 1 - k) // (k + 1)
        B[m] = -acc / (m + 1)
    return tuple(B[2 * k] for k in range(kmax + 1))


@lru_cache(maxsize=None)
def _lob_coefficients(kmax: int) -> np.ndarray:
    # d_k = zeta(2k) / (pi^{2k} k (2k+1)) = 2^{2k-1}|B_{2k}| / ((2k)! k (2k+1))
    B = _bernoulli_even(kmax)
    out = [0.0]
    for k in range(1, kmax + 1):
        d = Fraction(2 ** (2 * k - 1)) * abs(B[k]) / (math.factorial(2 * k) * k * (2 * k + 1))
        out.append(float(d))
    return np.array(out)


def _terms_for(tol: float, xmax: float) -> int:
    y2 = (xmax / math.pi) ** 2
    zeta2 = math.pi**2 / 6
    for K in range(1, _MAX_TERMS + 1):
        tail = zeta2 * xmax * y2 ** (K + 1) / ((K + 1) * (2 * K + 3) * (1 - y2))
        if tail <= 0.5 * tol:
            return K
    raise ValueError(f"tolerance {tol} not reachable with {_MAX_TERMS} terms")


def lobachevsky(x, tol: float = 1e-13):
    """Lobachevsky function ``L(x) = -int_0^x log|2 sin u| du`` on ``[0, pi]``.

    Uses ``L(x) = x - x log(2x) + sum_k zeta(2k) x^{2k+1} / (k (2k+1) pi^{2k})``,
    which comes from integrating the power series of ``log(sin u / u)``
    termwise.  The series converges geometrically for ``x <= 3 pi / 4``;
    larger arguments go through ``L(x) = -L(pi - x)``.  The truncation point
    is chosen from the tail bound ``zeta(2k) <= zeta(2)``.

    Accepts a float or a numpy array.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    scalar = np.isscalar(x)
    xa = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(xa < 0) or np.any(xa > math.pi) or np.any(np.isnan(xa)):
        raise ValueError("lobachevsky argument outside [0, pi]")
    K = _terms_for(tol, _REDUCE_AT)
    d = _lob_coefficients(K)

    flip = xa > _REDUCE_AT
    u = np.where(flip, math.pi - xa, xa)
    u2 = u * u
    acc = np.zeros_like(u)
    for k in range(K, 0, -1):
        acc = (acc + d[k]) * u2
    with np.errstate(divide="ignore", invalid="ignore"):
        head = np.where(u > 0, u - u * np.log(2.0 * u), 0.0)
    val = head + u * acc
    val = np.where(flip, -val, val)
    return float(val[0]) if scalar else val
