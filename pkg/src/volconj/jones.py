"""Colored Jones polynomials of torus knots, twisted Whitehead links WL(r) and
Whitehead doubles WD(T(p,q), r), evaluated on the unit circle.

Two families of entry points:

* ``*_at_root`` functions evaluate at the Kashaev point ``t = exp(2 pi i/N)``
  where the generic formulas degenerate to 0/0; they use the cancelled
  (WL) or L'Hospital (WD, torus) forms.
* ``*_generic`` functions evaluate the raw tangle-product formulas at any
  rational angle where no denominator vanishes.  They serve as the
  limit-consistency oracle for the at-root paths.

The companion torus knot is evaluated at colour ``2n+1`` but at the root of
order ``N``; the API keeps colour and evaluation point as separate arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .numeric import ExtArray, ExtComplex, RootContext, UnitPoint

__all__ = [
    "TorusKnotSpec",
    "PatternKind",
    "PatternSpec",
    "JonesValue",
    "VanishingDenominatorError",
    "xi_value",
    "xi_at_root",
    "jones_torus",
    "jones_torus_limit",
    "jones_torus_at_root",
    "hat_jones_torus",
    "hat_jones_torus_tderiv",
    "b_coeff",
    "jones_wl_at_root",
    "jones_wl_generic",
    "jones_wd_at_root",
    "jones_wd_generic",
    "wl_generic_at",
    "wd_generic_at",
]


class VanishingDenominatorError(ArithmeticError):
    """Raised when a generic formula hits 0/0; use the at-root/limit path."""


@dataclass(frozen=True)
class TorusKnotSpec:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError(f"torus knot parameters must be positive, got ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")

    @property
    def is_trivial(self) -> bool:
        return min(self.p, self.q) == 1

    def __str__(self):
        return f"T({self.p},{self.q})"


class PatternKind(str, Enum):
    TORUS = "torus"
    WL = "wl"
    WD = "wd"


@dataclass(frozen=True)
class PatternSpec:
    kind: PatternKind
    r: int = 0


@dataclass(frozen=True)
class JonesValue:
    N: int
    value: ExtComplex
    log_abs: float
    two_pi_log_over_N: float

    @classmethod
    def from_value(cls, N: int, value: ExtComplex) -> "JonesValue":
        if value.is_zero:
            return cls(N, value, -math.inf, -math.inf)
        la = value.log_abs()
        return cls(N, value, la, 2 * math.pi * la / N)


def _point(t) -> UnitPoint:
    if isinstance(t, UnitPoint):
        return t
    return UnitPoint(t)


# -- torus knots (Morton's formula) ------------------------------------------

def _morton_exponents(p: int, q: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Four times the exponents of the two monomial families in
    ``(t^{n/2} - t^{-n/2}) J_{T(p,q),n}``.

    With ``k2 = 2k`` running over ``-(n-1), -(n-3), ..., n-1``:
    ``4*(-pq(n^2-1)/4 + pk(qk+1) +- (qk + 1/2))``.
    """
    k2 = np.arange(-(n - 1), n, 2, dtype=np.int64)
    base = -p * q * (n * n - 1) + p * k2 * (q * k2 + 2)
    shift = 2 * q * k2 + 2
    return base + shift, base - shift


def _hat_pair(p: int, q: int, n: int, point: UnitPoint) -> tuple[complex, complex]:
    """(hat J, t d/dt hat J) of T(p,q) at colour n, as plain complex numbers."""
    ep, em = _morton_exponents(p, q, n)
    wp, wm = point.pow(ep, 4), point.pow(em, 4)
    hat = complex(wp.sum() - wm.sum())
    deriv = complex((ep * wp).sum() - (em * wm).sum()) / 4.0
    return hat, deriv


def hat_jones_torus(knot: TorusKnotSpec, n: int, t) -> ExtComplex:
    """``(t^{n/2} - t^{-n/2}) J_{T(p,q),n}(t)`` summed without any division."""
    if n < 1:
        raise ValueError("colour n must be >= 1")
    return ExtComplex.from_complex(_hat_pair(knot.p, knot.q, n, _point(t))[0])


def hat_jones_torus_tderiv(knot: TorusKnotSpec, n: int, t) -> ExtComplex:
    """``t d/dt`` of :func:`hat_jones_torus`, differentiating monomial by monomial."""
    if n < 1:
        raise ValueError("colour n must be >= 1")
    return ExtComplex.from_complex(_hat_pair(knot.p, knot.q, n, _point(t))[1])


def jones_torus(knot: TorusKnotSpec, n: int, t) -> ExtComplex:
    """Morton's formula for ``J_{T(p,q),n}(t)``.

    Raises :class:`VanishingDenominatorError` when ``t^n = 1``.
    """
    if n < 1:
        raise ValueError("colour n must be >= 1")
    point = _point(t)
    if point.angle_multiple_is_integer(n):
        raise VanishingDenominatorError(f"t^{n/2} - t^{-n/2} vanishes at turns={point.turns}")
    hat, _ = _hat_pair(knot.p, knot.q, n, point)
    den = point.pow(n, 2) - point.pow(-n, 2)
    return ExtComplex.from_complex(hat / den)


def jones_torus_limit(knot: TorusKnotSpec, n: int, t) -> ExtComplex:
    """Like :func:`jones_torus` but resolves 0/0 by L'Hospital in ``t d/dt``."""
    point = _point(t)
    if not point.angle_multiple_is_integer(n):
        return jones_torus(knot, n, point)
    _, deriv = _hat_pair(knot.p, knot.q, n, point)
    # t d/dt (t^{n/2} - t^{-n/2}) = (n/2)(t^{n/2} + t^{-n/2})
    dden = 0.5 * n * (point.pow(n, 2) + point.pow(-n, 2))
    return ExtComplex.from_complex(deriv / dden)


def jones_torus_at_root(knot: TorusKnotSpec, ctx: RootContext) -> JonesValue:
    """Kashaev invariant ``J_{T(p,q),N}(exp(2 pi i/N))``."""
    return JonesValue.from_value(ctx.order, jones_torus_limit(knot, ctx.order, ctx))


# -- clasp eigenvalue xi_{N,n} -----------------------------------------------

def _xi_prefactor_exponent(N: int) -> int:
    # twice (N^2-1)/2 + N(N-1)/2
    return 2 * N * N - N - 1


def xi_value(t, N: int, n: int) -> ExtComplex:
    """``xi_{N,n}(t)``; the i-sum reuses the j-product across adjacent i.

    Going from i to i+1 multiplies the product by
    ``(1 - t^{N-i-1-n})(1 - t^{i+1+n}) / ((1 - t^{N-i-1})(1 - t^{i+1}))``.
    """
    if not 0 <= n < N:
        raise ValueError(f"n={n} outside [0, {N})")
    point = _point(t)

    def one_minus(e):
        return 1.0 - point.pow(e)

    prod = ExtComplex(1.0)
    for j in range(1, n + 1):
        num = one_minus(N - j) * one_minus(j)
        den = one_minus(j)
        if den == 0:
            raise VanishingDenominatorError(f"1 - t^{j} vanishes")
        prod = prod.scale(num / den)
    total = ExtComplex()
    for i in range(0, N - n):
        if i > 0:
            den = one_minus(N - i) * one_minus(i)
            if den == 0:
                raise VanishingDenominatorError(f"1 - t^{i} vanishes")
            prod = prod.scale(one_minus(N - i - n) * one_minus(i + n) / den)
        total = total + prod.scale(point.pow(-N * (i + n)))
    return total.scale(point.pow(_xi_prefactor_exponent(N), 2))


def xi_at_root(ctx: RootContext, n: int) -> ExtComplex:
    """``xi_{N,n}`` at the context root."""
    return xi_value(ctx, ctx.order, n)


def _clasp_rows(point: UnitPoint, N: int, with_logderiv: bool = False):
    """Yield ``(n, rows, G)`` for n = 0..N-1.

    ``rows`` holds ``t^{-N(i+n)} prod_{j<=n} (1-t^{N-i-j})(1-t^{i+j})/(1-t^j)``
    for i = 0..N-1-n, advanced from n-1 by one factor per entry.  When
    requested, ``G`` is ``t d/dt log`` of the j-product (at the root only
    the product part matters; the caller adds the monomial exponents).
    """
    i = np.arange(N, dtype=np.int64)
    rows = ExtArray(point.pow(-N * i))
    G = np.zeros(N, dtype=np.complex128) if with_logderiv else None
    for n in range(N):
        if n > 0:
            m = N - n
            rows = rows[:m]
            ii = i[:m]
            a = 1.0 - point.pow(N - ii - n)
            b = 1.0 - point.pow(ii + n)
            c = 1.0 - point.pow(n)
            if c == 0:
                raise VanishingDenominatorError(f"1 - t^{n} vanishes")
            rows.imul(a * b / c * point.pow(-N))
            if with_logderiv:
                G = G[:m] + _g(point, N - ii - n) + _g(point, ii + n) - _g(point, n)
        yield n, rows, G


def _g(point: UnitPoint, m):
    # t d/dt log(1 - t^m) = m / (1 - t^{-m})
    return m / (1.0 - point.pow(-np.asarray(m)))


# -- twisted Whitehead link ----------------------------------------------------

def jones_wl_at_root(ctx: RootContext, r: int) -> JonesValue:
    """``J_{WL(r),N}`` at ``t = exp(2 pi i/N)``.

    The belt quotient tends to ``2n+1`` and the clasp powers ``t^{-N(i+n)}``
    are 1, leaving ``t^{c} sum_n (2n+1) t^{r n(n+1)} sum_i P_{n,i}``.
    """
    N = ctx.order
    total = ExtComplex()
    for n, rows, _ in _clasp_rows(ctx, N):
        term = rows.sum().scale((2 * n + 1) * ctx.pow(r * n * (n + 1)))
        total = total + term
    total = total.scale(ctx.pow(_xi_prefactor_exponent(N), 2))
    return JonesValue.from_value(N, total)


def wl_generic_at(t, r: int, N: int) -> ExtComplex:
    """Tangle-product formula for ``J_{WL(r),N}`` at a generic point.

    The normalization factor's numerator and the belt denominator are the
    same quantity and are cancelled before evaluation.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    point = _point(t)
    if point.angle_multiple_is_integer(N):
        raise VanishingDenominatorError("t^{N/2} - t^{-N/2} vanishes; use jones_wl_at_root")
    den = point.pow(N, 2) - point.pow(-N, 2)
    total = ExtComplex()
    for n, rows, _ in _clasp_rows(point, N):
        e = N * (2 * n + 1)
        belt = (point.pow(e, 2) - point.pow(-e, 2)) / den
        total = total + rows.sum().scale(belt * point.pow(r * n * (n + 1)))
    return total.scale(point.pow(_xi_prefactor_exponent(N), 2))


def jones_wl_generic(M: int, j: int, r: int, N: int) -> ExtComplex:
    """``J_{WL(r),N}`` at ``t = exp(2 pi i j/M)``."""
    return wl_generic_at(UnitPoint.from_ratio(j, M), r, N)


# -- Whitehead doubles ---------------------------------------------------------

def b_coeff(ctx: RootContext, n: int, i: int, r: int) -> complex:
    """The closed-form L'Hospital coefficient ``b_{n,i}``:

    ``r n(n+1) - N(i+n) + sum_j ( -(N-i-j)/(1-t^{-N+i+j}) - (i+j)/(1-t^{-i-j}) + j/(1-t^{-j}) )``.

    :func:`jones_wd_at_root` does not use it by default: differentiating the
    clasp product directly gives the same expression with the opposite sign
    on the j-sum, and only that version matches the generic-point limit.
    """
    N = ctx.order
    if not (0 <= n and 0 <= i and n + i < N):
        raise ValueError(f"indices (n={n}, i={i}) outside 0 <= n, i, n+i < {N}")
    total = complex(r * n * (n + 1) - N * (i + n))
    for j in range(1, n + 1):
        total += -(N - i - j) / (1 - ctx.pow(-N + i + j)) - (i + j) / (1 - ctx.pow(-i - j)) + j / (1 - ctx.pow(-j))
    return total


def jones_wd_at_root(ctx: RootContext, companion: TorusKnotSpec, r: int, weight: str = "derived") -> JonesValue:
    """``J_{WD(T(p,q),r),N}`` at ``t = exp(2 pi i/N)`` via L'Hospital.

    The numerator ``F(t) = sum_n t^{r n(n+1)} xi_{N,n}(t) hatJ_{2n+1}(t)``
    vanishes at the root, so ``J = (t dF/dt) / (t d/dt (t^{N/2}-t^{-N/2}))``
    with the denominator derivative equal to ``-N``.  Differentiating
    ``t^{c + r n(n+1) - N(i+n)} P_{n,i}`` yields the per-term weight
    ``r n(n+1) - N(i+n) + G_{n,i}`` (the constant ``c`` multiplies
    ``F(root) = 0`` and is dropped), where
    ``G_{n,i} = sum_j g(N-i-j) + g(i+j) - g(j)`` and ``g(m) = m/(1-t^{-m})``.

    ``weight="b_coeff"`` swaps in the :func:`b_coeff` convention (opposite
    sign on the j-sum) for comparison.
    """
    if weight not in ("derived", "b_coeff"):
        raise ValueError("weight must be 'derived' or 'b_coeff'")
    N = ctx.order
    p, q = companion.p, companion.q
    sign = 1.0 if weight == "derived" else -1.0
    total = ExtComplex()
    for n, rows, G in _clasp_rows(ctx, N, with_logderiv=True):
        hat, deriv = _hat_pair(p, q, 2 * n + 1, ctx)
        i = np.arange(len(rows))
        w = (r * n * (n + 1) - N * (i + n)) + sign * G
        inner = rows.sum(w * hat + deriv)
        total = total + inner.scale(ctx.pow(r * n * (n + 1)))
    total = total.scale(ctx.pow(_xi_prefactor_exponent(N), 2) / (-N))
    return JonesValue.from_value(N, total)


def wd_generic_at(t, companion: TorusKnotSpec, r: int, N: int) -> ExtComplex:
    """``J_{WD(T(p,q),r),N}`` from the tangle-product formula at a generic point,
    written as ``(1/(t^{N/2}-t^{-N/2})) sum_n t^{r n(n+1)} xi_{N,n} hatJ_{2n+1}``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    point = _point(t)
    if point.angle_multiple_is_integer(N):
        raise VanishingDenominatorError("t^{N/2} - t^{-N/2} vanishes; use jones_wd_at_root")
    den = point.pow(N, 2) - point.pow(-N, 2)
    total = ExtComplex()
    for n, rows, _ in _clasp_rows(point, N):
        hat, _ = _hat_pair(companion.p, companion.q, 2 * n + 1, point)
        total = total + rows.sum().scale(hat * point.pow(r * n * (n + 1)))
    return total.scale(point.pow(_xi_prefactor_exponent(N), 2) / den)


def jones_wd_generic(M: int, j: int, companion: TorusKnotSpec, r: int, N: int) -> ExtComplex:
    """``J_{WD(T(p,q),r),N}`` at ``t = exp(2 pi i j/M)``."""
    return wd_generic_at(UnitPoint.from_ratio(j, M), companion, r, N)
