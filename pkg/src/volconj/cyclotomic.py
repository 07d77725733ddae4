"""Exact arithmetic in the cyclotomic integers Z[zeta_m].

Elements are integer coefficient vectors in the basis 1, zeta, ..., zeta^{phi(m)-1},
fully reduced modulo the cyclotomic polynomial, so zero-testing is exact.
Used to decide vanishing of the torus-knot sums A^{+-}_{p,q}(N,k) and to
cross-check the floating evaluation of J_{WL(r),N} for small N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "IntPoly",
    "CycloField",
    "CycloElem",
    "cyclotomic_poly",
    "cyclo_field",
    "cyclo_mul",
    "zeta_power",
    "a_sum_exact",
    "a_sum_exact_symmetric",
    "is_zero",
    "nonvanish_scan",
    "NonvanishReport",
    "jones_wl_exact",
    "WL_EXACT_MAX_N",
]

WL_EXACT_MAX_N = 32


class IntPoly:
    """Integer polynomial, coefficients lowest degree first, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "IntPoly":
        return cls([0] * e + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self):
        return IntPoly([-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(out)

    def divmod(self, divisor: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Division with remainder by a polynomial with leading coefficient +-1."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = divisor.coeffs[-1]
        if lead not in (1, -1):
            raise ValueError("divisor must have leading coefficient +-1")
        rem = list(self.coeffs)
        d = divisor.degree
        quot = [0] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k] * lead
            if c:
                quot[k - d] = c
                for i, y in enumerate(divisor.coeffs):
                    rem[k - d + i] -= c * y
        return IntPoly(quot), IntPoly(rem)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> IntPoly:
    """Phi_m by exact division of x^m - 1 by the smaller cyclotomic factors."""
    if m < 1:
        raise ValueError("m must be >= 1")
    num = IntPoly.monomial(m) - IntPoly([1])
    den = IntPoly([1])
    for d in _divisors(m)[:-1]:
        den = den * cyclotomic_poly(d)
    q, r = num.divmod(den)
    if not r.is_zero():
        raise ArithmeticError(f"inexact division building Phi_{m}")
    return q


class CycloField:
    """Q(zeta_m) with integer power basis; holds the reduction table of
    zeta^e for 0 <= e < m."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be >= 1")
        self.m = m
        self.phi_m = cyclotomic_poly(m)
        self.degree = self.phi_m.degree
        d = self.degree
        low = np.array(self.phi_m.coeffs[:d], dtype=object)
        table = np.zeros((m, d), dtype=object)
        row = np.zeros(d, dtype=object)
        row[0] = 1
        for e in range(m):
            table[e] = row
            # multiply by x, then replace x^d by -(lower coefficients)
            top = row[-1]
            row = np.concatenate(([0], row[:-1]))
            if top:
                row = row - top * low
        self._table = table
        self._table_i64 = table.astype(np.int64)
        self._table_bound = int(np.abs(self._table_i64).max()) if m else 0

    def __repr__(self):
        return f"CycloField(m={self.m})"

    def reduce(self, vec) -> "CycloElem":
        """Element with ``sum_e vec[e] zeta^e`` (any length; indices folded mod m)."""
        vec = list(vec)
        m = self.m
        folded = [0] * m
        for e, c in enumerate(vec):
            if c:
                folded[e % m] += int(c)
        bound = max((abs(c) for c in folded), default=0)
        if bound * max(self._table_bound, 1) * m < 2**62:
            out = np.asarray(folded, dtype=np.int64) @ self._table_i64
            coeffs = [int(x) for x in out]
        else:
            out = np.asarray(folded, dtype=object) @ self._table
            coeffs = [int(x) for x in out]
        return CycloElem(self, coeffs)

    def zero(self) -> "CycloElem":
        return CycloElem(self, [0] * self.degree)

    def one(self) -> "CycloElem":
        return self.reduce([1])

    def zeta(self, e: int = 1) -> "CycloElem":
        return CycloElem(self, [int(x) for x in self._table[e % self.m]])


@lru_cache(maxsize=None)
def cyclo_field(m: int) -> CycloField:
    return CycloField(m)


class CycloElem:
    """Canonical element of Z[zeta_m]."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycloField, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != field.degree:
            raise ValueError(f"expected {field.degree} coefficients, got {len(coeffs)}")
        self.field = field
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, CycloElem):
            raise TypeError("expected CycloElem")
        if other.field.m != self.field.m:
            raise ValueError(f"field mismatch: m={self.field.m} vs m={other.field.m}")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.one() * other
        self._check(other)
        return CycloElem(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloElem(self.field, [a * other for a in self.coeffs])
        return cyclo_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out, base = self.field.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, CycloElem):
            return NotImplemented
        return self.field.m == other.field.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.m, self.coeffs))

    def __repr__(self):
        return f"CycloElem(m={self.field.m}, coeffs={list(self.coeffs)})"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def embed(self, direction: int = 1) -> complex:
        """Image under zeta -> exp(2 pi i direction/m)."""
        m = self.field.m
        e = np.arange(len(self.coeffs))
        z = np.exp(2j * np.pi * direction * e / m)
        c = np.array([float(x) for x in self.coeffs])
        return complex((c * z).sum())


def cyclo_mul(a: CycloElem, b: CycloElem) -> CycloElem:
    a._check(b)
    prod = IntPoly(a.coeffs) * IntPoly(b.coeffs)
    return a.field.reduce(prod.coeffs)


def zeta_power(field: CycloField, e: int) -> CycloElem:
    return field.zeta(e)


def is_zero(a: CycloElem) -> bool:
    return a.is_zero()


def _check_a_args(p, q, k, sign):
    if math.gcd(p, q) != 1:
        raise ValueError("p and q must be coprime")
    if k not in (0, 1):
        raise ValueError("k must be 0 or 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")


def a_sum_exact(p: int, q: int, N: int, k: int, sign: int) -> CycloElem:
    """``-4 A^{+-}_{p,q}(N,k)`` in Z[zeta_{4pq}]:
    ``sum_{j=1}^{pq-1} (+-1)^j j^{2k} zeta^{-N j^2} (zeta^{2qj} - zeta^{-2qj})(zeta^{2pj} - zeta^{-2pj})``."""
    _check_a_args(p, q, k, sign)
    pq = p * q
    m = 4 * pq
    j = np.arange(1, pq, dtype=np.int64)
    c = np.where((j % 2 == 1) & (sign == -1), -1, 1) * j ** (2 * k)
    base = -N * j * j
    vec = np.zeros(m, dtype=np.int64)
    for s_q, s_p, s in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)):
        np.add.at(vec, (base + s_q * 2 * q * j + s_p * 2 * p * j) % m, s * c)
    return cyclo_field(m).reduce(vec.tolist())


def a_sum_exact_symmetric(p: int, q: int, N: int, k: int, sign: int) -> CycloElem:
    """Same element as :func:`a_sum_exact` from the symmetric rewriting
    ``sum_{-pq<j<pq} (+-1)^j j^{2k} zeta^{-N j^2 + 2qj} (zeta_{2q}^j - zeta_{2q}^{-j})``."""
    _check_a_args(p, q, k, sign)
    pq = p * q
    m = 4 * pq
    vec = [0] * m
    for j in range(-pq + 1, pq):
        c = (sign if j % 2 else 1) * j ** (2 * k)
        if not c:
            continue
        e = -N * j * j + 2 * q * j
        vec[(e + 2 * p * j) % m] += c
        vec[(e - 2 * p * j) % m] -= c
    return cyclo_field(m).reduce(vec)


@dataclass(frozen=True)
class NonvanishReport:
    p: int
    q: int
    k: int
    sign: int
    rows: tuple  # (N, exact_zero, float_abs)

    @property
    def period(self) -> int:
        return 4 * self.p * self.q

    @property
    def zeros(self) -> int:
        return sum(1 for _, z, _ in self.rows if z)

    def summary(self) -> str:
        return f"zeros: {self.zeros} of {self.period}"


def nonvanish_scan(p: int, q: int, k: int = 1, sign: int = 1) -> NonvanishReport:
    """Exact vanishing of ``A^{sign}_{p,q}(N,k)`` over one period N in [0, 4pq).

    The float magnitude column is ``|A|`` from the rescaled exact element's
    embedding; it is informational only.
    """
    rows = []
    for N in range(4 * p * q):
        a = a_sum_exact(p, q, N, k, sign)
        rows.append((N, a.is_zero(), abs(a.embed()) / 4.0))
    return NonvanishReport(p, q, k, sign, tuple(rows))


def _cyclic_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    for s, c in enumerate(a):
        if c:
            out = out + c * np.roll(b, s)
    return out


def jones_wl_exact(N: int, r: int) -> CycloElem:
    """``J_{WL(r),N}(exp(2 pi i/N))`` exactly, as an element of Z[zeta_{4N}].

    In ``Z[x]/(x^N - 1)`` with ``x = t`` each clasp product is
    ``[n+i choose n]_x * prod_{j<=n} (1 - x^{-i-j})`` (a Gaussian binomial
    times a polynomial), so no division is needed.  The global prefactor
    ``t^{(2N^2-N-1)/2}`` is the power ``zeta_{4N}^{2(2N^2-N-1)}``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > WL_EXACT_MAX_N:
        raise ValueError(f"exact evaluation limited to N <= {WL_EXACT_MAX_N} (coefficient growth)")

    def vec():
        return np.zeros(N, dtype=object) + 0

    # Gaussian binomials [m, k]_x mod x^N - 1 for m <= N-1
    gauss = [[None] * (mm + 1) for mm in range(N)]
    for mm in range(N):
        for kk in range(mm + 1):
            if kk == 0 or kk == mm:
                g = vec()
                g[0] = 1
            else:
                g = gauss[mm - 1][kk - 1] + np.roll(gauss[mm - 1][kk], kk)
            gauss[mm][kk] = g

    total = vec()
    for n in range(N):
        inner = vec()
        for i in range(N - n):
            Q = vec()
            Q[0] = 1
            for j in range(1, n + 1):
                Q = Q - np.roll(Q, -(i + j))
            inner = inner + _cyclic_mul(gauss[n + i][n], Q)
        total = total + (2 * n + 1) * np.roll(inner, (r * n * (n + 1)) % N)

    m = 4 * N
    shift = 2 * (2 * N * N - N - 1)
    big = [0] * m
    for e, c in enumerate(total):
        if c:
            big[(4 * e + shift) % m] += int(c)
    return cyclo_field(m).reduce(big)
