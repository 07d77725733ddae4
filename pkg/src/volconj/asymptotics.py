"""Saddle-point data, leading-term predictors and asymptotic regression.

The log-sine partial sums ``s_n`` give the magnitude factor of the double
sums in closed form: ``log S_{n,i} = -2 s_{n+i} + 2 s_i + s_n``.  The phase
factor is ``a_n = exp(pi i n(n+1-N)/(2N))``.  This decomposition is an
independent route to ``J_{WL(r),N}`` (see :func:`wl_decomposed`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .jones import TorusKnotSpec, _hat_pair
from .numeric import ExtComplex, RootContext, lobachevsky

__all__ = [
    "SaddleTable",
    "FitResult",
    "RatioScan",
    "s_sequence",
    "big_s",
    "phase_a",
    "saddle_f",
    "sest_residual",
    "a_sum_float",
    "kt_leading",
    "deriv_leading",
    "fit_asymptotic",
    "ratio_conjecture_scan",
    "wl_decomposed",
    "WHITEHEAD_VOLUME",
]

# 8 L(pi/4) = 4 * Catalan's constant
WHITEHEAD_VOLUME = 3.6638623767088760


def _turns(fr: Fraction) -> complex:
    fr = fr - math.floor(fr)
    a = 2.0 * math.pi * float(fr)
    return complex(math.cos(a), math.sin(a))


@dataclass(frozen=True)
class SaddleTable:
    """``s_n = -sum_{j<=n} log(2 sin(pi j/N))`` for n = 0..N-1, built on first use."""

    N: int

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be >= 2")

    @cached_property
    def s(self) -> np.ndarray:
        j = np.arange(1, self.N)
        terms = -np.log(2.0 * np.sin(np.pi * j / self.N))
        out = np.empty(self.N)
        out[0] = 0.0
        # Neumaier-compensated running sum
        acc, comp = 0.0, 0.0
        for k, x in enumerate(terms.tolist(), start=1):
            t = acc + x
            if abs(acc) >= abs(x):
                comp += (acc - t) + x
            else:
                comp += (x - t) + acc
            acc = t
            out[k] = acc + comp
        return out

    def log_big_s(self, n, i):
        s = self.s
        return -2.0 * s[np.add(n, i)] + 2.0 * s[i] + s[n]


def s_sequence(N: int) -> SaddleTable:
    return SaddleTable(N)


def big_s(N: int, n: int, i: int, table: SaddleTable | None = None) -> float:
    """``log S_{n,i}`` from the shared log-sine table."""
    if not (0 <= n and 0 <= i and n + i < N):
        raise ValueError(f"indices (n={n}, i={i}) outside 0 <= n, i, n+i < {N}")
    table = table or SaddleTable(N)
    return float(table.log_big_s(n, i))


def phase_a(N: int, n: int) -> complex:
    if not 0 <= n < N:
        raise ValueError(f"n={n} outside [0, {N})")
    return _turns(Fraction(n * (n + 1 - N), 4 * N))


def saddle_f(x: float, y: float, tol: float = 1e-13) -> float:
    """``f(x, y) = -2 L(x+y) + 2 L(y) + L(x)`` on the triangle x, y, x+y in [0, pi]."""
    if x < 0 or y < 0 or x + y > math.pi:
        raise ValueError(f"({x}, {y}) outside the domain 0 <= x, y, x+y <= pi")
    return -2.0 * lobachevsky(x + y, tol) + 2.0 * lobachevsky(y, tol) + lobachevsky(x, tol)


def sest_residual(N: int, alpha: float) -> float:
    """max over 0 < n < alpha N of ``|s_n - (N/pi) L(pi n/N) + log(n)/2|``."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    s = SaddleTable(N).s
    n = np.arange(1, N)
    n = n[n < alpha * N]
    if n.size == 0:
        raise ValueError("empty range for n")
    r = s[n] - N / math.pi * lobachevsky(math.pi * n / N) + 0.5 * np.log(n)
    return float(np.abs(r).max())


def a_sum_float(p: int, q: int, N: int, k: int, sign: int) -> complex:
    """``A^{+-}_{p,q}(N,k) = sum_{j=1}^{pq-1} (+-1)^j e^{-N j^2 pi i/(2pq)} j^{2k} sin(j pi/p) sin(j pi/q)``."""
    if math.gcd(p, q) != 1:
        raise ValueError("p and q must be coprime")
    if k not in (0, 1):
        raise ValueError("k must be 0 or 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    pq = p * q
    j = np.arange(1, pq, dtype=np.int64)
    mod = 4 * pq
    r = (-N * j * j) % mod
    phase = np.exp(2j * np.pi * r / mod)
    w = np.where(j % 2 == 1, sign, 1) * j.astype(np.float64) ** (2 * k)
    return complex((w * phase * np.sin(j * np.pi / p) * np.sin(j * np.pi / q)).sum())


def _kt_common(p: int, q: int, m: int, N: int) -> complex:
    # e^{-pq(m^2-1) pi i/(2N)} e^{-(p/q + q/p) pi i/(2N) + pi i/4}
    return (
        _turns(Fraction(-p * q * (m * m - 1), 4 * N))
        * _turns(Fraction(-(p * p + q * q), 4 * p * q * N))
        * _turns(Fraction(1, 8))
    )


def kt_leading(p: int, q: int, N: int) -> ExtComplex:
    """Leading term of the Kashaev invariant of T(p,q):
    ``2 e^{...} (N/(2pq))^{3/2} A^{(-1)^{N-1}}(N,1)``."""
    sign = 1 if N % 2 == 1 else -1
    A = a_sum_float(p, q, N, 1, sign)
    z = 2.0 * _kt_common(p, q, N, N) * (N / (2 * p * q)) ** 1.5 * A
    return ExtComplex.from_complex(z)


def deriv_leading(p: int, q: int, n: int, N: int) -> ExtComplex:
    """Leading term of ``t d/dt hatJ_{T(p,q),n}`` at ``exp(2 pi i/N)``,
    valid for ``|n - N| < N/(2pq)``."""
    if not abs(n - N) < N / (2 * p * q):
        raise ValueError(f"colour n={n} outside the window |n - N| < N/(2pq) for N={N}")
    sign = 1 if n % 2 == 1 else -1
    A = a_sum_float(p, q, N, 1, sign)
    z = -2.0 * _kt_common(p, q, n, N) * N**2.5 / (2 * p * q) ** 1.5 * A
    return ExtComplex.from_complex(z)


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of ``y = a N + b log N + c``."""

    a: float
    b: float
    c: float
    max_residual: float
    rms_residual: float
    n_points: int
    window: tuple
    residuals: tuple = field(repr=False, default=())

    def predict(self, N):
        N = np.asarray(N, dtype=np.float64)
        return self.a * N + self.b * np.log(N) + self.c

    def as_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "max_residual": self.max_residual,
            "rms_residual": self.rms_residual,
            "n_points": self.n_points,
            "window": list(self.window),
        }


def fit_asymptotic(points) -> FitResult:
    pts = sorted((float(n), float(y)) for n, y in points)
    if len(pts) < 8:
        raise ValueError(f"need at least 8 points, got {len(pts)}")
    N = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if len(np.unique(N)) != len(N):
        raise ValueError("N values must be distinct")
    X = np.column_stack([N, np.log(N), np.ones_like(N)])
    if np.linalg.matrix_rank(X) < 3:
        raise np.linalg.LinAlgError("design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    steps = np.diff(N)
    step = int(steps[0]) if np.all(steps == steps[0]) else None
    return FitResult(
        a=float(coef[0]),
        b=float(coef[1]),
        c=float(coef[2]),
        max_residual=float(np.abs(res).max()),
        rms_residual=float(np.sqrt(np.mean(res**2))),
        n_points=len(N),
        window=(int(N[0]), int(N[-1]), step),
        residuals=tuple(res.tolist()),
    )


@dataclass(frozen=True)
class RatioScan:
    N: int
    delta: float
    value: float
    n_window: int
    excluded: int


def ratio_conjecture_scan(p: int, q: int, N: int, delta: float, floor: float = 1e-12) -> RatioScan:
    """``N^2 max |hatJ_{2n+1} / (t d/dt hatJ_{2n+1})|`` over ``|n - N/2| < N^delta``
    at ``t = exp(2 pi i/N)``.  Colours whose derivative falls below ``floor``
    times the window maximum are skipped and counted in ``excluded``."""
    if not 0.5 < delta < 2.0 / 3.0:
        raise ValueError("delta must lie in (1/2, 2/3)")
    if math.gcd(p, q) != 1:
        raise ValueError("p and q must be coprime")
    ctx = RootContext(N)
    half = N**delta
    ns = [n for n in range(N) if abs(n - N / 2) < half]
    if not ns:
        raise ValueError("empty window")
    pairs = [_hat_pair(p, q, 2 * n + 1, ctx) for n in ns]
    dmax = max(abs(d) for _, d in pairs)
    ratios, excluded = [], 0
    for h, d in pairs:
        if abs(d) < floor * dmax:
            excluded += 1
            continue
        ratios.append(abs(h) / abs(d))
    value = N * N * max(ratios) if ratios else math.nan
    return RatioScan(N, delta, value, len(ns), excluded)


def wl_decomposed(N: int, r: int) -> ExtComplex:
    """``J_{WL(r),N}`` at the root through the phase/magnitude split
    ``-e^{-pi i/N} sum_n (2n+1) a_n^{4r-1} sum_i S_{n,i}``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N == 1:
        return ExtComplex(1.0)
    table = SaddleTable(N)
    total = ExtComplex()
    for n in range(N):
        i = np.arange(N - n)
        logs = table.log_big_s(n, i)
        m = float(logs.max())
        inner = ExtComplex.from_log(m + math.log(np.exp(logs - m).sum()), 0.0)
        phase = _turns(Fraction((4 * r - 1) * n * (n + 1 - N), 4 * N))
        total = total + inner.scale((2 * n + 1) * phase)
    return total.scale(-_turns(Fraction(-1, 2 * N)))
