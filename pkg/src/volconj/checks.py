"""Quick exact-vs-float and identity checks run by ``volconj selfcheck``."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .asymptotics import SaddleTable, wl_decomposed
from .cyclotomic import a_sum_exact, jones_wl_exact
from .jones import (
    TorusKnotSpec,
    hat_jones_torus,
    hat_jones_torus_tderiv,
    jones_torus_at_root,
    jones_wd_at_root,
    jones_wl_at_root,
    wd_generic_at,
    wl_generic_at,
)
from .numeric import RootContext, lobachevsky


def symmetric_limit(fn, N: int, eps: Fraction = Fraction(1, 10**6)) -> complex:
    """Average of ``fn(turns)`` at ``(1 +- eps)/N``; first-order terms cancel."""
    base = Fraction(1, N)
    return 0.5 * (fn(base * (1 + eps)).to_complex() + fn(base * (1 - eps)).to_complex())


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def run_selfcheck():
    """Yield ``(name, passed, detail)`` triples."""
    x = np.linspace(0.0, math.pi, 1000)
    refl = float(np.abs(lobachevsky(x, 1e-13) + lobachevsky(math.pi - x, 1e-13)).max())
    yield "lobachevsky reflection", refl <= 2e-12, f"max |L(x)+L(pi-x)| = {refl:.2e}"

    s = SaddleTable(50).s
    dev = max(abs(s[n - 1] + s[50 - n] - s[49]) for n in range(1, 50))
    yield "s-table reflection N=50", dev <= 1e-9, f"max deviation {dev:.2e}"

    worst = 0.0
    for N in (2, 5, 8):
        for r in (0, 1):
            exact = jones_wl_exact(N, r).embed()
            flt = jones_wl_at_root(RootContext(N), r).value.to_complex()
            worst = max(worst, abs(abs(exact) - abs(flt)) / abs(flt))
    yield "WL exact vs float (N<=8)", worst <= 1e-10, f"max rel {worst:.2e}"

    worst = 0.0
    for N in (7, 16):
        a = jones_wl_at_root(RootContext(N), 0).value
        b = wl_decomposed(N, 0)
        worst = max(worst, abs(a.log_abs() - b.log_abs()))
    yield "WL product vs a/S split", worst <= 1e-9, f"max |log ratio| {worst:.2e}"

    ok = all(a_sum_exact(3, 2, N, 0, s).is_zero() for N in range(24) for s in (1, -1))
    ok &= all(a_sum_exact(3, 2, N, 1, 1) == a_sum_exact(3, 2, N + 12, 1, -1) for N in range(24))
    ok &= not any(a_sum_exact(3, 2, N, 1, 1).is_zero() for N in range(24))
    yield "A-sum identities T(3,2)", ok, "vanishing k=0, periodicity, nonvanishing k=1"

    K = TorusKnotSpec(2, 3)
    worst_hat = worst_der = 0.0
    for N in (10, 31, 64):
        ctx = RootContext(N)
        worst_hat = max(worst_hat, abs(hat_jones_torus(K, N, ctx).to_complex()))
        d = hat_jones_torus_tderiv(K, N, ctx).to_complex()
        J = jones_torus_at_root(K, ctx).value.to_complex()
        worst_der = max(worst_der, _rel(d, -N * J))
    yield "hatJ_N vanishes at root", worst_hat <= 1e-9, f"max |hatJ| {worst_hat:.2e}"
    yield "t d/dt hatJ_N = -N J_N", worst_der <= 1e-9, f"max rel {worst_der:.2e}"

    N = 12
    wl = _rel(jones_wl_at_root(RootContext(N), 1).value.to_complex(), symmetric_limit(lambda t: wl_generic_at(t, 1, N), N))
    wd = _rel(
        jones_wd_at_root(RootContext(N), K, 0).value.to_complex(),
        symmetric_limit(lambda t: wd_generic_at(t, K, 0, N), N),
    )
    yield "WL at-root vs angular limit", wl <= 1e-3, f"rel {wl:.2e}"
    yield "WD at-root vs angular limit", wd <= 1e-3, f"rel {wd:.2e}"

    U = TorusKnotSpec(1, 2)
    unknot = abs(jones_wd_at_root(RootContext(9), U, 0).value.to_complex() - 1.0)
    yield "WD(unknot, 0) is the unknot", unknot <= 1e-9, f"|J - 1| = {unknot:.2e}"
