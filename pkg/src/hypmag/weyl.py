"""Phase-space side of the counting problem: Weyl integral and brackets.

The semiclassical prediction for the number of Dirichlet eigenvalues of
an end below lambda is

    (1/2pi) int_M N(lambda - 1/4, |b~|) dm
        = sum_ends int_{t0}^{oo} N(lambda - 1/4, |b~(t)|) rho(t) dt,

with N the scaled Landau counting weight and rho the area density
(tau cosh t on funnels, L e^{-t} on cusps).  For unbounded profiles the
integrand has compact support.  It is piecewise smooth with jumps along
the level sets |b~(t)| = mu/(2k+1); integration is adaptive Simpson on
the smooth pieces, with the jump locations found by root bracketing.

The module also evaluates the two-sided bracket that the counting
function satisfies for admissible (delta, C), the sublevel-area function
omega and its doubling-type regularity check, and a log-log exponent fit
for count asymptotics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .landau import landau_count
from .model import BoundedFieldError, CuspEnd, FunnelEnd, SurfaceEnds, eval_field


@dataclass(frozen=True)
class WeylOptions:
    """Quadrature tolerance and bracket parameters.

    delta must lie strictly inside (1/3, 2/5); bracket_C is the remainder
    constant supplied by the user (C = 0 collapses the bracket onto the
    plain integral).
    """

    delta: float = 0.35
    bracket_C: float = 1.0
    quad_tol: float = 1e-6

    def __post_init__(self):
        if not (1.0 / 3.0 < self.delta < 2.0 / 5.0):
            raise ValueError(
                f"delta must lie in (1/3, 2/5) strictly, got {self.delta}")
        if not (self.quad_tol > 0.0):
            raise ValueError("quad_tol must be positive")
        if self.bracket_C < 0.0:
            raise ValueError("bracket_C must be >= 0")


def _density(end):
    if isinstance(end, FunnelEnd):
        return lambda t: end.tau * np.cosh(t)
    return lambda t: end.L * np.exp(-t)


def _require_unbounded(ends):
    for end in ends:
        if not end.field.unbounded:
            raise BoundedFieldError(
                "bounded field: the phase-space integral diverges over an "
                "infinite-area region")


def _as_end_list(ends):
    if isinstance(ends, SurfaceEnds):
        return list(ends.ends)
    if isinstance(ends, (FunnelEnd, CuspEnd)):
        return [ends]
    return list(ends)


def _support_end(end, mu: float) -> float:
    """Radius beyond which the intensity stays safely above mu."""
    target = max(2.0 * mu, mu + 1.0)
    t = end.t0
    cap = end.t0 + 200.0
    while t < cap:
        samples = np.linspace(t, t + 2.0, 9)
        if np.all(np.abs(eval_field(end, samples)) >= target):
            return t
        t += 0.5
    raise BoundedFieldError(
        f"field intensity does not reach {target}; profile looks bounded")


def _refine_roots(fvals, grid, f):
    """Roots of f from sign changes of its samples, sharpened by brentq."""
    roots = []
    s = np.sign(fvals)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    for i in idx:
        roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-13))
    # exact zeros sitting on grid nodes
    for i in np.nonzero(fvals == 0.0)[0]:
        roots.append(float(grid[i]))
    return roots


_LEVEL_CAP = 4096


def _breakpoints(end, mu: float, t_end: float, ngrid: int = 4096):
    """Sorted discontinuity/kink locations of N(mu, |b~(t)|) on [t0, t_end]."""
    grid = np.linspace(end.t0, t_end, ngrid)
    signed = np.asarray(eval_field(end, grid), dtype=float)
    babs = np.abs(signed)
    pts = [end.t0, t_end]
    # kinks of |b~| where the signed profile crosses zero
    pts += _refine_roots(signed, grid, lambda t: float(eval_field(end, t)))
    bmin = float(np.min(babs))
    k = 0
    while k <= _LEVEL_CAP:
        nu = mu / (2 * k + 1)
        if nu < bmin:
            break
        pts += _refine_roots(babs - nu, grid,
                             lambda t, nu=nu: abs(float(eval_field(end, t))) - nu)
        k += 1
    pts = sorted(p for p in pts if end.t0 <= p <= t_end)
    merged = [pts[0]]
    for p in pts[1:]:
        if p - merged[-1] > 1e-12:
            merged.append(p)
    return merged


def _adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 48) -> float:
    def simpson(x0, f0, x2, f2, fm):
        return (x2 - x0) * (f0 + 4.0 * fm + f2) / 6.0

    def recurse(x0, f0, x2, f2, fm, whole, tol, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = f(xl)
        fr = f(xr)
        left = simpson(x0, f0, xm, fm, fl)
        right = simpson(xm, fm, x2, f2, fr)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (recurse(x0, f0, xm, fm, fl, left, 0.5 * tol, depth - 1)
                + recurse(xm, fm, x2, f2, fr, right, 0.5 * tol, depth - 1))

    if b <= a:
        return 0.0
    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    whole = simpson(a, fa, b, fb, fm)
    return recurse(a, fa, b, fb, fm, whole, tol, max_depth)


def _integral_over_end(end, mu: float, weight, quad_tol: float) -> float:
    """int N(mu, |b~|) * weight(|b~|) * rho dt over the end."""
    if mu <= 0.0:
        return 0.0
    rho = _density(end)

    def f(t: float) -> float:
        b = abs(float(eval_field(end, t)))
        w = weight(b)
        if w == 0.0:
            return 0.0
        return landau_count(mu, b) * w * float(rho(t))

    t_end = _support_end(end, mu)
    if t_end <= end.t0:
        return 0.0
    pieces = _breakpoints(end, mu, t_end)
    # rough composite pass to calibrate per-piece absolute tolerances
    rough = []
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        xs = np.linspace(lo, hi, 9)
        ys = np.array([f(x) for x in xs])
        rough.append(abs(float(np.trapezoid(ys, xs))))
    total_rough = sum(rough) + 1e-300
    out = 0.0
    for (lo, hi), r in zip(zip(pieces[:-1], pieces[1:]), rough):
        share = max(r / total_rough, 1.0 / (4 * len(rough)))
        tol = quad_tol * total_rough * share
        # nudge interior endpoints off jump points
        eps = 1e-12 * max(1.0, abs(lo), abs(hi))
        out += _adaptive_simpson(f, lo + eps, hi - eps, tol)
    return out


def weyl_integral(ends, lam: float, opts: WeylOptions | None = None) -> float:
    """Semiclassical eigenvalue count below lam, summed over the given ends."""
    opts = opts or WeylOptions()
    ends = _as_end_list(ends)
    _require_unbounded(ends)
    mu = float(lam) - 0.25
    if mu <= 0.0:
        return 0.0
    return sum(_integral_over_end(end, mu, lambda b: 1.0, opts.quad_tol)
               for end in ends)


def omega(ends, mu: float) -> float:
    """Riemannian area of the sublevel region { |b~| < mu }.

    The boundaries are bracketed on a sample grid and polished by brentq;
    the area of each piece then has a closed form, so the result is
    root-finder accurate rather than quadrature limited.
    """
    ends = _as_end_list(ends)
    _require_unbounded(ends)
    mu = float(mu)
    if mu <= 0.0:
        return 0.0
    total = 0.0
    for end in ends:
        t_end = _support_end(end, mu)
        if t_end <= end.t0:
            continue
        grid = np.linspace(end.t0, t_end, 4096)
        babs = np.abs(np.asarray(eval_field(end, grid), dtype=float))
        cuts = [end.t0] + _refine_roots(
            babs - mu, grid,
            lambda t: abs(float(eval_field(end, t))) - mu) + [t_end]
        cuts = sorted(set(cuts))
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi - lo < 1e-14:
                continue
            mid = 0.5 * (lo + hi)
            if abs(float(eval_field(end, mid))) < mu:
                if isinstance(end, FunnelEnd):
                    total += 2.0 * math.pi * end.tau * (math.sinh(hi) - math.sinh(lo))
                else:
                    total += 2.0 * math.pi * end.L * (math.exp(-lo) - math.exp(-hi))
    return total


@dataclass(frozen=True)
class HypWReport:
    """Discrete doubling-regularity check of omega."""

    holds: bool
    C1_witness: float
    skipped: tuple[float, ...]


def check_hypW(ends, mu_grid, tau_grid) -> HypWReport:
    """Largest ratio (omega((1+tau) mu) - omega(mu)) / (tau omega(mu)).

    mu values with omega(mu) = 0 cannot be tested and are reported as
    skipped; the hypothesis holds when every tested ratio is finite.
    """
    mu_grid = [float(m) for m in mu_grid]
    tau_grid = [float(t) for t in tau_grid]
    if not mu_grid or not tau_grid:
        raise ValueError("mu_grid and tau_grid must be nonempty")
    if any(not (0.0 < t < 1.0) for t in tau_grid):
        raise ValueError("tau values must lie in (0, 1)")
    witness = 0.0
    skipped = []
    tested = 0
    for mu in mu_grid:
        om = omega(ends, mu)
        if om <= 0.0:
            skipped.append(mu)
            continue
        for tau in tau_grid:
            ratio = (omega(ends, (1.0 + tau) * mu) - om) / (tau * om)
            witness = max(witness, ratio)
            tested += 1
    holds = tested > 0 and math.isfinite(witness)
    return HypWReport(holds=holds, C1_witness=witness, skipped=tuple(skipped))


def theorem1_bracket(ends, lam: float, opts: WeylOptions | None = None) -> tuple[float, float]:
    """Two-sided semiclassical bracket for the count below lam.

    lower = (1/2pi) int (1 - C/(b+1)^p)_+ N(lam (1 - C lam^{1-3 delta}) - 1/4, b) dm
    upper = (1/2pi) int (1 + C/(b+1)^p) N(lam (1 + C lam^{1-3 delta}) - 1/4, b) dm

    with p = (2 - 5 delta)/2.  The lower weight is clamped at zero, so
    lower <= upper always.
    """
    opts = opts or WeylOptions()
    ends = _as_end_list(ends)
    _require_unbounded(ends)
    lam = float(lam)
    if lam <= 0.0:
        raise ValueError("lambda must be positive")
    C = opts.bracket_C
    p = (2.0 - 5.0 * opts.delta) / 2.0
    shift = C * lam ** (1.0 - 3.0 * opts.delta)
    mu_lo = lam * (1.0 - shift) - 0.25
    mu_hi = lam * (1.0 + shift) - 0.25

    def w_lo(b):
        return max(0.0, 1.0 - C / (b + 1.0) ** p)

    def w_hi(b):
        return 1.0 + C / (b + 1.0) ** p

    lower = 0.0
    if mu_lo > 0.0:
        lower = sum(_integral_over_end(end, mu_lo, w_lo, opts.quad_tol)
                    for end in ends)
    upper = sum(_integral_over_end(end, mu_hi, w_hi, opts.quad_tol)
                for end in ends) if mu_hi > 0.0 else 0.0
    return min(lower, upper), upper


@dataclass(frozen=True)
class ExponentFit:
    alpha: float
    slope: float


def fit_exponent(samples) -> ExponentFit:
    """Least-squares fit of count ~ alpha * lambda^slope on log-log axes.

    samples is a sequence of (lambda, count) pairs with lambda strictly
    increasing and counts positive; at least three points are required.
    """
    pairs = [(float(l), float(c)) for l, c in samples]
    if len(pairs) < 3:
        raise ValueError("need at least three samples to fit an exponent")
    lams = np.array([p[0] for p in pairs])
    counts = np.array([p[1] for p in pairs])
    if np.any(np.diff(lams) <= 0.0):
        raise ValueError("lambda samples must be strictly increasing")
    if np.any(counts <= 0.0) or np.any(lams <= 0.0):
        raise ValueError("samples must be positive to fit on log-log axes")
    slope, intercept = np.polyfit(np.log(lams), np.log(counts), 1)
    return ExponentFit(alpha=float(math.exp(intercept)), slope=float(slope))
