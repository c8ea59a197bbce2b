"""Fourier-mode reduction of magnetic Laplacians on funnel and cusp ends.

Separating the circle variable turns the Dirichlet operator of an end
into a direct sum of 1-d Schrodinger operators indexed by the integer
mode ell.  After the usual unitary removal of the area density the mode
potentials are

    funnel:  V_ell(t) = (ell - a(t))^2 / (tau^2 cosh^2 t)
                        + (1 + cosh^{-2} t) / 4,
    cusp:    V_ell(t) = e^{2t} (ell - a(t))^2 / L^2 + 1/4,

with a = gauge_function.  Both contain the curvature term, so no mode
eigenvalue lies below 1/4.

For an unbounded field every threshold is crossed by only finitely many
modes: a mode binds near its turning region a(t) = ell, where the local
well has harmonic frequency |b~|, so its ground level is roughly
1/4 + |b~| there and runs away with the field.  Counting therefore scans
modes outward from the gauge value at the weakest point of the field and
stops a direction after three consecutive modes are certified empty.

A mode is certified empty without solving it when its classically
allowed territory either lies entirely where |b~| >= 4*lambda (the same
intensity bound that truncates the grid) or consists of a thin crossing
sliver whose harmonic ground level 1/4 + |b~| exceeds lambda and whose
phase-space content is well under one state.  Everything else is counted
strictly by count_stable on the hull of its allowed territory; the hull,
not a local window around one well, because a single mode can bind both
at its gauge crossing and against the Dirichlet wall at the end boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (BoundedFieldError, CuspEnd, DomainError, FunnelEnd,
                    eval_field, gauge_function)
from .sturm1d import CountOptions, CountResult, count_stable


@dataclass(frozen=True, eq=False)
class ModePotential:
    """Callable mode potential with its certified analytic floor."""

    end: FunnelEnd | CuspEnd | None
    ell: int | None
    floor: float
    t_lo: float

    def __call__(self, t):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class _FunnelMode(ModePotential):
    def __call__(self, t):
        end = self.end
        a = gauge_function(end, t)
        sech2 = 1.0 / np.cosh(np.asarray(t, dtype=float)) ** 2
        d = self.ell - a
        return d * d * sech2 / (end.tau * end.tau) + 0.25 * (1.0 + sech2)


@dataclass(frozen=True, eq=False)
class _CuspMode(ModePotential):
    def __call__(self, t):
        end = self.end
        t = np.asarray(t, dtype=float)
        a = gauge_function(end, t)
        d = (self.ell - a) * np.exp(t) / end.L
        return d * d + 0.25


@dataclass(frozen=True, eq=False)
class _FunnelLimit(ModePotential):
    beta: float = 0.0

    def __call__(self, s):
        d = self.beta - np.exp(np.asarray(s, dtype=float))
        return 0.25 + d * d


def funnel_mode_potential(end: FunnelEnd, ell: int) -> ModePotential:
    """Reduced potential of the funnel mode ell."""
    return _FunnelMode(end=end, ell=int(ell), floor=0.25, t_lo=end.t0)


def cusp_mode_potential(end: CuspEnd, ell: int) -> ModePotential:
    """Reduced potential of the cusp mode ell.

    For a constant field b the potential is (e^t (ell - a_oo)/L - b)^2 + 1/4
    with a_oo the limiting gauge value, so the mode ell = a_oo (when it is
    an integer) is identically 1/4 + b^2: the absolutely continuous branch.
    """
    return _CuspMode(end=end, ell=int(ell), floor=0.25, t_lo=end.t0)


def funnel_limit_potential(beta: float) -> ModePotential:
    """Deep-funnel limit of a constant-field mode, in log coordinates.

    The limit operator acts on the half-line weighted space; substituting
    y = e^s makes it -d^2/ds^2 + 1/4 + (beta - e^s)^2 on the whole line,
    whose eigenvalues below 1/4 + beta^2 are exactly the Landau levels.
    """
    return _FunnelLimit(end=None, ell=None, floor=0.25, t_lo=-math.inf,
                        beta=float(beta))


@dataclass(frozen=True)
class EndOptions:
    """Controls for the mode scan of a single end."""

    grid_n: int | None = None
    t_max: float | None = None
    n0_min: int = 48
    points_per_wavelength: float = 8.0
    prune_s: float = 0.4
    miss_run: int = 3
    max_modes: int = 200000
    max_refinements: int = 8


class _ScanContext:
    """Shared safeguard grid for one (end, lambda) mode scan."""

    def __init__(self, end, lam: float, opts: EndOptions):
        self.end = end
        self.lam = float(lam)
        self.opts = opts
        t0 = end.t0
        t_max = opts.t_max if opts.t_max is not None else _auto_t_max(end, lam)
        if not (t_max > t0):
            raise ValueError(f"t_max={t_max} must exceed t0={t0}")
        if opts.grid_n is not None:
            n = int(opts.grid_n)
        else:
            h_target = min(0.02, 0.088 / math.sqrt(max(lam, 1.0)))
            n = int(min(max((t_max - t0) / h_target, 2048), 120000))
        self.t = np.linspace(t0, t_max, n)
        self.h = float(self.t[1] - self.t[0])
        self.a = np.asarray(gauge_function(end, self.t), dtype=float)
        babs = np.abs(np.asarray(eval_field(end, self.t), dtype=float))
        if isinstance(end, FunnelEnd):
            sech2 = 1.0 / np.cosh(self.t) ** 2
            self.w = sech2 / (end.tau * end.tau)
            self.q = 0.25 * (1.0 + sech2)
        else:
            self.w = np.exp(2.0 * self.t) / (end.L * end.L)
            self.q = np.full_like(self.t, 0.25)
        # crude per-point ground-level estimate: curvature floor plus the
        # harmonic frequency of a well turning there
        self.floor_est = self.q + babs
        self.i_star = int(np.argmin(self.floor_est))
        self.ell0 = int(round(float(self.a[self.i_star])))
        # territory where a well can still bind below lambda; allowed
        # samples outside belong to wells whose ground level is already
        # >= 4*lambda, the same bound that truncates the grid
        self.core = babs < 4.0 * self.lam
        forb = 8.0 / math.sqrt(max(lam, 1.0))
        self.barrier_run = max(2, int(math.ceil(forb / self.h)) + 1)

    def mode_values(self, ell: float) -> np.ndarray:
        d = ell - self.a
        return d * d * self.w + self.q

    def left_cut(self, v: np.ndarray, i_first: int) -> int:
        """Left truncation index for a hull starting at i_first.

        Everything left of i_first is classically forbidden; the cut is
        safe once a full barrier_run of samples >= 2*lambda separates it
        from the allowed region, so take the start of the rightmost such
        run.  Falls back to the physical wall at index 0.
        """
        R = self.barrier_run
        if i_first <= R:
            return 0
        spoil = (v[:i_first] < 2.0 * self.lam).astype(np.int64)
        c = np.concatenate(([0], np.cumsum(spoil)))
        full = np.nonzero(c[R:] - c[:-R] == 0)[0]
        return int(full[-1]) if full.size else 0


def _auto_t_max(end, lam: float) -> float:
    """First radius beyond which the intensity stays above 4*lambda."""
    target = 4.0 * max(lam, 1.0)
    t = end.t0 + 0.5
    cap = end.t0 + 120.0
    while t < cap:
        samples = np.linspace(t, t + 2.0, 9)
        if np.all(np.abs(eval_field(end, samples)) >= target):
            return t + 0.25
        t += 0.5
    raise DomainError(
        f"field intensity does not reach {target} within the search range")


def _mode_potential(end, ell: int) -> ModePotential:
    if isinstance(end, FunnelEnd):
        return funnel_mode_potential(end, ell)
    return cusp_mode_potential(end, ell)


def _count_mode(ctx: _ScanContext, ell: int) -> CountResult | None:
    """Strict count for one mode, or None when it is certified empty.

    Empty certificates: no allowed sample inside the core (all territory
    sits where the intensity bound already pushes levels above lambda),
    or a sliver whose harmonic floor exceeds lambda while holding well
    under half a semiclassical state.  The soft wells that break the
    harmonic estimate always come with large territory, so they fail the
    content test and fall through to strict counting.
    """
    lam = ctx.lam
    v = ctx.mode_values(ell)
    idx = np.nonzero((v <= lam) & ctx.core)[0]
    if idx.size == 0:
        return None
    i_lo = ctx.left_cut(v, int(idx[0]))
    i_hi = min(int(idx[-1]) + ctx.barrier_run, ctx.t.size - 1)
    hull = slice(i_lo, i_hi + 1)
    if float(np.min(ctx.floor_est[hull])) > lam:
        content = ctx.h / math.pi * float(
            np.sum(np.sqrt(np.clip(lam - v[hull], 0.0, None))))
        if content < ctx.opts.prune_s:
            return None
    t_lo = float(ctx.t[i_lo])
    t_hi = float(ctx.t[i_hi])
    width = max(t_hi - t_lo, ctx.h)
    n0 = max(ctx.opts.n0_min,
             int(width * math.sqrt(2.0 * lam) * ctx.opts.points_per_wavelength
                 / (2.0 * math.pi)) + 1)
    opts = CountOptions(n0=n0, t_hi0=t_hi, max_refinements=ctx.opts.max_refinements)
    return count_stable(_mode_potential(ctx.end, ell), t_lo, lam, opts)


@dataclass(frozen=True)
class _ScanResult:
    results: dict
    converged: bool
    truncated: bool

    @property
    def mode_range(self) -> tuple[int, int] | None:
        live = [ell for ell, r in self.results.items() if r.count > 0]
        if not live:
            return None
        return (min(live), max(live))


def _scan_modes(end, lam: float, opts: EndOptions | None = None) -> _ScanResult:
    opts = opts or EndOptions()
    if not end.field.unbounded:
        raise BoundedFieldError(
            "constant field: the essential spectrum reaches lambda and the "
            "mode sum diverges")
    lam = float(lam)
    if lam <= 0.25:
        return _ScanResult(results={}, converged=True, truncated=False)
    ctx = _ScanContext(end, lam, opts)
    results: dict[int, CountResult] = {}
    visited = 0
    truncated = False
    for step in (1, -1):
        ell = ctx.ell0 if step == 1 else ctx.ell0 - 1
        run = 0
        while run < opts.miss_run:
            if visited >= opts.max_modes:
                truncated = True
                break
            visited += 1
            res = _count_mode(ctx, ell)
            if res is None:
                run += 1
            else:
                results[ell] = res
                run = 0
            ell += step
        if truncated:
            break
    converged = (not truncated) and all(r.converged for r in results.values())
    return _ScanResult(results=results, converged=converged, truncated=truncated)


def mode_range(end, lam: float, opts: EndOptions | None = None) -> tuple[int, int] | None:
    """Interval of modes that can contribute eigenvalues below lam.

    Modes outside the interval were certified not to contribute: their
    sampled potential never dips below lam where the field intensity
    leaves room for a level under lam, or their hull holds well under one
    semiclassical state with its harmonic floor above lam, or their
    stabilized count is zero.  Returns None when no mode contributes
    (in particular for lam <= 1/4, below the universal potential floor).
    """
    return _scan_modes(end, lam, opts).mode_range


def count_end(end, lam: float, opts: EndOptions | None = None) -> CountResult:
    """Dirichlet eigenvalue count of the end below lam, summed over modes."""
    scan = _scan_modes(end, lam, opts)
    results = scan.results
    total = sum(r.count for r in results.values())
    n_max = max((r.n for r in results.values()), default=0)
    t_hi = max((r.t_hi for r in results.values()), default=float(end.t0))
    return CountResult(count=int(total), lam=float(lam), n=n_max, t_hi=t_hi,
                       mode_range=scan.mode_range, converged=scan.converged)
