"""Finite-difference counting for 1-d Dirichlet Schrodinger operators.

Operators -d^2/dt^2 + V(t) on a finite interval with Dirichlet ends are
discretized by the 3-point scheme on a uniform interior grid.  Counting
eigenvalues below a threshold uses Sylvester inertia: the number of
negative pivots of the LDL^T factorization of T - lambda equals the
number of eigenvalues of T strictly below lambda.  Individual
eigenvalues come from bisection on that count between the Gershgorin
bounds, so they inherit its robustness.

Half-infinite problems are truncated on the right where the potential
has safely entered the forbidden region (V >= 2 lambda) and the count is
re-run on refined grids until it stops moving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

_EPS = float(np.finfo(np.float64).eps)


def _pivot_count_py(diag, off, lam):
    count = 0
    d = diag[0] - lam
    if d == 0.0:
        # Nudge zero pivots positive: an eigenvalue sitting exactly at
        # lam must never enter the strictly-below count.
        d = _EPS * (abs(diag[0] - lam) + 1.0)
    if d < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        c2 = off[i - 1] * off[i - 1]
        d = (diag[i] - lam) - c2 / d
        if d == 0.0:
            d = _EPS * (abs(diag[i] - lam) + c2 + 1.0)
        if d < 0.0:
            count += 1
    return count


if njit is not None:
    _pivot_count = njit(cache=True)(_pivot_count_py)
else:  # pragma: no cover
    _pivot_count = _pivot_count_py


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix plus the grid it came from."""

    diag: np.ndarray
    off: np.ndarray
    t_lo: float
    t_hi: float
    h: float

    def __post_init__(self):
        diag = np.ascontiguousarray(self.diag, dtype=float)
        off = np.ascontiguousarray(self.off, dtype=float)
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diag must be a nonempty 1-d array")
        if off.shape != (diag.size - 1,):
            raise ValueError("off must have length n - 1")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "off", off)

    @property
    def n(self) -> int:
        return self.diag.size

    def gershgorin(self) -> tuple[float, float]:
        """Interval certainly containing the whole spectrum."""
        n = self.n
        radius = np.zeros(n)
        if n > 1:
            radius[:-1] += np.abs(self.off)
            radius[1:] += np.abs(self.off)
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))


def _veval(V, x):
    """Evaluate a potential on an array, tolerating scalar-only callables."""
    x = np.asarray(x, dtype=float)
    try:
        vals = np.asarray(V(x), dtype=float)
    except (TypeError, ValueError):
        vals = None
    if vals is None or vals.shape != x.shape:
        vals = np.array([float(V(float(xi))) for xi in x.ravel()], dtype=float)
        vals = vals.reshape(x.shape)
    return vals


def discretize(V, t_lo: float, t_hi: float, n: int) -> TridiagonalOperator:
    """3-point Dirichlet discretization of -d^2/dt^2 + V on (t_lo, t_hi).

    Uses n interior points with spacing h = (t_hi - t_lo) / (n + 1);
    diagonal 2/h^2 + V(t_i), off-diagonal -1/h^2.
    """
    if not (t_lo < t_hi):
        raise ValueError(f"need t_lo < t_hi, got [{t_lo}, {t_hi}]")
    if n < 1:
        raise ValueError("need at least one interior grid point")
    h = (t_hi - t_lo) / (n + 1)
    grid = t_lo + h * np.arange(1, n + 1)
    vals = _veval(V, grid)
    if not np.all(np.isfinite(vals)):
        i = int(np.argmin(np.isfinite(vals)))
        raise ValueError(
            f"potential is not finite at t={grid[i]!r} (grid index {i})")
    inv_h2 = 1.0 / (h * h)
    diag = 2.0 * inv_h2 + vals
    off = np.full(max(n - 1, 0), -inv_h2)
    return TridiagonalOperator(diag=diag, off=off, t_lo=float(t_lo),
                               t_hi=float(t_hi), h=float(h))


def count_below(T: TridiagonalOperator, lam: float) -> int:
    """Number of eigenvalues of T strictly below lam (Sylvester inertia)."""
    return int(_pivot_count(T.diag, T.off, float(lam)))


def lowest_eigenvalues(T: TridiagonalOperator, k: int, tol: float = 1e-10) -> list[float]:
    """The k smallest eigenvalues by bisection on the inertia count.

    Multiple eigenvalues come out as repeated values agreeing to tol.
    """
    if not (1 <= k <= T.n):
        raise ValueError(f"k must be in 1..{T.n}, got {k}")
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    glo, ghi = T.gershgorin()
    out = []
    for j in range(1, k + 1):
        lo, hi = glo - 1.0, ghi + 1.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if count_below(T, mid) >= j:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return out


@dataclass(frozen=True)
class CountOptions:
    """Knobs for count_stable's truncation and refinement loop."""

    n0: int = 128
    t_hi0: float | None = None
    max_refinements: int = 10
    tail_span: float = 2.0
    tail_samples: int = 17
    search_limit: float = 200.0


@dataclass(frozen=True)
class CountResult:
    count: int
    lam: float
    n: int
    t_hi: float
    mode_range: tuple[int, int] | None = None
    converged: bool = False


def _tail_ok(V, t_hi, lam, opts) -> bool:
    xs = np.linspace(t_hi, t_hi + opts.tail_span, opts.tail_samples)
    return bool(np.all(_veval(V, xs) >= 2.0 * lam))


def _no_tail_error(t_lo, lam, span):
    return ValueError(
        f"potential does not settle above 2*lambda={2 * lam} within "
        f"{span} units of t_lo={t_lo}; cannot truncate")


def _v1(V, x: float) -> float:
    return float(_veval(V, np.array([x]))[0])


def _initial_t_hi(V, t_lo, lam, opts) -> float:
    limit = t_lo + opts.search_limit
    thresh = 2.0 * lam
    if opts.t_hi0 is not None:
        t_hi = max(float(opts.t_hi0), t_lo + 1e-6)
    else:
        # March outward tracking the last sample still below 2*lambda;
        # accept once a full tail_span of samples beyond it is forbidden,
        # then sharpen that final upward crossing.  A wall close to the
        # crossing keeps the truncation shift above the scheme's downward
        # bias, so a threshold sitting exactly on an eigenvalue resolves
        # to the strict count.
        step = 0.5
        last_low = None
        t_hi = None
        x = t_lo
        while x <= limit:
            if _v1(V, x) < thresh:
                last_low = x
            elif last_low is not None and x - last_low >= opts.tail_span:
                lo, hi = last_low, last_low + step
                for _ in range(30):
                    mid = 0.5 * (lo + hi)
                    if _v1(V, mid) >= thresh:
                        hi = mid
                    else:
                        lo = mid
                t_hi = hi
                break
            x += step
        if t_hi is None:
            if last_low is None:
                # no sampled point is classically reachable below
                # 2*lambda; keep a token window, the positivity shortcut
                # in count_stable certifies the zero count
                t_hi = t_lo + opts.tail_span
            else:
                raise _no_tail_error(t_lo, lam, opts.search_limit)
    while not _tail_ok(V, t_hi, lam, opts):
        t_hi += opts.tail_span
        if t_hi > limit:
            raise _no_tail_error(t_lo, lam, opts.search_limit)
    return t_hi


def count_stable(V, t_lo: float, lam: float, opts: CountOptions | None = None) -> CountResult:
    """Grid-stabilized count of Dirichlet eigenvalues of -d''+V below lam.

    Doubles the interior grid (and, if the tail check demands it, pushes
    the truncation point out) until the count is unchanged over two
    successive refinements.  A count that never settles is returned with
    converged=False rather than guessed at.
    """
    opts = opts or CountOptions()
    lam = float(lam)
    t_hi = _initial_t_hi(V, t_lo, lam, opts)
    # resolution floor of ~13 points per local wavelength: judging count
    # stability on coarser grids risks freezing before the h^2 bias has
    # dropped below the truncation shift of a near-threshold eigenvalue
    n_floor = int(2.0 * (t_hi - t_lo) * math.sqrt(2.0 * max(lam, 1.0))) + 1
    n = max(2, int(opts.n0), n_floor)
    counts: list[int] = []
    converged = False
    for _ in range(max(1, opts.max_refinements)):
        T = discretize(V, t_lo, t_hi, n)
        vmin = float(np.min(T.diag)) - 2.0 / (T.h * T.h)
        if lam <= vmin:
            # -d'' is positive definite, so T - lam >= diag(V - lam) >= 0:
            # the certified count is 0 with no refinement needed.
            counts.append(0)
            converged = True
            break
        counts.append(count_below(T, lam))
        if len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            converged = True
            break
        n *= 2
        if not _tail_ok(V, t_hi, lam, opts):
            t_hi += opts.tail_span
    return CountResult(count=counts[-1], lam=lam, n=n, t_hi=t_hi,
                       mode_range=None, converged=converged)
