"""Landau levels of constant magnetic fields on the hyperbolic plane.

A constant field of intensity b > 1/2 carries finitely many Landau levels
below the essential spectrum [1/4 + b^2, oo):

    (2j+1) b - j (j+1),   j = 0, 1, ...,  j < b - 1/2.

The pointwise counting weight for the phase-space integral is

    N(mu, b) = b * #{ k >= 0 : (2k+1) b < mu }     (b > 0),
    N(mu, 0) = mu / 2,

with N(mu, b) = 0 for mu <= 0 on both branches.  The inequality is
strict: a level sitting exactly at mu does not count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def landau_count(mu: float, b: float) -> float:
    """Scaled count of Landau levels strictly below mu for intensity b >= 0."""
    if b < 0.0:
        raise ValueError(f"intensity b must be >= 0, got {b}")
    if mu <= 0.0:
        return 0.0
    if b == 0.0:
        return 0.5 * mu
    # #{k >= 0 : (2k+1) b < mu} = ceil((mu - b) / (2b)), clipped at 0.
    # The ceil form is exact at the jump points mu = (2k+1) b.
    k = math.ceil((mu - b) / (2.0 * b))
    return float(b) * max(0, k)


def ess_bottom(beta: float) -> float:
    """Bottom of the essential spectrum for constant intensity |beta|."""
    return 0.25 + beta * beta


@dataclass(frozen=True)
class LandauLevelSet:
    """Finite set of Landau levels of a constant field, sorted ascending."""

    beta: float
    levels: tuple[float, ...]


def landau_level_set(beta: float) -> LandauLevelSet:
    """Levels (2j+1)|beta| - j(j+1) for j < |beta| - 1/2; empty iff |beta| <= 1/2."""
    if not math.isfinite(beta):
        raise ValueError("beta must be finite")
    a = abs(beta)
    levels = []
    j = 0
    while j < a - 0.5:
        levels.append((2 * j + 1) * a - j * (j + 1))
        j += 1
    return LandauLevelSet(beta=float(beta), levels=tuple(levels))
