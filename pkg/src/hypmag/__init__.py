"""Eigenvalue counting for magnetic Laplacians on hyperbolic surface ends.

The package splits into geometry and field data (model), closed-form
Landau quantities (landau), a 1-d Dirichlet counting kernel (sturm1d),
the Fourier-mode reduction that sums per-mode counts into an end's
counting function (modes), the semiclassical integral and its bracket
(weyl), constant-field essential spectra plus the Morse-limit checks
(essential), and a CLI (cli).
"""

from .essential import (LimitReport, MorseOptions, MorseReport, SpectrumSet,
                        cusp_is_integral, essential_spectrum,
                        funnel_mode_limit_check, holonomy, morse_check)
from .landau import (LandauLevelSet, ess_bottom, landau_count,
                     landau_level_set)
from .model import (BoundedFieldError, CuspEnd, DomainError, FunnelEnd,
                    GrowthReport, NonConstantFieldError, RadialField,
                    SurfaceEnds, check_growth_hypotheses, cusp_area,
                    eval_field, gauge_function, gauge_limit)
from .modes import (EndOptions, ModePotential, count_end,
                    cusp_mode_potential, funnel_limit_potential,
                    funnel_mode_potential, mode_range)
from .sturm1d import (CountOptions, CountResult, TridiagonalOperator,
                      count_below, count_stable, discretize,
                      lowest_eigenvalues)
from .weyl import (ExponentFit, HypWReport, WeylOptions, check_hypW,
                   fit_exponent, omega, theorem1_bracket, weyl_integral)

__version__ = "0.1.0"

__all__ = [
    "BoundedFieldError",
    "CountOptions",
    "CountResult",
    "CuspEnd",
    "DomainError",
    "EndOptions",
    "ExponentFit",
    "FunnelEnd",
    "GrowthReport",
    "HypWReport",
    "LandauLevelSet",
    "LimitReport",
    "ModePotential",
    "MorseOptions",
    "MorseReport",
    "NonConstantFieldError",
    "RadialField",
    "SpectrumSet",
    "SurfaceEnds",
    "TridiagonalOperator",
    "WeylOptions",
    "check_growth_hypotheses",
    "check_hypW",
    "count_below",
    "count_end",
    "count_stable",
    "cusp_area",
    "cusp_is_integral",
    "cusp_mode_potential",
    "discretize",
    "ess_bottom",
    "essential_spectrum",
    "eval_field",
    "fit_exponent",
    "funnel_limit_potential",
    "funnel_mode_limit_check",
    "funnel_mode_potential",
    "gauge_function",
    "gauge_limit",
    "holonomy",
    "landau_count",
    "landau_level_set",
    "lowest_eigenvalues",
    "mode_range",
    "morse_check",
    "omega",
    "theorem1_bracket",
    "weyl_integral",
]
