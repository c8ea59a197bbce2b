"""Shared test helpers: end factories, dense-matrix oracles, CLI runners.

The oracles here deliberately avoid the package's own counting code
paths: eigenvalues come straight from LAPACK on a fixed interval, so a
disagreement always points at the library, not at the test.
"""

from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest
from scipy.linalg import eigvalsh_tridiagonal

from hypmag import CuspEnd, FunnelEnd, RadialField
from hypmag.model import CUSP_KIND, FUNNEL_KIND


def make_funnel(coeffs, tau=1.0, t0=0.0, xi=0.0) -> FunnelEnd:
    return FunnelEnd(tau=tau, t0=t0, xi=xi,
                     field=RadialField(FUNNEL_KIND, tuple(coeffs)))


def make_cusp(coeffs, L=1.0, t0=0.0, xi=0.0) -> CuspEnd:
    return CuspEnd(L=L, t0=t0, xi=xi,
                   field=RadialField(CUSP_KIND, tuple(coeffs)))


# ---------------------------------------------------------------------------
# Dense-matrix oracles


def dense_eigenvalues(diag, off) -> np.ndarray:
    diag = np.asarray(diag, dtype=float)
    if diag.size == 1:
        return diag.copy()
    return eigvalsh_tridiagonal(diag, np.asarray(off, dtype=float))


def dense_count_below(diag, off, lam: float) -> int:
    """Full-spectrum reference count, strictly below lam."""
    return int(np.sum(dense_eigenvalues(diag, off) < lam))


def dense_mode_count(V, t_lo: float, t_hi: float, n: int, lam: float) -> int:
    """Dirichlet count below lam on a fixed interval, straight from LAPACK.

    No truncation search and no refinement loop; the caller must place
    t_hi deep enough in the classically forbidden region and pick n fine
    enough for the energies involved.
    """
    h = (t_hi - t_lo) / (n + 1)
    grid = t_lo + h * np.arange(1, n + 1)
    vals = np.asarray(V(grid), dtype=float)
    vmin = float(np.min(vals))
    if vmin >= lam:
        # -d^2/dt^2 with Dirichlet ends is positive semidefinite
        return 0
    diag = 2.0 / (h * h) + vals
    off = np.full(n - 1, -1.0 / (h * h))
    evals = eigvalsh_tridiagonal(diag, off, select="v",
                                 select_range=(vmin - 1.0, lam + 1.0))
    return int(np.sum(evals < lam))


# ---------------------------------------------------------------------------
# Config files and CLI


def write_config(path, ends, **numerics) -> str:
    cfg = {"schema_version": 1, "ends": list(ends)}
    if numerics:
        cfg["numerics"] = numerics
    path.write_text(json.dumps(cfg))
    return str(path)


def cusp_linear_end(**overrides) -> dict:
    end = {"type": "cusp", "L": 1.0, "t0": 0.0, "xi": 0.0,
           "field": {"kind": "y-poly", "coeffs": [0.0, 1.0]}}
    end.update(overrides)
    return end


def funnel_cosh_end(**overrides) -> dict:
    end = {"type": "funnel", "tau": 1.0, "t0": 0.0, "xi": 0.0,
           "field": {"kind": "cosh-poly", "coeffs": [0.0, 1.0]}}
    end.update(overrides)
    return end


def run_cli(*args) -> tuple[int, bytes, bytes]:
    """Run the CLI in a fresh interpreter; byte-faithful stdout/stderr."""
    proc = subprocess.run([sys.executable, "-m", "hypmag.cli"]
                          + [str(a) for a in args],
                          capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr


def run_main(capsys, *args) -> tuple[int, str, str]:
    """In-process CLI invocation, for the many small error-path cases."""
    from hypmag.cli import main
    rc = main([str(a) for a in args])
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ---------------------------------------------------------------------------
# Acceptance reporting

_CRITERION_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion.

    Lines are echoed into the terminal summary so a plain pytest run
    shows the verdict for every criterion.
    """
    def report(num: int, name: str, ok: bool, detail: str = ""):
        line = f"criterion {num} ({name}): {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f" -- {detail}"
        _CRITERION_LINES.append(line)
        print(line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
