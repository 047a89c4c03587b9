"""Independent numerical oracles.

* :func:`integrate_whittaker_inward` integrates Whittaker's equation from a
  large anchor down to the target, starting from the large-x asymptotic series
  of W.  It never touches the hypergeometric series, so agreement with
  :func:`morsespec.special.whittaker_w` is a genuine two-route check.
* :func:`fd_halfline_eigenvalues` is a three-point finite-difference
  eigen-solver for -d^2/du^2 + V(u) on a truncated half-line.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, StiffnessError, TruncationWarning

__all__ = [
    "IntegrationSpec",
    "WhittakerTable",
    "asymptotic_initial_data",
    "integrate_whittaker_inward",
    "integrate_whittaker_outward",
    "GridEigenSpec",
    "fd_halfline_eigenvalues",
]


@dataclass(frozen=True)
class IntegrationSpec:
    x_end: float
    x_start: float = 60.0
    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_steps: int = 200_000

    def __post_init__(self):
        if not self.x_start > self.x_end > 0:
            raise DomainError("need x_start > x_end > 0")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")


@dataclass(frozen=True)
class WhittakerTable:
    """Dense solution of the inward integration: ``table(x) -> (W, W')``."""

    x: np.ndarray
    w: np.ndarray
    dw: np.ndarray
    _sol: object

    def __call__(self, x):
        y = self._sol(x)
        return y[0], y[1]


def asymptotic_initial_data(kappa: float, mu: complex, x: float):
    """W and W' at large ``x`` from the optimally truncated asymptotic series.

    W ~ exp(-x/2) x^kappa * sum_s (1/2+mu-kappa)_s (1/2-mu-kappa)_s / (s! (-x)^s)

    Returns ``(w, dw, err)`` with ``err`` the relative size of the first
    omitted term.
    """
    a = 0.5 + mu - kappa
    b = 0.5 - mu - kappa
    term = 1.0 + 0j
    s_sum = term
    ds_sum = 0j
    err = 0.0
    prev = math.inf
    for s in range(1, 400):
        nxt = term * (a + s - 1) * (b + s - 1) / (s * -x)
        mag = abs(nxt)
        if mag == 0:
            err = 0.0
            break
        if mag > prev:
            err = prev
            break
        term = nxt
        s_sum += term
        ds_sum += -s * term / x
        prev = mag
        err = mag
    lead = math.exp(-x / 2) * x ** kappa
    w = lead * s_sum
    dw = lead * ((-0.5 + kappa / x) * s_sum + ds_sum)
    return w, dw, err


def _rhs(kappa, mu):
    c = 0.25 - complex(mu) ** 2

    def f(x, y):
        return [y[1], (0.25 - kappa / x - c / (x * x)) * y[0]]

    return f


def _solve(kappa, mu, x0, x1, y0, rel_tol, abs_tol, max_steps):
    max_step = abs(x1 - x0) / 20
    sol = solve_ivp(
        _rhs(kappa, mu),
        (x0, x1),
        y0,
        method="DOP853",
        rtol=rel_tol,
        atol=abs_tol,
        dense_output=True,
        max_step=max_step,
    )
    if sol.status != 0:
        raise StiffnessError(f"ODE integration failed: {sol.message}")
    if sol.t.size > max_steps:
        raise StiffnessError(f"ODE integration needed {sol.t.size} steps (> {max_steps})")
    if sol.t.size > 2 and np.min(np.abs(np.diff(sol.t))) < 1e-12:
        raise StiffnessError("step size collapsed below 1e-12")
    return sol


def integrate_whittaker_inward(kappa: float, mu: complex, spec: IntegrationSpec) -> WhittakerTable:
    """Integrate W'' = (1/4 - kappa/x - (1/4 - mu^2)/x^2) W from ``x_start`` inward.

    Inward integration is stable for the recessive solution: any admixture of
    the growing solution decays as x decreases.  The anchor is pushed outward
    (up to x = 1000) until the asymptotic series is accurate to ``rel_tol``.
    """
    x_start = spec.x_start
    w0, dw0, err = asymptotic_initial_data(kappa, mu, x_start)
    while err > spec.rel_tol and x_start * 1.5 <= 1000.0:
        x_start *= 1.5
        w0, dw0, err = asymptotic_initial_data(kappa, mu, x_start)
    if err > spec.rel_tol:
        raise DomainError(
            f"no asymptotic anchor below x=1000 for kappa={kappa}, mu={mu} (series tail {err:.2e})"
        )
    sol = _solve(
        kappa, mu, x_start, spec.x_end, [complex(w0), complex(dw0)],
        spec.rel_tol, spec.abs_tol, spec.max_steps,
    )
    return WhittakerTable(sol.t, sol.y[0], sol.y[1], sol.sol)


def integrate_whittaker_outward(kappa, mu, x0, x1, w0, dw0, rel_tol=1e-12, abs_tol=1e-300):
    """Plain outward integration from (W, W') at ``x0``; used to exhibit the
    exponential growth of any error against the recessive solution."""
    sol = _solve(kappa, mu, x0, x1, [complex(w0), complex(dw0)], rel_tol, abs_tol, 10**6)
    return WhittakerTable(sol.t, sol.y[0], sol.y[1], sol.sol)


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridEigenSpec:
    u_min: float
    u_max: float | None = None
    n_points: int = 20000
    bc_alpha: float = 0.0
    n_eigs: int = 10

    def __post_init__(self):
        if self.u_max is None:
            object.__setattr__(self, "u_max", self.u_min + 12.0)
        if not self.u_max > self.u_min:
            raise DomainError("need u_max > u_min")
        if self.n_points < 1000:
            raise DomainError("n_points must be >= 1000")
        if self.n_eigs < 1:
            raise DomainError("n_eigs must be >= 1")
        object.__setattr__(self, "bc_alpha", self.bc_alpha % (2 * math.pi))


def _fd_once(potential, u_min, u_max, n, alpha, n_eigs):
    u = np.linspace(u_min, u_max, n + 1)
    h = u[1] - u[0]
    v = np.asarray(potential(u), dtype=float)
    s, c = math.sin(alpha), math.cos(alpha)
    if abs(s) < 1e-14:
        # Dirichlet at u_min: unknowns u_1..u_{n-1}
        d = 2.0 / h**2 + v[1:-1]
        e = np.full(n - 2, -1.0 / h**2)
    else:
        # Robin via ghost point psi_{-1} = psi_1 + 2 h cot(alpha) psi_0,
        # symmetrized by rescaling psi_0 with 1/sqrt(2)
        cot = c / s
        d = 2.0 / h**2 + v[:-1]
        d[0] -= 2.0 * cot / h
        e = np.full(n - 1, -1.0 / h**2)
        e[0] = -math.sqrt(2.0) / h**2
    evals = eigh_tridiagonal(
        d, e, select="i", select_range=(0, n_eigs - 1), lapack_driver="stebz", tol=1e-13
    )[0]
    return evals


def _fd_richardson(potential, u_min, u_max, n, alpha, n_eigs):
    fine = _fd_once(potential, u_min, u_max, n, alpha, n_eigs)
    coarse = _fd_once(potential, u_min, u_max, n // 2, alpha, n_eigs)
    return (4.0 * fine - coarse) / 3.0


def fd_halfline_eigenvalues(potential, spec: GridEigenSpec, *, check_truncation: bool = True,
                            extrapolate: bool = True) -> list[float]:
    """Lowest ``spec.n_eigs`` eigenvalues of -d^2/du^2 + V on [u_min, u_max].

    Boundary condition cos(a) psi + sin(a) psi' = 0 at ``u_min`` and Dirichlet
    at ``u_max``.  Results are Richardson-extrapolated from ``n_points`` and
    ``n_points // 2`` intervals.  With ``check_truncation`` the box is doubled
    (at equal spacing) and a :class:`TruncationWarning` is issued if any
    eigenvalue moves by more than 1e-6.
    """
    solve = _fd_richardson if extrapolate else _fd_once
    evals = solve(potential, spec.u_min, spec.u_max, spec.n_points, spec.bc_alpha, spec.n_eigs)
    if check_truncation:
        wide_max = spec.u_min + 2 * (spec.u_max - spec.u_min)
        wide = solve(potential, spec.u_min, wide_max, 2 * spec.n_points, spec.bc_alpha, spec.n_eigs)
        moved = float(np.max(np.abs(wide - evals)))
        if moved > 1e-6:
            warnings.warn(
                f"doubling u_max moved an eigenvalue by {moved:.2e}", TruncationWarning, stacklevel=2
            )
    return [float(v) for v in evals]
