"""Spectrum of -d^2/du^2 + exp(2u)/4 + k exp(u) on the half-line [u0, oo).

With kappa = -k, the solution that decays at +oo is

    psi(u, E) = exp(-u/2) W(kappa, i z, exp(u)),   z = sqrt(E),

so Dirichlet eigenvalues are the energies E = -mu^2 at which
Z(mu) = W(kappa, mu, exp(u0)) vanishes.  Z is even in mu and real on both
the real and the imaginary mu axis; imaginary zeros mu = +-it give
positive eigenvalues t^2, real zeros in (0, kappa) give negative ones.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from ._scan import SignScanner
from .errors import DomainError, MonotonicityViolation, PrecisionLossError, ScanExhaustedError
from .scaled import DEFAULT_PRECISION, PRECISION_LADDER, PrecisionConfig, ScaledValue
from .special import whittaker_w

__all__ = [
    "MorseProblem",
    "SpectralZero",
    "CountingReport",
    "MonotonicityReport",
    "potential_value",
    "rescale_general",
    "eigenfunction_value",
    "eigenfunction_derivative",
    "z_function",
    "shooting_function",
    "default_scan_step",
    "dirichlet_zero_scan",
    "exceptional_real_zeros",
    "eigenvalues_general_alpha",
    "phase_integral",
    "weyl_integral",
    "closed_form_phase_integral",
    "asymptotic_count",
    "counting_report",
    "monotonicity_check",
]

TWO_PI = 2.0 * math.pi
_REFINE_REL = 1e-10


@dataclass(frozen=True)
class MorseProblem:
    """Potential parameter ``k``, left endpoint ``u0`` and boundary angle.

    The boundary condition at ``u0`` is cos(alpha) psi + sin(alpha) psi' = 0;
    ``alpha`` is stored reduced to [0, 2 pi).
    """

    k: float
    u0: float
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("k", "u0", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "u0", float(self.u0))
        object.__setattr__(self, "alpha", float(self.alpha) % TWO_PI)

    @property
    def kappa(self) -> float:
        return -self.k

    @property
    def x0(self) -> float:
        return math.exp(self.u0)

    @property
    def is_dirichlet(self) -> bool:
        return math.sin(self.alpha) == 0.0 or abs(math.sin(self.alpha)) < 1e-15


@dataclass(frozen=True)
class SpectralZero:
    axis: str  # "imaginary" or "real"
    coordinate: float
    index: int
    bracket: tuple
    energy: float
    residual: float
    multiplicity: int = 1

    def as_row(self) -> dict:
        return {
            "axis": self.axis,
            "index": self.index,
            "coordinate": self.coordinate,
            "energy": self.energy,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class CountingReport:
    """Observed mu-plane zero counts against the asymptotic main term.

    ``rows`` holds ``(T, observed, main_term, diff)`` tuples; ``diff`` is the
    empirical bounded remainder.
    """

    u0: float
    rows: tuple
    coefficients: tuple
    zeros: tuple = field(default=(), repr=False)

    @property
    def max_abs_diff(self) -> float:
        return max(abs(r[3]) for r in self.rows)

    @property
    def drift_slope(self) -> float:
        """Slope of a least-squares line through (T, diff)."""
        ts = np.array([r[0] for r in self.rows])
        ds = np.array([r[3] for r in self.rows])
        if len(ts) < 2:
            return 0.0
        return float(np.polyfit(ts, ds, 1)[0])

    def as_rows(self) -> list[dict]:
        return [{"T": t, "observed": n, "main_term": m, "diff": d} for t, n, m, d in self.rows]


# ---------------------------------------------------------------------------
# potential and reductions
# ---------------------------------------------------------------------------

def potential_value(k: float, u):
    """exp(2u)/4 + k exp(u); accepts scalars or numpy arrays."""
    if isinstance(u, np.ndarray):
        e = np.exp(u)
    else:
        e = math.exp(u)
    return 0.25 * e * e + k * e


def rescale_general(A: float, B: float, v0: float) -> tuple[float, float]:
    """Reduce A exp(2v) + B exp(v) on [v0, oo) to the normalized family.

    The shift u = v + log(4A)/2 turns A exp(2v) into exp(2u)/4 and B exp(v)
    into k exp(u) with k = B / (2 sqrt(A)).  Returns ``(k, u0)``; the
    spectrum is unchanged because a shift leaves -d^2/dv^2 alone.
    """
    if not A > 0:
        raise DomainError("rescale_general needs A > 0")
    return B / (2.0 * math.sqrt(A)), v0 + 0.5 * math.log(4.0 * A)


# ---------------------------------------------------------------------------
# precision handling
# ---------------------------------------------------------------------------

def _rungs(magnitude: float, cfg: PrecisionConfig) -> list[int]:
    start = cfg.working_digits
    if magnitude > 30:
        start = max(start, PRECISION_LADDER[-1])
    return [start] + [d for d in PRECISION_LADDER if d > start]


def _escalating(fn, magnitude, cfg):
    """Run ``fn(cfg_at_digits)`` climbing the precision ladder on cancellation."""
    err = None
    for digits in _rungs(magnitude, cfg):
        try:
            return fn(cfg if digits == cfg.working_digits else cfg.with_digits(digits))
        except PrecisionLossError as exc:
            err = exc
    raise err


def _mu_of_energy(E) -> complex:
    """mu = i sqrt(E) with the principal root; real E <= 0 gives mu = sqrt(-E) >= 0."""
    if isinstance(E, (int, float)) or (isinstance(E, complex) and E.imag == 0):
        e = float(E.real if isinstance(E, complex) else E)
        if e <= 0:
            return complex(math.sqrt(-e), 0.0)
        return complex(0.0, math.sqrt(e))
    return 1j * cmath.sqrt(E)


def _as_mu(mu):
    mu = complex(mu)
    if mu.imag == 0:
        return mu.real
    return mu


# ---------------------------------------------------------------------------
# eigenfunction, Z and the boundary form
# ---------------------------------------------------------------------------

def z_function(prob: MorseProblem, mu, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """Z(mu) = W(-k, mu, exp(u0)); certified real for mu on either axis."""
    m = _as_mu(mu)
    return _escalating(lambda c: whittaker_w(prob.kappa, m, prob.x0, c), abs(m), cfg)


def eigenfunction_value(prob: MorseProblem, E, u: float,
                        cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """psi(u, E) = exp(-u/2) W(-k, i sqrt(E), exp(u)) for u >= u0."""
    if u < prob.u0:
        raise DomainError(f"u={u} lies left of u0={prob.u0}")
    m = _as_mu(_mu_of_energy(E))
    w = _escalating(lambda c: whittaker_w(prob.kappa, m, math.exp(u), c), abs(m), cfg)
    return w * math.exp(-u / 2)


def eigenfunction_derivative(prob: MorseProblem, E, u: float,
                             cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """d psi / du = exp(-u/2) [ (x/2 - kappa - 1/2) W(kappa) - W(kappa + 1) ] at x = exp(u)."""
    if u < prob.u0:
        raise DomainError(f"u={u} lies left of u0={prob.u0}")
    m = _as_mu(_mu_of_energy(E))
    x = math.exp(u)
    kap = prob.kappa

    def run(c):
        w0 = whittaker_w(kap, m, x, c)
        w1 = whittaker_w(kap + 1, m, x, c)
        return w0 * (x / 2 - kap - 0.5) - w1

    return _escalating(run, abs(m), cfg) * math.exp(-u / 2)


def shooting_function(prob: MorseProblem, E: float,
                      cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """cos(alpha) psi(u0, E) + sin(alpha) psi'(u0, E) for real E.

    Vanishes exactly at the eigenvalues of the problem with angle ``alpha``.
    """
    E = float(E)
    c, s = math.cos(prob.alpha), math.sin(prob.alpha)
    if prob.is_dirichlet:
        val = eigenfunction_value(prob, E, prob.u0, cfg)
        return val if c > 0 else -val
    psi = eigenfunction_value(prob, E, prob.u0, cfg)
    dpsi = eigenfunction_derivative(prob, E, prob.u0, cfg)
    if abs(c) < 1e-15:
        return dpsi * s
    return psi * c + dpsi * s


# ---------------------------------------------------------------------------
# zero scans
# ---------------------------------------------------------------------------

def default_scan_step(T: float) -> float:
    """About four samples per expected gap between consecutive zeros."""
    return 0.25 * math.pi / math.log(max(T, math.e ** 2))


def _refine_all(scanner, brackets, axis, energy_of, start_index=0):
    zeros = []
    for i, (a, b) in enumerate(brackets):
        scale = max(scanner.value(a).log10_abs(), scanner.value(b).log10_abs())
        tol = _REFINE_REL * max(1.0, min(abs(a), abs(b)))
        lo, hi = scanner.bisect(a, b, tol)
        mid = 0.5 * (lo + hi)
        res = scanner.f(mid).log10_abs()
        residual = 0.0 if res == -math.inf else 10.0 ** (res - scale)
        zeros.append(SpectralZero(axis, mid, start_index + i, (lo, hi), energy_of(mid), residual))
    return zeros


def _imaginary_brackets(prob, T, step, cfg):
    step = default_scan_step(T) if step is None else step
    if not step > 0:
        raise DomainError("step must be positive")
    n = max(2, math.ceil(T / step))
    first = min(1e-3, T / n / 4)
    points = [first] + [T * j / n for j in range(1, n + 1)]
    scanner = SignScanner(lambda t: z_function(prob, complex(0.0, t), cfg))
    brackets, _ = scanner.guarded(points)
    return scanner, brackets


def dirichlet_zero_scan(prob: MorseProblem, T: float, step: float | None = None, *,
                        cfg: PrecisionConfig = DEFAULT_PRECISION,
                        refine: bool = True) -> list[SpectralZero]:
    """Zeros mu = i t of Z with 0 < t <= T, ascending.

    The grid starts at ``step`` (default :func:`default_scan_step`) and is
    halved until two consecutive levels report the same number of sign
    changes.  Each bracket is then bisected to width 1e-10 max(1, t).  With
    ``refine=False`` the unrefined brackets are returned (midpoint as the
    coordinate, residual NaN).
    """
    if not prob.is_dirichlet or math.cos(prob.alpha) < 0:
        raise DomainError("dirichlet_zero_scan needs alpha = 0")
    if not T > 0:
        raise DomainError("T must be positive")
    scanner, brackets = _imaginary_brackets(prob, T, step, cfg)
    if not refine:
        return [
            SpectralZero("imaginary", 0.5 * (a + b), i, (a, b), (0.5 * (a + b)) ** 2, math.nan)
            for i, (a, b) in enumerate(brackets)
        ]
    return _refine_all(scanner, brackets, "imaginary", lambda t: t * t)


def _double_zero_at_origin(prob, cfg) -> SpectralZero | None:
    z0 = z_function(prob, 0.0, cfg)
    ref = max(z_function(prob, 0.1, cfg).log10_abs(), z_function(prob, 0.1j, cfg).log10_abs())
    if z0.log10_abs() >= ref - 8:
        return None
    # a double zero behaves like c mu^2: opposite signs on the two axes
    if z_function(prob, 1e-3, cfg).sign() == z_function(prob, 1e-3j, cfg).sign():
        return None
    res = 10.0 ** (z0.log10_abs() - ref) if not z0.is_zero else 0.0
    return SpectralZero("real", 0.0, 0, (0.0, 0.0), 0.0, res, multiplicity=2)


def exceptional_real_zeros(prob: MorseProblem, *,
                           cfg: PrecisionConfig = DEFAULT_PRECISION) -> list[SpectralZero]:
    """Real zeros 0 <= mu < kappa of Z (negative eigenvalues -mu^2).

    Empty when kappa = -k <= 0.  A zero at mu = 0 is reported with
    ``multiplicity=2``.
    """
    if not prob.is_dirichlet or math.cos(prob.alpha) < 0:
        raise DomainError("exceptional_real_zeros needs alpha = 0")
    kappa = prob.kappa
    if kappa <= 0:
        return []
    n = max(40, math.ceil(kappa / 0.05))
    first = min(1e-3, kappa / n / 4)
    points = [first] + [kappa * j / n for j in range(1, n)]
    scanner = SignScanner(lambda m: z_function(prob, m, cfg))
    brackets, _ = scanner.guarded(points)
    zeros = []
    double = _double_zero_at_origin(prob, cfg)
    if double is not None:
        zeros.append(double)
    # the zero closest to kappa gives the lowest energy; index by energy
    found = _refine_all(scanner, brackets, "real", lambda m: -m * m)
    found.sort(key=lambda z: -z.coordinate)
    for z in found:
        zeros.append(SpectralZero(z.axis, z.coordinate, 0, z.bracket, z.energy, z.residual))
    return [
        SpectralZero(z.axis, z.coordinate, i, z.bracket, z.energy, z.residual, z.multiplicity)
        for i, z in enumerate(zeros)
    ]


def _energy_grid(lower: float, upper: float) -> list[float]:
    pts = [lower]
    e = lower
    while e < upper:
        e = e + 0.1 if e < 1.0 else e * 1.05
        pts.append(e)
    return pts


def eigenvalues_general_alpha(prob: MorseProblem, n: int, *, E_max: float = 1e4,
                              cfg: PrecisionConfig = DEFAULT_PRECISION) -> list[float]:
    """Lowest ``n`` eigenvalues for the boundary angle ``prob.alpha``.

    Scans the boundary form over E upward from -k^2 - 1 (k < 0) or -1,
    with step 0.1 up to E = 1 and growth factor 1.05 beyond.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    lower = -prob.k * prob.k - 1.0 if prob.k < 0 else -1.0
    if not prob.is_dirichlet:
        # Robin conditions with cot(alpha) < 0 can push the ground state lower
        cot = math.cos(prob.alpha) / math.sin(prob.alpha)
        lower -= max(0.0, -cot) ** 2
    scanner = SignScanner(lambda e: shooting_function(prob, e, cfg))
    grid = _energy_grid(lower, E_max)
    # coarse pass to find an upper end that holds n sign changes
    upper_idx = None
    changes = 0
    for i in range(1, len(grid)):
        if scanner.sign(grid[i]) != scanner.sign(grid[i - 1]) or scanner.sign(grid[i]) == 0:
            changes += 1
            if changes >= n:
                upper_idx = min(i + 1, len(grid) - 1)
                break
    if upper_idx is None:
        raise ScanExhaustedError(f"found {changes} < {n} eigenvalues below E_max={E_max}")
    brackets, _ = scanner.guarded(grid[: upper_idx + 1])
    brackets = brackets[:n]
    out = []
    for a, b in brackets:
        lo, hi = scanner.bisect(a, b, _REFINE_REL * max(1.0, min(abs(a), abs(b))))
        out.append(0.5 * (lo + hi))
    return out


# ---------------------------------------------------------------------------
# Weyl counting
# ---------------------------------------------------------------------------

def _turning_point(k: float, T: float) -> float | None:
    """Largest root of exp(2u)/4 + k exp(u) = T, or None when V > T throughout."""
    disc = T + k * k
    if disc <= 0:
        return None
    root = math.sqrt(disc)
    if root - k <= 0:
        return None
    return math.log(2.0 * (root - k))


def _integrand_factory(k, T, u_t):
    root = math.sqrt(T + k * k)
    e_t = math.exp(u_t)

    def gap(u):
        # T - V factored as (e^{u_T} - e^u)/2 * (sqrt(T + k^2) + e^u/2 + k)
        return -0.5 * e_t * math.expm1(u - u_t) * (root + 0.5 * math.exp(u) + k)

    return gap


def phase_integral(k: float, u0: float, T: float, *, nodes: int | None = None) -> float:
    """Integral of sqrt(T - V(u)) over the classically allowed region [u0, u_T].

    The square-root singularity at the turning point is removed by
    u = u_T - (u_T - a) w^2.  ``nodes`` switches from adaptive quadrature to a
    fixed Gauss-Legendre rule (used for self-convergence checks).
    """
    u_t = _turning_point(k, T)
    if u_t is None or u_t <= u0:
        return 0.0
    if potential_value(k, u0) > T:
        raise DomainError(
            f"T={T} lies below V(u0)={potential_value(k, u0)}: the allowed region is not [u0, u_T]"
        )
    gap = _integrand_factory(k, T, u_t)
    split = u0
    if k < 0 and u0 < math.log(2 * abs(k)):
        u1 = math.log(6 * abs(k) + 1)
        if u0 < u1 < u_t:
            split = u1
    total = 0.0
    if split > u0:
        total += _integrate(lambda u: math.sqrt(max(gap(u), 0.0)), u0, split, nodes)
    span = u_t - split

    def smooth(w):
        u = u_t - span * w * w
        return math.sqrt(max(gap(u), 0.0)) * 2.0 * span * w

    total += _integrate(smooth, 0.0, 1.0, nodes)
    return total


def _integrate(f, a, b, nodes):
    if nodes is None:
        val, _ = quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=400)
        return val
    x, w = np.polynomial.legendre.leggauss(nodes)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(sum(wi * f(mid + half * xi) for xi, wi in zip(x, w)))


def weyl_integral(k: float, u0: float, T: float, *, nodes: int | None = None) -> float:
    """Semiclassical eigenvalue count below energy T: phase_integral / pi."""
    return phase_integral(k, u0, T, nodes=nodes) / math.pi


def closed_form_phase_integral(u0: float, T: float) -> float:
    """sqrt(T) log sqrt(T) + (2 log 2 - 1 - u0) sqrt(T)."""
    r = math.sqrt(T)
    return r * math.log(r) + (2 * math.log(2) - 1 - u0) * r


def count_coefficients(u0: float) -> tuple[float, float]:
    return 2 / math.pi, 2 / math.pi * (2 * math.log(2) - 1 - u0)


def _main_term(u0, t):
    c1, c2 = count_coefficients(u0)
    return c1 * t * math.log(t) + c2 * t


def asymptotic_count(u0: float, T_mu: float) -> float:
    """Main term of the number of zeros of Z with |Im mu| <= T_mu (both signs)."""
    if not T_mu > 1:
        raise DomainError("T_mu must exceed 1")
    return _main_term(u0, T_mu)


def counting_report(prob: MorseProblem, T: float, n_checkpoints: int = 10, *,
                    cfg: PrecisionConfig = DEFAULT_PRECISION) -> CountingReport:
    """Observed mu-plane counts at T i / n (i = 1..n) against the main term."""
    if not T > 2:
        raise DomainError("counting_report needs T > 2")
    if n_checkpoints < 1:
        raise DomainError("n_checkpoints must be >= 1")
    if not prob.is_dirichlet or math.cos(prob.alpha) < 0:
        raise DomainError("counting_report needs alpha = 0")
    checkpoints = [T * i / n_checkpoints for i in range(1, n_checkpoints + 1)]
    scanner, brackets = _imaginary_brackets(prob, T, None, cfg)
    # only brackets that straddle a checkpoint need refining to decide the count
    imag = []
    for i, (a, b) in enumerate(brackets):
        if any(a < c < b for c in checkpoints):
            a, b = scanner.bisect(a, b, _REFINE_REL * max(1.0, min(abs(a), abs(b))))
        mid = 0.5 * (a + b)
        imag.append(SpectralZero("imaginary", mid, i, (a, b), mid * mid, math.nan))
    real = exceptional_real_zeros(prob, cfg=cfg)
    # real zeros and a double zero at the origin pair up with their mirror images
    fixed = sum(2 * z.multiplicity if z.coordinate == 0 else 2 for z in real)
    rows = []
    for t in checkpoints:
        observed = fixed + 2 * sum(1 for z in imag if z.coordinate <= t)
        main = _main_term(prob.u0, t)
        rows.append((t, observed, main, observed - main))
    return CountingReport(prob.u0, tuple(rows), count_coefficients(prob.u0), tuple(real + imag))


# ---------------------------------------------------------------------------
# monotonicity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotonicityReport:
    table: dict
    checked_pairs: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def monotonicity_check(k_list, u0_list, alpha: float = 0.0, n: int = 3, *,
                       cfg: PrecisionConfig = DEFAULT_PRECISION,
                       raise_on_violation: bool = True) -> MonotonicityReport:
    """Check that each of the lowest ``n`` eigenvalues increases with u0 and with k.

    For k < 0 only u0 >= log(2|k|) takes part in the u0 direction, where the
    potential is increasing on the whole half-line.
    """
    ks = sorted(set(float(k) for k in k_list))
    us = sorted(set(float(u) for u in u0_list))
    table = {}
    for k in ks:
        for u in us:
            table[(k, u)] = eigenvalues_general_alpha(MorseProblem(k, u, alpha), n, cfg=cfg)
    violations = []
    pairs = 0

    def compare(key_a, key_b, direction):
        nonlocal pairs
        for j in range(n):
            pairs += 1
            if not table[key_b][j] > table[key_a][j]:
                violations.append((direction, key_a, key_b, j, table[key_a][j], table[key_b][j]))

    for k in ks:
        allowed = [u for u in us if k >= 0 or u >= math.log(2 * abs(k)) - 1e-12]
        for a, b in zip(allowed, allowed[1:]):
            compare((k, a), (k, b), "u0")
    for u in us:
        for a, b in zip(ks, ks[1:]):
            compare((a, u), (b, u), "k")
    report = MonotonicityReport(table, pairs, tuple(violations))
    if violations and raise_on_violation:
        raise MonotonicityViolation(f"{len(violations)} monotonicity violations", violations[0])
    return report
