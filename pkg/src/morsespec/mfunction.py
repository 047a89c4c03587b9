"""Weyl-Titchmarsh m-function of the Morse half-line problem in closed form.

    m(u0, E) = -W(1-k, iz, x0) / W(-k, iz, x0) + x0/2 + k - 1/2,   x0 = exp(u0),

with z the principal square root of E.  Its poles on the real axis are the
Dirichlet eigenvalues and its zeros the Neumann eigenvalues.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

from ._scan import SignScanner
from .errors import CorrespondenceViolation, DomainError, PoleError
from .scaled import DEFAULT_PRECISION, PrecisionConfig, ScaledValue
from .spectrum import MorseProblem, _energy_grid, _escalating, eigenvalues_general_alpha, potential_value
from .special import whittaker_w

__all__ = [
    "MFunctionSample",
    "CorrespondenceReport",
    "principal_root",
    "m_principal",
    "m_of_energy",
    "m_alpha",
    "m_from_eigenfunction",
    "riccati_residual",
    "herglotz_check",
    "asymptotic_gaps",
    "pole_zero_correspondence",
]

_POLE_REL = 1e-8


@dataclass(frozen=True)
class MFunctionSample:
    u0: float
    E: complex
    value: complex
    alpha: float = 0.0


def principal_root(E) -> complex:
    """sqrt(E) with Im >= 0 (for E > 0 the positive root)."""
    z = cmath.sqrt(complex(E))
    if z.imag < 0 or (z.imag == 0 and z.real < 0):
        z = -z
    return z


def _ratio(k, u0, z, cfg) -> tuple[ScaledValue, ScaledValue]:
    mu = 1j * complex(z)
    if mu.imag == 0:
        mu = mu.real
    elif mu.real == 0:
        mu = complex(0.0, mu.imag)
    x0 = math.exp(u0)

    def run(c):
        return whittaker_w(1 - k, mu, x0, c), whittaker_w(-k, mu, x0, c)

    return _escalating(run, abs(mu), cfg)


def _assemble(k, u0, num, den):
    shift = math.exp(u0) / 2 + k - 0.5
    return -complex(num / den) + shift


def m_principal(k: float, u0: float, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """m at energy E = z^2, with ``z`` in the closed upper half-plane.

    Raises
    ------
    PoleError
        If |W(-k, iz, x0)| < 1e-8 |W(1-k, iz, x0)|, i.e. E is (within
        tolerance) a Dirichlet eigenvalue.
    """
    num, den = _ratio(k, u0, z, cfg)
    if den.is_zero or den.log10_abs() < num.log10_abs() + math.log10(_POLE_REL):
        raise PoleError(f"E = {complex(z) ** 2} is a Dirichlet eigenvalue within tolerance")
    return _assemble(k, u0, num, den)


def m_of_energy(k: float, u0: float, E, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    return m_principal(k, u0, principal_root(E), cfg)


def m_alpha(k: float, u0: float, z, alpha: float, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Rotated m-function (cos(a) m - sin(a)) / (sin(a) m + cos(a))."""
    m0 = m_principal(k, u0, z, cfg)
    c, s = math.cos(alpha), math.sin(alpha)
    den = s * m0 + c
    # m0 is O(1) away from its poles, so compare against 1 + |m0|
    if abs(den) < _POLE_REL * (1.0 + abs(m0)):
        raise PoleError(f"E = {complex(z) ** 2} is an eigenvalue for alpha = {alpha}")
    return (c * m0 - s) / den


def m_from_eigenfunction(k: float, u0: float, E, h: float = 1e-5,
                         cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """psi'/psi at u0 with the u-derivative taken by a five-point stencil.

    Independent of the closed form: only psi(u) = exp(-u/2) W(-k, iz, exp(u)) is used.
    """
    z = principal_root(E)
    mu = 1j * z
    mu = mu.real if mu.imag == 0 else mu

    def psi(u):
        return _escalating(lambda c: whittaker_w(-k, mu, math.exp(u), c), abs(mu), cfg) * math.exp(-u / 2)

    p0 = psi(u0)
    vals = [psi(u0 + j * h) / p0 for j in (-2, -1, 1, 2)]
    d = (complex(vals[0]) - 8 * complex(vals[1]) + 8 * complex(vals[2]) - complex(vals[3])) / (12 * h)
    return d


def riccati_residual(k: float, u0: float, E, h: float = 1e-4,
                     cfg: PrecisionConfig = DEFAULT_PRECISION) -> float:
    """|dm/du0 + m^2 - (V(u0) - E)| with a central difference in u0."""
    if not 1e-6 <= h <= 1e-3:
        raise DomainError("h must lie in [1e-6, 1e-3]")
    z = principal_root(E)
    m_plus = m_principal(k, u0 + h, z, cfg)
    m_minus = m_principal(k, u0 - h, z, cfg)
    m0 = m_principal(k, u0, z, cfg)
    dm = (m_plus - m_minus) / (2 * h)
    return abs(dm + m0 * m0 - (potential_value(k, u0) - complex(E)))


@dataclass(frozen=True)
class HerglotzReport:
    samples: tuple
    min_imag: float

    @property
    def ok(self) -> bool:
        return self.min_imag > 0


def herglotz_check(k: float, u0: float, n: int = 100, *, radius: float = 100.0,
                   min_imag: float = 0.1, seed: int = 42,
                   cfg: PrecisionConfig = DEFAULT_PRECISION) -> HerglotzReport:
    """Sample E uniformly in {|E| <= radius, Im E >= min_imag} and record Im m."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        er, ei = rng.uniform(-radius, radius), rng.uniform(min_imag, radius)
        if er * er + ei * ei > radius * radius:
            continue
        E = complex(er, ei)
        out.append(MFunctionSample(u0, E, m_of_energy(k, u0, E, cfg)))
    return HerglotzReport(tuple(out), min(s.value.imag for s in out))


def asymptotic_gaps(k: float, u0: float, radii=(20.0, 40.0, 80.0), n_angles: int = 9,
                    eps: float = 0.1, cfg: PrecisionConfig = DEFAULT_PRECISION) -> list[float]:
    """sup over arg z in [eps, pi/2 - eps] of |m(u0, z^2) - iz| for each radius."""
    angles = [eps + (math.pi / 2 - 2 * eps) * j / (n_angles - 1) for j in range(n_angles)]
    out = []
    for r in radii:
        worst = 0.0
        for a in angles:
            z = cmath.rect(r, a)
            worst = max(worst, abs(m_principal(k, u0, z, cfg) - 1j * z))
        out.append(worst)
    return out


# ---------------------------------------------------------------------------
# poles and zeros along real E
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrespondenceReport:
    poles: tuple
    zeros: tuple
    dirichlet: tuple
    neumann: tuple
    pole_matches: int
    zero_matches: int
    interlaced: bool

    @property
    def ok(self) -> bool:
        n = len(self.dirichlet)
        return self.pole_matches == n and self.zero_matches == len(self.neumann) and self.interlaced


def _m_real_scaled(prob, cfg):
    def f(E):
        num, den = _ratio(prob.k, prob.u0, principal_root(E), cfg)
        val = _assemble(prob.k, prob.u0, num, den).real
        return ScaledValue(val, 0, True)
    return f


def pole_zero_correspondence(prob: MorseProblem, n: int = 5, *, tol: float = 1e-6,
                             cfg: PrecisionConfig = DEFAULT_PRECISION,
                             raise_on_violation: bool = True) -> CorrespondenceReport:
    """Match sign changes of m along real E with Dirichlet and Neumann spectra.

    m is scanned directly; each sign change is bisected and classified as a
    pole when |m| is large at the refined bracket and as a zero otherwise.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    dirichlet = eigenvalues_general_alpha(MorseProblem(prob.k, prob.u0, 0.0), n, cfg=cfg)
    neumann = eigenvalues_general_alpha(MorseProblem(prob.k, prob.u0, math.pi / 2), n, cfg=cfg)
    lower = -prob.k * prob.k - 1.0 if prob.k < 0 else -1.0
    lower = min(lower, neumann[0] - 1.0)
    upper = max(dirichlet[-1], neumann[-1]) * 1.02 + 0.5
    scanner = SignScanner(_m_real_scaled(prob, cfg))
    brackets, _ = scanner.guarded(_energy_grid(lower, upper))
    poles, zeros, kinds = [], [], []
    for a, b in brackets:
        lo, hi = scanner.bisect(a, b, 1e-10 * max(1.0, abs(b)))
        mid = 0.5 * (lo + hi)
        size = max(abs(float(scanner.value(lo))), abs(float(scanner.value(hi))))
        if size > 1.0:
            poles.append(mid)
            kinds.append("p")
        else:
            zeros.append(mid)
            kinds.append("z")

    def matches(targets, found):
        return sum(1 for e in targets if any(abs(e - f) <= tol * max(1.0, abs(e)) for f in found))

    pm, zm = matches(dirichlet, poles), matches(neumann, zeros)
    interlaced = all(x != y for x, y in zip(kinds, kinds[1:]))
    report = CorrespondenceReport(tuple(poles), tuple(zeros), tuple(dirichlet), tuple(neumann), pm, zm,
                                  interlaced)
    if raise_on_violation and not report.ok:
        missing = [e for e in dirichlet if not any(abs(e - f) <= tol * max(1.0, abs(e)) for f in poles)]
        missing += [e for e in neumann if not any(abs(e - f) <= tol * max(1.0, abs(e)) for f in zeros)]
        raise CorrespondenceViolation("m-function poles/zeros disagree with the spectrum",
                                      missing[0] if missing else None)
    return report
