"""Structure function built from Whittaker functions with kappa = +-1/2.

For a fixed position u (x = exp(u))

    E0(u, z) = exp((x - u)/2) W(1/2, iz, x) - i z exp(-(x + u)/2) W(-1/2, iz, x)
             = A(z) - i B(z),

with A and B real for real z.  E0 satisfies |E0(z)| > |E0(conj z)| in the
upper half-plane, the real zeros of A and B interlace, and B/A maps the upper
half-plane into itself.  The zeros of A in z are the square roots of the
Dirichlet eigenvalues of the Morse problem with k = -1/2 on [u, oo).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from ._scan import SignScanner
from .errors import DomainError, HBViolation, InterlacingViolation, PoleError
from .scaled import DEFAULT_PRECISION, PrecisionConfig, ScaledValue
from .spectrum import _escalating, default_scan_step
from .special import whittaker_w

__all__ = [
    "StructureFunctionSample",
    "HBReport",
    "InterlacingReport",
    "exp_scaled",
    "structure_e0",
    "structure_e0_sharp",
    "a_function",
    "b_function",
    "structure_sample",
    "hermite_biehler_check",
    "ab_zero_interlacing",
    "debranges_m",
    "debranges_m_forms",
    "comparison_table",
]

_LOG10_E = 1.0 / math.log(10.0)


def exp_scaled(y: float) -> ScaledValue:
    """exp(y) as a ScaledValue, without overflow for any finite y."""
    d = y * _LOG10_E
    scale = math.floor(d)
    return ScaledValue(10.0 ** (d - scale), scale, True)


def _mu(z):
    mu = 1j * complex(z)
    if mu.imag == 0:
        return mu.real
    if mu.real == 0:
        return complex(0.0, mu.imag)
    return mu


def _w(kappa, z, x, cfg):
    mu = _mu(z)
    return _escalating(lambda c: whittaker_w(kappa, mu, x, c), abs(mu), cfg)


def a_function(u: float, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """exp((x - u)/2) W(1/2, iz, x) with x = exp(u)."""
    x = math.exp(u)
    return _w(0.5, z, x, cfg) * exp_scaled((x - u) / 2)


def b_function(u: float, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """z exp(-(x + u)/2) W(-1/2, iz, x) with x = exp(u)."""
    x = math.exp(u)
    w = _w(-0.5, z, x, cfg) * exp_scaled(-(x + u) / 2)
    zc = complex(z)
    return w * (zc.real if zc.imag == 0 else zc)


def structure_e0(u: float, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """E0(u, z) = A(z) - i B(z) evaluated directly from the Whittaker factors."""
    return a_function(u, z, cfg) - b_function(u, z, cfg) * 1j


def structure_e0_sharp(u: float, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """E0#(z) = conj(E0(conj z))."""
    return structure_e0(u, complex(z).conjugate(), cfg).conjugate()


@dataclass(frozen=True)
class StructureFunctionSample:
    u: float
    z: complex
    E_value: complex
    A_value: complex
    B_value: complex


def structure_sample(u: float, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> StructureFunctionSample:
    """E0 together with A = (E + E#)/2 and B = i (E - E#)/2 derived from it."""
    e = structure_e0(u, z, cfg)
    es = structure_e0_sharp(u, z, cfg)
    a = (e + es) * 0.5
    b = (e - es) * 0.5j
    return StructureFunctionSample(u, complex(z), complex(e), complex(a), complex(b))


# ---------------------------------------------------------------------------
# Hermite-Biehler inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HBReport:
    u: float
    points: tuple
    margins: tuple  # log10 |E(z)| - log10 |E(conj z)|
    violations: tuple

    @property
    def min_margin(self) -> float:
        return min(self.margins)

    @property
    def median_margin(self) -> float:
        s = sorted(self.margins)
        return s[len(s) // 2]

    @property
    def max_margin(self) -> float:
        return max(self.margins)


def _sample_upper(rng, radius, im_lo, im_hi):
    y = rng.uniform(im_lo, im_hi)
    xr = math.sqrt(max(radius * radius - y * y, 0.0))
    return complex(rng.uniform(-xr, xr), y)


def hermite_biehler_check(u: float, samples: int = 500, *, seed: int = 42, radius: float = 30.0,
                          cfg: PrecisionConfig = DEFAULT_PRECISION,
                          raise_on_violation: bool = True) -> HBReport:
    """Compare |E0(z)| with |E0(conj z)| at random points of the upper half-plane.

    Points are drawn with Im z in [0.05, 10] and |z| <= ``radius``.  Margins are
    compared in log10 so that no magnitude leaves the floating range.
    """
    if samples < 100:
        raise DomainError("hermite_biehler_check needs at least 100 samples")
    rng = random.Random(seed)
    pts, margins, bad = [], [], []
    for _ in range(samples):
        z = _sample_upper(rng, radius, 0.05, 10.0)
        upper = structure_e0(u, z, cfg).log10_abs()
        lower = structure_e0(u, z.conjugate(), cfg).log10_abs()
        margin = upper - lower
        pts.append(z)
        margins.append(margin)
        if not margin > 0:
            bad.append(z)
    report = HBReport(u, tuple(pts), tuple(margins), tuple(bad))
    if bad and raise_on_violation:
        raise HBViolation(f"{len(bad)} points violate |E(z)| > |E(conj z)|", bad[0])
    return report


# ---------------------------------------------------------------------------
# zeros of A and B
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InterlacingReport:
    u: float
    t_max: float
    a_zeros: tuple
    b_zeros: tuple
    double_zeros: tuple
    interlaced: bool

    def merged(self) -> list[tuple[str, float]]:
        rows = [("A", t) for t in self.a_zeros] + [("B", t) for t in self.b_zeros]
        return sorted(rows, key=lambda r: r[1])


def _real_zeros(f, t_max):
    step = default_scan_step(t_max)
    n = max(2, math.ceil(t_max / step))
    first = min(1e-3, t_max / n / 4)
    points = [first] + [t_max * j / n for j in range(1, n + 1)]
    scanner = SignScanner(f)
    brackets, pts = scanner.guarded(points)
    zeros = []
    for a, b in brackets:
        lo, hi = scanner.bisect(a, b, 1e-10 * max(1.0, b))
        zeros.append(0.5 * (lo + hi))
    return zeros, scanner.touches(pts)


def _alternates(merged):
    kinds = [k for k, _ in merged]
    return all(a != b for a, b in zip(kinds, kinds[1:]))


def ab_zero_interlacing(u: float, t_max: float = 15.0, *, cfg: PrecisionConfig = DEFAULT_PRECISION,
                        raise_on_violation: bool = True) -> InterlacingReport:
    """Real zeros of A and B on [0, t_max] and whether they alternate.

    B has the explicit factor z and so vanishes at 0; away from 0 the B scan
    runs on B(z)/z, which carries the same sign changes.  Zeros are counted
    with multiplicity, so a touching zero enters twice.
    """
    if not t_max > 0:
        raise DomainError("t_max must be positive")
    x = math.exp(u)
    a_zeros, a_touch = _real_zeros(lambda t: a_function(u, t, cfg), t_max)
    b_zeros, b_touch = _real_zeros(lambda t: _w(-0.5, t, x, cfg), t_max)
    b_zeros = [0.0] + b_zeros
    a_all = sorted(a_zeros + a_touch * 2)
    b_all = sorted(b_zeros + b_touch * 2)
    merged = sorted([("A", t) for t in a_all] + [("B", t) for t in b_all], key=lambda r: r[1])
    ok = _alternates(merged) if not (a_touch or b_touch) else _alternates_with_multiplicity(merged)
    report = InterlacingReport(u, t_max, tuple(a_zeros), tuple(b_zeros),
                               tuple(a_touch + b_touch), ok)
    if raise_on_violation and not ok:
        raise InterlacingViolation(f"zeros of A and B do not interlace on [0, {t_max}]")
    return report


def _alternates_with_multiplicity(merged):
    # a double zero counts as two coincident zeros of the same function; between
    # them a zero of the other function may coincide, so compare running counts
    a = b = 0
    for kind, _ in merged:
        if kind == "A":
            a += 1
        else:
            b += 1
        if abs(a - b) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# de Branges m-function
# ---------------------------------------------------------------------------

def debranges_m(u: float, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """-B(z)/A(z)."""
    a = a_function(u, z, cfg)
    b = b_function(u, z, cfg)
    if a.is_zero or a.log10_abs() < b.log10_abs() - 8:
        raise PoleError(f"A vanishes at z = {z}")
    return -complex(b / a)


def debranges_m_forms(u: float, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> tuple[complex, complex]:
    """Two closed forms of -B/A that agree through the contiguous relation
    W(3/2) + (1 - x) W(1/2) + z^2 W(-1/2) = 0:

        -exp(-x) z W(-1/2)/W(1/2)   and   -(1/z) exp(-x) (x - 1 - W(3/2)/W(1/2)).
    """
    zc = complex(z)
    if zc == 0:
        raise DomainError("the second form is undefined at z = 0")
    x = math.exp(u)
    w_half = _w(0.5, z, x, cfg)
    w_minus = _w(-0.5, z, x, cfg)
    w_three = _w(1.5, z, x, cfg)
    damp = exp_scaled(-x)
    first = -complex(damp * w_minus / w_half * zc)
    inner = complex(w_three / w_half)
    second = -complex(damp * ((x - 1) - inner)) / zc
    return first, second


def comparison_table(u: float, zs, cfg: PrecisionConfig = DEFAULT_PRECISION) -> list[dict]:
    """debranges_m(u, z) next to the Schrodinger m-function for k = -1/2 on [u, oo).

    Tabulated for inspection only; the two are related through a Dirac-type
    transformation and are not expected to coincide.
    """
    from .mfunction import m_principal

    rows = []
    for z in zs:
        dm = debranges_m(u, z, cfg)
        mp = m_principal(-0.5, u, z, cfg)
        rows.append({"z": complex(z), "debranges_m": dm, "m_principal": mp})
    return rows
