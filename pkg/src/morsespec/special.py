"""Gamma, confluent hypergeometric and Whittaker functions.

Everything is evaluated in a private mpmath context at the precision carried
by a :class:`~morsespec.scaled.PrecisionConfig` and returned as a
:class:`~morsespec.scaled.ScaledValue`.  Only the principal branch with real
``kappa`` and positive real argument ``x`` is supported; ``mu`` may be any
complex number.

The Whittaker W function is assembled from the regularized M function through
the connection formula

    W(k, mu, x) = -pi / sin(2 pi mu) * [ MM(k, mu, x) / Gamma(1/2 - k - mu)
                                        - MM(k, -mu, x) / Gamma(1/2 - k + mu) ]

where ``MM = M / Gamma(1 + 2 mu)``.  This is the usual two-term formula with
``Gamma(-2mu) Gamma(1+2mu) = -pi / sin(2 pi mu)`` folded in, so the M poles at
negative half-integers never appear.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, PoleError, PrecisionLossError
from .scaled import DEFAULT_PRECISION, PrecisionConfig, ScaledValue, mp_context

__all__ = [
    "WhittakerParams",
    "gamma_complex",
    "rgamma_complex",
    "hyp1f1_regularized",
    "whittaker_m",
    "whittaker_m_regularized",
    "whittaker_w",
    "whittaker_w_prime",
    "whittaker_w_asymptotic",
    "k_bessel",
    "k_bessel_asymptotic_imag",
]


@dataclass(frozen=True)
class WhittakerParams:
    kappa: float
    mu: complex
    x: float

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError(f"x must be positive on the principal branch, got {self.x}")
        if not (math.isfinite(self.kappa) and math.isfinite(abs(complex(self.mu)))):
            raise DomainError("kappa and mu must be finite")


def _check(kappa, mu, x) -> WhittakerParams:
    if isinstance(kappa, complex):
        if kappa.imag != 0:
            raise DomainError("only real kappa is supported")
        kappa = kappa.real
    return WhittakerParams(float(kappa), complex(mu), float(x))


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def _as_number(ctx, s):
    s = complex(s) if not hasattr(s, "_mpf_") and not hasattr(s, "_mpc_") else s
    if isinstance(s, complex):
        return ctx.mpf(s.real) if s.imag == 0 else ctx.mpc(s)
    return ctx.convert(s)


def _stirling_threshold(ctx) -> float:
    # least Stirling term near |s| = R is about exp(-2 pi R)
    return max(10.0, 0.37 * (ctx.dps + 6))


def _loggamma_stirling(ctx, s):
    """log Gamma(s) for Re(s) above the Stirling threshold."""
    out = (s - ctx.mpf(0.5)) * ctx.log(s) - s + ctx.log(2 * ctx.pi) / 2
    eps = ctx.eps * abs(out) if out != 0 else ctx.eps
    inv = 1 / s
    inv2 = inv * inv
    power = inv
    for n in range(1, 200):
        term = ctx.bernoulli(2 * n) / (2 * n * (2 * n - 1)) * power
        out += term
        if abs(term) < eps:
            break
        power *= inv2
    return out


def _gamma(ctx, s):
    if ctx.re(s) < 0.5:
        # reflection; caller guarantees s is not a pole
        return ctx.pi / (ctx.sinpi(s) * _gamma(ctx, 1 - s))
    threshold = _stirling_threshold(ctx)
    shift = max(0, math.ceil(threshold - float(ctx.re(s))))
    prod = ctx.one
    for j in range(shift):
        prod *= s + j
    return ctx.exp(_loggamma_stirling(ctx, s + shift)) / prod


def _nonpositive_integer(ctx, s, tol):
    re, im = float(ctx.re(s)), float(ctx.im(s))
    if re > 0.5:
        return None
    n = round(re)
    if n <= 0 and abs(re - n) <= tol and abs(im) <= tol:
        return n
    return None


def _rgamma(ctx, s):
    """1/Gamma(s), entire; exactly 0 at the poles of Gamma."""
    if ctx.re(s) < 0.5:
        if ctx.im(s) == 0 and ctx.re(s) == int(ctx.re(s)):
            return ctx.zero
        return ctx.sinpi(s) * _gamma(ctx, 1 - s) / ctx.pi
    return 1 / _gamma(ctx, s)


def gamma_complex(s, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """Gamma(s) for complex ``s`` by reflection, upward recurrence and Stirling."""
    ctx = mp_context(cfg.working_digits)
    s = _as_number(ctx, s)
    if _nonpositive_integer(ctx, s, 10.0 ** (-cfg.working_digits / 2)) is not None:
        raise PoleError(f"Gamma has a pole at {s}")
    val = _gamma(ctx, s)
    return ScaledValue.from_mp(val, real=ctx.im(s) == 0)


def rgamma_complex(s, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    ctx = mp_context(cfg.working_digits)
    s = _as_number(ctx, s)
    return ScaledValue.from_mp(_rgamma(ctx, s), real=ctx.im(s) == 0)


# ---------------------------------------------------------------------------
# 1F1
# ---------------------------------------------------------------------------

def _hyp1f1_reg(ctx, a, b, z, cfg):
    """Regularized Kummer series; returns (sum, largest |term|)."""
    tol = cfg.tail
    # exact nonpositive integer b: the first 1-b terms vanish
    start = 0
    if ctx.im(b) == 0 and ctx.re(b) <= 0 and ctx.re(b) == int(ctx.re(b)):
        start = 1 - int(ctx.re(b))
        term = ctx.rf(a, start) * z ** start / ctx.factorial(start)
    else:
        term = _rgamma(ctx, b)
    total = term
    biggest = abs(term)
    small_run = 0
    j = start
    for _ in range(cfg.series_max_terms):
        term = term * (a + j) * z / ((j + 1) * (b + j))
        j += 1
        total += term
        mag = abs(term)
        if mag > biggest:
            biggest = mag
        if mag <= tol * abs(total) or (term == 0 and total == 0):
            small_run += 1
            if small_run == 2:
                return total, biggest
        else:
            small_run = 0
    raise ConvergenceError(
        f"1F1 series did not converge in {cfg.series_max_terms} terms (a={a}, b={b}, z={z})"
    )


def hyp1f1_regularized(alpha, beta, z, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """1F1(alpha; beta; z) / Gamma(beta), entire in all three arguments."""
    ctx = mp_context(cfg.working_digits)
    a, b, zz = (_as_number(ctx, v) for v in (alpha, beta, z))
    val, _ = _hyp1f1_reg(ctx, a, b, zz, cfg)
    real = all(ctx.im(v) == 0 for v in (a, b, zz))
    return ScaledValue.from_mp(val, real=real)


# ---------------------------------------------------------------------------
# Whittaker M
# ---------------------------------------------------------------------------

def _mreg(ctx, kappa, mu, x, cfg):
    """Regularized M(kappa, mu, x) / Gamma(1 + 2 mu); returns (value, largest term)."""
    half = ctx.mpf(0.5)
    series, biggest = _hyp1f1_reg(ctx, half - kappa + mu, 1 + 2 * mu, x, cfg)
    pref = ctx.exp(-x / 2) * ctx.power(x, half + mu)
    return pref * series, abs(pref) * biggest


def _mu_number(ctx, mu):
    mu = complex(mu)
    return ctx.mpf(mu.real) if mu.imag == 0 else ctx.mpc(mu)


def whittaker_m_regularized(kappa, mu, x, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """Buchholz-normalized M(kappa, mu, x) / Gamma(1 + 2 mu); entire in mu."""
    p = _check(kappa, mu, x)
    ctx = mp_context(cfg.working_digits)
    val, _ = _mreg(ctx, ctx.mpf(p.kappa), _mu_number(ctx, p.mu), ctx.mpf(p.x), cfg)
    return ScaledValue.from_mp(val, real=p.mu.imag == 0)


def whittaker_m(kappa, mu, x, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """Principal-branch M(kappa, mu, x) = exp(-x/2) x^(1/2+mu) 1F1(1/2-kappa+mu; 1+2mu; x)."""
    p = _check(kappa, mu, x)
    ctx = mp_context(cfg.working_digits)
    m = _mu_number(ctx, p.mu)
    if _nonpositive_integer(ctx, 1 + 2 * m, 10.0 ** (-cfg.working_digits / 2)) is not None:
        raise PoleError(f"M has a pole at 2*mu = {2 * p.mu}; use whittaker_m_regularized")
    val, _ = _mreg(ctx, ctx.mpf(p.kappa), m, ctx.mpf(p.x), cfg)
    val *= _gamma(ctx, 1 + 2 * m)
    return ScaledValue.from_mp(val, real=p.mu.imag == 0)


# ---------------------------------------------------------------------------
# Whittaker W
# ---------------------------------------------------------------------------

def _w_direct(ctx, kappa, mu, x, cfg, use_symmetry):
    """Connection formula at a mu with 2*mu away from the integers.

    Returns (value, digits lost to cancellation, certified real).
    """
    half = ctx.mpf(0.5)
    coef = -ctx.pi / ctx.sinpi(2 * mu)
    m1, big1 = _mreg(ctx, kappa, mu, x, cfg)
    r1 = _rgamma(ctx, half - kappa - mu)
    t1 = coef * m1 * r1
    on_imag = ctx.re(mu) == 0
    on_real = ctx.im(mu) == 0
    if use_symmetry and on_imag:
        # the two terms are complex conjugates of each other
        val = 2 * ctx.re(t1)
        scale = 2 * abs(coef * r1) * big1
        return val, _lost(ctx, scale, val), True
    m2, big2 = _mreg(ctx, kappa, -mu, x, cfg)
    r2 = _rgamma(ctx, half - kappa + mu)
    t2 = -coef * m2 * r2
    val = t1 + t2
    scale = max(abs(coef * r1) * big1, abs(coef * r2) * big2)
    certified = use_symmetry and on_real
    if certified:
        val = ctx.re(val)
    return val, _lost(ctx, scale, val), certified


def _lost(ctx, scale, val):
    if scale == 0:
        return 0.0
    if val == 0:
        return math.inf
    return max(0.0, float(ctx.log10(scale / abs(val))))


def _w_mp(ctx, kappa, mu, x, cfg, use_symmetry=True):
    """W(kappa, mu, x) as an mpmath number; returns (value, certified real)."""
    budget = cfg.working_digits - 6
    two_mu = 2 * mu
    n = int(ctx.nint(ctx.re(two_mu)))
    near = abs(two_mu - n) < cfg.halfint_offset
    if not near:
        val, lost, real = _w_direct(ctx, kappa, mu, x, cfg, use_symmetry)
        if lost > budget:
            raise PrecisionLossError(
                f"W({kappa}, {mu}, {x}) lost {lost:.1f} of {cfg.working_digits} digits", lost
            )
        return val, real
    # 2*mu at an integer: average W(mu +- eps) and Richardson-extrapolate the
    # even O(eps^2) error away using eps and eps/2.
    eps = ctx.mpf(cfg.halfint_offset)
    averages = []
    for step in (eps, eps / 2):
        parts = []
        for shifted in (mu + step, mu - step):
            val, lost, _ = _w_direct(ctx, kappa, shifted, x, cfg, use_symmetry)
            if lost > budget:
                raise PrecisionLossError(
                    f"W({kappa}, {shifted}, {x}) lost {lost:.1f} of {cfg.working_digits} digits", lost
                )
            parts.append(val)
        averages.append((parts[0] + parts[1]) / 2)
    val = (4 * averages[1] - averages[0]) / 3
    real = use_symmetry and (ctx.re(mu) == 0 or ctx.im(mu) == 0)
    if real:
        val = ctx.re(val)
    return val, real


def whittaker_w(
    kappa, mu, x, cfg: PrecisionConfig = DEFAULT_PRECISION, *, use_symmetry: bool = True
) -> ScaledValue:
    """Principal-branch Whittaker W(kappa, mu, x) for real kappa and x > 0.

    For ``mu`` on the real or imaginary axis the result is computed on a path
    that is real by construction and flagged ``is_real_certified``; pass
    ``use_symmetry=False`` to force the generic complex evaluation instead.

    Raises
    ------
    PrecisionLossError
        If the connection formula cancels more than ``working_digits - 6``
        digits.
    """
    p = _check(kappa, mu, x)
    ctx = mp_context(cfg.working_digits)
    val, real = _w_mp(ctx, ctx.mpf(p.kappa), _mu_number(ctx, p.mu), ctx.mpf(p.x), cfg, use_symmetry)
    return ScaledValue.from_mp(val, real=real)


def whittaker_w_prime(kappa, mu, x, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """dW/dx from x W' = (x/2 - kappa) W(kappa) - W(kappa + 1)."""
    p = _check(kappa, mu, x)
    ctx = mp_context(cfg.working_digits)
    k = ctx.mpf(p.kappa)
    m = _mu_number(ctx, p.mu)
    xx = ctx.mpf(p.x)
    w0, real0 = _w_mp(ctx, k, m, xx, cfg)
    w1, real1 = _w_mp(ctx, k + 1, m, xx, cfg)
    val = ((xx / 2 - k) * w0 - w1) / xx
    return ScaledValue.from_mp(val, real=real0 and real1)


def whittaker_w_asymptotic(kappa, mu, x) -> ScaledValue:
    """Leading large-x form exp(-x/2) x^kappa (independent of mu)."""
    p = _check(kappa, mu, x)
    log10_val = (-p.x / 2 + p.kappa * math.log(p.x)) / math.log(10)
    scale = math.floor(log10_val)
    return ScaledValue(10.0 ** (log10_val - scale), scale, True)


def k_bessel(mu, w, cfg: PrecisionConfig = DEFAULT_PRECISION) -> ScaledValue:
    """Macdonald function K_mu(w) = sqrt(pi / 2w) W(0, mu, 2w) for w > 0."""
    if not w > 0:
        raise DomainError("k_bessel needs w > 0")
    ctx = mp_context(cfg.working_digits)
    ww = ctx.mpf(w)
    val, real = _w_mp(ctx, ctx.zero, _mu_number(ctx, mu), 2 * ww, cfg)
    return ScaledValue.from_mp(ctx.sqrt(ctx.pi / (2 * ww)) * val, real=real)


def k_bessel_asymptotic_imag(t: float, x: float) -> float:
    """Main term of K_{it}(x) for t > x > 0 (oscillatory region), unscaled.

    sqrt(2 pi) (t^2 - x^2)^(-1/4) exp(-pi t / 2) sin(t arccosh(t/x) - sqrt(t^2 - x^2) + pi/4)
    """
    if not t > x > 0:
        raise DomainError(f"need t > x > 0, got t={t}, x={x}")
    root = math.sqrt(t * t - x * x)
    amp = math.sqrt(2 * math.pi) * root ** -0.5 * math.exp(-math.pi * t / 2)
    return amp * math.sin(k_bessel_phase(t, x))


def k_bessel_phase(t: float, x: float) -> float:
    """Phase t arccosh(t/x) - sqrt(t^2 - x^2) + pi/4 of the oscillatory K_{it} asymptotics."""
    return t * math.acosh(t / x) - math.sqrt(t * t - x * x) + math.pi / 4
