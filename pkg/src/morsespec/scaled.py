"""Scaled numbers and precision settings shared by every module.

Whittaker values at the parameters of interest span magnitudes such as
``exp(-exp(u))`` and ``exp(-pi*t/2)`` that leave the double range quickly, so
public functions return a :class:`ScaledValue` (a double significand and a
decimal exponent) instead of a bare float.
"""
from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field, replace

import mpmath

__all__ = ["ScaledValue", "PrecisionConfig", "DEFAULT_PRECISION", "PRECISION_LADDER", "mp_context"]

# Decimal digits used by the zero scans: default first, escalation second.
PRECISION_LADDER = (34, 50)

_MAX_EXP_GAP = 340


def _normalize(sig, scale):
    if sig == 0:
        return sig * 0, 0
    a = abs(sig)
    shift = math.floor(math.log10(a))
    if shift:
        half = shift // 2
        sig = sig * 10.0 ** (-half) * 10.0 ** (half - shift)
        scale += shift
    # rounding can leave |sig| at exactly 10 or a hair below 1
    a = abs(sig)
    if a >= 10.0:
        sig, scale = sig / 10.0, scale + 1
    elif a < 1.0:
        sig, scale = sig * 10.0, scale - 1
    return sig, scale


@dataclass(frozen=True)
class ScaledValue:
    """``significand * 10**scale`` with ``1 <= |significand| < 10`` (or exactly 0).

    ``is_real_certified`` is set when a symmetry argument, not a rounding
    accident, guarantees that the represented value is real; the significand
    is then a float.
    """

    significand: complex | float
    scale: int = 0
    is_real_certified: bool = False

    def __post_init__(self):
        sig = self.significand
        if self.is_real_certified:
            sig = float(sig.real) if isinstance(sig, complex) else float(sig)
        if not (cmath.isfinite(sig) if isinstance(sig, complex) else math.isfinite(sig)):
            raise ValueError(f"non-finite significand {sig!r}")
        sig, scale = _normalize(sig, int(self.scale))
        object.__setattr__(self, "significand", sig)
        object.__setattr__(self, "scale", scale)

    # construction -----------------------------------------------------
    @classmethod
    def from_mp(cls, value, real: bool = False) -> "ScaledValue":
        """Build from an mpmath number of any precision (no overflow)."""
        if real and hasattr(value, "_mpc_"):
            value = value.real
        if value == 0:
            return cls(0.0 if real else 0j, 0, real)
        ctx = getattr(value, "context", mpmath.mp)
        scale = int(ctx.floor(ctx.log10(abs(value))))
        sig = value / ctx.mpf(10) ** scale
        if real or not hasattr(sig, "_mpc_"):
            return cls(float(sig), scale, real)
        return cls(complex(sig), scale, False)

    @classmethod
    def from_number(cls, value, real: bool = False) -> "ScaledValue":
        if real:
            return cls(float(value.real if isinstance(value, complex) else value), 0, True)
        return cls(complex(value), 0, False)

    # inspection -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.significand == 0

    @property
    def real(self) -> "ScaledValue":
        return ScaledValue(float(self.significand.real), self.scale, True)

    @property
    def imag(self) -> "ScaledValue":
        return ScaledValue(float(getattr(self.significand, "imag", 0.0)), self.scale, True)

    def sign(self) -> int:
        """Sign of the real part."""
        r = self.significand.real
        return (r > 0) - (r < 0)

    def log10_abs(self) -> float:
        if self.is_zero:
            return -math.inf
        return math.log10(abs(self.significand)) + self.scale

    def abs(self) -> "ScaledValue":
        return ScaledValue(abs(self.significand), self.scale, True)

    def conjugate(self) -> "ScaledValue":
        if isinstance(self.significand, float):
            return self
        return ScaledValue(self.significand.conjugate(), self.scale, self.is_real_certified)

    def to_mp(self, ctx=None):
        ctx = ctx or mpmath.mp
        sig = self.significand
        base = ctx.mpf(10) ** self.scale
        if isinstance(sig, float):
            return ctx.mpf(sig) * base
        return ctx.mpc(sig) * base

    def __complex__(self):
        return complex(self.significand) * self._pow10()

    def __float__(self):
        sig = self.significand
        if isinstance(sig, complex):
            if sig.imag != 0:
                raise TypeError("ScaledValue has a nonzero imaginary part")
            sig = sig.real
        return sig * self._pow10()

    def _pow10(self) -> float:
        if self.scale > 308:
            return math.inf
        if self.scale < -340:
            return 0.0
        return 10.0 ** self.scale

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ScaledValue):
            return other
        if isinstance(other, (int, float)):
            return ScaledValue(float(other), 0, True)
        if isinstance(other, complex):
            return ScaledValue(other, 0, False)
        return NotImplemented

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        real = self.is_real_certified and other.is_real_certified
        return ScaledValue(self.significand * other.significand, self.scale + other.scale, real)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("division by a zero ScaledValue")
        real = self.is_real_certified and other.is_real_certified
        return ScaledValue(self.significand / other.significand, self.scale - other.scale, real)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return ScaledValue(-self.significand, self.scale, self.is_real_certified)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        real = self.is_real_certified and other.is_real_certified
        if self.is_zero:
            return ScaledValue(other.significand, other.scale, real)
        if other.is_zero:
            return ScaledValue(self.significand, self.scale, real)
        big, small = (self, other) if self.scale >= other.scale else (other, self)
        gap = big.scale - small.scale
        if gap > _MAX_EXP_GAP:
            return ScaledValue(big.significand, big.scale, real)
        return ScaledValue(big.significand + small.significand * 10.0 ** (-gap), big.scale, real)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    # serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        sig = complex(self.significand)
        return {"significand_re": sig.real, "significand_im": sig.imag, "scale": self.scale}

    def format(self, digits: int = 16) -> str:
        sig = self.significand
        if isinstance(sig, float):
            return f"{sig:.{digits - 1}f}e{self.scale:+d}"
        sign = "+" if sig.imag >= 0 else "-"
        return f"({sig.real:.{digits - 1}f}{sign}{abs(sig.imag):.{digits - 1}f}j)e{self.scale:+d}"

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision and series cut-offs.

    ``series_tail_rel`` defaults to ``10**-(working_digits + 2)``.
    ``halfint_offset`` is the step used to sidestep the poles of the
    connection coefficients when ``2*mu`` is (nearly) an integer.
    """

    working_digits: int = 34
    series_tail_rel: float | None = None
    series_max_terms: int = 5000
    halfint_offset: float = 1e-6
    _tail: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self):
        if self.working_digits < 16:
            raise ValueError("working_digits must be >= 16")
        tail = self.series_tail_rel
        if tail is None:
            tail = 10.0 ** -(self.working_digits + 2)
        if not tail > 0:
            raise ValueError("series_tail_rel must be positive")
        if self.series_max_terms < 100:
            raise ValueError("series_max_terms must be >= 100")
        if not 0 < self.halfint_offset < 1e-3:
            raise ValueError("halfint_offset must lie in (0, 1e-3)")
        object.__setattr__(self, "_tail", tail)

    @property
    def tail(self) -> float:
        return self._tail

    def with_digits(self, digits: int) -> "PrecisionConfig":
        """Same settings at another precision (tail threshold re-derived)."""
        return replace(self, working_digits=digits, series_tail_rel=None)


DEFAULT_PRECISION = PrecisionConfig()

_local = threading.local()


def mp_context(digits: int):
    """Thread-local mpmath context at ``digits`` significant digits.

    mpmath's global context is shared state; a private context per thread and
    precision keeps every evaluation a pure function of its arguments.
    """
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(digits)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = digits
        cache[digits] = ctx
    return ctx
