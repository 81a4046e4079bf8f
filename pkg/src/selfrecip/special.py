"""Complex Gamma machinery, kappa constants and phase factors.

Everything here is a pure function of its arguments.  Scalars and numpy
arrays are both accepted where it makes sense; scalar input gives scalar
output.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

__all__ = [
    "PoleError",
    "StripError",
    "StripPoint",
    "KappaPair",
    "PhaseFactor",
    "STRIP_MARGIN",
    "log_gamma",
    "gamma",
    "verify_gamma_identities",
    "kappa",
    "phase",
    "phase_values",
    "closed_form_power_integral",
]

STRIP_MARGIN = 1e-9
FAMILIES = ("cosine", "sine")

_SQRT_PI = np.sqrt(np.pi)


class PoleError(ValueError):
    """Gamma evaluated at a nonpositive integer."""


class StripError(ValueError):
    """Parameter outside the open strip 0 < Re a < 1 (with margin)."""


def _check_family(family):
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")


@dataclass(frozen=True)
class StripPoint:
    """A complex number ``a`` with ``0 < Re a < 1``.

    Points within ``STRIP_MARGIN`` of either boundary are rejected.
    """

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise StripError(f"non-finite strip point {v!r}")
        if not (STRIP_MARGIN < v.real < 1.0 - STRIP_MARGIN):
            raise StripError(f"Re a = {v.real!r} is outside ({STRIP_MARGIN}, {1 - STRIP_MARGIN})")
        object.__setattr__(self, "value", v)

    def reflect(self):
        """The point ``1 - a``."""
        return StripPoint(1.0 - self.value)

    def __complex__(self):
        return self.value


def _as_strip(a):
    return a if isinstance(a, StripPoint) else StripPoint(a)


@dataclass(frozen=True)
class KappaPair:
    kappa_a: complex
    kappa_one_minus_a: complex
    sqrt_kappa_a: complex
    sqrt_kappa_one_minus_a: complex


@dataclass(frozen=True)
class PhaseFactor:
    tau: float
    value: complex


def _is_pole(z):
    z = np.asarray(z, dtype=complex)
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Raises
    ------
    PoleError
        If any ``z`` is a nonpositive integer.
    """
    zz = np.asarray(z, dtype=complex)
    if np.any(_is_pole(zz)):
        raise PoleError(f"Gamma has a pole at {z!r}")
    out = _sp.loggamma(zz)
    return out[()] if out.ndim == 0 else out


def gamma(z):
    return np.exp(log_gamma(z))


def verify_gamma_identities(z):
    """Relative residuals of the standard Gamma identities at ``z``.

    Returns a dict with keys ``recurrence``, ``reflection``,
    ``duplication`` (the residual triple) and ``cosine_ratio``,
    ``sine_ratio`` for the two Gamma-ratio forms of the cosine and sine
    power integrals.  Each residual is ``|lhs - rhs| / |lhs|``.
    """
    z = complex(z)
    g = gamma(z)

    lhs = gamma(z + 1)
    r1 = abs(lhs - z * g) / abs(lhs)

    lhs = g * gamma(1 - z)
    r2 = abs(lhs - np.pi / np.sin(np.pi * z)) / abs(lhs)

    lhs = g * gamma(z + 0.5)
    r3 = abs(lhs - 2 * _SQRT_PI * 2.0 ** (-2 * z) * gamma(2 * z)) / abs(lhs)

    root = np.sqrt(2 / np.pi)
    pre = 2.0 ** (z - 0.5)
    lhs = root * np.cos(np.pi * z / 2) * g
    rhs = pre * np.exp(log_gamma(z / 2) - log_gamma(0.5 - z / 2))
    r4 = abs(lhs - rhs) / abs(lhs)

    lhs = root * np.sin(np.pi * z / 2) * g
    rhs = pre * np.exp(log_gamma(0.5 + z / 2) - log_gamma(1 - z / 2))
    r5 = abs(lhs - rhs) / abs(lhs)

    return {
        "recurrence": float(r1),
        "reflection": float(r2),
        "duplication": float(r3),
        "cosine_ratio": float(r4),
        "sine_ratio": float(r5),
    }


def _log_kappa_one_minus_a(family, a):
    # log kappa(1 - a); kappa(a) is its reciprocal
    if family == "cosine":
        return (a - 0.5) * np.log(2.0) + log_gamma(a / 2) - log_gamma(0.5 - a / 2)
    return (a - 0.5) * np.log(2.0) + log_gamma(0.5 + a / 2) - log_gamma(1 - a / 2)


def kappa(family, a):
    """The kappa constants of the cosine or sine kernel at strip point ``a``.

    Square roots follow a fixed branch rule: ``sqrt_kappa_one_minus_a``
    is the principal root of ``kappa(1-a)`` and ``sqrt_kappa_a`` is its
    reciprocal, so the two roots multiply to exactly one.
    """
    _check_family(family)
    a = _as_strip(a).value
    lk = _log_kappa_one_minus_a(family, a)
    k1ma = np.exp(lk)
    ka = np.exp(-lk)
    s1ma = np.sqrt(k1ma)
    return KappaPair(
        kappa_a=complex(ka),
        kappa_one_minus_a=complex(k1ma),
        sqrt_kappa_a=complex(1.0 / s1ma),
        sqrt_kappa_one_minus_a=complex(s1ma),
    )


def phase_values(family, tau):
    """Vectorised phase factor c(tau) or s(tau) (unit modulus)."""
    _check_family(family)
    tau = np.asarray(tau, dtype=float)
    shift = 0.25 if family == "cosine" else 0.75
    arg = log_gamma(shift + 0.5j * tau).imag + 0.5 * tau * np.log(2.0)
    out = np.exp(1j * arg)
    return out[()] if np.ndim(out) == 0 else out


def phase(family, tau):
    """Phase factor as a :class:`PhaseFactor` record."""
    tau = float(tau)
    if not np.isfinite(tau):
        raise ValueError("tau must be finite")
    return PhaseFactor(tau=tau, value=complex(phase_values(family, tau)))


def closed_form_power_integral(kind, zeta):
    """Closed form of the regularized integral of cos(s) or sin(s) times s**(zeta-1).

    ``cos(pi zeta / 2) Gamma(zeta)`` for the cosine kernel and
    ``sin(pi zeta / 2) Gamma(zeta)`` for the sine kernel.
    """
    _check_family(kind)
    z = _as_strip(zeta).value
    trig = np.cos if kind == "cosine" else np.sin
    return complex(trig(np.pi * z / 2) * gamma(z))
