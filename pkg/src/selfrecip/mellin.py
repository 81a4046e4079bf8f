"""Mellin transform on the critical line Re zeta = 1/2.

With ``u = ln t`` and ``g(u) = f(e^u) e^{u/2}``,

    Phi(1/2 + i tau) = int g(u) exp(i tau u) du,

an ordinary Fourier integral.  On a log grid with N nodes and step h the
natural tau-grid has step ``2 pi / (N h)`` and N nodes centred on 0, which
makes :func:`mellin_forward` and :func:`mellin_inverse` exact discrete
inverses of each other (one FFT each).
"""

from dataclasses import dataclass

import numpy as np

from .cstransform import DEFAULT_CONFIG, TailError, transform
from .grid import CriticalLineFunction, GridError, GridFunction, l2_norm
from .special import FAMILIES, log_gamma, phase_values

__all__ = [
    "EdgeDecayError",
    "MellinPair",
    "mellin_forward",
    "mellin_inverse",
    "mellin_pair",
    "parseval_residual",
    "titchmarsh_multiplier",
    "verify_multiplier_relation",
    "symmetry_defect",
]

EDGE_TOL = 1e-3


class EdgeDecayError(TailError):
    """Samples have not decayed at the edge of their grid."""


@dataclass(frozen=True)
class MellinPair:
    source: GridFunction
    image: CriticalLineFunction


def _check_edges(vals, tol, what, scale=0.0):
    mag = np.abs(vals)
    peak = max(mag.max(), scale)
    if peak > 0 and max(mag[0], mag[-1]) > tol * peak:
        raise EdgeDecayError(f"{what} has not decayed at the grid edge "
                             f"(edge/peak = {max(mag[0], mag[-1]) / peak:.2e})")


def mellin_forward(f, tail_tol=EDGE_TOL):
    """Critical-line Mellin transform of ``f`` on the dual tau-grid.

    Raises
    ------
    EdgeDecayError
        If ``f(t) sqrt(t)`` is not small at either end of the grid.
    """
    grid = f.grid
    g = f.values * np.sqrt(grid.t)
    _check_edges(g, tail_tol, "f(t) sqrt(t)")
    n = grid.n
    alt = np.where(np.arange(n) % 2, -1.0, 1.0)
    out = CriticalLineFunction(grid.tau_step, np.zeros(n))
    tau = out.tau
    vals = grid.h * n * np.fft.ifft(g * alt) * np.exp(1j * tau * grid.u_min)
    return CriticalLineFunction(grid.tau_step, vals)


def mellin_inverse(phi, grid, tail_tol=EDGE_TOL, scale=0.0):
    """``f(t) = (1/2pi) int Phi(1/2 + i tau) t^(-1/2 - i tau) d tau`` on ``grid``.

    When ``grid`` is dual to the tau-grid of ``phi`` (same N, matching
    step) one FFT is used; otherwise the sum is evaluated directly.
    ``scale`` sets a floor for the peak the edge values are compared
    with, so that images which are pure rounding noise pass.
    """
    _check_edges(phi.values, tail_tol, "Phi", scale)
    n = grid.n
    tau = phi.tau
    if n == phi.m and np.isclose(grid.tau_step, phi.tau_step, rtol=1e-12, atol=0):
        alt = np.where(np.arange(n) % 2, -1.0, 1.0)
        g = alt * np.fft.fft(phi.values * np.exp(-1j * tau * grid.u_min)) / (n * grid.h)
    else:
        g = np.empty(n, dtype=complex)
        u = grid.u
        for lo in range(0, n, 256):
            ker = np.exp(-1j * np.outer(u[lo:lo + 256], tau))
            g[lo:lo + 256] = ker @ phi.values * phi.tau_step / (2 * np.pi)
    return GridFunction(grid, g / np.sqrt(grid.t))


def mellin_pair(f, tail_tol=EDGE_TOL):
    return MellinPair(f, mellin_forward(f, tail_tol))


def parseval_residual(pair):
    """``| ||f||^2 - (1/2pi) int |Phi|^2 | / ||f||^2``."""
    lhs = l2_norm(pair.source) ** 2
    if lhs == 0:
        return 0.0
    return abs(lhs - pair.image.sq_norm()) / lhs


def titchmarsh_multiplier(family, zeta):
    """Mellin multiplier of the cosine or sine transform at ``zeta`` on the critical line.

    Cosine: ``2^(zeta-1/2) Gamma(zeta/2) / Gamma(1/2 - zeta/2)``;
    sine: ``2^(zeta-1/2) Gamma(1/2 + zeta/2) / Gamma(1 - zeta/2)``.
    Accepts scalars or arrays.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    z = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(z.real - 0.5) > 1e-12):
        raise ValueError("zeta must lie on the critical line Re zeta = 1/2")
    if family == "cosine":
        lg = log_gamma(z / 2) - log_gamma(0.5 - z / 2)
    else:
        lg = log_gamma(0.5 + z / 2) - log_gamma(1 - z / 2)
    out = np.exp((z - 0.5) * np.log(2.0) + lg)
    return out[()] if out.ndim == 0 else out


def verify_multiplier_relation(x, family, cfg=None):
    """Max relative gap between ``Phi_{Tx}(1/2 + i tau)`` and ``M(tau) Phi_x(1/2 - i tau)``.

    Measured over the central half of the tau-grid and normalised by the
    largest right-hand side there.
    """
    cfg = cfg or DEFAULT_CONFIG
    phi_x = mellin_forward(x)
    phi_y = mellin_forward(transform(x, family, cfg))
    rhs = titchmarsh_multiplier(family, 0.5 + 1j * phi_x.tau) * phi_x.reflected()
    m = phi_x.m
    mid = slice(m // 4, 3 * m // 4)
    scale = np.abs(rhs[mid]).max()
    if scale == 0:
        return 0.0
    return float(np.abs(phi_y.values[mid] - rhs[mid]).max() / scale)


def symmetry_defect(x, family, sign):
    """``max |Phi(1/2 - i tau) p(tau) -+ Phi(1/2 + i tau) p(-tau)| / max |Phi|``.

    ``p`` is the phase factor of ``family``.  Zero exactly when the Mellin
    image has the symmetry of the ``sign`` eigenspace.
    """
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    phi = mellin_forward(x)
    p = phase_values(family, phi.tau)
    s = 1.0 if sign == "plus" else -1.0
    diff = phi.reflected() * p - s * phi.values * np.conj(p)
    peak = np.abs(phi.values).max()
    # the first node has no mirror
    return float(np.abs(diff[1:]).max() / peak) if peak else 0.0


def check_grid_pair(phi, grid):
    """Raise unless ``grid`` is the FFT dual of the tau-grid of ``phi``."""
    if grid.n != phi.m or not np.isclose(grid.tau_step, phi.tau_step, rtol=1e-12, atol=0):
        raise GridError("radial grid is not dual to the tau-grid")
