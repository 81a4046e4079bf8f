"""Generalized eigenfunctions, critical-line eigenchains and the synthesis operators.

The chain functions are

    e+(t, tau) = (t^(-1/2 - i tau) p(tau) + t^(-1/2 + i tau) p(-tau)) / (2 sqrt(pi))
    e-(t, tau) = (t^(-1/2 - i tau) p(tau) - t^(-1/2 + i tau) p(-tau)) / (2 i sqrt(pi))

with ``p`` the phase factor of the cosine or sine family.  The synthesis
operator ``T phi = int_0^inf e(., tau) phi(tau) d tau`` is an isometry onto
the matching eigenspace.  On the Mellin side it multiplies ``phi(|tau|)``
by ``sqrt(pi) p(tau)`` (times ``-i sign(tau)`` for the minus sign), which is
how :func:`t_apply` evaluates it.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .cstransform import DEFAULT_CONFIG, SIGNS, transform
from .grid import CriticalLineFunction, GridFunction, l2_norm
from .mellin import mellin_forward, mellin_inverse
from .oscquad import product_weights
from .special import FAMILIES, StripPoint, kappa, phase_values

__all__ = [
    "HypothesisError",
    "PathDisagreementError",
    "ResidualGrowthError",
    "ChainCoordinate",
    "ChainDensity",
    "GeneralizedEigenfunction",
    "evaluate_E",
    "evaluate_e",
    "chain_values",
    "t_apply",
    "t_apply_pointwise",
    "path_gap",
    "t_adjoint",
    "projector_apply",
    "involution_projector",
    "check_growth_condition",
    "broad_sense_residual",
    "decompose",
    "Decomposition",
]

_SQRT_PI = np.sqrt(np.pi)
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
PATH_TOL = 1e-5


class HypothesisError(ValueError):
    """The density fails the exponential-weight integrability check."""


class PathDisagreementError(RuntimeError):
    """The two evaluation paths of the synthesis operator disagree."""


class ResidualGrowthError(RuntimeError):
    """Broad-sense residual did not decrease along the truncation schedule."""


def _check(family, sign):
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    if sign not in SIGNS:
        raise ValueError(f"sign must be one of {SIGNS}, got {sign!r}")


@dataclass(frozen=True)
class ChainCoordinate:
    family: str
    sign: str
    tau: float

    def __post_init__(self):
        _check(self.family, self.sign)
        if not (np.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau!r}")


@dataclass(frozen=True)
class ChainDensity:
    """Samples ``phi(k tau_step)``, ``k = 0 .. K-1``."""

    tau_step: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("a chain density needs at least two samples")
        if not self.tau_step > 0:
            raise ValueError("tau_step must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def tau(self):
        return self.tau_step * np.arange(self.values.size)

    @property
    def m(self):
        return self.values.size

    def sq_norm(self):
        """Trapezoid ``int_0^inf |phi|^2`` with half weight at 0."""
        w = np.abs(self.values) ** 2
        return float(self.tau_step * (w.sum() - 0.5 * w[0]))

    def l1_norm(self):
        w = np.abs(self.values)
        return float(self.tau_step * (w.sum() - 0.5 * w[0]))


@dataclass(frozen=True)
class GeneralizedEigenfunction:
    """``sqrt(kappa(1-a)) t^(-a) +- sqrt(kappa(a)) t^(a-1)``.

    At ``a = 1/2`` the plus function is ``2 t^(-1/2)`` and the minus
    function vanishes identically, leaving one eigen-direction.
    """

    family: str
    sign: str
    a: StripPoint

    def __post_init__(self):
        _check(self.family, self.sign)
        if not isinstance(self.a, StripPoint):
            object.__setattr__(self, "a", StripPoint(self.a))

    @property
    def coefficients(self):
        k = kappa(self.family, self.a)
        s = 1.0 if self.sign == "plus" else -1.0
        return k.sqrt_kappa_one_minus_a, s * k.sqrt_kappa_a

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise ValueError("t must be positive")
        a = self.a.value
        c1, c2 = self.coefficients
        lt = np.log(t)
        out = c1 * np.exp(-a * lt) + c2 * np.exp((a - 1) * lt)
        return out[()] if out.ndim == 0 else out


def evaluate_E(family, sign, a, t):
    """Generalized eigenfunction of the cosine or sine transform at ``t``."""
    return GeneralizedEigenfunction(family, sign, a)(t)


def chain_values(family, sign, t, tau):
    """Vectorised ``e(t, tau)`` (broadcasting ``t`` against ``tau``); ``tau = 0`` allowed.

    Real by construction; the imaginary part is checked and dropped.
    """
    _check(family, sign)
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    p = phase_values(family, tau)
    lt = np.log(t)
    up = np.exp((-0.5 - 1j * tau) * lt) * p
    dn = np.exp((-0.5 + 1j * tau) * lt) * np.conj(p)
    if sign == "plus":
        val = (up + dn) / (2 * _SQRT_PI)
    else:
        val = (up - dn) / (2j * _SQRT_PI)
    scale = np.maximum(np.abs(val), np.exp(-0.5 * lt) / _SQRT_PI)
    if np.any(np.abs(val.imag) > 1e-13 * scale):
        raise ArithmeticError("chain value has a non-negligible imaginary part")
    return val.real


def evaluate_e(coord, t):
    """``e(t, tau)`` for a :class:`ChainCoordinate`."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    out = chain_values(coord.family, coord.sign, t, coord.tau)
    return out[()] if np.ndim(out) == 0 else out


def _density_on(phi, tau_step, count):
    """Samples of ``phi`` at ``k tau_step``, ``k < count`` (zero past its range)."""
    tau = tau_step * np.arange(count)
    if callable(phi):
        return np.broadcast_to(np.asarray(phi(tau), dtype=complex), (count,)).copy()
    if isinstance(phi, ChainDensity):
        if phi.m >= count and np.isclose(phi.tau_step, tau_step, rtol=1e-12, atol=0):
            return phi.values[:count]
        if np.isclose(phi.tau_step, tau_step, rtol=1e-12, atol=0):
            out = np.zeros(count, dtype=complex)
            out[:phi.m] = phi.values
            return out
        spline = CubicSpline(phi.tau, phi.values)
        inside = tau <= phi.tau[-1]
        out = np.zeros(count, dtype=complex)
        out[inside] = spline(tau[inside])
        return out
    raise TypeError("phi must be callable or a ChainDensity")


def _mellin_image(family, sign, dens, n, tau_step):
    """Critical-line image ``sqrt(pi) p(tau) phi(|tau|)`` on the dual grid."""
    k = np.arange(n) - n // 2
    tau = k * tau_step
    mag = np.zeros(n, dtype=complex)
    idx = np.abs(k)
    ok = idx < dens.size
    mag[ok] = dens[idx[ok]]
    img = _SQRT_PI * phase_values(family, tau) * mag
    if sign == "minus":
        img = img * np.sign(tau) / 1j
    return CriticalLineFunction(tau_step, img)


def _check_integrable(dens, tau_step):
    l1 = tau_step * np.abs(dens).sum()
    if not np.isfinite(l1):
        raise HypothesisError("density is not absolutely integrable on its grid")


def t_apply(family, sign, phi, grid, check_paths=False, scale=0.0):
    """Synthesis ``x(t) = int_0^inf e(t, tau) phi(tau) d tau`` on ``grid``.

    ``phi`` is a callable or a :class:`ChainDensity`.  The result comes
    from the inverse Mellin transform of the critical-line image.  With
    ``check_paths`` the direct tau-quadrature is evaluated too and a
    :class:`PathDisagreementError` is raised when the two differ by more
    than ``1e-5`` in relative L2 norm.  ``scale`` is passed on to the
    edge check of :func:`mellin_inverse`.
    """
    _check(family, sign)
    n = grid.n
    dens = _density_on(phi, grid.tau_step, n // 2)
    _check_integrable(dens, grid.tau_step)
    x = mellin_inverse(_mellin_image(family, sign, dens, n, grid.tau_step), grid, scale=scale)
    if check_paths:
        gap = path_gap(family, sign, phi, grid, x)
        if gap > PATH_TOL:
            raise PathDisagreementError(f"quadrature and Mellin paths differ by {gap:.2e}")
    return x


def t_apply_pointwise(family, sign, phi, t, tau_max=None, panel=0.05):
    """Synthesis at arbitrary ``t`` by Gauss-Legendre panels in ``tau``.

    ``phi`` must be callable.  ``tau_max`` defaults to the point past which
    ``|phi|`` stays below ``1e-17`` of its peak on a coarse scan.
    """
    _check(family, sign)
    if not callable(phi):
        raise TypeError("pointwise synthesis needs a callable density")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if tau_max is None:
        tau_max = _support(phi)
    edges = np.linspace(0.0, tau_max, max(2, int(np.ceil(tau_max / panel)) + 1))
    mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    tau = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    w = (half[:, None] * _GL_W[None, :]).ravel() * np.asarray(phi(tau), dtype=complex)
    out = np.empty(t.size, dtype=complex)
    for lo in range(0, t.size, 256):
        out[lo:lo + 256] = chain_values(family, sign, t[lo:lo + 256, None], tau[None, :]) @ w
    return out


def _support(phi, cap=200.0):
    tau = np.linspace(0, cap, 8001)
    mag = np.abs(np.asarray(phi(tau), dtype=complex))
    live = np.nonzero(mag > 1e-17 * mag.max())[0]
    return float(tau[min(live[-1] + 1, tau.size - 1)]) if live.size else 1.0


def path_gap(family, sign, phi, grid, x=None):
    """Relative L2 gap between the Mellin path and the direct quadrature path.

    For a callable ``phi`` the quadrature path uses Gauss-Legendre panels;
    for samples it is the trapezoid rule with half weight at ``tau = 0``.
    """
    if x is None:
        x = t_apply(family, sign, phi, grid)
    if callable(phi):
        direct = t_apply_pointwise(family, sign, phi, grid.t)
    else:
        dens = _density_on(phi, grid.tau_step, grid.n // 2)
        tau = grid.tau_step * np.arange(dens.size)
        w = grid.tau_step * dens
        w[0] *= 0.5
        direct = np.empty(grid.n, dtype=complex)
        t = grid.t
        for lo in range(0, grid.n, 256):
            direct[lo:lo + 256] = chain_values(family, sign, t[lo:lo + 256, None], tau[None, :]) @ w
    ref = l2_norm(x)
    diff = l2_norm(GridFunction(grid, x.values - direct))
    return diff / ref if ref else diff


def t_adjoint(family, sign, x, tau=None):
    """``(T* x)(tau) = int_0^inf e(t, tau) x(t) dt``.

    With ``tau=None`` the result is a :class:`ChainDensity` on the
    nonnegative nodes of the dual tau-grid (FFT path).  With an array of
    ``tau`` values the Mellin sums are evaluated directly and an array
    is returned.
    """
    _check(family, sign)
    grid = x.grid
    if tau is None:
        phi = mellin_forward(x)
        n = phi.m
        pos = phi.values[n // 2:]             # tau = 0 .. (n/2 - 1) step
        neg = phi.reflected()[n // 2:]        # Phi(1/2 - i tau) on the same nodes
        taus = phi.tau[n // 2:]
        return ChainDensity(grid.tau_step, _adjoint_combine(family, sign, taus, pos, neg))
    tau = np.asarray(tau, dtype=float)
    g = x.values * np.sqrt(grid.t) * grid.h
    u = grid.u
    pos = np.exp(1j * np.outer(tau, u)) @ g
    neg = np.exp(-1j * np.outer(tau, u)) @ g
    return _adjoint_combine(family, sign, tau, pos, neg)


def _adjoint_combine(family, sign, tau, pos, neg):
    p = phase_values(family, tau)
    if sign == "plus":
        return (p * neg + np.conj(p) * pos) / (2 * _SQRT_PI)
    return (p * neg - np.conj(p) * pos) / (2j * _SQRT_PI)


def projector_apply(family, sign, x, cfg=None):
    """Orthogonal projection ``T T* x`` onto the ``sign`` eigenspace of ``family``."""
    return t_apply(family, sign, t_adjoint(family, sign, x), x.grid, scale=_image_scale(x))


def _image_scale(x):
    # T* is a contraction on the Mellin side, so the image peak of x bounds its parts
    return 0.5 * _SQRT_PI * float(np.abs(mellin_forward(x).values).max())


def involution_projector(family, sign, x, cfg=None):
    """``(x +- T x) / 2`` with ``T`` the cosine or sine transform."""
    s = 1.0 if sign == "plus" else -1.0
    return 0.5 * (x + s * transform(x, family, cfg or DEFAULT_CONFIG))


def check_growth_condition(phi, tau_caps=(10.0, 20.0, 40.0, 80.0), rtol=1e-6):
    """Reject densities whose ``exp(pi tau / 2)``-weighted L1 norm keeps growing.

    The weighted norm is evaluated on ``[0, cap]`` for each cap; if the
    last two values differ by more than ``rtol`` relative the condition is
    judged violated.  This can reject but never certify.  Returns the last
    weighted norm.
    """
    norms = []
    for cap in tau_caps:
        edges = np.linspace(0.0, cap, int(cap / 0.05) + 1)
        mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
        tau = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        w = (half[:, None] * _GL_W[None, :]).ravel()
        vals = np.abs(np.asarray(phi(tau), dtype=complex)) * np.exp(0.5 * np.pi * tau)
        norms.append(float(vals @ w))
    if not np.isfinite(norms[-1]) or abs(norms[-1] - norms[-2]) > rtol * abs(norms[-1]):
        raise HypothesisError("exp(pi tau / 2)-weighted norm of the density does not settle")
    return norms[-1]


DEFAULT_R_SCHEDULE = tuple(2 * np.pi * k for k in (10, 25, 50, 100))
DEFAULT_PROBES = (0.5, 1.0, 2.0)


def _aligned(r, t, kernel):
    """Smallest ``R' >= r`` with ``sin(t R') = 0`` (cosine) or ``cos(t R') = 0`` (sine)."""
    off = 0.0 if kernel == "cosine" else 0.5
    k = np.ceil(t * r / np.pi - off - 1e-12)
    return (k + off) * np.pi / t


def broad_sense_residual(phi, family, sign, r_schedule=DEFAULT_R_SCHEDULE, probes=DEFAULT_PROBES,
                         xi_lo=1e-10, nodes_per_unit=60, check_hypothesis=True):
    """Residual of the broad-sense eigen-relation for ``x = T phi``.

    For each probe ``t`` and each ``R`` in the schedule the truncated
    transform ``sqrt(2/pi) int_0^R k(t xi) x(xi) d xi`` is compared with
    ``+-x(t)``.  Every ``R`` is nudged up to the nearest point where the
    leading boundary term of the truncation vanishes for that probe.

    Returns the array of residuals (max over probes), one per ``R``.

    Raises
    ------
    HypothesisError
        If the density fails :func:`check_growth_condition`.
    ResidualGrowthError
        If the residual does not decrease along the schedule.
    """
    _check(family, sign)
    if check_hypothesis:
        check_growth_condition(phi)
    s = 1.0 if sign == "plus" else -1.0
    probes = np.asarray(probes, dtype=float)
    lhs = t_apply_pointwise(family, sign, phi, probes)
    res = np.zeros((len(r_schedule), probes.size))
    for j, t in enumerate(probes):
        r_top = _aligned(max(r_schedule), t, family)
        count = int(nodes_per_unit * np.log(r_top / xi_lo)) + 1
        xi = np.geomspace(xi_lo, r_top, count)
        rs = [_aligned(r, t, family) for r in r_schedule]
        cut = [int(np.argmin(np.abs(xi - r))) for r in rs]
        xi[cut] = rs
        x = t_apply_pointwise(family, sign, phi, xi)
        for i, c in enumerate(cut):
            w = product_weights(xi[:c + 1], np.array([t]))[0]
            val = (w.real if family == "cosine" else w.imag) @ x[:c + 1]
            if family == "cosine":
                val += xi_lo * 2 * x[0]     # int_0^xi_lo of c xi^(-1/2)
            res[i, j] = abs(np.sqrt(2 / np.pi) * val - s * lhs[j])
    out = res.max(axis=1)
    if np.any(np.diff(out) >= 0):
        raise ResidualGrowthError(f"broad-sense residual does not decrease: {out}")
    return out


@dataclass(frozen=True)
class Decomposition:
    x_plus: GridFunction
    x_minus: GridFunction
    phi_plus: ChainDensity
    phi_minus: ChainDensity


def decompose(x, family, cfg=None):
    """Split ``x`` into its two eigen-components with their chain densities."""
    phis = {s: t_adjoint(family, s, x) for s in SIGNS}
    scale = _image_scale(x)
    parts = {s: t_apply(family, s, phis[s], x.grid, scale=scale) for s in SIGNS}
    return Decomposition(parts["plus"], parts["minus"], phis["plus"], phis["minus"])
