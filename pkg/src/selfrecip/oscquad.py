"""Oscillatory power integrals and their two regularizations.

The integrals are

    int_0^inf {cos s | sin s} s**(zeta - 1) ds,     0 < Re zeta < 1,

which only exist as limits.  ``epsilon_regularized`` damps the integrand by
``exp(-eps s)``; ``truncated`` cuts it at ``s = R``.  ``regularized_limit``
drives either family to its limit by Richardson extrapolation.

The module also holds the piecewise-cubic product-integration weights
(``product_weights``) that the transform code uses for sampled functions.
"""

from dataclasses import dataclass
import numpy as np

from .special import FAMILIES, StripPoint, closed_form_power_integral

__all__ = [
    "ConvergenceError",
    "RegularizationPolicy",
    "DEFAULT_EPSILON_POLICY",
    "DEFAULT_TRUNCATION_POLICY",
    "epsilon_regularized",
    "truncated",
    "truncated_profile",
    "regularized_limit",
    "extrapolate",
    "product_weights",
    "panel_moments",
    "log_grid_weights",
    "bound_ratio",
    "calibrate_bound",
]

HEAD = 0.1          # end of the power-series panel near s = 0
TAIL_START = 200.0  # start of the asymptotic tail for the damped integral
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class ConvergenceError(RuntimeError):
    """Extrapolation increments did not decrease."""


def _zeta(z):
    return (z if isinstance(z, StripPoint) else StripPoint(z)).value


def _check_kernel(kernel):
    if kernel not in FAMILIES:
        raise ValueError(f"kernel must be one of {FAMILIES}, got {kernel!r}")


def _head_exp(beta, zeta, s0):
    """int_0^s0 exp(-beta s) s**(zeta-1) ds by its power series."""
    total = 0j
    term = 1.0 + 0j
    lg = np.log(s0)
    for n in range(60):
        if n:
            term *= -beta * s0 / n
        inc = term * np.exp(zeta * lg) / (n + zeta)
        total += inc
        if abs(term) < 1e-18 and n > 4:
            break
    return total


def _combine(kernel, plus, minus):
    # plus: integral with exp(+is) (beta = eps - i), minus: exp(-is)
    if kernel == "cosine":
        return 0.5 * (plus + minus)
    return (plus - minus) / 2j


def _panel_edges(a, b, zeta):
    """Panel edges on [a, b]; fine enough to resolve both cos s and s**(i Im zeta)."""
    rate = 1.0 + abs(zeta.imag)
    edges = [a]
    s = a
    while s < b:
        s = min(b, s + min(np.pi / 2, 1.5 * s / rate))
        edges.append(s)
    return np.asarray(edges)


def _gl_cumulative(f, edges):
    """Cumulative Gauss-Legendre integrals of ``f`` at every panel edge."""
    lo, hi = edges[:-1], edges[1:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    s = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(s) @ _GL_WEIGHTS * half
    return np.concatenate([[0j], np.cumsum(vals)])


def epsilon_regularized(kernel, zeta, eps):
    """Damped integral ``int_0^inf exp(-eps s) k(s) s**(zeta-1) ds``.

    A power series handles ``[0, 0.1]``, Gauss-Legendre panels the middle
    range and an asymptotic expansion of the incomplete Gamma function
    the tail beyond ``s = 200``.
    """
    _check_kernel(kernel)
    z = _zeta(zeta)
    if not eps > 0:
        raise ValueError("eps must be positive")
    eps = float(eps)
    parts = []
    for sgn in (1, -1):
        beta = eps - 1j * sgn
        head = _head_exp(beta, z, HEAD)
        edges = _panel_edges(HEAD, TAIL_START, z)
        mid = _gl_cumulative(lambda s: np.exp(-beta * s + (z - 1) * np.log(s)), edges)[-1]
        parts.append(head + mid + _tail_exp(beta, z, TAIL_START))
    return complex(_combine(kernel, *parts))


def _tail_exp(beta, zeta, S):
    """int_S^inf exp(-beta s) s**(zeta-1) ds, asymptotic series in 1/(beta S)."""
    pref = np.exp(-beta * S + (zeta - 1) * np.log(S)) / beta
    total = 0j
    term = 1.0 + 0j
    for k in range(200):
        total += term
        nxt = term * (zeta - 1 - k) / (beta * S)
        if abs(nxt) < 1e-18 * abs(total) or abs(nxt) > abs(term):
            break
        term = nxt
    return pref * total


def truncated_profile(kernel, zeta, r_max):
    """Truncated integrals at every panel edge up to ``r_max``.

    Returns ``(R, values)`` with ``R[-1] == r_max``.
    """
    _check_kernel(kernel)
    z = _zeta(zeta)
    r_max = float(r_max)
    if r_max < 0:
        raise ValueError("R must be nonnegative")
    if r_max <= HEAD:
        return np.array([r_max]), np.array([truncated(kernel, z, r_max)])
    heads = [_head_exp(-1j * sgn, z, HEAD) for sgn in (1, -1)]
    edges = _panel_edges(HEAD, r_max, z)
    k = np.cos if kernel == "cosine" else np.sin
    cum = _gl_cumulative(lambda s: k(s) * np.exp((z - 1) * np.log(s)), edges)
    return edges, _combine(kernel, *heads) + cum


def truncated(kernel, zeta, R):
    """``int_0^R k(s) s**(zeta-1) ds`` for the cosine or sine kernel."""
    _check_kernel(kernel)
    z = _zeta(zeta)
    R = float(R)
    if R < 0:
        raise ValueError("R must be nonnegative")
    if R == 0:
        return 0j
    if R <= HEAD:
        parts = [_head_exp(-1j * sgn, z, R) for sgn in (1, -1)]
        return complex(_combine(kernel, *parts))
    return complex(truncated_profile(kernel, z, R)[1][-1])


@dataclass(frozen=True)
class RegularizationPolicy:
    """``kind`` is ``"epsilon"`` (schedule decreasing) or ``"truncation"`` (increasing)."""

    kind: str
    schedule: tuple
    extrapolation_order: int = 3

    def __post_init__(self):
        if self.kind not in ("epsilon", "truncation"):
            raise ValueError(f"unknown regularization kind {self.kind!r}")
        sched = tuple(float(s) for s in self.schedule)
        if len(sched) < 3:
            raise ValueError("schedule needs at least 3 entries")
        diffs = np.diff(sched)
        if self.kind == "epsilon" and not np.all(diffs < 0):
            raise ValueError("epsilon schedule must be strictly decreasing")
        if self.kind == "truncation" and not np.all(diffs > 0):
            raise ValueError("truncation schedule must be strictly increasing")
        if any(s <= 0 for s in sched):
            raise ValueError("schedule entries must be positive")
        if not 0 <= self.extrapolation_order < len(sched):
            raise ValueError("extrapolation order must be below the schedule length")
        object.__setattr__(self, "schedule", sched)


DEFAULT_EPSILON_POLICY = RegularizationPolicy("epsilon", tuple(2.0 ** -k for k in range(4, 17)), 3)
# R = 2 pi 2**j puts every truncation point on a full period of cos and sin
DEFAULT_TRUNCATION_POLICY = RegularizationPolicy(
    "truncation", tuple(2 * np.pi * 2.0 ** j for j in range(3, 10)), 3)


def extrapolate(xs, values, exponents, order):
    """Richardson extrapolation with a known asymptotic scale.

    ``values[k] ~ L + sum_n b_n xs[k]**exponents[n]``.  Returns the list
    of order-``order`` estimates, one per window of ``order + 1``
    consecutive points.
    """
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=complex)
    out = []
    for k in range(order, len(xs)):
        win = slice(k - order, k + 1)
        a = np.ones((order + 1, order + 1), dtype=complex)
        for n in range(order):
            a[:, n + 1] = xs[win] ** exponents[n]
        # column scaling keeps the small system well conditioned
        scale = np.abs(a).max(axis=0)
        sol = np.linalg.solve(a / scale, values[win])
        out.append(sol[0])
    return np.asarray(out)


def regularized_limit(kernel, zeta, policy=DEFAULT_EPSILON_POLICY):
    """Limit of either regularization, with an error estimate.

    Returns ``(value, error_estimate)``; the estimate is the last
    extrapolation increment, floored at the quadrature rounding level.

    Raises
    ------
    ConvergenceError
        If the extrapolation increments grow along the schedule.
    """
    _check_kernel(kernel)
    z = _zeta(zeta)
    order = policy.extrapolation_order
    if policy.kind == "epsilon":
        vals = [epsilon_regularized(kernel, z, e) for e in policy.schedule]
        exps = [n + 1 for n in range(order)]
    else:
        r_max = policy.schedule[-1]
        edges, prof = truncated_profile(kernel, z, r_max)
        vals = []
        for R in policy.schedule:
            vals.append(prof[-1] if R == r_max else truncated(kernel, z, R))
        exps = [z - 1 - n for n in range(order)]
    est = extrapolate(policy.schedule, vals, exps, order)
    value = complex(est[-1])
    floor = 1e-12 * max(1.0, abs(value))
    inc = np.abs(np.diff(est)) if est.size > 1 else np.array([abs(vals[-1] - vals[-2])])
    for a, b in zip(inc[:-1], inc[1:]):
        if b > a and b > floor:
            raise ConvergenceError(
                f"extrapolation increments grew from {a:.3e} to {b:.3e} ({policy.kind})")
    return value, float(max(inc[-1], floor))


# -- product integration -----------------------------------------------------

_MOM_X, _MOM_W = np.polynomial.legendre.leggauss(40)
MOMENT_SWITCH = 10.0


def panel_moments(theta, order=4):
    """``mu_q(theta) = int_{-1}^{1} s**q exp(i theta s) ds`` for ``q < order``.

    Gauss-Legendre (40 points) below ``|theta| = 10``, the upward
    recurrence above, where it is stable.  Returns an array of shape
    ``theta.shape + (order,)``.
    """
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape + (order,), dtype=complex)
    small = np.abs(theta) < MOMENT_SWITCH
    if np.any(small):
        th = theta[small]
        ker = np.exp(1j * th[:, None] * _MOM_X[None, :]) * _MOM_W[None, :]
        out[small] = ker @ (_MOM_X[:, None] ** np.arange(order)[None, :])
    big = ~small
    if np.any(big):
        th = theta[big]
        ep, em = np.exp(1j * th), np.exp(-1j * th)
        inv = 1.0 / (1j * th)
        mu = np.empty(th.shape + (order,), dtype=complex)
        mu[..., 0] = 2 * np.sin(th) / th
        for q in range(1, order):
            mu[..., q] = (ep - (-1) ** q * em) * inv - q * inv * mu[..., q - 1]
        out[big] = mu
    return out


def _check_order(order, n):
    if order not in (4, 6):
        raise ValueError("stencil order must be 4 or 6")
    if n < order + 1:
        raise ValueError(f"product integration needs at least {order + 1} nodes")


def _panel_stencils(nodes, order=4):
    n = nodes.size
    m = order // 2
    start = np.clip(np.arange(n - 1) - m + 1, 0, n - order)
    idx = start[:, None] + np.arange(order)[None, :]
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    half = 0.5 * (nodes[1:] - nodes[:-1])
    sig = (nodes[idx] - mid[:, None]) / half[:, None]
    vand = sig[:, :, None] ** np.arange(order)[None, None, :]
    inv = np.linalg.inv(vand)  # inv[j, q, r]
    return start, mid, half, inv


def product_weights(nodes, freqs, chunk=128, order=4):
    """Weights ``W`` with ``int_{nodes[0]}^{nodes[-1]} exp(i w x) p(x) dx = W @ y``.

    ``p`` is the piecewise polynomial that on each panel interpolates the
    ``order`` nearest samples ``y`` (cubic for 4, quintic for 6).  The
    oscillatory factor is integrated exactly, so the rule stays accurate
    however many periods a panel spans.  Returns a complex array of shape
    ``(len(freqs), len(nodes))``.
    """
    nodes = np.asarray(nodes, dtype=float)
    freqs = np.asarray(freqs, dtype=float)
    n = nodes.size
    _check_order(order, n)
    start, mid, half, inv = _panel_stencils(nodes, order)
    out = np.zeros((freqs.size, n), dtype=complex)
    for lo in range(0, freqs.size, chunk):
        w = freqs[lo:lo + chunk]
        mu = panel_moments(w[:, None] * half[None, :], order)    # (T, P, order)
        coef = np.einsum("tpq,pqr->tpr", mu, inv)
        coef *= (half[None, :] * np.exp(1j * w[:, None] * mid[None, :]))[..., None]
        block = out[lo:lo + chunk]
        for r in range(order):
            np.add.at(block, (slice(None), start + r), coef[:, :, r])
    return out


def log_grid_weights(u_min, h, n, order=4):
    """:func:`product_weights` for a log grid against its own nodes as frequencies.

    On ``t_j = exp(u_min + j h)`` every interior panel has the same shape,
    and the product ``t_i * t_j`` depends on ``i + j`` only, so the interior
    contribution is a column-scaled Hankel matrix built from O(n) moments.
    """
    _check_order(order, n)
    m = order // 2
    t = np.exp(u_min + h * np.arange(n))
    eh = np.exp(h)
    sig = (eh ** np.arange(1 - m, m + 1) - 0.5 * (1 + eh)) / (0.5 * (eh - 1))
    inv = np.linalg.inv(sig[:, None] ** np.arange(order)[None, :])   # inv[q, r]
    s = np.arange(2 * n + order)
    prod = np.exp(2 * u_min + s * h)
    f = panel_moments(prod * 0.5 * (eh - 1), order) @ inv
    f *= np.exp(1j * prod * 0.5 * (1 + eh))[:, None]
    half = 0.5 * t * (eh - 1)
    out = np.zeros((n, n), dtype=complex)
    k = np.arange(n)
    pad = order
    for r in range(order):
        # panel p = k + m - 1 - r contributes f[i + p, r] * half[p] to W[i, k]
        shift = m - 1 - r
        p = k + shift
        valid = (p >= m - 1) & (p <= n - 1 - m)
        scale = np.where(valid, half[np.clip(p, 0, n - 1)], 0.0)
        col = np.concatenate([np.zeros(pad, complex), f[:, r]])
        view = np.lib.stride_tricks.sliding_window_view(col[pad + shift:], n)[:n]
        out += view * scale[None, :]
    # end panels have clipped stencils
    start, mid, halfp, invp = _panel_stencils(t, order)
    for j in list(range(m - 1)) + list(range(n - m, n - 1)):
        mu = panel_moments(t * halfp[j], order)
        coef = (mu @ invp[j]) * (halfp[j] * np.exp(1j * t * mid[j]))[:, None]
        out[:, start[j]:start[j] + order] += coef
    return out


def bound_ratio(kernel, zeta, r_max, eps_schedule=()):
    """Largest ``|I| exp(-pi |Im zeta| / 2)`` over the regularized integrals ``I``.

    ``I`` runs over the truncated integrals at every panel edge up to
    ``r_max`` and over the damped integrals at each ``eps`` given.  A
    bound uniform in ``zeta``, ``R`` and ``eps`` means this ratio stays
    below one constant on any strip ``delta < Re zeta < 1 - delta``.
    """
    z = _zeta(zeta)
    _, vals = truncated_profile(kernel, z, r_max)
    best = float(np.abs(vals).max())
    for eps in eps_schedule:
        best = max(best, abs(epsilon_regularized(kernel, z, eps)))
    return best * float(np.exp(-0.5 * np.pi * abs(z.imag)))


def calibrate_bound(delta, tau_max, r_max, n_re=3, n_tau=11, eps_schedule=(1.0, 0.1, 0.01)):
    """Empirical constant for the uniform bound on ``delta <= Re zeta <= 1 - delta``.

    Returns the largest :func:`bound_ratio` over both kernels on an
    ``n_re`` by ``n_tau`` grid of strip points with ``|Im zeta| <= tau_max``.
    """
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    best = 0.0
    for re in np.linspace(delta, 1 - delta, n_re):
        for im in np.linspace(-tau_max, tau_max, n_tau):
            for kernel in FAMILIES:
                best = max(best, bound_ratio(kernel, complex(re, im), r_max, eps_schedule))
    return best
