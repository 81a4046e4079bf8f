"""Sampled functions on (0, inf) and on the critical line.

A :class:`RadialGrid` is log-uniform: ``t_j = exp(u_min + j h)``.  All
integrals over t are trapezoid sums in ``u = ln t`` with weight ``t_j``,
which is what makes the Mellin transform an ordinary Fourier sum later on.
"""

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "GridError",
    "RadialGrid",
    "GridFunction",
    "CriticalLineFunction",
    "make_radial_grid",
    "parse_grid_spec",
    "l2_norm",
    "inner_product",
    "resample",
    "write_csv",
    "read_csv",
    "to_json",
    "from_json",
    "DEFAULT_GRID_SPEC",
    "default_grid",
]

MIN_NODES = 16


class GridError(ValueError):
    """Bad grid parameters, mismatched grids or out-of-range resampling."""


@dataclass(frozen=True)
class RadialGrid:
    u_min: float
    h: float
    n: int

    def __post_init__(self):
        if not (self.h > 0 and np.isfinite(self.h)):
            raise GridError(f"step must be positive, got {self.h!r}")
        if self.n < MIN_NODES:
            raise GridError(f"need at least {MIN_NODES} nodes, got {self.n}")

    @property
    def u(self):
        return self.u_min + self.h * np.arange(self.n)

    @property
    def t(self):
        return np.exp(self.u)

    @property
    def t_lo(self):
        return float(np.exp(self.u_min))

    @property
    def t_hi(self):
        return float(np.exp(self.u_min + self.h * (self.n - 1)))

    @property
    def weights(self):
        """Trapezoid weights for dt on the nodes."""
        w = self.h * self.t
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    @property
    def tau_step(self):
        """Critical-line step dual to this grid under the discrete Fourier pairing."""
        return 2 * np.pi / (self.n * self.h)

    def sample(self, func):
        """Evaluate ``func`` at the nodes and wrap the result."""
        return GridFunction(self, func(self.t))

    def same_as(self, other):
        return self == other


def make_radial_grid(t_lo, t_hi, n):
    """Log-uniform grid with ``n`` nodes spanning ``[t_lo, t_hi]``."""
    if not (0 < t_lo < t_hi) or not np.isfinite(t_hi):
        raise GridError(f"need 0 < t_lo < t_hi, got {t_lo!r}, {t_hi!r}")
    n = int(n)
    if n < MIN_NODES:
        raise GridError(f"need at least {MIN_NODES} nodes, got {n}")
    u0, u1 = np.log(t_lo), np.log(t_hi)
    return RadialGrid(float(u0), float((u1 - u0) / (n - 1)), n)


def parse_grid_spec(spec):
    """Parse ``"LO:HI:N"`` into a grid."""
    try:
        lo, hi, n = spec.split(":")
        return make_radial_grid(float(lo), float(hi), int(n))
    except GridError:
        raise
    except (ValueError, AttributeError) as exc:
        raise GridError(f"grid spec must look like LO:HI:N, got {spec!r}") from exc


@dataclass(frozen=True)
class GridFunction:
    grid: RadialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise GridError(f"expected {self.grid.n} samples, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def t(self):
        return self.grid.t

    def _coerce(self, other):
        if isinstance(other, GridFunction):
            if other.grid != self.grid:
                raise GridError("grid mismatch")
            return other.values
        return other

    def __add__(self, other):
        return GridFunction(self.grid, self.values + self._coerce(other))

    def __sub__(self, other):
        return GridFunction(self.grid, self.values - self._coerce(other))

    def __mul__(self, alpha):
        return GridFunction(self.grid, self.values * self._coerce(alpha))

    __rmul__ = __mul__
    __radd__ = __add__

    def __truediv__(self, alpha):
        return GridFunction(self.grid, self.values / alpha)

    def __neg__(self):
        return GridFunction(self.grid, -self.values)


@dataclass(frozen=True)
class CriticalLineFunction:
    """Samples of Phi(1/2 + i tau) at ``tau_k = (k - m/2) tau_step``."""

    tau_step: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1 or v.size == 0 or v.size % 2:
            raise GridError("critical-line samples need an even, positive count")
        if not self.tau_step > 0:
            raise GridError("tau_step must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def m(self):
        return self.values.size

    @property
    def tau(self):
        return (np.arange(self.m) - self.m // 2) * self.tau_step

    def reflected(self):
        """Samples of Phi(1/2 - i tau) on the same tau grid.

        The most negative node has no mirror on the grid; it is set to 0.
        """
        out = np.zeros_like(self.values)
        out[1:] = self.values[:0:-1]
        return out

    def sq_norm(self):
        """(1/2pi) times the tau-integral of |Phi|^2."""
        return float(np.sum(np.abs(self.values) ** 2) * self.tau_step / (2 * np.pi))


def l2_norm(f):
    """L2 norm over (0, inf) by the trapezoid rule in ln t."""
    mag = np.abs(f.values)
    peak = mag.max()
    if peak == 0 or not np.isfinite(peak):
        return float(peak)
    # scaled so that tiny or huge samples neither underflow nor overflow
    return float(peak * np.sqrt(np.sum(f.grid.weights * (mag / peak) ** 2)))


def inner_product(f, g):
    """<f, g>, conjugate-linear in ``f``."""
    if f.grid != g.grid:
        raise GridError("grid mismatch")
    return complex(np.sum(f.grid.weights * np.conj(f.values) * g.values))


def resample(f, target):
    """Cubic-spline resampling in the log coordinate.

    Nodes shared with the source grid are reproduced exactly.
    """
    if target == f.grid:
        return f
    src_u = f.grid.u
    tu = target.u
    span = 1e-12 * max(1.0, abs(src_u[0]), abs(src_u[-1]))
    if tu[0] < src_u[0] - span or tu[-1] > src_u[-1] + span:
        raise GridError("target grid extends beyond the source grid")
    spline = CubicSpline(src_u, f.values)
    out = spline(np.clip(tu, src_u[0], src_u[-1]))
    # exact on shared nodes
    idx = np.rint((tu - src_u[0]) / f.grid.h).astype(np.int64)
    ok = (idx >= 0) & (idx < f.grid.n)
    hit = ok & (np.abs(src_u[np.clip(idx, 0, f.grid.n - 1)] - tu) <= 1e-13 * np.maximum(1.0, np.abs(tu)))
    out[hit] = f.values[idx[hit]]
    return GridFunction(target, out)


def _grid_from_t(t):
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < MIN_NODES or np.any(t <= 0):
        raise GridError("abscissae must be at least 16 positive values")
    grid = make_radial_grid(t[0], t[-1], t.size)
    if not np.allclose(np.log(t), grid.u, rtol=0, atol=1e-9 * max(1.0, grid.h * grid.n)):
        raise GridError("abscissae are not log-uniform")
    return grid


def write_csv(path, obj):
    """Write ``t,re,im`` (grid functions) or ``tau,re,im`` (critical line / densities)."""
    path = Path(path)
    if isinstance(obj, GridFunction):
        head, x = "t", obj.t
    else:
        head, x = "tau", obj.tau
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([head, "re", "im"])
        for xi, v in zip(x, obj.values):
            w.writerow([repr(float(xi)), repr(float(v.real)), repr(float(v.imag))])
    return path


def read_csv(path):
    """Read a ``t,re,im`` file into a :class:`GridFunction`."""
    try:
        with Path(path).open(newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or [c.strip() for c in rows[0]] != ["t", "re", "im"]:
            raise GridError("expected header t,re,im")
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except (OSError, ValueError) as exc:
        raise GridError(f"cannot parse {path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 3:
        raise GridError("expected three columns")
    return GridFunction(_grid_from_t(data[:, 0]), data[:, 1] + 1j * data[:, 2])


def to_json(obj):
    """JSON text for a GridFunction or CriticalLineFunction (bit-exact floats)."""
    vals = [[float(v.real), float(v.imag)] for v in obj.values]
    if isinstance(obj, GridFunction):
        g = obj.grid
        head = {"t_lo": g.t_lo, "t_hi": g.t_hi, "n": g.n, "u_min": g.u_min, "h": g.h}
        return json.dumps({"grid": head, "values": vals})
    return json.dumps({"tau_step": float(obj.tau_step), "m": obj.m, "values": vals})


def from_json(text):
    """Inverse of :func:`to_json`."""
    try:
        doc = json.loads(text)
        vals = np.array(doc["values"], dtype=float)
        vals = vals[:, 0] + 1j * vals[:, 1] if vals.size else np.zeros(0, complex)
        if "grid" in doc:
            g = doc["grid"]
            if "u_min" in g and "h" in g:
                grid = RadialGrid(float(g["u_min"]), float(g["h"]), int(g["n"]))
            else:
                grid = make_radial_grid(float(g["t_lo"]), float(g["t_hi"]), int(g["n"]))
            return GridFunction(grid, vals)
        if int(doc["m"]) != vals.size:
            raise GridError("m does not match the number of samples")
        return CriticalLineFunction(float(doc["tau_step"]), vals)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        if isinstance(exc, GridError):
            raise
        raise GridError(f"malformed JSON document: {exc}") from exc


DEFAULT_GRID_SPEC = "1e-20:1e12:4096"


def default_grid():
    """Grid used by the verification suites and the command line.

    The lower end keeps the Mellin head ``int_0^t_lo t^(-1/2) dt`` near
    1e-10; the upper end leaves room for the ``t^(-1)`` decay of chain
    superpositions.
    """
    return parse_grid_spec(DEFAULT_GRID_SPEC)
