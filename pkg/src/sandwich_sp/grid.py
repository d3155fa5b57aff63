"""Uniform radial grids on [0, r_max] and radially symmetric fields on R^3."""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatchError

FOUR_PI = 4.0 * np.pi
MIN_INTERVALS = 16


@dataclass(frozen=True)
class RadialGrid:
    """Nodes ``r_i = i * h``, ``i = 0..n``, with ``h = r_max / n``."""

    r_max: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.r_max) and self.r_max > 0):
            raise ValueError(f"r_max must be positive, got {self.r_max!r}")
        if int(self.n) != self.n or self.n < MIN_INTERVALS:
            raise ValueError(f"n must be an integer >= {MIN_INTERVALS}, got {self.n!r}")
        object.__setattr__(self, "r_max", float(self.r_max))
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self):
        return self.r_max / self.n

    @cached_property
    def r(self):
        r = np.arange(self.n + 1) * self.h
        r[-1] = self.r_max
        r.setflags(write=False)
        return r

    @property
    def size(self):
        return self.n + 1

    @cached_property
    def simpson_weights(self):
        """Volume weights so that ``w @ f`` is 4*pi*int r^2 f dr (composite Simpson)."""
        if self.n % 2:
            raise ValueError("Simpson quadrature needs an even number of intervals")
        c = np.ones(self.size)
        c[1:-1:2] = 4.0
        c[2:-1:2] = 2.0
        w = FOUR_PI * self.r ** 2 * c * self.h / 3.0
        w.setflags(write=False)
        return w

    @cached_property
    def trapezoid_weights(self):
        c = np.ones(self.size)
        c[0] = c[-1] = 0.5
        w = FOUR_PI * self.r ** 2 * c * self.h
        w.setflags(write=False)
        return w

    def field(self, values):
        return RadialField(self, values)

    def sample(self, func):
        """Field from a vectorised callable of r."""
        return RadialField(self, func(self.r))

    def zeros(self):
        return RadialField(self, np.zeros(self.size))


def make_grid(r_max=100.0, n=10000):
    return RadialGrid(r_max, n)


@dataclass(frozen=True, eq=False)
class RadialField:
    """Samples of a radial function at the nodes of ``grid`` (read-only)."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.size,):
            raise ValueError(f"expected {self.grid.size} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def r(self):
        return self.grid.r

    def __len__(self):
        return self.grid.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def _other(self, other):
        if isinstance(other, RadialField):
            check_same_grid(self, other)
            return other.values
        return other

    def __add__(self, other):
        return RadialField(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RadialField(self.grid, self.values - self._other(other))

    def __rsub__(self, other):
        return RadialField(self.grid, self._other(other) - self.values)

    def __mul__(self, other):
        return RadialField(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return RadialField(self.grid, -self.values)

    def __pow__(self, p):
        return RadialField(self.grid, self.values ** p)

    def max(self):
        return float(self.values.max())

    def min(self):
        return float(self.values.min())


def check_same_grid(*fields):
    g = fields[0].grid
    for f in fields[1:]:
        if f.grid != g:
            raise GridMismatchError(f"grid mismatch: {g} vs {f.grid}")
    return g


def integrate_volume(f):
    """Truncated volume integral 4*pi*int_0^r_max r^2 f(r) dr (composite Simpson)."""
    return float(f.grid.simpson_weights @ np.asarray(f.values))


def radial_derivative(u):
    """du/dr: central differences inside, 0 at the origin, one-sided at r_max."""
    v = np.asarray(u.values)
    h = u.grid.h
    d = np.empty_like(v)
    d[0] = 0.0
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    d[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return RadialField(u.grid, d)


def norm_sobolev(u, order=1, q=2.0):
    """Discrete W^{order,q} norm: (int |u|^q + |u'|^q + |Lap u|^q dx)^(1/q).

    Terms are included up to ``order``; ``order=1, q=2`` is the H^1 norm.
    """
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q!r}")
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order!r}")
    acc = np.abs(np.asarray(u.values)) ** q
    if order >= 1:
        acc = acc + np.abs(np.asarray(radial_derivative(u).values)) ** q
    if order >= 2:
        from .elliptic import apply_laplacian

        acc = acc + np.abs(np.asarray(apply_laplacian(u).values)) ** q
    return integrate_volume(RadialField(u.grid, acc)) ** (1.0 / q)
