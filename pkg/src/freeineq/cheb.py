"""Chebyshev series on an interval, projection, quadrature and the ω kernel.

Series are stored in the rescaled bases ``phi_n(x) = T_n(x/2)`` (first kind)
and ``psi_n(x) = U_n(x/2)`` (second kind) on the reference interval
``(-2, 2)``.  A series living on a general interval ``(a, b)`` is read
through the affine pullback ``theta(u) = (b - a) u / 4 + (b + a) / 2``, so
its coefficients are those of ``f(theta(u))`` on the reference interval.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import fft

from .errors import BasisError, NonFiniteError

REFERENCE = (-2.0, 2.0)
TRUNCATION_RTOL = 1e-14


class Basis(enum.Enum):
    FIRST = "phi"
    SECOND = "psi"


class ExtrapolationWarning(UserWarning):
    """Series evaluated outside its interval."""


def to_reference(x, interval):
    a, b = interval
    return (4.0 * np.asarray(x, dtype=float) - 2.0 * (a + b)) / (b - a)


def from_reference(u, interval):
    a, b = interval
    return (b - a) * np.asarray(u, dtype=float) / 4.0 + (b + a) / 2.0


@dataclass(frozen=True)
class ChebSeries:
    """A polynomial ``sum_n c_n phi_n`` or ``sum_n c_n psi_n`` on ``interval``.

    Attributes:
        basis: ``Basis.FIRST`` or ``Basis.SECOND``.
        coeffs: read-only float array, index ``n`` is the coefficient of the
            degree-``n`` basis polynomial.
        interval: ``(a, b)`` with ``a < b``.
    """

    basis: Basis
    coeffs: np.ndarray
    interval: tuple[float, float] = REFERENCE

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size == 0:
            c = np.zeros(1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        a, b = (float(v) for v in self.interval)
        if not a < b:
            raise ValueError(f"interval must satisfy a < b, got {self.interval}")
        object.__setattr__(self, "interval", (a, b))

    @classmethod
    def phi(cls, coeffs: Sequence[float], interval=REFERENCE) -> "ChebSeries":
        return cls(Basis.FIRST, coeffs, interval)

    @classmethod
    def psi(cls, coeffs: Sequence[float], interval=REFERENCE) -> "ChebSeries":
        return cls(Basis.SECOND, coeffs, interval)

    @classmethod
    def basis_element(cls, basis: Basis, n: int, interval=REFERENCE) -> "ChebSeries":
        c = np.zeros(n + 1)
        c[n] = 1.0
        return cls(basis, c, interval)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    @property
    def scale(self) -> float:
        """d(reference variable)/dx on the interval."""
        a, b = self.interval
        return 4.0 / (b - a)

    def trim(self, rtol: float = TRUNCATION_RTOL) -> "ChebSeries":
        c = self.coeffs
        big = np.max(np.abs(c)) if c.size else 0.0
        keep = np.flatnonzero(np.abs(c) > rtol * big) if big > 0 else np.array([0])
        last = int(keep[-1]) if keep.size else 0
        return ChebSeries(self.basis, c[: last + 1], self.interval)

    def on_reference(self) -> "ChebSeries":
        return ChebSeries(self.basis, self.coeffs, REFERENCE)

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(max(length, self.coeffs.size))
        out[: self.coeffs.size] = self.coeffs
        return out

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other: "ChebSeries") -> "ChebSeries":
        other = _match(self, other)
        n = max(self.coeffs.size, other.coeffs.size)
        return ChebSeries(self.basis, self.padded(n) + other.padded(n), self.interval)

    def __sub__(self, other: "ChebSeries") -> "ChebSeries":
        return self + (-1.0) * other

    def __rmul__(self, scalar: float) -> "ChebSeries":
        return ChebSeries(self.basis, float(scalar) * self.coeffs, self.interval)

    __mul__ = __rmul__

    def __neg__(self) -> "ChebSeries":
        return (-1.0) * self


def _match(s: ChebSeries, t: ChebSeries) -> ChebSeries:
    if s.interval != t.interval:
        raise ValueError("series live on different intervals")
    if s.basis is not t.basis:
        t = convert_basis(t)
    return t


def _clenshaw(coeffs: np.ndarray, y: np.ndarray, second_kind: bool) -> np.ndarray:
    # Recurrence is shared by T_n and U_n; only the final step differs.
    b1 = np.zeros_like(y)
    b2 = np.zeros_like(y)
    for c in coeffs[:0:-1]:
        b1, b2 = 2.0 * y * b1 - b2 + c, b1
    if second_kind:
        return 2.0 * y * b1 - b2 + coeffs[0]
    return y * b1 - b2 + coeffs[0]


def evaluate(s: ChebSeries, x, *, extrapolate: bool = False):
    """Evaluate ``s`` at ``x`` (scalar or array) with the Clenshaw recurrence.

    Points outside the interval are evaluated by polynomial extension and an
    :class:`ExtrapolationWarning` is emitted unless ``extrapolate=True``.
    """
    xa = np.asarray(x, dtype=float)
    u = to_reference(xa, s.interval)
    if not extrapolate and np.any(np.abs(u) > 2.0 * (1.0 + 1e-12)):
        warnings.warn("evaluating a Chebyshev series outside its interval", ExtrapolationWarning, stacklevel=2)
    out = _clenshaw(s.coeffs, u / 2.0, s.basis is Basis.SECOND)
    return float(out) if out.ndim == 0 else out


def lobatto_nodes(degree: int) -> np.ndarray:
    """Chebyshev extrema ``2 cos(pi j / degree)`` on the reference interval."""
    j = np.arange(degree + 1)
    return 2.0 * np.cos(np.pi * j / degree)


def project(f: Callable, degree: int, interval=REFERENCE, trim: bool = True) -> ChebSeries:
    """Interpolate ``f`` at the ``degree + 1`` Chebyshev-Lobatto nodes of ``interval``.

    Exact (to roundoff) for polynomials of degree at most ``degree``.

    Raises:
        NonFiniteError: if ``f`` is not finite at some node.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    u = lobatto_nodes(degree)
    x = from_reference(u, interval)
    vals = np.asarray(f(x), dtype=float) * np.ones_like(x)
    bad = ~np.isfinite(vals)
    if bad.any():
        raise NonFiniteError(f"non-finite value at node x={x[bad][0]!r}")
    c = fft.dct(vals, type=1) / degree
    c[0] /= 2.0
    c[-1] /= 2.0
    s = ChebSeries(Basis.FIRST, c, interval)
    return s.trim() if trim else s


def convert_basis(s: ChebSeries) -> ChebSeries:
    """Rewrite ``s`` in the other Chebyshev basis (phi <-> psi)."""
    c = s.coeffs
    n = c.size
    if s.basis is Basis.FIRST:
        # T_0 = U_0, T_1 = U_1 / 2, T_n = (U_n - U_{n-2}) / 2
        out = np.zeros(n)
        out[0] = c[0]
        out[1:] += 0.5 * c[1:]
        if n > 2:
            out[: n - 2] -= 0.5 * c[2:]
        return ChebSeries(Basis.SECOND, out, s.interval)
    # U_n = 2 sum_{k} T_{n-2k} - [n even] T_0
    out = np.zeros(n)
    for parity in (0, 1):
        tail = np.cumsum(c[parity::2][::-1])[::-1]
        out[parity::2] = 2.0 * tail
    out[0] -= np.sum(c[0::2])
    return ChebSeries(Basis.FIRST, out, s.interval)


def differentiate(s: ChebSeries) -> ChebSeries:
    """``d/dx`` of a first-kind series, returned in the second-kind basis."""
    if s.basis is not Basis.FIRST:
        raise BasisError("differentiate expects a first-kind (phi) series")
    n = np.arange(1, s.coeffs.size)
    out = 0.5 * n * s.coeffs[1:] * s.scale
    return ChebSeries(Basis.SECOND, out if out.size else [0.0], s.interval)


def antiderivative_zero_mean(s: ChebSeries) -> ChebSeries:
    """Antiderivative of a psi-series with zero arcsine mean (no phi_0 term)."""
    if s.basis is not Basis.SECOND:
        raise BasisError("antiderivative_zero_mean expects a second-kind (psi) series")
    n = np.arange(s.coeffs.size)
    out = np.zeros(s.coeffs.size + 1)
    out[1:] = 2.0 * s.coeffs / (n + 1) / s.scale
    return ChebSeries(Basis.FIRST, out, s.interval)


def as_first_kind(s: ChebSeries) -> ChebSeries:
    return s if s.basis is Basis.FIRST else convert_basis(s)


def as_second_kind(s: ChebSeries) -> ChebSeries:
    return s if s.basis is Basis.SECOND else convert_basis(s)


# --------------------------------------------------------------------- quadrature


class Measure(enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    MU_V = "mu_v"
    LEBESGUE = "lebesgue"


@dataclass(frozen=True)
class Quadrature:
    nodes: np.ndarray
    weights: np.ndarray
    measure: Measure
    exact_degree: int
    weight_series: ChebSeries | None = field(default=None, repr=False)

    def integrate(self, f: Callable) -> float:
        vals = np.asarray(f(self.nodes), dtype=float) * np.ones_like(self.nodes)
        return float(np.dot(self.weights, vals))

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))


def gauss_nodes(measure: Measure, m: int) -> Quadrature:
    """Gauss rule with ``m`` nodes for the arcsine (Beta) or semicircle (Alpha) law.

    Exact for polynomials of degree up to ``2m - 1``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if measure is Measure.BETA:
        k = np.arange(m)
        nodes = 2.0 * np.cos((2 * k + 1) * np.pi / (2 * m))
        weights = np.full(m, 1.0 / m)
    elif measure is Measure.ALPHA:
        j = np.arange(1, m + 1)
        t = j * np.pi / (m + 1)
        nodes = 2.0 * np.cos(t)
        weights = 2.0 / (m + 1) * np.sin(t) ** 2
    else:
        raise ValueError(f"gauss_nodes supports Alpha and Beta, not {measure}")
    return Quadrature(nodes, weights, measure, 2 * m - 1)


def weighted_beta_rule(weight: ChebSeries, m: int) -> Quadrature:
    """Rule for ``weight(u) beta(du)`` on the reference interval (an equilibrium measure)."""
    base = gauss_nodes(Measure.BETA, m)
    w = evaluate(weight.on_reference(), base.nodes)
    return Quadrature(base.nodes, base.weights * w, Measure.MU_V, 2 * m - 1 - weight.degree, weight)


def legendre_rule(m: int, interval=(0.0, 1.0)) -> Quadrature:
    t, w = np.polynomial.legendre.leggauss(m)
    a, b = interval
    return Quadrature((b - a) * (t + 1) / 2 + a, w * (b - a) / 2, Measure.LEBESGUE, 2 * m - 1)


def default_nodes(degree: int) -> int:
    return 2 * degree + 16


# ---------------------------------------------------------------------- omega


@dataclass(frozen=True)
class OmegaKernel:
    """Tensor-product rule for ``omega(dx, dy)`` on ``interval``.

    On the reference interval ``omega = (4 - xy) / 4 * beta(dx) beta(dy)``,
    so an ``m``-point arcsine Gauss rule in each variable with the factor
    ``(4 - x_i x_j) / 4`` integrates polynomials of degree ``<= 2m - 3`` in
    each variable exactly.  On ``(a, b)`` the nodes are mapped by ``theta``;
    the rescaled kernel has identical weights.
    """

    m: int
    interval: tuple[float, float] = REFERENCE

    @property
    def reference_nodes(self) -> np.ndarray:
        return gauss_nodes(Measure.BETA, self.m).nodes

    @property
    def nodes(self) -> np.ndarray:
        return from_reference(self.reference_nodes, self.interval)

    @property
    def weights(self) -> np.ndarray:
        u = self.reference_nodes
        return (4.0 - np.outer(u, u)) / 4.0 / self.m**2

    def density(self, x, y):
        """Pointwise kernel density on ``interval`` (rescaled form for general ``(a, b)``)."""
        a, b = self.interval
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        num = -2 * a * b + (a + b) * (x + y) - 2 * x * y
        den = 8 * np.pi**2 * np.sqrt((x - a) * (b - x)) * np.sqrt((y - a) * (b - y))
        return num / den


def omega_double_integral(g: Callable, kernel: OmegaKernel) -> float:
    """Tensor-product quadrature value of ``∬ g(x, y) omega(dx, dy)``.

    Raises:
        NonFiniteError: if ``g`` is not finite at some node pair.
    """
    x = kernel.nodes
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = np.asarray(g(X, Y), dtype=float) * np.ones_like(X)
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NonFiniteError(f"non-finite integrand at ({X[i, j]!r}, {Y[i, j]!r})")
    return float(np.sum(vals * kernel.weights))


def divided_difference(s: ChebSeries) -> Callable:
    """Return ``(x, y) -> (s(x) - s(y)) / (x - y)`` with the derivative on the diagonal.

    The explicit quotient is used when ``|x - y| > 1e-6 (b - a)``; closer
    pairs use ``s'`` at the midpoint, which avoids cancellation.
    """
    first = as_first_kind(s)
    ds = differentiate(first)
    a, b = s.interval
    cutoff = 1e-6 * (b - a)

    def dd(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        diff = x - y
        near = np.abs(diff) <= cutoff
        safe = np.where(near, 1.0, diff)
        explicit = (evaluate(first, x) - evaluate(first, y)) / safe
        return np.where(near, evaluate(ds, (x + y) / 2.0), explicit)

    return dd
