"""Diagonal operators on the Chebyshev bases and the semicircle-law identities.

All functions read a series through its coefficients on the reference
interval ``(-2, 2)``; a series built on another interval is therefore
treated as its affine pullback.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .cheb import Basis, ChebSeries, as_first_kind, as_second_kind, differentiate, legendre_rule
from .errors import BasisError, ConsistencyError
from .tensor import TensorSeries, apply_M_k, inner_alpha_k, nc_derivative_k, resolvent_M_k

# Tensor cross-checks run only at test scale.
TENSOR_CHECK_MAX_DEGREE = 15
TENSOR_CHECK_MAX_ORDER = 4


class Kind(enum.Enum):
    N = "N"
    E = "E"
    M = "M"
    RESOLVENT_M = "resolvent_M"
    SEMIGROUP = "semigroup"


@dataclass(frozen=True)
class SpectralOperator:
    """An operator acting diagonally on phi_n (N, E) or psi_n (M, resolvent, semigroup).

    ``param`` is the shift for ``RESOLVENT_M`` and the time ``t`` for ``SEMIGROUP``.
    """

    kind: Kind
    param: float = 0.0

    @property
    def basis(self) -> Basis:
        return Basis.FIRST if self.kind in (Kind.N, Kind.E) else Basis.SECOND

    def eigenvalues(self, size: int) -> np.ndarray:
        n = np.arange(size, dtype=float)
        if self.kind is Kind.N or self.kind is Kind.M:
            return n
        if self.kind is Kind.E:
            out = np.zeros(size)
            out[1:] = 1.0 / n[1:]
            return out
        if self.kind is Kind.RESOLVENT_M:
            if not self.param > 0:
                raise ValueError("resolvent shift must be positive")
            return 1.0 / (n + self.param)
        return np.exp(-n * self.param)


N = SpectralOperator(Kind.N)
E = SpectralOperator(Kind.E)
M = SpectralOperator(Kind.M)


def resolvent_M(shift: float) -> SpectralOperator:
    return SpectralOperator(Kind.RESOLVENT_M, shift)


def semigroup(t: float) -> SpectralOperator:
    return SpectralOperator(Kind.SEMIGROUP, t)


def apply(op: SpectralOperator, s: ChebSeries, *, require_zero_mean: bool = False) -> ChebSeries:
    """Apply ``op`` coefficient-wise.

    ``E`` sends the mean (phi_0 component) to zero.  Pass
    ``require_zero_mean=True`` when using ``E`` as the inverse of ``N``;
    a series with a non-zero mean is then rejected instead of silently
    losing its mean.

    Raises:
        BasisError: if ``s`` is not in the operator's natural basis.
    """
    if s.basis is not op.basis:
        raise BasisError(f"{op.kind.value} acts on {op.basis.value}-series, got {s.basis.value}")
    if require_zero_mean and s.coeffs[0] != 0.0:
        raise ValueError("series has non-zero arcsine mean; project to zero mean first")
    return ChebSeries(s.basis, s.coeffs * op.eigenvalues(s.coeffs.size), s.interval)


def beta_inner(s: ChebSeries, t: ChebSeries) -> float:
    """``<s, t>`` in ``L^2(beta)``, using ``||phi_0||^2 = 1`` and ``||phi_n||^2 = 1/2``."""
    a = as_first_kind(s).coeffs
    b = as_first_kind(t).coeffs
    n = min(a.size, b.size)
    if n == 0:
        return 0.0
    return float(a[0] * b[0] + 0.5 * np.dot(a[1:n], b[1:n]))


def alpha_inner(s: ChebSeries, t: ChebSeries) -> float:
    """``<s, t>`` in ``L^2(alpha)`` (psi basis is orthonormal)."""
    a = as_second_kind(s).coeffs
    b = as_second_kind(t).coeffs
    n = min(a.size, b.size)
    return float(np.dot(a[:n], b[:n]))


def derivative_coeffs(phi: ChebSeries) -> np.ndarray:
    """psi-coefficients ``b_n`` of ``phi'`` on the reference interval."""
    return differentiate(as_first_kind(phi).on_reference()).coeffs


def n_form(phi: ChebSeries, psi: ChebSeries | None = None) -> float:
    """``<N phi, psi>`` in ``L^2(beta)``; ``psi`` defaults to ``phi``."""
    phi = as_first_kind(phi).on_reference()
    psi = phi if psi is None else as_first_kind(psi).on_reference()
    return beta_inner(apply(N, phi), psi)


def omega_variance(phi: ChebSeries) -> float:
    """``∬ ((phi(x) - phi(y)) / (x - y))^2 omega(dx, dy) = (1/4) sum_n n a_n^2``."""
    a = as_first_kind(phi).coeffs
    n = np.arange(a.size)
    return float(0.25 * np.dot(n, a * a))


def dirichlet_alpha(phi: ChebSeries) -> float:
    """``∫ phi'^2 d alpha``, the free Poincaré right side."""
    b = derivative_coeffs(phi)
    return float(np.dot(b, b))


def resolvent_form(phi: ChebSeries) -> float:
    """``2 <(M + I)^{-1} phi', phi'>_alpha = 2 sum_n b_n^2 / (n + 1)``."""
    b = derivative_coeffs(phi)
    n = np.arange(b.size)
    return float(2.0 * np.dot(b * b, 1.0 / (n + 1)))


def interpolation_rhs(phi: ChebSeries, psi: ChebSeries, *, nodes: int | None = None) -> float:
    """``∫_0^1 sum_n b_n c_n s^n ds`` where ``phi' = sum b_n psi_n``, ``psi' = sum c_n psi_n``.

    This is the semigroup form ``∫_0^∞ e^{-t} <e^{-tM} phi', psi'>_alpha dt``
    after ``s = e^{-t}``.  The value is computed with Gauss-Legendre on
    ``(0, 1)`` and checked against the closed form ``sum b_n c_n / (n + 1)``.
    """
    b = derivative_coeffs(phi)
    c = derivative_coeffs(psi)
    n = min(b.size, c.size)
    prod = b[:n] * c[:n]
    if nodes is None:
        nodes = n // 2 + 2
    rule = legendre_rule(nodes)
    powers = rule.nodes[:, None] ** np.arange(n)[None, :]
    value = float(rule.weights @ (powers @ prod))
    closed = float(np.dot(prod, 1.0 / (np.arange(n) + 1)))
    scale = max(1.0, float(np.sum(np.abs(prod))))
    if abs(value - closed) > 1e-10 * scale:
        raise ConsistencyError(f"Gauss-Legendre {value!r} disagrees with closed form {closed!r}")
    return value


def _hk_closed(b: np.ndarray, l: int) -> float:
    return sum(float(b[n]) ** 2 * math.comb(n, l - 1) for n in range(b.size))


def _hk_tensor(b: np.ndarray, l: int) -> float:
    t = nc_derivative_k(TensorSeries(1, {(n,): float(v) for n, v in enumerate(b)}), l - 1)
    return float(inner_alpha_k(t, t))


def houdre_kagan_norms(phi: ChebSeries, kmax: int, *, tensor_check: bool | None = None) -> list[float]:
    """``||∂^(l-1) phi'||^2`` in ``L^2(alpha^{⊗l})`` for ``l = 1..kmax``.

    Closed form ``sum_n b_n^2 C(n, l-1)``.  When the degree and order are
    small enough (or ``tensor_check=True``) the norm is recomputed from an
    explicit tensor and the two must agree to 1e-12 relative.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    b = derivative_coeffs(phi)
    small = b.size - 1 <= TENSOR_CHECK_MAX_DEGREE
    out = []
    for l in range(1, kmax + 1):
        closed = _hk_closed(b, l)
        check = tensor_check if tensor_check is not None else (small and l <= TENSOR_CHECK_MAX_ORDER)
        if check:
            explicit = _hk_tensor(b, l)
            if abs(explicit - closed) > 1e-12 * max(1.0, abs(closed)):
                raise ConsistencyError(f"tensor norm {explicit!r} != closed form {closed!r} at l={l}")
        out.append(closed)
    return out


def houdre_kagan_terms(phi: ChebSeries, kmax: int, *, tensor_check: bool | None = None) -> list[float]:
    """Signed expansion terms ``(-1)^{l-1} / l * ||∂^(l-1) phi'||^2``, ``l = 1..kmax``."""
    norms = houdre_kagan_norms(phi, kmax, tensor_check=tensor_check)
    return [(-1) ** (l - 1) / l * v for l, v in enumerate(norms, start=1)]


def remainder_term(phi: ChebSeries, k: int) -> float:
    """Exact remainder after ``k`` expansion terms.

    ``(-1)^k / k * <M^(k) (M^(k) + k)^{-1} ∂^(k-1) phi', ∂^(k-1) phi'>``, in
    closed form ``(-1)^k / k * sum_n b_n^2 C(n, k-1) (n - k + 1) / (n + 1)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    b = derivative_coeffs(phi)
    total = 0.0
    for n in range(k - 1, b.size):
        total += float(b[n]) ** 2 * math.comb(n, k - 1) * (n - k + 1) / (n + 1)
    return (-1) ** k / k * total


def remainder_term_tensor(phi: ChebSeries, k: int) -> float:
    """Same remainder, evaluated with explicit tensor operations."""
    if k < 1:
        raise ValueError("k must be >= 1")
    b = derivative_coeffs(phi)
    t = nc_derivative_k(TensorSeries(1, {(n,): float(v) for n, v in enumerate(b)}), k - 1)
    u = apply_M_k(resolvent_M_k(t, float(k)))
    return (-1) ** k / k * float(inner_alpha_k(u, t))


def partial_sums(terms: list[float]) -> list[float]:
    return [float(v) for v in np.cumsum(terms)] if terms else []
