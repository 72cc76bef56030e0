"""Tensor powers of the psi basis and the non-commutative derivative.

A :class:`TensorSeries` of order ``k`` is a sparse map from multi-indices
``(a_1, ..., a_k)`` to coefficients of ``psi_{a_1} ⊗ ... ⊗ psi_{a_k}``.
Because the psi basis is orthonormal for the semicircle law, all inner
products reduce to sums over shared multi-indices.  Integer inputs stay
integers so the combinatorial identities can be checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

from .cheb import Basis, ChebSeries, as_second_kind
from .errors import CapacityError, DomainError, ShapeError

MAX_ORDER = 5
MAX_INDEX_SUM = 64


def _exact(c):
    if isinstance(c, float) and c.is_integer():
        return int(c)
    return c


@dataclass(frozen=True)
class TensorSeries:
    order: int
    terms: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        if self.order < 1:
            raise ShapeError("tensor order must be >= 1")
        if self.order > MAX_ORDER:
            raise CapacityError(f"tensor order {self.order} exceeds cap {MAX_ORDER}")
        clean = {}
        for idx, c in sorted(self.terms.items()):
            if len(idx) != self.order:
                raise ShapeError(f"multi-index {idx} does not have order {self.order}")
            if sum(idx) > MAX_INDEX_SUM:
                raise CapacityError(f"index sum {sum(idx)} exceeds cap {MAX_INDEX_SUM}")
            if c != 0:
                clean[tuple(int(i) for i in idx)] = _exact(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def basis(cls, *indices: int, coeff=1) -> "TensorSeries":
        return cls(len(indices), {tuple(indices): coeff})

    @classmethod
    def zero(cls, order: int) -> "TensorSeries":
        return cls(order, {})

    @classmethod
    def from_cheb(cls, s: ChebSeries) -> "TensorSeries":
        s = as_second_kind(s)
        return cls(1, {(n,): float(c) for n, c in enumerate(s.coeffs)})

    def to_cheb(self) -> ChebSeries:
        if self.order != 1:
            raise ShapeError("only order-1 tensors convert to a Chebyshev series")
        deg = max((i[0] for i in self.terms), default=0)
        c = [0.0] * (deg + 1)
        for (n,), v in self.terms.items():
            c[n] = float(v)
        return ChebSeries(Basis.SECOND, c)

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, TensorSeries) and self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, tuple(self.terms.items())))

    def __add__(self, other: "TensorSeries") -> "TensorSeries":
        if other.order != self.order:
            raise ShapeError("cannot add tensors of different order")
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, 0) + c
        return TensorSeries(self.order, out)

    def __sub__(self, other: "TensorSeries") -> "TensorSeries":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "TensorSeries":
        return TensorSeries(self.order, {i: scalar * c for i, c in self.terms.items()})

    __mul__ = __rmul__

    def map_diagonal(self, f) -> "TensorSeries":
        """Scale each basis tensor by ``f(index_sum)``."""
        return TensorSeries(self.order, {i: c * f(sum(i)) for i, c in self.terms.items()})


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` non-negative parts, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first, *rest)


def composition_count(k: int, l: int) -> int:
    """Number of ways to write ``l = a_1 + ... + a_{k+1}`` with ``a_i >= 0``."""
    if k < 0 or l < 0:
        raise ValueError("k and l must be non-negative")
    return math.comb(l + k, l)


def nc_derivative(t) -> TensorSeries:
    """``∂ psi_n = sum_{l=0}^{n-1} psi_l ⊗ psi_{n-1-l}``, extended linearly."""
    if isinstance(t, ChebSeries):
        t = TensorSeries.from_cheb(t)
    if t.order != 1:
        raise ShapeError("nc_derivative acts on order-1 tensors")
    return partial_first_slot(t)


def partial_first_slot(t: TensorSeries) -> TensorSeries:
    """``(∂ ⊗ I^{⊗(k-1)}) t``: derivative in the first slot only."""
    out: dict[tuple[int, ...], float] = {}
    for idx, c in t.items():
        n, rest = idx[0], idx[1:]
        for left in range(n):
            key = (left, n - 1 - left, *rest)
            out[key] = out.get(key, 0) + c
    return TensorSeries(t.order + 1, out)


def nc_derivative_k(s, k: int) -> TensorSeries:
    """``∂^(k) s`` for a psi-series ``s``: an order ``k + 1`` tensor.

    ``∂^(k) psi_l`` is the sum of all ``psi_{a_1} ⊗ ... ⊗ psi_{a_{k+1}}``
    with ``a_1 + ... + a_{k+1} = l - k`` (zero when ``l < k``).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if isinstance(s, ChebSeries):
        s = TensorSeries.from_cheb(s)
    if s.order != 1:
        raise ShapeError("nc_derivative_k acts on order-1 tensors")
    if k + 1 > MAX_ORDER:
        raise CapacityError(f"order {k + 1} exceeds cap {MAX_ORDER}")
    out: dict[tuple[int, ...], float] = {}
    for (l,), c in s.items():
        if l < k:
            continue
        for idx in compositions(l - k, k + 1):
            out[idx] = out.get(idx, 0) + c
    return TensorSeries(k + 1, out)


def adjoint_partial(t: TensorSeries) -> TensorSeries:
    """``∂*(psi_a ⊗ psi_b) = psi_{a+b+1}``, extended linearly."""
    if t.order != 2:
        raise ShapeError(f"adjoint_partial expects an order-2 tensor, got order {t.order}")
    out: dict[tuple[int, ...], float] = {}
    for (a, b), c in t.items():
        key = (a + b + 1,)
        out[key] = out.get(key, 0) + c
    return TensorSeries(1, out)


def apply_M_k(t: TensorSeries) -> TensorSeries:
    """Tensor number operator: each basis tensor times its index sum."""
    return t.map_diagonal(lambda n: n)


def resolvent_M_k(t: TensorSeries, shift: float) -> TensorSeries:
    """``(M^(k) + shift I)^{-1} t``."""
    if not shift > 0:
        raise DomainError(f"resolvent shift must be positive, got {shift}")
    return t.map_diagonal(lambda n: 1.0 / (n + shift))


def inner_alpha_k(t1: TensorSeries, t2: TensorSeries):
    """Inner product in ``L^2(alpha^{⊗k})``."""
    if t1.order != t2.order:
        raise ShapeError(f"order mismatch: {t1.order} vs {t2.order}")
    small, big = (t1, t2) if len(t1) <= len(t2) else (t2, t1)
    return sum(c * big.terms[i] for i, c in small.items() if i in big.terms)


def basis_tensors(order: int, max_sum: int) -> Iterator[TensorSeries]:
    """All basis tensors of ``order`` with index sum at most ``max_sum``."""
    for total in range(max_sum + 1):
        for idx in compositions(total, order):
            yield TensorSeries.basis(*idx)


__all__ = [
    "TensorSeries",
    "adjoint_partial",
    "apply_M_k",
    "basis_tensors",
    "composition_count",
    "compositions",
    "inner_alpha_k",
    "nc_derivative",
    "nc_derivative_k",
    "partial_first_slot",
    "resolvent_M_k",
]
