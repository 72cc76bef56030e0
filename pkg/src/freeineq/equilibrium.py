"""Equilibrium measures of convex potentials and the operators built on them.

Everything is computed on the reference interval ``(-2, 2)``: for a
support ``(a, b)`` with centre ``m = (a + b) / 2`` and half-scale
``c = (b - a) / 4`` the potential is pulled back to
``Vt(u) = V(c u + m)``.  Its equilibrium measure is then
``w(u) beta(du)`` with ``w = 1 - N(Vt) / 2``.

A potential may carry a Wishart-type term ``-s log x``.  That term is never
expanded in a Chebyshev series; its contributions to the support
constraints and to ``w`` are evaluated in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from scipy import linalg, optimize, signal

from .cheb import (
    REFERENCE,
    Basis,
    ChebSeries,
    Measure,
    Quadrature,
    as_first_kind,
    as_second_kind,
    convert_basis,
    differentiate,
    divided_difference,
    evaluate,
    from_reference,
    gauss_nodes,
    lobatto_nodes,
    project,
    weighted_beta_rule,
)
from .errors import ConsistencyError, DivergenceError, DomainError, SolverError, SpectralError

CONVEXITY_TOL = 1e-10
POSITIVITY_TOL = 1e-9
LOG_PROJECTION_MAX_DEGREE = 1024


# ------------------------------------------------------------------ potentials


@dataclass(frozen=True)
class Potential:
    """``V(x) = sum_p c_p x^p - s log x``.

    Attributes:
        monomials: ``(power, coefficient)`` pairs.
        log_s: coefficient ``s >= 0`` of ``-log x`` (Wishart case).
        domain: ``(lo, hi)`` or ``None`` for the real line.  A positive
            ``log_s`` forces the domain into ``(0, inf)``.
    """

    monomials: tuple[tuple[int, float], ...]
    log_s: float = 0.0
    domain: tuple[float, float] | None = None

    def __post_init__(self):
        mono = tuple(sorted((int(p), float(c)) for p, c in self.monomials))
        if any(p < 0 for p, _ in mono):
            raise ValueError("monomial powers must be non-negative")
        object.__setattr__(self, "monomials", mono)
        if self.log_s < 0:
            raise ValueError("log_s must be >= 0")
        dom = self.domain
        if self.log_s > 0:
            lo, hi = dom if dom is not None else (0.0, math.inf)
            dom = (max(float(lo), 0.0), float(hi))
        elif dom is not None:
            dom = (float(dom[0]), float(dom[1]))
        object.__setattr__(self, "domain", dom)

    @classmethod
    def from_record(cls, record: dict) -> "Potential":
        """Build from ``{"monomials": [[p, c], ...], "log_s": s, "domain": [lo, hi] | "real-line"}``."""
        unknown = set(record) - {"monomials", "log_s", "domain"}
        if unknown:
            raise ValueError(f"unknown potential keys: {sorted(unknown)}")
        dom = record.get("domain", "real-line")
        if dom in (None, "real-line"):
            domain = None
        else:
            lo, hi = dom
            domain = (float(lo), float(hi))
        return cls(tuple((int(p), float(c)) for p, c in record.get("monomials", [])), float(record.get("log_s", 0.0)), domain)

    def to_record(self) -> dict:
        return {
            "domain": "real-line" if self.domain is None else [self.domain[0], self.domain[1]],
            "log_s": self.log_s,
            "monomials": [[p, c] for p, c in self.monomials],
        }

    def describe(self) -> str:
        parts = [f"{c:g}*x^{p}" for p, c in self.monomials]
        if self.log_s:
            parts.append(f"-{self.log_s:g}*log(x)")
        return " + ".join(parts) if parts else "0"

    @property
    def poly(self) -> Polynomial:
        deg = max((p for p, _ in self.monomials), default=0)
        c = np.zeros(deg + 1)
        for p, v in self.monomials:
            c[p] += v
        return Polynomial(c)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = self.poly(x)
        if self.log_s:
            out = out - self.log_s * np.log(x)
        return out

    def d1(self, x):
        x = np.asarray(x, dtype=float)
        out = self.poly.deriv(1)(x) if self.poly.degree() >= 1 else np.zeros_like(x)
        if self.log_s:
            out = out - self.log_s / x
        return out

    def d2(self, x):
        x = np.asarray(x, dtype=float)
        out = self.poly.deriv(2)(x) if self.poly.degree() >= 2 else np.zeros_like(x)
        if self.log_s:
            out = out + self.log_s / x**2
        return out

    def shifted(self, constant: float) -> "Potential":
        return Potential(self.monomials + ((0, constant),), self.log_s, self.domain)

    def in_domain(self, a: float, b: float) -> bool:
        if self.domain is None:
            return True
        lo, hi = self.domain
        if self.log_s > 0:
            return a > lo and b <= hi
        return a >= lo and b <= hi


@dataclass(frozen=True)
class ReferencePotential:
    """``V`` pulled back to ``(-2, 2)`` through ``theta(u) = c u + m``."""

    potential: Potential
    support: tuple[float, float]

    @property
    def c(self) -> float:
        a, b = self.support
        return (b - a) / 4.0

    @property
    def m(self) -> float:
        a, b = self.support
        return (a + b) / 2.0

    def theta(self, u):
        return self.c * np.asarray(u, dtype=float) + self.m

    def value(self, u):
        return self.potential.value(self.theta(u))

    def d1(self, u):
        return self.c * self.potential.d1(self.theta(u))

    def d2(self, u):
        return self.c**2 * self.potential.d2(self.theta(u))

    @property
    def poly(self) -> Polynomial:
        return self.potential.poly(Polynomial([self.m, self.c]))

    def poly_series(self) -> ChebSeries:
        """First-kind series of the polynomial part (exact)."""
        p = self.poly
        deg = max(p.degree(), 1)
        return project(p, deg, trim=False)


# ------------------------------------------------------------- support solver


def _constraint_rule(potential: Potential) -> Quadrature:
    deg = potential.poly.degree()
    return gauss_nodes(Measure.BETA, deg + (256 if potential.log_s else 16))


def constraint_residuals(potential: Potential, support: tuple[float, float], rule: Quadrature | None = None) -> tuple[float, float]:
    """``(∫ Vt' d beta, ∫ u Vt'(u) beta(du) - 2)``; both vanish at the true support."""
    rule = rule or _constraint_rule(potential)
    ref = ReferencePotential(potential, support)
    d1 = ref.d1(rule.nodes)
    return float(rule.weights @ d1), float(rule.weights @ (rule.nodes * d1)) - 2.0


def _residual_and_jacobian(potential, m, c, rule):
    u, wt = rule.nodes, rule.weights
    x = c * u + m
    v1 = potential.d1(x)
    v2 = potential.d2(x)
    f = np.array([c * (wt @ v1), c * (wt @ (u * v1)) - 2.0])
    jac = np.array(
        [
            [c * (wt @ v2), wt @ v1 + c * (wt @ (u * v2))],
            [c * (wt @ (u * v2)), wt @ (u * v1) + c * (wt @ (u * u * v2))],
        ]
    )
    return f, jac


def _minimizer(potential: Potential) -> float:
    dom = potential.domain
    lo = -60.0 if dom is None or not math.isfinite(dom[0]) else dom[0]
    hi = 60.0 if dom is None or not math.isfinite(dom[1]) else dom[1]
    if potential.log_s and dom is not None and not math.isfinite(dom[1]):
        hi = lo + 120.0
    span = hi - lo
    grid = np.linspace(lo + 1e-9 * span, hi - 1e-9 * span, 20001)
    with np.errstate(all="ignore"):
        vals = potential.value(grid)
    vals = np.where(np.isfinite(vals), vals, np.inf)
    i = int(np.argmin(vals))
    left, right = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    if right <= left:
        return float(grid[i])
    res = optimize.minimize_scalar(potential.value, bounds=(left, right), method="bounded", options={"xatol": 1e-12})
    return float(res.x)


def _max_scale(potential: Potential, m: float) -> float:
    if potential.domain is None:
        return math.inf
    lo, hi = potential.domain
    room = min(m - lo, hi - m)
    return room / 2.0 if room > 0 else 0.0


def _initial_scale(potential: Potential, m: float, rule: Quadrature) -> float:
    """Bracket ``c`` so that the second constraint holds at centre ``m``."""

    def g(c):
        return c * float(rule.weights @ (rule.nodes * potential.d1(c * rule.nodes + m))) - 2.0

    cap = _max_scale(potential, m)
    c_hi = 1.0
    while g(c_hi) < 0:
        c_hi *= 2.0
        if c_hi >= cap:
            c_hi = cap * (1 - 1e-9)
            if g(c_hi) < 0:
                raise SolverError(f"no scale satisfies the support constraints around x={m:g}; V' may be constant")
            break
        if c_hi > 1e8:
            raise SolverError("support constraint bracket diverged; V' may be constant or V non-confining")
    return float(optimize.brentq(g, 1e-14, c_hi, xtol=1e-14))


def solve_support(potential: Potential, tol: float = 1e-12, max_iter: int = 100) -> tuple[float, float]:
    """Support ``(a, b)`` of the equilibrium measure of a convex ``potential``.

    Starts at the minimiser of ``V`` with the scale bracketed from the second
    constraint, then runs damped Newton on both constraints.

    Raises:
        SolverError: no convergence within ``max_iter`` steps.
        DomainError: the converged support leaves the declared domain.
    """
    rule = _constraint_rule(potential)
    m = _minimizer(potential)
    c = _initial_scale(potential, m, rule)
    f, jac = _residual_and_jacobian(potential, m, c, rule)
    for _ in range(max_iter):
        norm = float(np.max(np.abs(f)))
        if norm <= tol:
            break
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"singular constraint Jacobian at support {(m - 2 * c, m + 2 * c)}") from exc
        lam = 1.0
        while lam > 1e-10:
            m_new, c_new = m + lam * step[0], c + lam * step[1]
            if c_new > 0 and potential.in_domain(m_new - 2 * c_new, m_new + 2 * c_new):
                f_new, jac_new = _residual_and_jacobian(potential, m_new, c_new, rule)
                if float(np.max(np.abs(f_new))) < norm:
                    break
            lam /= 2.0
        else:
            raise SolverError(f"line search failed; residuals {f.tolist()}")
        m, c, f, jac = m_new, c_new, f_new, jac_new
    else:
        raise SolverError(f"no convergence after {max_iter} iterations; residuals {f.tolist()}")
    a, b = m - 2 * c, m + 2 * c
    if not potential.in_domain(a, b):
        raise DomainError(f"support {(a, b)} leaves the declared domain {potential.domain}")
    return float(a), float(b)


# --------------------------------------------------------- equilibrium measure


def _edge_poly_series(vprime: ChebSeries) -> ChebSeries:
    """psi-series of ``u -> ∫ (Vt'(u) - Vt'(y)) / (u - y) beta(dy)`` for polynomial ``Vt'``.

    Uses ``∫ psi_j d beta = 1`` for even ``j`` and ``0`` for odd ``j``.
    """
    d = as_second_kind(vprime).coeffs
    out = np.zeros(max(d.size - 1, 1))
    for n in range(1, d.size):
        for k in range(n - 1, -1, -2):
            out[k] += d[n]
    return ChebSeries(Basis.SECOND, out)


@dataclass(frozen=True)
class EquilibriumMeasure:
    """``mu_V`` on ``support``: ``w(u) beta(du)`` on the reference interval, pushed forward by ``theta``.

    ``edge`` is the positive factor in ``w(u) = (4 - u^2) / 2 * edge(u)``.
    """

    support: tuple[float, float]
    weight: ChebSeries
    edge: Callable = field(repr=False, compare=False)

    @property
    def c(self) -> float:
        return (self.support[1] - self.support[0]) / 4.0

    @property
    def mass(self) -> float:
        return float(self.weight.coeffs[0])

    def reference_density(self, u):
        """Lebesgue density of the pulled-back measure on ``(-2, 2)``."""
        u = np.asarray(u, dtype=float)
        return np.sqrt(np.clip(4.0 - u * u, 0.0, None)) * self.edge(u) / (2.0 * np.pi)

    def density(self, x):
        u = (np.asarray(x, dtype=float) - (self.support[0] + self.support[1]) / 2.0) / self.c
        return self.reference_density(u) / self.c

    def rule(self, m: int | None = None) -> Quadrature:
        """Quadrature for ``mu_V`` on the reference interval."""
        if m is None:
            m = self.weight.degree + 64
        return weighted_beta_rule(self.weight, m)

    def integrate(self, f: Callable, m: int | None = None) -> float:
        """``∫ f(x) mu_V(dx)`` with ``f`` given in the original coordinate."""
        rule = self.rule(m)
        return float(rule.weights @ np.asarray(f(from_reference(rule.nodes, self.support)), dtype=float))


def equilibrium_density(potential: Potential, support: tuple[float, float], *, check_tol: float = 1e-8) -> EquilibriumMeasure:
    """Equilibrium measure of ``potential`` on a known ``support``.

    Raises:
        ConsistencyError: when the support constraints fail or the weight is
            negative somewhere (non-convex ``V`` or wrong support).
    """
    f1, f2 = constraint_residuals(potential, support)
    if abs(f1) > check_tol or abs(f2) > check_tol:
        raise ConsistencyError(f"support constraints violated: residuals ({f1:.3e}, {f2:.3e})")
    ref = ReferencePotential(potential, support)
    vt = ref.poly_series()
    n = np.arange(vt.coeffs.size)
    w_poly = -0.5 * n * vt.coeffs
    w_poly[0] = 1.0
    edge_poly = _edge_poly_series(differentiate(vt))

    if not potential.log_s:
        weight = ChebSeries(Basis.FIRST, w_poly)

        def edge(u):
            return evaluate(edge_poly, u)

    else:
        s, c, m = potential.log_s, ref.c, ref.m
        a, b = support
        root = math.sqrt(a * b)
        mean_log = -s * c / root
        first_log = -s * (1.0 - m / root)

        def edge_log(u):
            return s * c * c / (ref.theta(u) * root)

        def w_log(u):
            u = np.asarray(u, dtype=float)
            return -0.5 * (first_log + u * mean_log - (4.0 - u * u) * edge_log(u))

        weight = ChebSeries(Basis.FIRST, w_poly) + project_adaptive(w_log)

        def edge(u):
            return evaluate(edge_poly, u) + edge_log(u)

    grid = np.linspace(-2.0, 2.0, 2049)
    wv = evaluate(weight, grid)
    if np.min(wv) < -POSITIVITY_TOL:
        i = int(np.argmin(wv))
        raise ConsistencyError(f"negative equilibrium weight {wv[i]:.3e} at u={grid[i]:.6f}")
    return EquilibriumMeasure((float(support[0]), float(support[1])), weight, edge)


def project_adaptive(f: Callable, interval=REFERENCE, tol: float = 1e-15) -> ChebSeries:
    """Project ``f`` at doubling degrees until the last eight coefficients fall below ``tol`` (relative)."""
    deg = 32
    while True:
        s = project(f, deg, interval, trim=False)
        scale = max(np.max(np.abs(s.coeffs)), 1.0)
        if np.max(np.abs(s.coeffs[-8:])) <= tol * scale or deg >= LOG_PROJECTION_MAX_DEGREE:
            return s.trim(1e-17)
        deg *= 2


def equilibrium(potential: Potential, tol: float = 1e-12) -> EquilibriumMeasure:
    """Solve for the support and build the measure."""
    return equilibrium_density(potential, solve_support(potential, tol))


def check_convexity(potential: Potential, support: tuple[float, float], points: int = 513) -> float:
    """Minimum of ``V''`` on ``support``; raises ``DomainError`` when below ``-1e-10``."""
    x = np.linspace(support[0], support[1], points)
    low = float(np.min(potential.d2(x)))
    if low < -CONVEXITY_TOL:
        raise DomainError(f"V'' = {low:.3e} < 0 on the support; potential is not convex")
    return low


# ------------------------------------------------------------------- energy


def log_energy(mu: EquilibriumMeasure) -> float:
    """``∬ log|x - y| mu(dx) mu(dy)`` from ``log|x-y| = -sum_n (2/n) phi_n(x) phi_n(y)``."""
    w = mu.weight.coeffs
    n = np.arange(1, w.size)
    return math.log(mu.c) - float(np.sum(w[1:] ** 2 / (2.0 * n)))


def energy(potential: Potential, mu: EquilibriumMeasure, nodes: int | None = None) -> float:
    """``E_V(mu) = ∫ V d mu - ∬ log|x - y| mu(dx) mu(dy)``."""
    return mu.integrate(potential.value, nodes) - log_energy(mu)


# --------------------------------------------------------------- operators


def apply_M_V(phi: ChebSeries, mu: EquilibriumMeasure, potential: Potential, nodes: int | None = None) -> ChebSeries:
    """``M_V phi = -2 d/du ∫ (phi(u) - phi(y)) / (u - y) mu(dy) + Vt' phi'`` on the reference interval.

    The divided-difference integral is sampled at Lobatto nodes by
    quadrature, projected, and differentiated; no principal value is taken.
    """
    phi = as_first_kind(phi).on_reference()
    ref = ReferencePotential(potential, mu.support)
    deg = max(phi.degree, 1)
    rule = mu.rule(nodes or deg + mu.weight.degree + 16)
    dd = divided_difference(phi)
    u = lobatto_nodes(deg)
    g_vals = dd(u[:, None], rule.nodes[None, :]) @ rule.weights
    # project() samples at the same Lobatto nodes, so hand it the values directly
    g = project(lambda _x: g_vals, deg, trim=False)
    term1 = -2.0 * convert_basis(differentiate(g))
    dphi = differentiate(phi)
    if potential.log_s:
        prod_deg = deg + 256
    else:
        prod_deg = max(deg - 1 + max(ref.poly.degree() - 1, 0), 1)
    term2 = project(lambda x: ref.d1(x) * evaluate(dphi, x), prod_deg, trim=False)
    return (term1 + term2).trim()


def psi_matrix(size: int, u: np.ndarray) -> np.ndarray:
    """Rows ``psi_0(u), ..., psi_{size-1}(u)``."""
    y = np.asarray(u, dtype=float) / 2.0
    out = np.zeros((size, y.size))
    out[0] = 1.0
    if size > 1:
        out[1] = 2.0 * y
    for n in range(2, size):
        out[n] = 2.0 * y * out[n - 1] - out[n - 2]
    return out


@dataclass(frozen=True)
class GalerkinSystem:
    """``A_ij = <K_V psi_j, psi_i>_{mu_V}`` on ``psi_0..psi_{dim-1}``, Cholesky-factorised."""

    dim: int
    matrix: np.ndarray
    gram: np.ndarray
    factor: tuple = field(repr=False)
    symmetry_residual: float
    min_eigenvalue: float
    rule: Quadrature = field(repr=False)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return linalg.cho_solve(self.factor, rhs)


def assemble_galerkin(potential: Potential, mu: EquilibriumMeasure, dim: int, nodes: int | None = None) -> GalerkinSystem:
    """Build the stiffness matrix of ``K_V = M_V + V''``.

    The ``M_V`` part uses the bilinear form
    ``∬ dd(psi_j) dd(psi_i) d mu d mu``; with
    ``dd(psi_n) = sum_k psi_k ⊗ psi_{n-1-k}`` it is the 2-D
    self-convolution of the Gram matrix of ``mu``.

    Raises:
        SpectralError: if the matrix is not positive definite.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    ref = ReferencePotential(potential, mu.support)
    rule = mu.rule(nodes or 2 * dim + mu.weight.degree + 32)
    P = psi_matrix(dim, rule.nodes)
    gram = (P * rule.weights) @ P.T
    A = (P * (rule.weights * ref.d2(rule.nodes))) @ P.T
    if dim > 1:
        g = gram[: dim - 1, : dim - 1]
        A[1:, 1:] += signal.convolve2d(g, g)[: dim - 1, : dim - 1]
    norm = float(np.linalg.norm(A))
    asym = float(np.linalg.norm(A - A.T)) / norm if norm else 0.0
    A = 0.5 * (A + A.T)
    lam_min = float(np.linalg.eigvalsh(A)[0])
    if not lam_min > 0:
        raise SpectralError(f"Galerkin matrix not positive definite (min eigenvalue {lam_min:.3e})")
    factor = linalg.cho_factor(A, lower=True)
    return GalerkinSystem(dim, A, gram, factor, asym, lam_min, rule)


def resolvent_quadratic_form(
    potential: Potential,
    phi: ChebSeries,
    dim: int,
    mu: EquilibriumMeasure | None = None,
    system: GalerkinSystem | None = None,
) -> float:
    """Galerkin value of ``2 <K_V^{-1} phi', phi'>_{mu_V}`` on the reference interval.

    ``phi`` is read through its reference-interval coefficients and paired
    with the pulled-back potential.
    """
    mu = mu or equilibrium(potential)
    system = system or assemble_galerkin(potential, mu, dim)
    dphi = differentiate(as_first_kind(phi).on_reference())
    P = psi_matrix(system.dim, system.rule.nodes)
    r = P @ (system.rule.weights * evaluate(dphi, system.rule.nodes))
    return float(2.0 * r @ system.solve(r))


def _vanishing_order(p, z: float, scale: float, max_order: int = 12) -> int:
    for k in range(max_order + 1):
        if abs(p.deriv(k)(z) if k else p(z)) > 1e-9 * scale:
            return k
    return max_order + 1


def brascamp_lieb_rhs(potential: Potential, phi: ChebSeries | Callable, mu: EquilibriumMeasure, nodes: int | None = None) -> float:
    """``∫ phi'^2 / V'' d mu_V``.

    ``phi`` is a series on ``mu.support`` (or a callable on that support,
    projected first).  Nodes where ``V''`` vanishes are resolved by the
    vanishing orders of ``V''`` and ``phi'^2`` there.

    Raises:
        DivergenceError: ``V'' <= 0`` where ``phi'`` does not vanish to matching order.
    """
    phi = on_support(phi, mu.support)
    ref = ReferencePotential(potential, mu.support)
    dphi = differentiate(as_first_kind(phi).on_reference())
    rule = mu.rule(nodes or 2 * dphi.coeffs.size + mu.weight.degree + 64)
    u = rule.nodes
    v2 = ref.d2(u)
    f2 = evaluate(dphi, u) ** 2
    small = v2 < 1e-12
    ratio = np.divide(f2, v2, out=np.zeros_like(f2), where=~small)
    if small.any():
        if potential.log_s:
            raise DivergenceError("V'' vanishes on the support")
        v2_poly = ref.poly.deriv(2)
        d_cheb = Chebyshev(as_first_kind(convert_basis(dphi)).coeffs, domain=[-2, 2])
        sq = d_cheb * d_cheb
        v_scale = max(float(np.max(np.abs(v2))), 1.0)
        f_scale = max(float(np.max(np.abs(f2))), 1.0)
        for i in np.flatnonzero(small):
            z = float(u[i])
            if v2[i] < -CONVEXITY_TOL:
                raise DivergenceError(f"V'' = {v2[i]:.3e} < 0 at u={z:.6f}")
            kv = _vanishing_order(v2_poly, z, v_scale)
            kf = _vanishing_order(sq, z, f_scale)
            if kf < kv:
                raise DivergenceError(f"phi'^2 / V'' diverges at u={z:.6f} (orders {kf} < {kv})")
            ratio[i] = (sq.deriv(kv)(z) if kv else sq(z)) / (v2_poly.deriv(kv)(z) if kv else v2_poly(z))
    # chain rule factors cancel: (c phi')^2 / (c^2 V'') = phi'^2 / V''
    return float(rule.weights @ ratio)


def on_support(phi: ChebSeries | Callable, support: tuple[float, float], degree: int | None = None) -> ChebSeries:
    """Return ``phi`` as a series on ``support``.

    Callables are projected at ``degree`` (adaptively when ``None``); series
    on another interval are re-projected at their own degree.
    """
    if isinstance(phi, ChebSeries):
        if phi.interval == (float(support[0]), float(support[1])):
            return as_first_kind(phi)
        src = phi
        deg = max(src.degree, 1)
        return project(lambda x: evaluate(src, x), deg, support)
    if degree is None:
        return project_adaptive(phi, support)
    return project(phi, degree, support)


def grid_weight_check(mu: EquilibriumMeasure, points: int = 512) -> Sequence[float]:
    """Weight values on an open grid of ``points`` points (positivity checks)."""
    u = np.linspace(-2.0, 2.0, points + 2)[1:-1]
    return evaluate(mu.weight, u)


__all__ = [
    "EquilibriumMeasure",
    "GalerkinSystem",
    "Potential",
    "ReferencePotential",
    "REFERENCE",
    "apply_M_V",
    "assemble_galerkin",
    "brascamp_lieb_rhs",
    "check_convexity",
    "constraint_residuals",
    "energy",
    "equilibrium",
    "equilibrium_density",
    "log_energy",
    "on_support",
    "project_adaptive",
    "resolvent_quadratic_form",
    "solve_support",
]
