"""Report runners for the free inequalities and identities.

Each runner returns a :class:`Report`.  Inequalities pass when
``slack = rhs - lhs >= -tol``; identities pass when ``|slack| <= tol``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import operators as ops
from .cheb import ChebSeries, as_first_kind, differentiate, evaluate
from .equilibrium import (
    EquilibriumMeasure,
    Potential,
    ReferencePotential,
    brascamp_lieb_rhs,
    check_convexity,
    constraint_residuals,
    energy,
    equilibrium,
    grid_weight_check,
    on_support,
    resolvent_quadratic_form,
)
from .errors import DomainError

SPECTRAL_TOL = 1e-10
GALERKIN_TOL = 1e-6
SIGN_TOL = 1e-9
EQUALITY_TOL = 1e-8

INEQUALITY = "inequality"
IDENTITY = "identity"
STATISTICAL = "statistical"

CSV_COLUMNS = ("name", "lhs", "rhs", "slack", "tol", "passed", "meta")


@dataclass
class Report:
    """One verification record.

    Attributes:
        name: runner name, e.g. ``poincare`` or ``brascamp_lieb``.
        lhs: left side.
        rhs: right side.
        tol: tolerance used for ``passed``.
        kind: ``inequality``, ``identity`` or ``statistical``.
        terms: expansion terms (refinement) or other per-term values.
        trace: convergence trace, e.g. values at Galerkin dimensions ``m, 2m``.
        meta: descriptors of the inputs and secondary quantities.
        checks: extra boolean conditions that must also hold.
    """

    name: str
    lhs: float
    rhs: float
    tol: float
    kind: str = INEQUALITY
    terms: list[float] = field(default_factory=list)
    trace: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return float(self.rhs) - float(self.lhs)

    @property
    def passed(self) -> bool:
        if not all(self.checks.values()):
            return False
        if self.kind == INEQUALITY:
            return self.slack >= -self.tol
        return abs(self.slack) <= self.tol

    def to_dict(self) -> dict:
        return {
            "checks": dict(self.checks),
            "kind": self.kind,
            "lhs": float(self.lhs),
            "meta": _plain(self.meta),
            "name": self.name,
            "passed": self.passed,
            "rhs": float(self.rhs),
            "slack": self.slack,
            "terms": [float(t) for t in self.terms],
            "tol": float(self.tol),
            "trace": _plain(self.trace),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def csv_row(self) -> list[str]:
        meta = dict(self.meta)
        if self.terms:
            meta["terms"] = self.terms
        if self.checks:
            meta["checks"] = self.checks
        return [
            self.name,
            repr(float(self.lhs)),
            repr(float(self.rhs)),
            repr(self.slack),
            repr(float(self.tol)),
            "true" if self.passed else "false",
            json.dumps(_plain(meta), sort_keys=True),
        ]

    def pretty(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [
            f"[{status}] {self.name} ({self.kind})",
            f"  lhs   = {self.lhs:.16e}",
            f"  rhs   = {self.rhs:.16e}",
            f"  slack = {self.slack:.16e}  (tol {self.tol:.3e})",
        ]
        for i, t in enumerate(self.terms, start=1):
            lines.append(f"  term[{i}] = {t:.16e}")
        for k, v in sorted(self.checks.items()):
            lines.append(f"  check {k}: {v}")
        for k, v in sorted(self.meta.items()):
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def to_json_lines(reports: Sequence[Report]) -> str:
    """One sorted-key JSON object per line."""
    return "".join(r.to_json() + "\n" for r in reports)


def to_csv(reports: Sequence[Report]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def to_pretty(reports: Sequence[Report]) -> str:
    return "".join(r.pretty() + "\n" for r in reports)


def render(reports: Sequence[Report], fmt: str) -> str:
    if fmt == "json":
        return to_json_lines(reports)
    if fmt == "csv":
        return to_csv(reports)
    if fmt == "pretty":
        return to_pretty(reports)
    raise ValueError(f"unknown format {fmt!r}")


def _label(phi, label):
    if label is not None:
        return label
    if isinstance(phi, ChebSeries):
        return f"{phi.basis.value}:{','.join(repr(float(c)) for c in phi.coeffs)}"
    return getattr(phi, "__name__", "function")


# ------------------------------------------------------------------ runners


def run_poincare(phi: ChebSeries, *, tol: float = SIGN_TOL, label: str | None = None) -> Report:
    """``omega_variance(phi) <= ∫ phi'^2 d alpha``; equality means ``phi`` is linear."""
    lhs = ops.omega_variance(phi)
    rhs = ops.dirichlet_alpha(phi)
    return Report("poincare", lhs, rhs, tol, INEQUALITY, meta={"fn": _label(phi, label), "degree": phi.degree})


def run_refinement(phi: ChebSeries, kmax: int, *, tol: float = SPECTRAL_TOL, label: str | None = None) -> Report:
    """Expansion with remainder and the parity sandwich.

    ``lhs`` is the omega-variance; ``rhs`` is the partial sum of ``kmax``
    terms plus the exact remainder.  ``trace["partial_sums"]`` lists every
    partial sum and ``checks["sandwich"]`` records that odd partial sums lie
    above and even ones below the variance.
    """
    lhs = ops.omega_variance(phi)
    terms = ops.houdre_kagan_terms(phi, kmax)
    sums = ops.partial_sums(terms)
    remainders = [ops.remainder_term(phi, k) for k in range(1, kmax + 1)]
    scale = max(1.0, abs(lhs))
    flags = []
    for k, s in enumerate(sums, start=1):
        flags.append(bool(s >= lhs - tol * scale) if k % 2 else bool(s <= lhs + tol * scale))
    rhs = sums[-1] + remainders[-1]
    return Report(
        "refinement",
        lhs,
        rhs,
        tol * scale,
        IDENTITY,
        terms=terms + [remainders[-1]],
        trace={"partial_sums": sums, "remainders": remainders, "sandwich_by_k": flags},
        meta={"fn": _label(phi, label), "degree": phi.degree, "kmax": kmax},
        checks={"sandwich": all(flags)},
    )


def run_interpolation(phi: ChebSeries, psi: ChebSeries | None = None, *, tol: float = SPECTRAL_TOL, label: str | None = None) -> Report:
    """Covariance ``(1/2) <N phi, psi>_beta`` against the semigroup integral."""
    psi = phi if psi is None else psi
    lhs = 0.5 * ops.n_form(phi, psi)
    rhs = ops.interpolation_rhs(phi, psi)
    scale = max(1.0, abs(lhs))
    return Report("interpolation", lhs, rhs, tol * scale, IDENTITY, meta={"fn": _label(phi, label), "degree": phi.degree})


def run_brascamp_lieb(
    potential: Potential,
    phi: ChebSeries | Callable,
    *,
    mu: EquilibriumMeasure | None = None,
    tol: float = SIGN_TOL,
    label: str | None = None,
) -> Report:
    """Rescaled omega-variance of ``phi`` on the support against ``∫ phi'^2 / V'' d mu_V``."""
    mu = mu or equilibrium(potential)
    check_convexity(potential, mu.support)
    series = on_support(phi, mu.support)
    lhs = ops.omega_variance(series)
    rhs = brascamp_lieb_rhs(potential, series, mu)
    return Report(
        "brascamp_lieb",
        lhs,
        rhs,
        tol,
        INEQUALITY,
        meta={"potential": potential.describe(), "fn": _label(phi, label), "support": list(mu.support), "degree": series.degree},
    )


def run_equality_case(
    potential: Potential,
    constant: float = 0.0,
    *,
    mu: EquilibriumMeasure | None = None,
    tol: float = EQUALITY_TOL,
) -> Report:
    """Brascamp-Lieb at ``phi = V' + C``: both sides coincide.

    Also checks ``<N Vt', Vt'> = 2 ∫ Vt'' d mu`` on the reference interval.
    """
    if potential.log_s:
        raise DomainError("equality case runner expects a polynomial potential")
    mu = mu or equilibrium(potential)
    ref = ReferencePotential(potential, mu.support)
    dpoly = potential.poly.deriv(1)

    def phi(x):
        return dpoly(x) + constant

    series = on_support(phi, mu.support, max(dpoly.degree(), 1))
    lhs = ops.omega_variance(series)
    rhs = brascamp_lieb_rhs(potential, series, mu)
    vt1 = on_support(lambda u: ref.d1(u), (-2.0, 2.0), max(dpoly.degree(), 1))
    n_value = ops.n_form(vt1)
    v2_mean = mu.integrate(lambda x: ref.c**2 * potential.d2(x))
    identity_ok = abs(n_value - 2.0 * v2_mean) <= tol * max(1.0, abs(n_value))
    return Report(
        "equality_case",
        lhs,
        rhs,
        tol * max(1.0, abs(lhs)),
        IDENTITY,
        meta={
            "potential": potential.describe(),
            "fn": f"V'+{constant!r}",
            "support": list(mu.support),
            "n_form_vprime": n_value,
            "twice_mean_v2": 2.0 * v2_mean,
        },
        checks={"n_identity": bool(identity_ok)},
    )


def run_v_independence(
    potentials: Sequence[Potential],
    phi: ChebSeries,
    dim: int = 40,
    *,
    tol: float = GALERKIN_TOL,
    label: str | None = None,
) -> Report:
    """Galerkin ``2 <K_V^{-1} phi', phi'>`` for each potential against ``<N phi, phi>``.

    ``phi`` lives on the reference interval and is paired with each pulled-back
    potential.  ``rhs`` is the value farthest from the target; the trace
    holds the values at ``dim`` and ``2 dim``.
    """
    if not potentials:
        raise ValueError("need at least one potential")
    target = ops.n_form(phi)
    values, doubled = [], []
    for v in potentials:
        mu = equilibrium(v)
        values.append(resolvent_quadratic_form(v, phi, dim, mu))
        doubled.append(resolvent_quadratic_form(v, phi, 2 * dim, mu))
    dev = [abs(x - target) for x in values]
    worst = int(np.argmax(dev))
    pairwise = max(abs(a - b) for a in values for b in values)
    return Report(
        "v_independence",
        target,
        values[worst],
        tol * max(1.0, abs(target)),
        IDENTITY,
        trace={"dims": [dim, 2 * dim], "values": [[a, b] for a, b in zip(values, doubled)]},
        meta={
            "fn": _label(phi, label),
            "potentials": [v.describe() for v in potentials],
            "galerkin_dim": dim,
            "max_pairwise_deviation": pairwise,
        },
    )


def wishart_potential(q: Potential, s: float) -> Potential:
    if not s > 0:
        raise DomainError("log coefficient s must be positive")
    if q.log_s:
        raise DomainError("Q must be polynomial")
    return Potential(q.monomials, s, (0.0, math.inf))


def run_wishart(
    q: Potential,
    s: float,
    phi: ChebSeries | Callable,
    *,
    mu: EquilibriumMeasure | None = None,
    tol: float = SIGN_TOL,
    label: str | None = None,
) -> Report:
    """``V = Q - s log x``: rescaled omega-variance against ``∫ x^2 phi'^2 / (s + x^2 Q'') d mu_V``.

    The weaker bound ``∫ x^2 phi'^2 d mu_V / s`` goes in ``meta["weak_rhs"]``
    and must also dominate the variance.
    """
    v = wishart_potential(q, s)
    mu = mu or equilibrium(v)
    a, b = mu.support
    if a <= 0:
        raise DomainError(f"support {mu.support} touches 0")
    check_convexity(Potential(q.monomials), mu.support)
    series = on_support(phi, mu.support)
    dphi = differentiate(as_first_kind(series))
    q2 = q.poly.deriv(2) if q.poly.degree() >= 2 else (lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    lhs = ops.omega_variance(series)

    def strong(x):
        return x * x * evaluate(dphi, x) ** 2 / (s + x * x * q2(x))

    def weak(x):
        return x * x * evaluate(dphi, x) ** 2 / s

    nodes = 2 * dphi.coeffs.size + mu.weight.degree + 64
    rhs = mu.integrate(strong, nodes)
    weak_rhs = mu.integrate(weak, nodes)
    return Report(
        "wishart",
        lhs,
        rhs,
        tol,
        INEQUALITY,
        meta={
            "potential": v.describe(),
            "fn": _label(phi, label),
            "support": [a, b],
            "degree": series.degree,
            "weak_rhs": weak_rhs,
            "weak_slack": weak_rhs - lhs,
        },
        checks={"weak_bound": bool(weak_rhs - lhs >= -tol)},
    )


def run_equilibrium(potential: Potential, *, tol: float = 1e-12) -> Report:
    """Mass of ``mu_V`` by quadrature against 1, with support, energy and constraint residuals."""
    mu = equilibrium(potential)
    mass = mu.integrate(lambda x: np.ones_like(x))
    f1, f2 = constraint_residuals(potential, mu.support)
    return Report(
        "equilibrium",
        mass,
        1.0,
        tol,
        IDENTITY,
        meta={
            "potential": potential.describe(),
            "support": list(mu.support),
            "energy": energy(potential, mu),
            "constraint_residuals": [f1, f2],
            "min_weight": float(np.min(grid_weight_check(mu))),
            "weight_degree": mu.weight.degree,
        },
        checks={"positive": bool(np.min(grid_weight_check(mu)) >= -1e-9)},
    )


__all__ = [
    "CSV_COLUMNS",
    "Report",
    "render",
    "run_brascamp_lieb",
    "run_equality_case",
    "run_equilibrium",
    "run_interpolation",
    "run_poincare",
    "run_refinement",
    "run_v_independence",
    "run_wishart",
    "to_csv",
    "to_json_lines",
    "to_pretty",
    "wishart_potential",
]
