"""GUE sampling and Monte Carlo estimates of ``Var Tr phi(X)``.

Normalisation: diagonal entries ``N(0, 1/n)``, off-diagonal entries complex
with real and imaginary parts ``N(0, 1/(2n))``, so the spectrum fills
``(-2, 2)`` and ``Var Tr phi(X)`` tends to the omega-variance of ``phi``.

Every sample index gets its own Philox stream keyed by ``(seed, index)``,
and all reductions run in index order, so estimates are bit-identical for
any thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cheb import ChebSeries, evaluate
from .inequalities import STATISTICAL, Report
from .operators import omega_variance

MIN_SAMPLES = 8
Z_THRESHOLD = 3.0


@dataclass(frozen=True)
class GueSample:
    n: int
    eigenvalues: np.ndarray = field(repr=False)

    @property
    def second_moment(self) -> float:
        return float(np.mean(self.eigenvalues**2))


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def gue_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """``H = G + G^*`` with ``G`` complex Gaussian of real/imaginary variance ``1/(4n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    sd = math.sqrt(1.0 / (4.0 * n))
    g = rng.normal(0.0, sd, (n, n)) + 1j * rng.normal(0.0, sd, (n, n))
    return g + g.conj().T


def sample_gue(n: int, seed: int, index: int = 0) -> GueSample:
    """Eigenvalues (ascending) of one GUE(1/sqrt(n)) matrix from stream ``(seed, index)``."""
    h = gue_matrix(n, _stream(seed, index))
    return GueSample(n, np.linalg.eigvalsh(h))


def exact_variance(label: str, n: int) -> float | None:
    """Finite-``n`` oracles: ``Var Tr X = 1`` and ``Var Tr X^2 = 2/n + 2(1 - 1/n) = 2``."""
    if label == "x":
        return 1.0
    if label in ("x^2", "x**2"):
        return 2.0 / n + 2.0 * (1.0 - 1.0 / n)
    return None


@dataclass(frozen=True)
class FluctuationEstimate:
    """Sample variance of ``Tr phi(X)`` with a jackknife standard error.

    ``limit`` is the omega-variance of ``phi``; ``z = (variance - limit) / stderr``.
    """

    fn: str
    n: int
    samples: int
    seed: int
    mean: float
    variance: float
    stderr: float
    limit: float
    oracle: float | None = None

    @property
    def z(self) -> float:
        return (self.variance - self.limit) / self.stderr if self.stderr > 0 else math.inf

    @property
    def z_oracle(self) -> float | None:
        if self.oracle is None:
            return None
        return (self.variance - self.oracle) / self.stderr if self.stderr > 0 else math.inf


def _variance_with_jackknife(values: np.ndarray) -> tuple[float, float, float]:
    k = values.size
    mean = math.fsum(values) / k
    d = values - mean
    ss = math.fsum(d * d)
    var = ss / (k - 1)
    # leave-one-out variances from the centred sums
    loo_mean = -d / (k - 1)
    loo_ss = ss - d * d - (k - 1) * loo_mean * loo_mean
    loo_var = loo_ss / (k - 2)
    loo_bar = math.fsum(loo_var) / k
    jack = math.sqrt((k - 1) / k * math.fsum((loo_var - loo_bar) ** 2))
    return mean, var, jack


def trace_statistics(phi: ChebSeries | Callable, n: int, samples: int, seed: int, threads: int = 1) -> np.ndarray:
    """``Tr phi(X_i)`` for ``i = 0..samples-1``, in index order."""
    # eigenvalues may exceed 2 slightly; the polynomial extension is intended
    f = (lambda x: evaluate(phi, x, extrapolate=True)) if isinstance(phi, ChebSeries) else phi

    def one(i):
        ev = sample_gue(n, seed, i).eigenvalues
        return math.fsum(np.asarray(f(ev), dtype=float))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(one, range(samples)))
    else:
        out = [one(i) for i in range(samples)]
    return np.array(out)


def estimate_fluctuation(
    phi: ChebSeries,
    n: int,
    samples: int,
    seed: int,
    *,
    threads: int = 1,
    label: str | None = None,
) -> FluctuationEstimate:
    """Unbiased sample variance of ``Tr phi(X)`` over ``samples`` GUE draws.

    ``phi`` is a series on ``(-2, 2)``.  Passing ``label="x"`` or ``"x^2"``
    attaches the exact finite-``n`` variance.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    values = trace_statistics(phi, n, samples, seed, threads)
    mean, var, se = _variance_with_jackknife(values)
    fn = label or f"{phi.basis.value}:{','.join(repr(float(c)) for c in phi.coeffs)}"
    return FluctuationEstimate(fn, n, samples, seed, mean, var, se, omega_variance(phi), exact_variance(fn, n))


def run_mc_fluctuations(
    phi: ChebSeries,
    n: int,
    samples: int,
    seed: int,
    *,
    threads: int = 1,
    label: str | None = None,
    z_max: float = Z_THRESHOLD,
) -> Report:
    """Report with ``lhs`` the estimate and ``rhs`` the exact finite-``n`` value (or the limit)."""
    est = estimate_fluctuation(phi, n, samples, seed, threads=threads, label=label)
    target = est.oracle if est.oracle is not None else est.limit
    return Report(
        "mc_fluctuations",
        est.variance,
        target,
        z_max * est.stderr,
        STATISTICAL,
        meta={
            "fn": est.fn,
            "n": n,
            "samples": samples,
            "seed": seed,
            "mean_trace": est.mean,
            "stderr": est.stderr,
            "limit": est.limit,
            "z": est.z,
            "oracle": est.oracle,
        },
    )


__all__ = [
    "FluctuationEstimate",
    "GueSample",
    "estimate_fluctuation",
    "exact_variance",
    "gue_matrix",
    "run_mc_fluctuations",
    "sample_gue",
    "trace_statistics",
]
