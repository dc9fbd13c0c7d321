"""Displaced-parity Bell function and its maximisation.

B(alpha, beta) = (pi^2/4) [W(0,0) + W(alpha,0) + W(0,beta) - W(alpha,beta)]

For the Gaussian states here the subtracted term carries all the phase
dependence through cos(theta_alpha + theta_beta); setting cos = -1 gives
B_m(|alpha|, |beta|), an upper envelope of B. The maximiser works on B_m.
B is never negative for these states, so |B|_max = max B.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .phase_space import GaussianCoeffs, wigner_value


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the multi-start ascent.

    ``search_radius`` is measured in units of the Gaussian width
    ``1/sqrt(E)``, so the same radius works from the vacuum up to s = 20.
    ``oracle_grid_n`` > 0 also runs a coarse lattice check and stores the gap
    in :attr:`BellResult.oracle_gap`.
    """

    restarts: int = 16
    step_tolerance: float = 1e-10
    value_tolerance: float = 1e-10
    max_iterations: int = 10_000
    search_radius: float = 3.0
    rng_seed: int = 0
    oracle_grid_n: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not (self.step_tolerance > 0 and self.value_tolerance > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.search_radius > 0:
            raise ValueError("search_radius must be positive")
        if self.oracle_grid_n == 1 or self.oracle_grid_n < 0:
            raise ValueError("oracle_grid_n must be 0 (off) or >= 2")


@dataclass(frozen=True)
class BellResult:
    b_max: float
    arg_a: float
    arg_b: float
    restarts_used: int
    converged: bool
    oracle_gap: float = math.nan
    iterations: int = 0


@dataclass(frozen=True)
class DominanceReport:
    passed: bool
    worst_margin: float
    samples: int
    worst_alpha: complex
    worst_beta: complex


def bell_function(coeffs: GaussianCoeffs, alpha, beta):
    w00 = wigner_value(coeffs, 0j, 0j)
    out = (math.pi ** 2 / 4.0) * (
        w00 + wigner_value(coeffs, alpha, 0j) + wigner_value(coeffs, 0j, beta) - wigner_value(coeffs, alpha, beta)
    )
    return out if np.ndim(out) else float(out)


def _prefactor(coeffs: GaussianCoeffs) -> float:
    return math.pi ** 2 * coeffs.big_n / 4.0


def bell_m(coeffs: GaussianCoeffs, a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("B_m takes displacement magnitudes (a, b >= 0)")
    e, f = coeffs.e, coeffs.f
    out = _prefactor(coeffs) * (
        1.0 + np.exp(-e * a * a) + np.exp(-e * b * b) - np.exp(-e * (a * a + b * b) - 2.0 * f * a * b)
    )
    return out if np.ndim(out) else float(out)


def grid_oracle(coeffs: GaussianCoeffs, grid_max: float, grid_n: int, backend=None) -> float:
    """Best B_m on a ``grid_n x grid_n`` lattice over ``[0, grid_max]^2``.

    A lower bound on the true maximum, independent of the ascent.
    """
    if grid_n < 2 or not grid_max > 0:
        raise ValueError("need grid_n >= 2 and grid_max > 0")
    best, _, _ = kernels.grid_max(coeffs.e, coeffs.f, _prefactor(coeffs), grid_max, grid_n, backend=backend)
    return best


def max_bell(coeffs: GaussianCoeffs, cfg: OptimizerConfig | None = None, backend=None) -> BellResult:
    cfg = cfg or OptimizerConfig()
    scale = 1.0 / math.sqrt(coeffs.e)
    pref = _prefactor(coeffs)

    rng = np.random.default_rng(cfg.rng_seed)
    starts = rng.uniform(0.0, cfg.search_radius, size=(cfg.restarts, 2))
    u, v, g, iters, conv = kernels.ascend(
        coeffs.k, starts, cfg.step_tolerance, cfg.value_tolerance / max(pref, 1e-300), cfg.max_iterations,
        backend=backend,
    )

    # The origin is always a candidate: it is the maximiser whenever F = 0.
    lo = np.append(np.minimum(u, v), 0.0) * scale
    hi = np.append(np.maximum(u, v), 0.0) * scale
    vals = np.append(g, 2.0) * pref
    best = min(range(vals.size), key=lambda i: (-vals[i], lo[i], hi[i]))

    gap = math.nan
    if cfg.oracle_grid_n:
        gap = float(vals[best]) - grid_oracle(coeffs, cfg.search_radius * scale, cfg.oracle_grid_n, backend=backend)

    return BellResult(
        b_max=float(vals[best]),
        arg_a=float(lo[best]),
        arg_b=float(hi[best]),
        restarts_used=cfg.restarts,
        converged=bool(conv.any()),
        oracle_gap=gap,
        iterations=int(iters.sum()),
    )


def bell_m_dominates(coeffs: GaussianCoeffs, samples: int, rng_seed: int = 0, radius: float | None = None,
                     atol: float = 1e-12) -> DominanceReport:
    """Sample fully complex settings and check B <= B_m(|alpha|, |beta|).

    Magnitudes are drawn up to ``radius`` (default three Gaussian widths).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if radius is None:
        radius = 3.0 / math.sqrt(coeffs.e)
    rng = np.random.default_rng(rng_seed)
    mag = rng.uniform(0.0, radius, size=(2, samples))
    ph = rng.uniform(-math.pi, math.pi, size=(2, samples))
    alpha = mag[0] * np.exp(1j * ph[0])
    beta = mag[1] * np.exp(1j * ph[1])

    margin = bell_m(coeffs, mag[0], mag[1]) - bell_function(coeffs, alpha, beta)
    i = int(np.argmin(margin))
    return DominanceReport(
        passed=bool(margin[i] >= -atol),
        worst_margin=float(margin[i]),
        samples=samples,
        worst_alpha=complex(alpha[i]),
        worst_beta=complex(beta[i]),
    )
