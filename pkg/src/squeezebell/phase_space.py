"""Closed-form Wigner dynamics of the two-mode squeezed vacuum.

Each mode is coupled to its own thermal bath with mean photon number
``nbar`` and the same decay rate. Time enters only through the decayed
fraction ``r = sqrt(1 - exp(-gamma*tau))`` and ``t = sqrt(1 - r**2)``.
The evolved state stays Gaussian,

    W(alpha, beta) = N * exp(-E (|alpha|^2 + |beta|^2) + F (alpha*beta + c.c.)),

so a :class:`GaussianCoeffs` triple describes it completely. Phase-space
points are plain Python/numpy complex numbers.
"""
import math
from dataclasses import dataclass

import numpy as np

S_MAX = 20.0


@dataclass(frozen=True)
class SqueezeSpec:
    """Squeezing parameter ``sigma = s * exp(-i*phi)`` of the input state."""

    s: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.s) and math.isfinite(self.phi)):
            raise ValueError(f"non-finite squeezing {self.s!r}, {self.phi!r}")
        if self.s < 0:
            raise ValueError(f"squeezing must be non-negative, got s={self.s}")
        if self.s > S_MAX:
            raise ValueError(f"squeezing s={self.s} exceeds the supported cap {S_MAX}")

    def require_real(self):
        if self.phi != 0.0:
            raise NotImplementedError("only phi = 0 (real squeezing parameter) is supported")


@dataclass(frozen=True)
class BathSpec:
    nbar: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.nbar) or self.nbar < 0:
            raise ValueError(f"mean thermal photon number must be finite and >= 0, got {self.nbar!r}")


@dataclass(frozen=True)
class ChannelTime:
    """Decayed fraction ``r`` in [0, 1]; ``t`` is derived from it."""

    r: float

    def __post_init__(self):
        if not math.isfinite(self.r) or not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r!r}")

    @property
    def t(self) -> float:
        return math.sqrt(1.0 - self.r * self.r)

    @classmethod
    def from_gamma_tau(cls, gamma_tau: float) -> "ChannelTime":
        if gamma_tau < 0:
            raise ValueError("gamma*tau must be non-negative")
        return cls(math.sqrt(-math.expm1(-gamma_tau)))

    @property
    def gamma_tau(self) -> float:
        """Inverse of :meth:`from_gamma_tau`; infinite at r = 1."""
        if self.r >= 1.0:
            return math.inf
        return -math.log1p(-self.r * self.r)


@dataclass(frozen=True)
class GaussianCoeffs:
    big_n: float
    e: float
    f: float
    d: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.big_n, self.e, self.f, self.d)):
            raise ValueError("non-finite Gaussian coefficients")
        # E > |F| is carried by big_n > 0; at s ~ 20 E and F round to the same double.
        if not (self.big_n > 0 and self.e >= abs(self.f) and self.e > 0):
            raise ValueError(f"E={self.e}, F={self.f}, N={self.big_n} do not describe an integrable Gaussian")

    @property
    def mixing(self) -> float:
        """E^2 - F^2 (= pi^2 N); 4 for a pure state, smaller once mixed."""
        return math.pi ** 2 * self.big_n

    @property
    def k(self) -> float:
        """Correlation ratio F/E in [0, 1)."""
        return self.f / self.e


def evolve_coeffs(squeeze: SqueezeSpec, bath: BathSpec, time: ChannelTime) -> GaussianCoeffs:
    """Gaussian coefficients of the state after the thermal channel.

    ``e``, ``f`` and ``d`` follow the convolution solution term by term. The
    prefactor is fixed by normalisation, ``N = (E^2 - F^2) / pi^2``; the
    difference of squares is formed from factored forms of ``E - F`` and
    ``E + F`` so it stays accurate when ``cosh(2s)`` is huge.
    """
    squeeze.require_real()
    s, r = squeeze.s, time.r
    r2 = r * r
    t2 = 1.0 - r2
    m = 1.0 + 2.0 * bath.nbar
    c2, s2 = math.cosh(2 * s), math.sinh(2 * s)

    d = t2 * t2 + 2.0 * r2 * t2 * m * c2 + r2 * r2 * m * m
    e = (2.0 * r2 * m + 2.0 * t2 * c2) / d
    f = 2.0 * t2 * s2 / d

    e_minus_f = 2.0 * (r2 * m + t2 * math.exp(-2 * s)) / d
    e_plus_f = 2.0 * (r2 * m + t2 * math.exp(2 * s)) / d
    big_n = e_minus_f * e_plus_f / math.pi ** 2
    return GaussianCoeffs(big_n=big_n, e=e, f=f, d=d)


def asymptotic_coeffs(bath: BathSpec) -> GaussianCoeffs:
    """Long-time limit: a product of two thermal states.

    The prefactor is ``4 / (pi^2 (1 + 2 nbar)^2)``, the value that normalises
    the exponent ``-2 (|alpha|^2 + |beta|^2) / (1 + 2 nbar)``. A printed form
    with ``(1 + nbar)^2`` in the denominator does not integrate to one and is
    not used.
    """
    return evolve_coeffs(SqueezeSpec(0.0), bath, ChannelTime(1.0))


def _cross(alpha, beta):
    # alpha*beta + conj(alpha*beta) = 2 (Re a Re b - Im a Im b)
    alpha = np.asarray(alpha)
    beta = np.asarray(beta)
    return 2.0 * (alpha.real * beta.real - alpha.imag * beta.imag)


def wigner_value(coeffs: GaussianCoeffs, alpha, beta):
    """Two-mode Wigner density; broadcasts over arrays of complex points."""
    aa = np.abs(alpha) ** 2
    bb = np.abs(beta) ** 2
    out = coeffs.big_n * np.exp(-coeffs.e * (aa + bb) + coeffs.f * _cross(alpha, beta))
    return out if np.ndim(out) else float(out)


def initial_wigner(squeeze: SqueezeSpec, alpha, beta):
    squeeze.require_real()
    s = squeeze.s
    aa = np.abs(alpha) ** 2
    bb = np.abs(beta) ** 2
    out = 4.0 / math.pi ** 2 * np.exp(-2.0 * math.cosh(2 * s) * (aa + bb) + 2.0 * math.sinh(2 * s) * _cross(alpha, beta))
    return out if np.ndim(out) else float(out)


def thermal_wigner(bath: BathSpec, zeta):
    """Single-mode thermal Wigner density, unit integral over the plane."""
    w = 1.0 + 2.0 * bath.nbar
    out = 2.0 / (math.pi * w) * np.exp(-2.0 * np.abs(zeta) ** 2 / w)
    return out if np.ndim(out) else float(out)


def coeffs_at(s: float, nbar: float, r: float) -> GaussianCoeffs:
    """Shorthand for ``evolve_coeffs`` from bare numbers."""
    return evolve_coeffs(SqueezeSpec(s), BathSpec(nbar), ChannelTime(r))
