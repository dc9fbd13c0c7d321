"""Gauss-Hermite checks of the channel convolution and of the coherent-state
superposition form of the squeezed vacuum.

Every integrand here is a Gaussian envelope times something smooth. The
nodes are mapped through the envelope's eigenbasis (``gauss_hermite_nd``),
and the integrand itself is always evaluated literally at the nodes.
"""
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .phase_space import BathSpec, ChannelTime, SqueezeSpec, initial_wigner, thermal_wigner

ENDPOINT_GUARD = 1e-2


class QuadratureError(RuntimeError):
    """Raised when a node-doubling refinement does not agree."""


@dataclass(frozen=True)
class QuadratureSpec:
    nodes_per_axis: int = 32
    rescale: float = 1.0

    def __post_init__(self):
        if self.nodes_per_axis < 2:
            raise ValueError("nodes_per_axis must be >= 2")
        if not self.rescale > 0:
            raise ValueError("rescale must be positive")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(2 * self.nodes_per_axis, self.rescale)


@dataclass(frozen=True)
class WeightFunction:
    """Gaussian weight of the coherent-state superposition, defined for s > 0."""

    s: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0):
            raise ValueError("the superposition weight needs s > 0 (the vacuum needs no superposition)")

    @property
    def normalization(self) -> float:
        return 1.0 / (math.pi * math.sinh(self.s))

    @property
    def exponent_coef(self) -> float:
        th = math.tanh(self.s)
        return (1.0 - th) / th


def gauss_hermite_nd(func, quad_form, center=None, spec: QuadratureSpec = QuadratureSpec()):
    """Integrate ``func`` over R^d, d = len(quad_form).

    ``quad_form`` is the positive-definite matrix Q of the envelope
    ``exp(-(x-c)^T Q (x-c))``. ``func`` takes an ``(m, d)`` array of points and
    returns ``m`` values. Points are generated one first-axis slice at a time
    to keep memory at ``n**(d-1)``.
    """
    q = np.asarray(quad_form, dtype=float)
    d = q.shape[0]
    center = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    lam, vec = np.linalg.eigh(q)
    if lam.min() <= 0:
        raise ValueError("envelope matrix must be positive definite")
    jac = vec * (spec.rescale / np.sqrt(lam))  # x = c + jac @ y
    det = abs(np.linalg.det(jac))

    y, w = hermgauss(spec.nodes_per_axis)
    # fold exp(+|y|^2) into the weights per axis: w_i e^{y_i^2}
    we = w * np.exp(y * y)
    rest = np.stack(np.meshgrid(*([y] * (d - 1)), indexing="ij"), axis=-1).reshape(-1, d - 1)
    rest_w = np.ones(len(rest))
    for axis in range(d - 1):
        idx = np.unravel_index(np.arange(len(rest)), [len(y)] * (d - 1))[axis]
        rest_w = rest_w * we[idx]

    total = 0.0
    for yi, wi in zip(y, we):
        pts = np.empty((len(rest), d))
        pts[:, 0] = yi
        pts[:, 1:] = rest
        x = center + pts @ jac.T
        total += wi * float(np.dot(rest_w, func(x)))
    return det * total


def _signal_matrix(s: float) -> np.ndarray:
    """Real 4x4 form M with Wigner exponent -w^T M w, w = (Re a, Im a, Re b, Im b)."""
    c, sh = 2.0 * math.cosh(2 * s), 2.0 * math.sinh(2 * s)
    return np.array([
        [c, 0.0, -sh, 0.0],
        [0.0, c, 0.0, sh],
        [-sh, 0.0, c, 0.0],
        [0.0, sh, 0.0, c],
    ])


def convolve_numeric(squeeze: SqueezeSpec, bath: BathSpec, time: ChannelTime, alpha: complex, beta: complex,
                     quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Evolved Wigner value by direct quadrature of the bath convolution

        W(alpha, beta) = t^-4 * int d2z d2e  W_th(z) W_th(e) W_0((alpha - r z)/t, (beta - r e)/t).
    """
    squeeze.require_real()
    r, t = time.r, time.t
    if r < ENDPOINT_GUARD or t < ENDPOINT_GUARD:
        raise ValueError(
            f"r={r} is too close to an endpoint for quadrature; use the closed form (r=0: initial_wigner, r=1: asymptotic_coeffs)"
        )
    alpha, beta = complex(alpha), complex(beta)
    p = np.array([alpha.real, alpha.imag, beta.real, beta.imag])

    # envelope: thermal part c_th |z|^2 plus the signal form seen through z -> (p - r z)/t
    m = _signal_matrix(squeeze.s)
    c_th = 2.0 / (1.0 + 2.0 * bath.nbar)
    q = c_th * np.eye(4) + (r * r / (t * t)) * m
    center = np.linalg.solve(q, (r / (t * t)) * (m @ p))

    def integrand(z):
        zeta = z[:, 0] + 1j * z[:, 1]
        eta = z[:, 2] + 1j * z[:, 3]
        return (
            thermal_wigner(bath, zeta)
            * thermal_wigner(bath, eta)
            * initial_wigner(squeeze, (alpha - r * zeta) / t, (beta - r * eta) / t)
        )

    return gauss_hermite_nd(integrand, q, center, quad) / t ** 4


def weight_value(w: WeightFunction, alpha):
    out = w.normalization * np.exp(-w.exponent_coef * np.abs(alpha) ** 2)
    return out if np.ndim(out) else float(out)


def superposition_norm(w: WeightFunction, quad: QuadratureSpec = QuadratureSpec(), check_refinement: float | None = None) -> float:
    """<Psi|Psi> for Psi = int d2a G(a) |a, a*>, via the two-mode coherent overlap

        <a, a*|b, b*> = exp(-|a|^2 - |b|^2 + 2 Re(a* b)).

    With ``check_refinement`` set, the node count is doubled and a
    :class:`QuadratureError` raised if the two results differ by more.
    """
    c = w.exponent_coef

    def integrand(x):
        a = x[:, 0] + 1j * x[:, 1]
        b = x[:, 2] + 1j * x[:, 3]
        overlap = np.exp(-np.abs(a) ** 2 - np.abs(b) ** 2 + 2.0 * (np.conj(a) * b).real)
        return weight_value(w, a) * weight_value(w, b) * overlap

    q = np.array([
        [c + 1.0, 0.0, -1.0, 0.0],
        [0.0, c + 1.0, 0.0, -1.0],
        [-1.0, 0.0, c + 1.0, 0.0],
        [0.0, -1.0, 0.0, c + 1.0],
    ])
    val = gauss_hermite_nd(integrand, q, spec=quad)
    if check_refinement is not None:
        fine = gauss_hermite_nd(integrand, q, spec=quad.doubled())
        if abs(fine - val) > check_refinement:
            raise QuadratureError(f"norm changed by {abs(fine - val):.3g} under node doubling")
    return val


def superposition_amplitudes(w: WeightFunction, nmax: int = 2, quad: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """<n, n|Psi> for n = 0..nmax, from <n, n|a, a*> = exp(-|a|^2) |a|^(2n) / n!."""
    env = (w.exponent_coef + 1.0) * np.eye(2)
    out = np.empty(nmax + 1)
    for n in range(nmax + 1):
        def integrand(x, n=n):
            a2 = x[:, 0] ** 2 + x[:, 1] ** 2
            return weight_value(w, x[:, 0] + 1j * x[:, 1]) * np.exp(-a2) * a2 ** n / math.factorial(n)

        out[n] = gauss_hermite_nd(integrand, env, spec=quad)
    return out


def superposition_wigner_check(w: WeightFunction, quad: QuadratureSpec = QuadratureSpec(), nmax: int = 2) -> float:
    """Worst deviation of the superposition's |n, n> amplitudes from
    ``tanh(s)^n sech(s)`` over n <= nmax."""
    got = superposition_amplitudes(w, nmax, quad)
    want = math.tanh(w.s) ** np.arange(nmax + 1) / math.cosh(w.s)
    return float(np.max(np.abs(got - want)))
