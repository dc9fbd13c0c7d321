"""Number-basis oracle for the Wigner/parity correspondence.

The pure two-mode squeezed vacuum (phi = 0) has the Schmidt form
sum_n sech(s) tanh(s)^n |n, n>. Joint displaced-parity expectations are
computed directly in a truncated basis and, times 4/pi^2, must reproduce the
closed-form Wigner function. Nothing here touches ``phase_space`` beyond the
input spec.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .phase_space import SqueezeSpec

DEFAULT_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class FockAmplitudes:
    """Schmidt coefficients ``amps[n]`` of ``|n, n>`` up to ``cutoff``.

    ``deficit`` is the norm missing from the truncated state,
    ``1 - sum(amps**2) = tanh(s)^(2 (cutoff + 1))``.
    """

    cutoff: int
    amps: np.ndarray
    deficit: float
    tolerance_met: bool = True

    @property
    def norm2(self) -> float:
        return float(np.dot(self.amps, self.amps))


def select_cutoff(s: float, max_abs2: float = 0.0, tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest N with ``tanh(s)^(2(N+1)) / (1 - tanh(s)^2) < tol``, doubled
    when the largest displacement ``|alpha|^2`` exceeds ``N/4``."""
    t2 = math.tanh(s) ** 2
    if t2 == 0.0:
        n = 0
    else:
        # t2^(n+1) * cosh^2(s) < tol
        n = max(0, math.ceil((math.log(tol) - 2.0 * math.log(math.cosh(s))) / math.log(t2)) - 1)
        while t2 ** (n + 1) * math.cosh(s) ** 2 >= tol:
            n += 1
    if max_abs2 > n / 4:
        n *= 2
    return n


def tmss_amplitudes(squeeze: SqueezeSpec, cutoff: int, tol: float = DEFAULT_TAIL_TOL) -> FockAmplitudes:
    squeeze.require_real()
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    th = math.tanh(squeeze.s)
    amps = th ** np.arange(cutoff + 1) / math.cosh(squeeze.s)
    deficit = th ** (2 * (cutoff + 1))
    ok = deficit < tol
    if not ok:
        warnings.warn(
            f"cutoff {cutoff} leaves norm deficit {deficit:.3g} (> {tol:g}); raise the cutoff",
            RuntimeWarning,
            stacklevel=2,
        )
    return FockAmplitudes(cutoff=cutoff, amps=amps, deficit=deficit, tolerance_met=ok)


def displacement_matrix(alpha: complex, cutoff: int, backend=None) -> np.ndarray:
    """``<m|D(alpha)|n>`` for ``0 <= m, n <= cutoff``."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    return kernels.displacement(alpha, cutoff + 1, backend=backend)


def parity_operators(cutoff: int):
    """Even and odd photon-number projectors on the truncated space."""
    even = (np.arange(cutoff + 1) % 2 == 0).astype(float)
    return np.diag(even), np.diag(1.0 - even)


def displaced_parity(alpha: complex, cutoff: int, backend=None) -> np.ndarray:
    """``D(alpha) (O_e - O_o) D(alpha)^dag`` on the truncated space.

    Uses ``D(alpha) P D(-alpha) = D(2 alpha) P`` so every entry is exact
    rather than a product of two truncated matrices.
    """
    sign = 1.0 - 2.0 * (np.arange(cutoff + 1) % 2)
    return displacement_matrix(2.0 * complex(alpha), cutoff, backend=backend) * sign[None, :]


def joint_parity_expectation(state: FockAmplitudes, alpha: complex, beta: complex, backend=None) -> float:
    """Expectation of the joint displaced parity Pi_a(alpha) Pi_b(beta).

    With only ``|n, n>`` components this is ``c^T (Pi_a * Pi_b) c`` with an
    elementwise product.
    """
    pa = displaced_parity(alpha, state.cutoff, backend=backend)
    pb = displaced_parity(beta, state.cutoff, backend=backend)
    c = state.amps
    val = c @ (pa * pb) @ c
    return float(val.real)


def wigner_from_fock(state: FockAmplitudes, alpha: complex, beta: complex, backend=None) -> float:
    return 4.0 / math.pi ** 2 * joint_parity_expectation(state, alpha, beta, backend=backend)


def bell_from_fock(state: FockAmplitudes, alpha: complex, beta: complex, backend=None) -> float:
    j = lambda a, b: joint_parity_expectation(state, a, b, backend=backend)  # noqa: E731
    return j(0j, 0j) + j(alpha, 0j) + j(0j, beta) - j(alpha, beta)
