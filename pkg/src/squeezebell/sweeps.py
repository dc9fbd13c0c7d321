"""Parameter sweeps over (s, nbar, r), characteristic times, oracle runs."""
import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bell import OptimizerConfig, bell_function, bell_m_dominates, max_bell
from .fock import bell_from_fock, select_cutoff, tmss_amplitudes, wigner_from_fock
from .phase_space import BathSpec, ChannelTime, SqueezeSpec, coeffs_at, initial_wigner, wigner_value
from .quadrature import QuadratureSpec, WeightFunction, convolve_numeric, superposition_norm, superposition_wigner_check

CSV_COLUMNS = ("s", "nbar", "r", "b_max", "arg_a", "arg_b", "converged")
LOCAL_BOUND = 2.0
ROUNDOFF = 1e-12  # |B|_max at a flat maximum can land a few ulps above 2


@dataclass(frozen=True)
class RGrid:
    start: float = 0.0
    stop: float = 1.0
    count: int = 101

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("r grid needs count >= 2")
        if not (0.0 <= self.start <= 1.0 and 0.0 <= self.stop <= 1.0):
            raise ValueError("r grid must lie within [0, 1]")

    @classmethod
    def parse(cls, text: str) -> "RGrid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"r grid must be start:stop:count, got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    s_values: tuple
    nbar_values: tuple
    r_grid: RGrid = RGrid()
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    emit_plot_script: bool = False

    def __post_init__(self):
        if not self.s_values or not self.nbar_values:
            raise ValueError("s_values and nbar_values must be non-empty")
        for s in self.s_values:
            SqueezeSpec(s)
        for n in self.nbar_values:
            BathSpec(n)


@dataclass(frozen=True)
class SweepRow:
    s: float
    nbar: float
    r: float
    b_max: float
    arg_a: float
    arg_b: float
    converged: bool

    @property
    def gamma_tau(self) -> float:
        return ChannelTime(self.r).gamma_tau


def _point(args):
    s, nbar, r, cfg = args
    res = max_bell(coeffs_at(s, nbar, r), cfg)
    return SweepRow(s, nbar, r, res.b_max, res.arg_a, res.arg_b, res.converged)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list:
    """One row per lattice point, ordered by s, then nbar, then r.

    Every point uses the same optimizer seed, so output depends only on the
    spec and never on scheduling.
    """
    jobs = [
        (float(s), float(n), float(r), spec.optimizer)
        for s in sorted(spec.s_values)
        for n in sorted(spec.nbar_values)
        for r in spec.r_grid.values()
    ]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_point, jobs, chunksize=16))
    else:
        rows = [_point(j) for j in jobs]
    return sorted(rows, key=lambda row: (row.s, row.nbar, row.r))


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    return format(float(x), ".17g")


def rows_to_csv(rows, gamma_tau: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS + (("gamma_tau",) if gamma_tau else ()))
    for row in rows:
        vals = [row.s, row.nbar, row.r, row.b_max, row.arg_a, row.arg_b, row.converged]
        if gamma_tau:
            vals.append(row.gamma_tau)
        w.writerow([_fmt(v) for v in vals])
    return buf.getvalue()


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        return [
            SweepRow(float(d["s"]), float(d["nbar"]), float(d["r"]), float(d["b_max"]),
                     float(d["arg_a"]), float(d["arg_b"]), d["converged"] == "1")
            for d in csv.DictReader(fh)
        ]


PLOT_TEMPLATE = '''\
"""Plot |B|_max against r from a squeezebell sweep CSV."""
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv_path!r}
curves = defaultdict(list)
with open(path, newline="") as fh:
    for row in csv.DictReader(fh):
        curves[(float(row["s"]), float(row["nbar"]))].append((float(row["r"]), float(row["b_max"])))

fig, ax = plt.subplots(figsize=(6, 4))
for (s, nbar), pts in sorted(curves.items()):
    pts.sort()
    ax.plot([p[0] for p in pts], [p[1] for p in pts], label=f"s={{s:g}}, nbar={{nbar:g}}")
ax.axhline(2.0, color="grey", lw=0.8, ls=":")
ax.set_xlabel("r = sqrt(1 - exp(-gamma tau))")
ax.set_ylabel("|B|_max")
ax.legend()
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def plot_script(csv_path: str) -> str:
    return PLOT_TEMPLATE.format(csv_path=str(csv_path))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TauC:
    """First crossing of |B|_max = 2; ``r_c`` is nan when there is none."""

    s: float
    nbar: float
    r_c: float
    crossed: bool

    @property
    def gamma_tau(self) -> float:
        return ChannelTime(self.r_c).gamma_tau if self.crossed else math.nan


def find_tau_c(s: float, nbar: float, tol: float = 1e-6, cfg: OptimizerConfig | None = None,
               scan_step: float = 1e-3) -> TauC:
    """Scan r upward at ``scan_step`` for the first point with |B|_max <= 2,
    then bisect the bracketing interval down to ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    cfg = cfg or OptimizerConfig()

    def b(r):
        return max_bell(coeffs_at(s, nbar, r), cfg).b_max

    if not b(0.0) > LOCAL_BOUND + ROUNDOFF:
        raise ValueError(f"|B|_max at r=0 is not above 2 for s={s}; nothing to lose")

    n_scan = max(2, int(round(1.0 / scan_step)) + 1)
    grid = np.linspace(0.0, 1.0, n_scan)
    lo = None
    for prev, r in zip(grid[:-1], grid[1:]):
        if b(r) <= LOCAL_BOUND:
            lo, hi = float(prev), float(r)
            break
    if lo is None:
        return TauC(s, nbar, math.nan, False)

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if b(mid) <= LOCAL_BOUND:
            hi = mid
        else:
            lo = mid
    return TauC(s, nbar, float(0.5 * (lo + hi)), True)


# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    params: dict = field(default_factory=dict)


@dataclass
class OracleReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, worst, tolerance, **params):
        self.checks.append(CheckResult(name, bool(worst <= tolerance), float(worst), tolerance, params))

    def failures(self):
        return [c for c in self.checks if not c.passed]


FOCK_S = (0.1, 0.5, 1.0)
CONV_S = (0.1, 0.5, 1.0)
CONV_NBAR = (0.0, 0.5, 2.0)
CONV_R = (0.3, 0.5, 0.7)
SUPER_S = (0.1, 0.3, 0.8)
SCOPES = ("fock", "convolution", "superposition", "all")


def _random_points(rng, n, radius):
    mag = radius * np.sqrt(rng.uniform(0.0, 1.0, size=(2, n)))
    ph = rng.uniform(-math.pi, math.pi, size=(2, n))
    return mag * np.exp(1j * ph)


def fock_checks(report, s_values=FOCK_S, points=100, cutoff=None, seed=0, radius=1.5, tol=1e-6):
    rng = np.random.default_rng(seed)
    for s in s_values:
        sq = SqueezeSpec(s)
        n = cutoff if cutoff is not None else select_cutoff(s, radius ** 2)
        state = tmss_amplitudes(sq, n)
        pts = _random_points(rng, points, radius)
        dev = max(abs(wigner_from_fock(state, a, b) - initial_wigner(sq, a, b)) for a, b in pts.T)
        report.add("fock.wigner_parity", dev, tol, s=s, cutoff=n, points=points)

        res = max_bell(coeffs_at(s, 0.0, 0.0))
        a, b = res.arg_a, -res.arg_b  # cos(theta) = -1 section
        dev = abs(bell_from_fock(state, a, b) - bell_function(coeffs_at(s, 0.0, 0.0), a, b))
        report.add("fock.bell_at_argmax", dev, tol, s=s, cutoff=n, a=a, b=b)
    return report


def convolution_checks(report, s_values=CONV_S, nbar_values=CONV_NBAR, r_values=CONV_R, points=5,
                       quad=QuadratureSpec(), seed=0, radius=1.0, tol=1e-6):
    rng = np.random.default_rng(seed)
    for s in s_values:
        for nbar in nbar_values:
            for r in r_values:
                coeffs = coeffs_at(s, nbar, r)
                pts = _random_points(rng, points, radius)
                dev = max(
                    abs(convolve_numeric(SqueezeSpec(s), BathSpec(nbar), ChannelTime(r), a, b, quad)
                        - wigner_value(coeffs, a, b))
                    for a, b in pts.T
                )
                report.add("convolution.closed_form", dev, tol, s=s, nbar=nbar, r=r, points=points)
    return report


def superposition_checks(report, s_values=SUPER_S, quad=QuadratureSpec(), norm_tol=1e-6, amp_tol=1e-8):
    for s in s_values:
        w = WeightFunction(s)
        report.add("superposition.norm", abs(superposition_norm(w, quad) - 1.0), norm_tol, s=s)
        report.add("superposition.amplitudes", superposition_wigner_check(w, quad), amp_tol, s=s)
    return report


def dominance_checks(report, s_values=CONV_S, nbar_values=CONV_NBAR, r_values=CONV_R, samples=10_000, seed=0):
    for s in s_values:
        for nbar in nbar_values:
            for r in r_values:
                rep = bell_m_dominates(coeffs_at(s, nbar, r), samples, seed)
                report.add("dominance.b_le_bm", max(0.0, -rep.worst_margin), 1e-12, s=s, nbar=nbar, r=r)
    return report


def run_oracles(scope: str = "all", s_values=None, r_values=None, cutoff=None, quad=QuadratureSpec()) -> OracleReport:
    """Drive the independent oracles; ``s_values``/``r_values`` narrow the defaults."""
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}, got {scope!r}")
    report = OracleReport()
    if scope in ("fock", "all"):
        fock_checks(report, s_values=s_values or FOCK_S, cutoff=cutoff)
    if scope in ("convolution", "all"):
        convolution_checks(report, s_values=s_values or CONV_S, r_values=r_values or CONV_R, quad=quad)
    if scope in ("superposition", "all"):
        sv = tuple(s for s in (s_values or SUPER_S) if s > 0)
        superposition_checks(report, s_values=sv, quad=quad)
    return report


def with_optimizer(spec: SweepSpec, **changes) -> SweepSpec:
    return replace(spec, optimizer=replace(spec.optimizer, **changes))
