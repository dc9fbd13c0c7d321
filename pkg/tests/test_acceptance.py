"""Exit criteria, one test per criterion, each at its fixed tolerance.

Run with ``pytest tests/test_acceptance.py`` (add ``-rA`` for detail); a
PASS/FAIL line per criterion is printed in the terminal summary.
"""
import filecmp
import math

import numpy as np
import pytest

from squeezebell.bell import OptimizerConfig, bell_function, max_bell
from squeezebell.cli import main
from squeezebell.sweeps import (
    CONV_NBAR,
    CONV_R,
    CONV_S,
    OracleReport,
    RGrid,
    SweepSpec,
    convolution_checks,
    dominance_checks,
    find_tau_c,
    fock_checks,
    run_sweep,
    superposition_checks,
)
from squeezebell.phase_space import coeffs_at

pytestmark = pytest.mark.acceptance

REPORTED_LIMIT = 2.19055


def bmax(s, nbar, r):
    return max_bell(coeffs_at(s, nbar, r)).b_max


def test_criterion_1_large_squeezing_limit_and_monotonicity(criterion):
    at5 = bmax(5.0, 0.0, 0.0)
    grid = np.arange(0.0, 5.0 + 1e-9, 0.25)
    vals = np.array([bmax(s, 0.0, 0.0) for s in grid])
    steps = np.diff(vals)
    ok = abs(at5 - REPORTED_LIMIT) <= 1e-3 and np.all(steps > 0)
    criterion("01", "|B|_max(s=5) ~ 2.19055 and increasing in s", ok,
              f"b(5)={at5:.9f} |diff|={abs(at5 - REPORTED_LIMIT):.2e} min step={steps.min():.2e}")
    assert abs(at5 - REPORTED_LIMIT) <= 1e-3
    assert np.all(steps > 0)


def test_criterion_2a_vacuum_bath_endpoints(criterion):
    pts = [(0.0, 0.0, r) for r in (0.0, 0.25, 0.5, 0.75, 1.0)]
    pts += [(s, 0.0, 1.0) for s in (0.1, 0.3, 0.5, 1.0, 2.0, 5.0)]
    dev = max(abs(bmax(*p) - 2.0) for p in pts)
    criterion("02a", "|B|_max = 2 at s=0 (nbar=0) and at (nbar=0, r=1)", dev <= 1e-9, f"max |b-2|={dev:.2e}")
    assert dev <= 1e-9


def test_criterion_2b_zero_squeezing_any_bath(criterion):
    """As stated: s = 0 for *any* nbar and r. With nbar > 0 and r > 0 the vacuum
    input is heated into a product of single-mode Gaussians, maximised at the
    origin with |B|_max = 2 / (1 + 2 nbar r^2)^2 < 2, so this part cannot hold.
    Kept as written; it fails for every nbar > 0, r > 0 point."""
    pts = [(0.0, n, r) for n in (0.0, 0.5, 1.0, 2.0) for r in (0.0, 0.3, 0.7, 1.0)]
    devs = {p: abs(bmax(*p) - 2.0) for p in pts}
    worst = max(devs, key=devs.get)
    ok = devs[worst] <= 1e-9
    criterion("02b", "|B|_max = 2 at s=0 for any nbar, r", ok,
              f"worst at (s, nbar, r)={worst}: b={bmax(*worst):.6f} (closed form {2 / (1 + 2 * worst[1] * worst[2] ** 2) ** 2:.6f})")
    assert ok, f"|B|_max at s=0, nbar={worst[1]}, r={worst[2]} is {bmax(*worst):.6f}, not 2"


def test_criterion_3_all_pure_squeezed_states_nonlocal(criterion):
    grid = np.round(np.arange(0.05, 2.0 + 1e-9, 0.05), 10)
    vals = np.array([bmax(s, 0.0, 0.0) for s in grid])
    ok = bool(np.all(vals > 2.0))
    criterion("03", "|B|_max > 2 for s in 0.05..2.0 at r=0", ok, f"min={vals.min():.9f} at s={grid[np.argmin(vals)]}")
    assert ok


def test_criterion_4_figure_1_properties(criterion):
    nbars = (0.0, 0.5, 2.0)
    spec = SweepSpec(s_values=(0.3,), nbar_values=nbars, r_grid=RGrid(0.0, 1.0, 101))
    rows = run_sweep(spec)
    curves = {n: np.array([r.b_max for r in rows if r.nbar == n]) for n in nbars}
    r = np.linspace(0, 1, 101)
    inner = (r > 0) & (r < 1)

    ordered = bool(np.all(curves[0.0][inner] >= curves[0.5][inner]) and np.all(curves[0.5][inner] >= curves[2.0][inner]))
    vac = curves[0.0]
    imin = int(np.argmin(vac))
    dip = 0 < imin < 100 and vac[imin] < 2.0 and abs(vac[-1] - 2.0) <= 1e-6
    ends = max(abs(curves[n][-1] - 2 / (1 + 2 * n) ** 2) for n in nbars)
    ok = ordered and dip and ends <= 1e-6
    criterion("04", "nbar ordering of b(r), vacuum dip and recovery, terminal values", ok,
              f"ordered={ordered} min={vac[imin]:.6f}@r={r[imin]:.2f} end dev={ends:.1e}")
    assert ordered
    assert dip
    assert ends <= 1e-6


def test_criterion_5_figure_2_characteristic_times(criterion):
    vac = {s: find_tau_c(s, 0.0).r_c for s in (0.1, 0.5, 1.0)}
    hot = {s: find_tau_c(s, 1.0).r_c for s in (0.1, 0.5, 1.0)}
    ok_a = vac[1.0] < vac[0.5] < vac[0.1]
    ok_b = hot[0.5] > max(hot[0.1], hot[1.0])
    fmt = lambda d: " ".join(f"{k}:{v:.4f}" for k, v in d.items())  # noqa: E731
    criterion("05", "tau_c orderings (vacuum decreasing in s; nbar=1 peaked at s=0.5)", ok_a and ok_b,
              f"nbar=0 r_c[{fmt(vac)}] nbar=1 r_c[{fmt(hot)}]")
    assert ok_a
    assert ok_b


@pytest.mark.slow
def test_criterion_6_fock_oracle(criterion):
    rep = fock_checks(OracleReport(), s_values=(0.1, 0.5, 1.0), points=100, seed=2024, tol=1e-6)
    worst = max(c.worst for c in rep.checks)
    cut = max(c.params["cutoff"] for c in rep.checks)
    criterion("06", "Fock parity oracle vs closed-form W and B", rep.passed and cut <= 60,
              f"worst={worst:.2e} max cutoff={cut}")
    assert cut <= 60
    assert rep.passed, rep.failures()


@pytest.mark.slow
def test_criterion_7_convolution_oracle(criterion):
    rep = convolution_checks(OracleReport(), CONV_S, CONV_NBAR, CONV_R, points=5, seed=7, tol=1e-6)
    worst = max(c.worst for c in rep.checks)
    criterion("07", "quadrature of bath convolution vs closed form (27 configs x 5 points)", rep.passed,
              f"worst={worst:.2e} checks={len(rep.checks)}")
    assert len(rep.checks) == 27
    assert rep.passed, rep.failures()


def test_criterion_8_superposition(criterion):
    rep = superposition_checks(OracleReport(), s_values=(0.1, 0.3, 0.8), norm_tol=1e-6, amp_tol=1e-8)
    worst = {c.name: c.worst for c in rep.checks}
    criterion("08", "coherent superposition norm and |n,n> amplitudes", rep.passed,
              f"norm dev={max(c.worst for c in rep.checks if c.name.endswith('norm')):.1e} "
              f"amp dev={max(c.worst for c in rep.checks if c.name.endswith('amplitudes')):.1e}")
    assert rep.passed, worst


def test_criterion_9_dominance(criterion):
    rep = dominance_checks(OracleReport(), CONV_S, CONV_NBAR, CONV_R, samples=10_000, seed=9)
    criterion("09", "B <= B_m at 10^4 complex settings per config", rep.passed,
              f"configs={len(rep.checks)} worst excess={max(c.worst for c in rep.checks):.1e}")
    assert len(rep.checks) == 27
    assert rep.passed


def test_criterion_10_determinism(tmp_path, criterion):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        code = main(["sweep", "--s", "0.3", "--nbar", "0,0.5,2", "--r-grid", "0:1:101", "--seed", "11", "--out", str(p)])
        assert code == 0
    same = filecmp.cmp(*paths, shallow=False)
    criterion("10", "reference sweep CSV byte-identical across runs", same, f"bytes={paths[0].stat().st_size}")
    assert same
