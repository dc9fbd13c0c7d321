import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezebell.phase_space import (
    BathSpec,
    ChannelTime,
    GaussianCoeffs,
    SqueezeSpec,
    asymptotic_coeffs,
    coeffs_at,
    evolve_coeffs,
    initial_wigner,
    thermal_wigner,
    wigner_value,
)

PI2 = math.pi ** 2

squeezing = st.floats(0.0, 3.0)
nbars = st.floats(0.0, 5.0)
rs = st.floats(0.0, 1.0)


def test_vacuum_is_fixed_point_of_zero_temperature_channel():
    c = coeffs_at(0.0, 0.0, 0.37)
    assert c.e == pytest.approx(2.0, abs=1e-14)
    assert c.f == 0.0
    assert c.d == pytest.approx(1.0, abs=1e-14)
    assert c.big_n == pytest.approx(4 / PI2, abs=1e-14)


def test_r_zero_gives_initial_coefficients():
    c = coeffs_at(0.3, 0.0, 0.0)
    assert c.e == pytest.approx(2 * math.cosh(0.6), rel=1e-15)
    assert c.f == pytest.approx(2 * math.sinh(0.6), rel=1e-15)
    assert c.d == 1.0


def test_mid_channel_coefficients():
    # 40-digit mpmath evaluation of the closed form
    c = coeffs_at(0.3, 0.5, 0.5)
    assert c.e == pytest.approx(1.6326984020883596915, rel=1e-14)
    assert c.f == pytest.approx(0.56122530729412504311, rel=1e-14)
    assert c.d == pytest.approx(1.7015989136817007672, rel=1e-14)


def test_mid_channel_wigner_value():
    c = coeffs_at(0.3, 0.5, 0.5)
    assert wigner_value(c, 0.2 + 0.1j, -0.1 + 0.3j) == pytest.approx(0.17626600231839636852, rel=1e-13)


@pytest.mark.parametrize("s", [0.0, 0.3, 1.0, 5.0])
def test_peak_of_pure_state(s):
    assert wigner_value(coeffs_at(s, 0.0, 0.0), 0j, 0j) == pytest.approx(4 / PI2, rel=1e-12)


def test_vacuum_off_origin():
    assert wigner_value(coeffs_at(0, 0, 0), 1 + 0j, 0j) == pytest.approx(4 / PI2 * math.exp(-2), rel=1e-14)


def test_initial_wigner_cross_term_sign():
    sq = SqueezeSpec(0.5)
    # correlated real parts raise W, correlated imaginary parts lower it
    assert initial_wigner(sq, 0.3, 0.3) == pytest.approx(0.35501259566110914165, rel=1e-14)
    assert initial_wigner(sq, 0.3j, 0.3j) == pytest.approx(0.152323783540973704, rel=1e-14)


@given(squeezing, nbars, st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_initial_wigner_matches_r0_evolution(s, nbar, a, b):
    got = wigner_value(coeffs_at(s, nbar, 0.0), a, b)
    assert got == pytest.approx(initial_wigner(SqueezeSpec(s), a, b), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize(
    "nbar, zeta, expected",
    [
        (0.0, 0j, 2 / math.pi),
        (0.5, 0j, 1 / math.pi),
        (2.0, math.sqrt(2.5) + 0j, 2 / (5 * math.pi) * math.exp(-1)),
    ],
)
def test_thermal_wigner(nbar, zeta, expected):
    assert thermal_wigner(BathSpec(nbar), zeta) == pytest.approx(expected, rel=1e-14)


def test_thermal_wigner_integrates_to_one():
    x = np.linspace(-12, 12, 1201)
    h = x[1] - x[0]
    z = x[:, None] + 1j * x[None, :]
    assert thermal_wigner(BathSpec(2.0), z).sum() * h * h == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize(
    "nbar, e, big_n",
    [(0.0, 2.0, 4 / PI2), (1.0, 2 / 3, 4 / (9 * PI2))],
)
def test_asymptotic_coeffs(nbar, e, big_n):
    c = asymptotic_coeffs(BathSpec(nbar))
    assert c.e == pytest.approx(e, rel=1e-15)
    assert c.f == 0.0
    assert c.big_n == pytest.approx(big_n, rel=1e-14)


@given(squeezing, nbars)
def test_r1_endpoint_equals_asymptotic_exactly(s, nbar):
    assert coeffs_at(s, nbar, 1.0) == asymptotic_coeffs(BathSpec(nbar))


@given(st.floats(0.0, 1.5), nbars, rs)
def test_normalization_identity(s, nbar, r):
    c = coeffs_at(s, nbar, r)
    assert c.big_n * PI2 / ((c.e - c.f) * (c.e + c.f)) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0.0, 20.0), nbars, rs)
def test_normalization_equals_four_over_d(s, nbar, r):
    # (E^2 - F^2) D = 4 identically; holds where the direct difference cancels badly
    c = coeffs_at(s, nbar, r)
    assert c.big_n * PI2 * c.d == pytest.approx(4.0, rel=1e-12)


def test_numerical_normalization():
    c = coeffs_at(0.4, 0.5, 0.6)
    x = np.linspace(-4, 4, 41)
    h = x[1] - x[0]
    ax, ay, bx, by = np.meshgrid(x, x, x, x, indexing="ij", sparse=True)
    total = wigner_value(c, ax + 1j * ay, bx + 1j * by).sum() * h ** 4
    assert total == pytest.approx(1.0, abs=1e-8)


@given(squeezing, nbars)
def test_r0_independent_of_bath(s, nbar):
    c = coeffs_at(s, nbar, 0.0)
    assert c.e == pytest.approx(2 * math.cosh(2 * s), rel=1e-12)
    assert c.f == pytest.approx(2 * math.sinh(2 * s), rel=1e-12, abs=1e-300)


def test_factorization_at_zero_squeezing():
    rng = np.random.default_rng(4)
    for nbar, r in [(0.0, 0.3), (0.5, 0.7), (2.0, 0.5)]:
        c = coeffs_at(0.0, nbar, r)
        assert c.f == 0.0
        a = rng.normal(size=100) + 1j * rng.normal(size=100)
        b = rng.normal(size=100) + 1j * rng.normal(size=100)
        single = math.sqrt(c.big_n) * np.exp(-c.e * np.abs(a) ** 2), math.sqrt(c.big_n) * np.exp(-c.e * np.abs(b) ** 2)
        np.testing.assert_allclose(wigner_value(c, a, b), single[0] * single[1], rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("s", [0.1, 0.5, 1.0, 3.0])
@pytest.mark.parametrize("nbar", [0.0, 0.5, 2.0])
def test_purity_bounded_by_pure_state(s, nbar):
    mix = np.array([coeffs_at(s, nbar, r).mixing for r in np.linspace(0, 1, 2001)])
    assert np.all(mix <= 4.0 * (1 + 1e-12))
    assert mix[0] == pytest.approx(4.0)
    assert mix[-1] == pytest.approx(4.0 / (1 + 2 * nbar) ** 2)


@pytest.mark.parametrize("s", [0.3, 1.0])
def test_zero_temperature_purity_dips_and_recovers(s):
    # not monotone: the vacuum bath drives the state back to a pure vacuum
    mix = np.array([coeffs_at(s, 0.0, r).mixing for r in np.linspace(0, 1, 201)])
    assert mix.min() < 4.0 - 1e-3
    assert mix[-1] == pytest.approx(4.0)


@pytest.mark.parametrize("r", [0.2, 0.5, 0.9])
def test_purity_decreases_with_temperature(r):
    mix = [coeffs_at(0.7, nbar, r).mixing for nbar in (0.0, 0.5, 1.0, 2.0)]
    assert np.all(np.diff(mix) < 0)


def test_f_nonnegative_and_e_dominates():
    for s in [0.0, 0.2, 2.0]:
        for r in np.linspace(0, 1, 11):
            c = coeffs_at(s, 1.0, r)
            assert c.f >= 0 and c.e > c.f


def test_s_cap_is_still_usable():
    c = coeffs_at(20.0, 0.0, 0.0)
    assert c.big_n == pytest.approx(4 / PI2, rel=1e-12)
    assert c.k == pytest.approx(1.0)


class TestValidation:
    def test_phi_rejected(self):
        with pytest.raises(NotImplementedError):
            evolve_coeffs(SqueezeSpec(0.3, phi=0.1), BathSpec(0), ChannelTime(0.5))
        with pytest.raises(NotImplementedError):
            initial_wigner(SqueezeSpec(0.3, phi=0.1), 0j, 0j)

    @pytest.mark.parametrize("bad", [-0.1, math.nan, math.inf, 20.5])
    def test_bad_squeezing(self, bad):
        with pytest.raises(ValueError):
            SqueezeSpec(bad)

    @pytest.mark.parametrize("bad", [-1.0, math.nan])
    def test_bad_bath(self, bad):
        with pytest.raises(ValueError):
            BathSpec(bad)

    @pytest.mark.parametrize("bad", [-0.01, 1.01, math.nan])
    def test_bad_time(self, bad):
        with pytest.raises(ValueError):
            ChannelTime(bad)

    def test_coeffs_must_be_integrable(self):
        with pytest.raises(ValueError):
            GaussianCoeffs(big_n=0.1, e=1.0, f=2.0, d=1.0)


def test_channel_time_conversion_round_trip():
    t = ChannelTime.from_gamma_tau(0.7)
    assert t.r == pytest.approx(math.sqrt(1 - math.exp(-0.7)))
    assert t.t == pytest.approx(math.sqrt(math.exp(-0.7)))
    assert t.gamma_tau == pytest.approx(0.7)
    assert ChannelTime(1.0).gamma_tau == math.inf
