from __future__ import annotations

import io
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir_networks import C
from casimir_networks.errors import PoleError, TabulatedFormatError, UnsupportedAxisError
from casimir_networks.media import (
    Axis,
    Dielectric,
    Drude,
    FrequencyPoint,
    Plasma,
    Pol,
    Tabulated,
    TransverseMode,
    Vacuum,
    epsilon,
    kappa,
    load_tabulated,
)

WP = 2 * math.pi * C / 136e-9
GAMMA = 5.32e13


def imag_mode(xi, k, pol=Pol.TE):
    return TransverseMode(FrequencyPoint.imaginary(xi), k, pol)


def real_mode(omega, k, pol=Pol.TE):
    return TransverseMode(FrequencyPoint.real(omega), k, pol)


class TestPermittivity:
    def test_vacuum_is_one_on_both_axes(self):
        assert epsilon(Vacuum(), FrequencyPoint.imaginary(1e15)) == 1.0
        assert epsilon(Vacuum(), FrequencyPoint.real(1e15)) == 1.0

    def test_plasma_on_imaginary_axis_at_plasma_frequency(self):
        assert epsilon(Plasma(WP), FrequencyPoint.imaginary(WP)) == pytest.approx(2.0, rel=1e-15)

    def test_plasma_real_axis_vanishes_at_plasma_frequency(self):
        assert abs(epsilon(Plasma(WP), FrequencyPoint.real(WP))) < 1e-15

    def test_plasma_wavelength_round_trip(self):
        assert Plasma.from_wavelength(136e-9).plasma_wavelength == pytest.approx(136e-9, rel=1e-15)
        assert Plasma.from_wavelength(136e-9).omega_p == pytest.approx(1.385e16, rel=1e-3)

    @pytest.mark.parametrize("xi", [1e10, 1e13, 5.32e13, 1e15, 1e17])
    def test_drude_imaginary_axis_matches_mpmath(self, xi):
        mpmath.mp.dps = 40
        ref = 1 + mpmath.mpf(WP) ** 2 / (mpmath.mpf(xi) * (mpmath.mpf(xi) + mpmath.mpf(GAMMA)))
        got = epsilon(Drude(WP, GAMMA), FrequencyPoint.imaginary(xi))
        assert got == pytest.approx(float(ref), rel=1e-14)

    @pytest.mark.parametrize("omega", [1e13, 1e15, WP, 3e16])
    def test_drude_real_axis_matches_mpmath_and_is_absorbing(self, omega):
        mpmath.mp.dps = 40
        w = mpmath.mpf(omega)
        ref = 1 - mpmath.mpf(WP) ** 2 / (w * (w + 1j * mpmath.mpf(GAMMA)))
        got = complex(epsilon(Drude(WP, GAMMA), FrequencyPoint.real(omega)))
        assert got == pytest.approx(complex(ref), rel=1e-13)
        assert got.imag > 0

    def test_drude_tends_to_plasma_when_gamma_small(self):
        xi = 1e15
        d = epsilon(Drude(WP, 1e-6), FrequencyPoint.imaginary(xi))
        p = epsilon(Plasma(WP), FrequencyPoint.imaginary(xi))
        assert d == pytest.approx(p, rel=1e-14)

    @pytest.mark.parametrize("model", [Plasma(WP), Drude(WP, GAMMA)])
    @pytest.mark.parametrize("axis", [Axis.REAL, Axis.IMAGINARY])
    def test_pole_at_zero_frequency(self, model, axis):
        with pytest.raises(PoleError):
            epsilon(model, FrequencyPoint(axis, 0.0))

    def test_dielectric_is_constant(self):
        m = Dielectric(4.0)
        assert epsilon(m, FrequencyPoint.imaginary(0.0)) == 4.0
        assert epsilon(m, FrequencyPoint.real(1e15)) == 4.0

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            Dielectric(1.0)
        with pytest.raises(ValueError):
            Plasma(-1.0)
        with pytest.raises(ValueError):
            Drude(WP, 0.0)
        with pytest.raises(ValueError):
            FrequencyPoint.real(-1.0)

    @given(xi=st.floats(1e8, 1e18), lam=st.floats(5e-8, 5e-6), g=st.floats(1e10, 1e16))
    def test_imaginary_axis_permittivity_real_and_at_least_one(self, xi, lam, g):
        for m in (Plasma.from_wavelength(lam), Drude.from_wavelength(lam, g), Dielectric(2.5)):
            eps = epsilon(m, FrequencyPoint.imaginary(xi))
            assert np.isrealobj(eps) and eps >= 1

    def test_static_susceptibility_limits(self):
        # chi_xi2 stays finite at xi = 0: plasma keeps omega_p^2, Drude drops to 0
        assert Plasma(WP).chi_xi2(0.0) == WP**2
        assert Drude(WP, GAMMA).chi_xi2(0.0) == 0.0


class TestKappa:
    def test_imaginary_axis_formula(self):
        xi, k = 2e15, 3e6
        expected = math.sqrt(k**2 + epsilon(Plasma(WP), FrequencyPoint.imaginary(xi)) * xi**2 / C**2)
        assert kappa(Plasma(WP), imag_mode(xi, k)) == pytest.approx(expected, rel=1e-15)

    def test_plasma_static_limit(self):
        assert kappa(Plasma(WP), imag_mode(0.0, 0.0)) == pytest.approx(WP / C, rel=1e-15)

    def test_drude_static_limit_is_k(self):
        assert kappa(Drude(WP, GAMMA), imag_mode(0.0, 5e6)) == pytest.approx(5e6, rel=1e-15)

    def test_vacuum_ordinary_branch(self):
        omega, k = 3e15, 2e6
        kap = complex(kappa(Vacuum(), real_mode(omega, k)))
        assert kap.real == 0 and kap.imag < 0
        assert kap.imag == pytest.approx(-math.sqrt(omega**2 / C**2 - k**2), rel=1e-14)

    def test_vacuum_evanescent_branch(self):
        omega, k = 1e14, 2e7
        kap = complex(kappa(Vacuum(), real_mode(omega, k)))
        assert kap.imag == 0 and kap.real == pytest.approx(math.sqrt(k**2 - omega**2 / C**2), rel=1e-14)

    @given(omega=st.floats(1e12, 1e17), frac=st.floats(0, 3))
    def test_lossy_branch_has_positive_real_part(self, omega, frac):
        kap = complex(kappa(Drude(WP, GAMMA), real_mode(omega, frac * omega / C)))
        assert kap.real > 0
        assert kap**2 == pytest.approx((frac * omega / C) ** 2
                                       - complex(epsilon(Drude(WP, GAMMA), FrequencyPoint.real(omega)))
                                       * omega**2 / C**2, rel=1e-10)

    def test_sector_classification(self):
        assert real_mode(1e15, 1e6).sector == "ordinary"
        assert real_mode(1e14, 1e7).sector == "evanescent"
        assert imag_mode(1e14, 1e7).sector == "imaginary"
        assert list(real_mode(np.array([1e15, 1e14]), np.array([1e6, 1e7])).sector) == ["ordinary", "evanescent"]


class TestTabulated:
    TEXT = "# xi eps\n1e14 40\n1e15 5\n\n1e16 1.2\n"

    def test_parses_comments_and_blank_lines(self):
        m = load_tabulated(self.TEXT)
        assert m.xi == (1e14, 1e15, 1e16)
        assert epsilon(m, FrequencyPoint.imaginary(1e15)) == pytest.approx(5.0, rel=1e-12)

    def test_accepts_bytes_and_streams(self):
        assert load_tabulated(self.TEXT.encode()) == load_tabulated(io.StringIO(self.TEXT))

    def test_log_log_interpolation(self):
        m = load_tabulated(self.TEXT)
        xi = math.sqrt(1e14 * 1e15)
        assert epsilon(m, FrequencyPoint.imaginary(xi)) - 1 == pytest.approx(math.sqrt(39 * 4), rel=1e-12)

    def test_tails_follow_inverse_square(self):
        m = load_tabulated(self.TEXT)
        assert epsilon(m, FrequencyPoint.imaginary(1e13)) - 1 == pytest.approx(39 * 100, rel=1e-12)
        assert epsilon(m, FrequencyPoint.imaginary(1e17)) - 1 == pytest.approx(0.2 / 100, rel=1e-12)

    def test_real_axis_unsupported(self):
        with pytest.raises(UnsupportedAxisError):
            epsilon(load_tabulated(self.TEXT), FrequencyPoint.real(1e15))

    @pytest.mark.parametrize("text, line", [
        ("1e14 2\n1e15\n", 2),
        ("1e14 2\nabc 3\n", 2),
        ("1e14 2\n1e15 nan\n", 2),
        ("1e14 2\n1e14 3\n", 2),
        ("1e14 2\n# c\n1e15 0.5\n", 3),
    ])
    def test_format_errors_carry_line_numbers(self, text, line):
        with pytest.raises(TabulatedFormatError, match=f"line {line}"):
            load_tabulated(text)

    def test_too_few_samples(self):
        with pytest.raises(TabulatedFormatError):
            load_tabulated("1e14 2\n")

    def test_direct_construction_validates(self):
        with pytest.raises(TabulatedFormatError):
            Tabulated((1e15, 1e14), (2.0, 3.0))
