import math

import numpy as np
import numpy.polynomial.hermite as npherm
import pytest

from macromech.cubic import CubicParams, conditional_state
from macromech.macroscopicity import (
    GaussianState,
    InvalidCovariance,
    cat_equivalent_amplitude,
    char_function,
    eq9_closed_form,
    measure_I_coherent_exact,
    measure_I_gaussian,
    measure_I_quadrature,
    occupation_from_temperature,
    temperature_from_occupation,
    thermal_average_char,
    thermal_mean_phonon,
)
from macromech.states import (
    CoherentSuperposition,
    FockVector,
    SqueezedSuperposition,
    displace,
    fock_expansion,
    make_cat,
    mean_annihilation,
    mean_phonon,
    normalize,
)

PI = math.pi


def random_superposition(rng, n_terms=None, reach=4.0):
    n = n_terms or int(rng.integers(2, 5))
    w = rng.normal(size=n) + 1j * rng.normal(size=n)
    g = (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)) * (reach / math.sqrt(2))
    return normalize(CoherentSuperposition(w, g))


class TestCharFunction:
    def test_unit_at_origin(self):
        for state in (make_cat(1.1), normalize(FockVector(np.asarray([0.6, 0.8j])))):
            chi = char_function(state)
            assert chi(np.asarray([0j]))[0] == pytest.approx(1.0, abs=1e-12)

    def test_coherent_modulus(self):
        st = normalize(CoherentSuperposition(np.asarray([1.0 + 0j]), np.asarray([1.4 - 0.2j])))
        chi = char_function(st)
        pts = np.asarray([0.3 + 0.1j, -1.0 + 2.0j, 2.5j])
        assert np.abs(np.abs(chi(pts)) - np.exp(-np.abs(pts) ** 2 / 2)).max() < 1e-12

    def test_fock_one_laguerre(self):
        st = normalize(FockVector(np.asarray([0.0, 1.0], complex)))
        chi = char_function(st)
        pts = np.asarray([0.2, 0.9 + 0.4j, 1.5j, 2.0 - 1.0j])
        expect = (1.0 - np.abs(pts) ** 2) * np.exp(-np.abs(pts) ** 2 / 2)
        assert np.abs(chi(pts) - expect).max() < 1e-12

    def test_coherent_vs_fock_route(self):
        st = make_cat(1.2)
        chi_c = char_function(st)
        chi_f = char_function(fock_expansion(st))
        pts = np.asarray([0.1 + 0.2j, 1.0 - 0.8j, 2.2 + 0.4j, 3.0j])
        assert np.abs(chi_c(pts) - chi_f(pts)).max() < 1e-10

    def test_squeezed_vs_fock_route(self):
        rng = np.random.default_rng(21)
        labels = np.asarray([0.3 * np.exp(0.9j), 1.1 * np.exp(-2.0j)])
        st = normalize(SqueezedSuperposition(rng.normal(size=2) + 1j * rng.normal(size=2), labels))
        chi_g = char_function(st)
        chi_f = char_function(fock_expansion(st))
        pts = (rng.normal(size=10) + 1j * rng.normal(size=10)) * 0.9
        assert np.abs(chi_g(pts) - chi_f(pts)).max() < 1e-9

    def test_requires_normalized(self):
        with pytest.raises(ValueError):
            char_function(CoherentSuperposition(np.asarray([1.0 + 0j]), np.asarray([1.0 + 0j])))


class TestQuadratureMeasure:
    def test_coherent_state_zero(self):
        st = normalize(CoherentSuperposition(np.asarray([1.0 + 0j]), np.asarray([0.9 + 0.6j])))
        res = measure_I_quadrature(char_function(st), rel_tol=1e-8, abs_tol=1e-8)
        assert res.I == 0.0
        assert abs(res.raw_integral) < 1e-7

    def test_thermal_raw_value(self):
        # vacuum conditional chi damped by nbar = 1 is the thermal state:
        # raw = (1 - s)/(2 s^2) with s = 3
        vac = normalize(CoherentSuperposition(np.asarray([1.0 + 0j]), np.asarray([0j])))
        chi = thermal_average_char(char_function(vac), 1.0)
        res = measure_I_quadrature(chi, rel_tol=1e-8, abs_tol=1e-9)
        assert res.raw_integral == pytest.approx(-1.0 / 9.0, abs=1e-7)
        assert res.I == 0.0

    def test_headline_conditional_state(self):
        # the k = 1 working point reproduces the quoted measure of about 1.49
        st = conditional_state(CubicParams(k=1.0, t=PI, alpha=0.8, beta0=2.0, x=0.0))
        res = measure_I_quadrature(char_function(st), rel_tol=1e-6, abs_tol=1e-6)
        assert res.I == pytest.approx(1.49, abs=0.03)
        assert res.I == pytest.approx(1.486615216512, abs=1e-6)

    def test_error_estimate_propagates(self):
        st = make_cat(1.0)
        res = measure_I_quadrature(char_function(st), rel_tol=1e-6, abs_tol=1e-6)
        assert 0.0 <= res.error_estimate <= 1e-5


class TestExactCoherentMeasure:
    def test_single_term_zero(self):
        st = normalize(CoherentSuperposition(np.asarray([1.0 + 0j]), np.asarray([2.0 - 1.0j])))
        res = measure_I_coherent_exact(st)
        assert abs(res.raw_integral) < 1e-12

    def test_cat_saturates_bound(self):
        res = measure_I_coherent_exact(make_cat(1.27))
        assert res.I == pytest.approx(1.27**2 * math.tanh(1.27**2), rel=1e-12)
        assert res.I == pytest.approx(res.M, abs=1e-12)
        assert res.I == pytest.approx(1.49, abs=0.001)

    def test_agrees_with_quadrature_random(self):
        rng = np.random.default_rng(33)
        for _ in range(20):
            st = random_superposition(rng)
            exact = measure_I_coherent_exact(st)
            quad = measure_I_quadrature(char_function(st), rel_tol=1e-7, abs_tol=1e-7)
            tol = max(1e-6, quad.error_estimate)
            assert abs(exact.raw_integral - quad.raw_integral) < tol

    def test_pure_state_identity(self):
        # independent identity: raw = M - |<b>|^2 for pure states
        rng = np.random.default_rng(44)
        for _ in range(10):
            st = random_superposition(rng)
            res = measure_I_coherent_exact(st)
            expect = mean_phonon(st) - abs(mean_annihilation(st)) ** 2
            assert res.raw_integral == pytest.approx(expect, abs=1e-9)


class TestThermalIdentities:
    @pytest.mark.parametrize(
        "k,nbar,x", [(0.7, 0.05, 0.0), (0.4, 0.1, 0.5), (1.0, 0.02, 0.0)]
    )
    def test_char_closed_form_vs_beta_quadrature(self, k, nbar, x):
        # oracle: Gauss-Hermite average of displaced-state characteristic
        # functions over the centered thermal distribution
        st = conditional_state(CubicParams(k=k, t=PI, alpha=0.8, beta0=0.0, x=x))
        chi0 = char_function(st)
        pts = np.asarray([0.8 + 0.3j, -1.2 + 0.7j, 0.4j, 1.5 - 0.2j])
        nodes, wts = npherm.hermgauss(48)
        direct = np.zeros(pts.size, complex)
        base = chi0(pts)
        for iu, u in enumerate(nodes):
            for iv, v in enumerate(nodes):
                z = math.sqrt(nbar) * (u + 1j * v) * np.exp(-1j * PI)
                phase = np.exp(pts * np.conj(z) - np.conj(pts) * z)
                direct += wts[iu] * wts[iv] / PI * phase * base
        closed = thermal_average_char(chi0, nbar)(pts)
        assert np.abs(direct - closed).max() < 1e-6

    def test_mean_phonon_closed_form_vs_beta_quadrature(self):
        st = conditional_state(CubicParams(k=0.7, t=PI, alpha=0.8, beta0=0.0, x=0.0))
        m0 = mean_phonon(st)
        for nbar in (0.02, 0.1, 0.3):
            nodes, wts = npherm.hermgauss(32)
            acc = 0.0
            for iu, u in enumerate(nodes):
                for iv, v in enumerate(nodes):
                    z = math.sqrt(nbar) * (u + 1j * v) * np.exp(-1j * PI)
                    acc += wts[iu] * wts[iv] / PI * mean_phonon(displace(st, z))
            assert acc == pytest.approx(thermal_mean_phonon(m0, nbar), abs=1e-6)

    def test_thermal_mean_phonon_values(self):
        assert thermal_mean_phonon(2.0, 0.0) == 2.0
        assert thermal_mean_phonon(2.0, 0.1) == pytest.approx(2.1)
        vals = [thermal_mean_phonon(1.0, nb) for nb in (0.0, 0.01, 0.1, 1.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_damping_never_raises_measure(self):
        st = conditional_state(CubicParams(k=0.7, t=PI, alpha=0.8, beta0=0.0, x=0.0))
        base = measure_I_coherent_exact(st).I
        last = base
        for nbar in (1e-4, 1e-2, 0.1):
            cur = measure_I_coherent_exact(st, nbar=nbar).I
            assert cur <= last + 1e-12
            last = cur
        assert last < base

    def test_exact_thermal_matches_quadrature(self):
        st = conditional_state(CubicParams(k=0.7, t=PI, alpha=0.8, beta0=0.0, x=0.0))
        nbar = 0.05
        exact = measure_I_coherent_exact(st, nbar=nbar)
        chi = thermal_average_char(char_function(st), nbar)
        quad = measure_I_quadrature(chi, rel_tol=1e-7, abs_tol=1e-7)
        assert quad.raw_integral == pytest.approx(exact.raw_integral, abs=1e-6)
        assert quad.M == pytest.approx(mean_phonon(st) + nbar, rel=1e-12)

    def test_nonmonotonic_in_coupling_at_finite_temperature(self):
        # thermal damping creates an interior maximum of I over k
        ks = np.linspace(0.1, 4.0, 14)
        vals = []
        for k in ks:
            st = conditional_state(CubicParams(k=float(k), t=PI, alpha=0.8, beta0=0.0, x=0.0))
            vals.append(measure_I_coherent_exact(st, nbar=0.1).I)
        peak = int(np.argmax(vals))
        assert 0 < peak < len(vals) - 1
        assert vals[peak] > vals[0] and vals[peak] > vals[-1]


class TestCatEquivalentAmplitude:
    def test_zero(self):
        assert cat_equivalent_amplitude(0.0) == 0.0

    def test_headline(self):
        assert cat_equivalent_amplitude(1.49) == pytest.approx(1.27, abs=0.01)

    def test_large_saturation(self):
        assert cat_equivalent_amplitude(100.0) == pytest.approx(10.0, abs=1e-6)

    def test_roundtrip(self):
        for val in (0.3, 1.49, 7.0):
            a = cat_equivalent_amplitude(val)
            assert a * a * math.tanh(a * a) == pytest.approx(val, rel=1e-10)


class TestEq9ClosedForm:
    def test_zero(self):
        assert eq9_closed_form(0.0).I == 0.0

    def test_r2_value(self):
        res = eq9_closed_form(2.0)
        assert res.I == pytest.approx(4.339688117934631, rel=1e-12)
        assert res.I == res.M

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_agrees_with_quadrature(self, r):
        st = normalize(
            SqueezedSuperposition(np.asarray([1.0, 1.0], complex), np.asarray([0.0, r], complex))
        )
        quad = measure_I_quadrature(char_function(st), rel_tol=1e-8, abs_tol=1e-8)
        assert abs(quad.I - eq9_closed_form(r).I) < 1e-6


class TestGaussianMeasure:
    def test_coherent_zero(self):
        g = GaussianState(mean=1.3 - 0.4j, cov=0.5 * np.eye(2))
        res = measure_I_gaussian(g)
        assert res.I == 0.0
        assert abs(res.raw_integral) < 1e-14
        assert res.M == pytest.approx(abs(1.3 - 0.4j) ** 2, rel=1e-12)

    def test_thermal_raw(self):
        s = 3.0
        g = GaussianState(mean=0j, cov=0.5 * s * np.eye(2))
        res = measure_I_gaussian(g)
        assert res.raw_integral == pytest.approx(-1.0 / 9.0, rel=1e-12)
        assert res.I == 0.0

    def test_squeezed_vacuum(self):
        r = 1.0
        g = GaussianState(mean=0j, cov=0.5 * np.diag([math.exp(-2 * r), math.exp(2 * r)]))
        res = measure_I_gaussian(g)
        assert res.I == pytest.approx(math.sinh(1.0) ** 2, rel=1e-12)
        assert res.I == pytest.approx(res.M, rel=1e-12)

    def test_squeezed_matches_quadrature(self):
        st = normalize(SqueezedSuperposition(np.asarray([1.0 + 0j]), np.asarray([1.0 + 0j])))
        quad = measure_I_quadrature(char_function(st), rel_tol=1e-8, abs_tol=1e-8)
        assert quad.I == pytest.approx(math.sinh(1.0) ** 2, abs=1e-7)

    def test_mean_does_not_change_raw(self):
        cov = np.asarray([[0.7, 0.1], [0.1, 0.9]])
        a = measure_I_gaussian(GaussianState(mean=0j, cov=cov))
        b = measure_I_gaussian(GaussianState(mean=2.0 + 1.0j, cov=cov))
        assert a.raw_integral == b.raw_integral

    def test_invalid_covariance(self):
        with pytest.raises(InvalidCovariance):
            measure_I_gaussian(GaussianState(mean=0j, cov=0.1 * np.eye(2)))
        with pytest.raises(InvalidCovariance):
            measure_I_gaussian(
                GaussianState(mean=0j, cov=np.asarray([[0.5, 0.3], [-0.3, 0.5]]))
            )


class TestDisplacementInvariance:
    def test_common_displacement_preserves_I(self):
        rng = np.random.default_rng(55)
        for _ in range(5):
            st = random_superposition(rng, reach=3.0)
            moved = displace(st, complex(*rng.normal(size=2)))
            a = measure_I_coherent_exact(st)
            b = measure_I_coherent_exact(moved)
            assert abs(a.raw_integral - b.raw_integral) < 1e-8


class TestTemperatureConversion:
    def test_low_temperature_limit(self):
        assert occupation_from_temperature(1e-9, 1e6) < 1e-10

    def test_roundtrip(self):
        for T in (1e-6, 1e-3, 0.3):
            for conv in ("angular", "ordinary"):
                nb = occupation_from_temperature(T, 1e6, conv)
                assert temperature_from_occupation(nb, 1e6, conv) == pytest.approx(
                    T, rel=1e-10
                )

    def test_conventions_differ_by_two_pi(self):
        na = occupation_from_temperature(1e-4, 1e6, "angular")
        no = occupation_from_temperature(1e-4, 1e6, "ordinary")
        ratio = math.log1p(1 / na) / math.log1p(1 / no)
        assert ratio == pytest.approx(2 * PI, rel=1e-9)

    def test_microkelvin_scales(self):
        # at 1 MHz, both readings put the single-phonon scale in the uK range
        n_ang = occupation_from_temperature(1e-6, 1e6, "angular")
        n_ord = occupation_from_temperature(1e-6, 1e6, "ordinary")
        assert n_ang < 1e-12       # hbar * 2 pi MHz / k_B is about 48 uK
        assert 1e-5 < n_ord < 1e-2  # hbar * MHz / k_B is about 7.6 uK
