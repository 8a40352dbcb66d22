import math

import numpy as np
import pytest

from macromech.macroscopicity import char_function, measure_I_quadrature
from macromech.quartic import (
    QuarticParams,
    conditional_state_quartic,
    photon_coefficient,
    squeeze_degree,
    two_component_fidelity,
)
from macromech.states import SqueezedSuperposition, coherent_overlap, normalize

PI = math.pi


class TestSqueezeDegree:
    def test_no_photons_no_squeezing(self):
        for t in (0.0, 1.0, PI, 5.5):
            for k in (0.0, 0.7, 17.0):
                assert squeeze_degree(0, t, k).zeta_abs == 0.0

    def test_value_k1(self):
        # asinh(2 sin(sqrt(5) pi)/sqrt(5)) evaluated directly
        br = squeeze_degree(1, PI, 1.0)
        assert br.chi == pytest.approx(math.sqrt(5.0), rel=1e-14)
        assert br.rho == pytest.approx(-6.0, rel=1e-14)
        assert br.zeta_abs == pytest.approx(0.5724032477180477, rel=1e-12)

    def test_value_k17_threshold(self):
        # the "squeeze degree of 2 needs k around 17" anchor
        val = squeeze_degree(1, PI, 17.0).zeta_abs
        assert val == pytest.approx(1.926744235169156, rel=1e-12)
        assert 1.85 <= val <= 2.10

    def test_reduces_to_asinh_of_argument(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            n = int(rng.integers(0, 6))
            t = float(rng.uniform(0, 7))
            k = float(rng.uniform(0, 20))
            chi = math.sqrt(1 + 4 * k * n)
            expect = math.asinh(abs(2 * k * n * math.sin(chi * t) / chi))
            assert squeeze_degree(n, t, k).zeta_abs == pytest.approx(expect, abs=1e-13)

    def test_eta_continuous_and_zero_at_origin(self):
        ts = np.linspace(0.0, 2 * PI, 1200)
        etas = np.asarray([squeeze_degree(1, float(t), 1.0).eta for t in ts])
        assert etas[0] == 0.0
        assert np.abs(np.diff(etas)).max() < 0.1  # no pi-sized branch jumps


class TestPhotonCoefficient:
    def test_vacuum_modulus(self):
        br = squeeze_degree(0, PI, 1.0)
        assert abs(photon_coefficient(0, PI, 0.7, br)) == pytest.approx(
            math.exp(-0.49 / 2), rel=1e-12
        )

    def test_one_photon_value(self):
        br = squeeze_degree(1, PI, 1.0)
        assert abs(photon_coefficient(1, PI, 0.7, br)) == pytest.approx(
            0.5478931767693077, rel=1e-12
        )

    def test_poisson_normalization(self):
        alpha = 0.7
        total = sum(
            abs(photon_coefficient(n, PI, alpha, squeeze_degree(n, PI, 1.0))) ** 2
            for n in range(24)
        )
        assert total == pytest.approx(1.0, abs=1e-12)


class TestConditionalState:
    def test_alpha_zero_is_vacuum(self):
        st = conditional_state_quartic(QuarticParams(k=1.0, t=PI, alpha=0.0, x=0.3))
        assert len(st) == 1
        assert st.labels[0] == 0.0

    def test_weight_ratios_at_figure_point(self):
        st = conditional_state_quartic(QuarticParams(k=1.0, t=PI, alpha=0.7, x=1.0))
        w = st.weights
        assert abs(w[1] / w[0]) == pytest.approx(0.7 * 2.0 / math.sqrt(2.0), rel=1e-12)
        assert abs(w[2] / w[0]) == pytest.approx(0.245, rel=1e-12)

    def test_normalized(self):
        st = conditional_state_quartic(QuarticParams(k=1.0, t=PI, alpha=0.7, x=1.0))
        from macromech.states import gram_matrix

        gram = gram_matrix(st)
        n2 = np.real(np.conj(st.weights) @ gram @ st.weights)
        assert n2 == pytest.approx(1.0, abs=1e-10)


class TestTwoComponentReduction:
    def test_fidelity_high_at_figure_point(self):
        fid = two_component_fidelity(QuarticParams(k=1.0, t=PI, alpha=0.7, x=1.0))
        assert fid >= 0.9

    def test_alpha_to_zero(self):
        fid = two_component_fidelity(QuarticParams(k=1.0, t=PI, alpha=1e-8, x=1.0))
        assert fid == pytest.approx(1.0, abs=1e-9)

    def test_k_zero_all_vacuum(self):
        fid = two_component_fidelity(QuarticParams(k=0.0, t=PI, alpha=0.7, x=1.0))
        assert fid == pytest.approx(1.0, abs=1e-9)


class TestPhaseInvariance:
    def test_measure_insensitive_to_label_phase(self):
        # underwrites the squeeze-phase convention: only |zeta| matters for I, M
        base = None
        for theta in np.linspace(0.0, 2 * PI, 7):
            st = normalize(
                SqueezedSuperposition(
                    np.asarray([1.0, 1.0], complex),
                    np.asarray([0.0, np.exp(1j * theta)], complex),
                )
            )
            res = measure_I_quadrature(char_function(st), rel_tol=1e-9, abs_tol=1e-9)
            if base is None:
                base = res
            assert res.I == pytest.approx(base.I, abs=1e-8)
            assert res.M == pytest.approx(base.M, abs=1e-8)
