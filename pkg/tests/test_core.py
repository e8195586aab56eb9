import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photometrix.core import (
    JointFockPMF,
    LossChannel,
    MixedFockDecomposition,
    PhotonPMF,
    TwoModeBasis,
    apply_loss_joint,
    beamsplitter_amplitudes,
    beamsplitter_prob,
    binomial_loss_pmf,
    mixed_qfi_oracle,
    poisson_pmf,
    spectral_qfi_oracle,
)
from photometrix.errors import CutoffTooSmall, IndexOutOfRange, NotAState

from oracles import (
    apply_loss_dense,
    dense_beamsplitter,
    lossy_fock_rho,
    two_mode_labels,
)


class TestLossChannel:
    def test_mu_folds_in_detector_efficiency(self):
        ch = LossChannel(1.0, np.log(2), eta=0.5)
        assert ch.mu == pytest.approx(1 - 0.25)
        assert ch.mu_abs == pytest.approx(0.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            LossChannel(-1.0, 1.0)
        with pytest.raises(ValueError):
            LossChannel(1.0, 1.0, eta=0.0)
        with pytest.raises(ValueError):
            LossChannel(1.0, 1.0, eta=1.5)


class TestBinomialLossPMF:
    def test_lossless(self):
        assert np.allclose(binomial_loss_pmf(2, 0.0).probs, [1, 0, 0])

    def test_symmetric_single_photon(self):
        assert np.allclose(binomial_loss_pmf(1, 0.5).probs, [0.5, 0.5])

    def test_large_n_moments(self):
        # oracle: direct summation of k p_k against the n*mu identity
        pmf = binomial_loss_pmf(200, 0.3)
        assert abs(pmf.probs.sum() - 1.0) < 1e-12
        direct_mean = float(np.sum(np.arange(201) * pmf.probs))
        assert abs(direct_mean - 60.0) < 1e-9

    @given(n=st.integers(0, 300), mu=st.floats(0.0, 1.0, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_mean_identity(self, n, mu):
        pmf = binomial_loss_pmf(n, mu)
        assert abs(pmf.mean() - n * mu) <= 1e-9 * max(n, 1)


class TestPoissonPMF:
    def test_zero_rate(self):
        p = poisson_pmf(0.0, 5)
        assert np.allclose(p.probs, [1, 0, 0, 0, 0, 0])

    def test_ground_weight(self):
        p = poisson_pmf(0.5, 40)
        assert p.probs[0] == pytest.approx(np.exp(-0.5), rel=1e-14)

    def test_small_cutoff_raises(self):
        # direct summation: Poisson(10) mass beyond 10 is macroscopic
        with pytest.raises(CutoffTooSmall):
            poisson_pmf(10.0, 10)

    def test_tail_mass_reported(self):
        p = poisson_pmf(2.0, 40, tail_tol=1.0)
        direct_tail = 1.0 - p.probs.sum()
        assert p.tail_mass == pytest.approx(direct_tail, abs=1e-12)

    def test_binomial_converges_to_poisson(self):
        lam = 2.0
        n = 10**4
        binom = binomial_loss_pmf(n, lam / n).probs[:41]
        pois = poisson_pmf(lam, 40).probs
        assert np.max(np.abs(binom - pois)) < 1e-3


class TestBeamsplitterProb:
    def test_identity_at_zero_angle(self):
        for (k, m) in [(0, 0), (3, 2), (5, 0), (1, 4)]:
            for q in range(-m, k + 1):
                expected = 1.0 if q == 0 else 0.0
                assert beamsplitter_prob(k, m, q, 0.0) == pytest.approx(expected, abs=1e-300)

    def test_hong_ou_mandel_dip(self):
        # 50:50 point: coincidence outcome vanishes
        assert beamsplitter_prob(1, 1, 0, np.pi / 4) == pytest.approx(0.0, abs=1e-25)

    @pytest.mark.parametrize("theta", [0.3, 1.1, 2.0])
    def test_unitarity_3_2(self, theta):
        total = sum(beamsplitter_prob(3, 2, q, theta) for q in range(-2, 4))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_transfer_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            beamsplitter_prob(2, 1, 3, 0.4)
        with pytest.raises(IndexOutOfRange):
            beamsplitter_prob(2, 1, -2, 0.4)

    @given(
        k=st.integers(0, 8),
        m=st.integers(0, 8),
        theta=st.floats(0.01, 3.1, allow_nan=False),
    )
    @settings(max_examples=80, deadline=None)
    def test_unitarity_property(self, k, m, theta):
        total = sum(beamsplitter_prob(k, m, q, theta) for q in range(-m, k + 1))
        assert abs(total - 1.0) < 1e-10

    @given(
        k=st.integers(0, 7),
        m=st.integers(0, 7),
        theta=st.floats(0.01, 3.1, allow_nan=False),
    )
    @settings(max_examples=60, deadline=None)
    def test_mode_swap_symmetry(self, k, m, theta):
        for q in range(-m, k + 1):
            p1 = beamsplitter_prob(k, m, q, theta)
            p2 = beamsplitter_prob(m, k, -q, theta)
            assert p1 == pytest.approx(p2, rel=1e-10, abs=1e-13)

    @pytest.mark.parametrize("theta", [0.2, 0.9, 1.45, np.pi / 2, 1.56, 1.8, 2.9])
    def test_against_dense_exponential(self, theta):
        # independent oracle: dense expm of the generator on k + m <= 12
        labels = two_mode_labels(12)
        U, index = dense_beamsplitter(labels, 2 * theta)
        for k in range(0, 7):
            for m in range(0, 6):
                for q in range(-m, k + 1):
                    want = abs(U[index[(k - q, m + q)], index[(k, m)]]) ** 2
                    got = beamsplitter_prob(k, m, q, theta)
                    assert got == pytest.approx(want, abs=1e-10)

    def test_amplitude_derivative_matches_difference(self):
        ks, ms, qs = [4, 3, 5], [2, 3, 1], [1, -2, 0]
        h = 1e-6
        for theta in (0.3, 1.0, 1.5, 2.2):
            a, da = beamsplitter_amplitudes(ks, ms, qs, theta, want_derivative=True)
            ap = beamsplitter_amplitudes(ks, ms, qs, theta + h)
            am = beamsplitter_amplitudes(ks, ms, qs, theta - h)
            assert np.allclose(da, (ap - am) / (2 * h), atol=1e-7)


class TestApplyLossJoint:
    def test_lossless_delta(self):
        joint = apply_loss_joint(1, 1, LossChannel(0.0, 1.0))
        expected = np.zeros((2, 2))
        expected[1, 1] = 1.0
        assert np.allclose(joint.probs, expected)

    def test_total_loss_delta(self):
        joint = apply_loss_joint(3, 3, LossChannel(1.0, np.inf))
        assert joint.probs[0, 0] == pytest.approx(1.0)

    def test_half_loss_value(self):
        # exact enumeration: each of the two a-photons survives with 1/2,
        # so P(1 survivor in a) = 2 * (1/2)^2 = 1/2 and P(0 in b) = 1/2
        joint = apply_loss_joint(2, 1, LossChannel(1.0, np.log(2)))
        assert joint.probs[1, 0] == pytest.approx(0.25, rel=1e-14)

    def test_matches_dense_channel(self):
        labels = two_mode_labels(5)
        index = {lab: k for k, lab in enumerate(labels)}
        mu = 0.37
        rho = lossy_fock_rho(3, 2, mu, labels)
        joint = apply_loss_joint(3, 2, LossChannel(1.0, -np.log(1 - mu)))
        for i in range(4):
            for j in range(3):
                assert joint.probs[i, j] == pytest.approx(
                    rho[index[(i, j)], index[(i, j)]], abs=1e-12
                )


class TestPMFTypes:
    def test_photon_pmf_rejects_bad_total(self):
        with pytest.raises(ValueError):
            PhotonPMF(np.array([0.5, 0.3]))

    def test_renormalized_folds_tail(self):
        p = PhotonPMF(np.array([0.6, 0.3]), tail_mass=0.1)
        assert abs(p.renormalized().probs.sum() - 1.0) < 1e-15

    def test_joint_pmf_rejects_negative(self):
        with pytest.raises(ValueError):
            JointFockPMF(np.array([[1.1, -0.1], [0.0, 0.0]]))

    def test_decomposition_rejects_duplicate_labels(self):
        with pytest.raises(ValueError):
            MixedFockDecomposition(np.array([0.5, 0.5]), [(1, 1), (1, 1)], 1.0)


class TestQFIOracles:
    def test_pure_twin_fock_variance(self):
        for n in (1, 2, 3, 5):
            dec = MixedFockDecomposition(np.array([1.0]), [(n, n)], 1.0)
            assert mixed_qfi_oracle(dec) == pytest.approx(2 * n * (n + 1), rel=1e-13)

    def test_pure_fock_pair_variance(self):
        for (m, l) in [(2, 0), (1, 3), (4, 2)]:
            dec = MixedFockDecomposition(np.array([1.0]), [(m, l)], 1.0)
            assert mixed_qfi_oracle(dec) == pytest.approx(m + l + 2 * m * l, rel=1e-13)

    def test_zero_time(self):
        dec = MixedFockDecomposition(np.array([0.5, 0.5]), [(1, 1), (0, 0)], 0.0)
        assert mixed_qfi_oracle(dec) == 0.0

    def test_spectral_pure_11(self):
        basis = TwoModeBasis(2)
        psi = basis.fock_state(1, 1)
        assert spectral_qfi_oracle(np.outer(psi, psi), basis.h_int(), 1.0) == pytest.approx(4.0, rel=1e-12)

    def test_spectral_maximally_mixed_single_photon(self):
        basis = TwoModeBasis(1)
        rho = 0.5 * np.outer(basis.fock_state(1, 0), basis.fock_state(1, 0))
        rho += 0.5 * np.outer(basis.fock_state(0, 1), basis.fock_state(0, 1))
        assert spectral_qfi_oracle(rho, basis.h_int(), 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_spectral_lossy_coherent(self):
        # pure coherent state stays coherent under loss: amplitude shrinks
        N, gt = 1.0, 0.3
        basis = TwoModeBasis(12)
        alpha = np.sqrt(N / 2 * np.exp(-gt))
        psi = basis.coherent_state(alpha, alpha)
        rho = np.outer(psi, psi.conj())
        rho /= np.trace(rho).real
        t = gt
        got = spectral_qfi_oracle(rho, basis.h_int(), t)
        assert got == pytest.approx(t * t * N * np.exp(-gt), rel=1e-6)

    def test_spectral_rejects_nonstate(self):
        basis = TwoModeBasis(1)
        with pytest.raises(NotAState):
            spectral_qfi_oracle(0.5 * np.eye(basis.dim), basis.h_int(), 1.0)

    @pytest.mark.parametrize("mu", [0.0, 0.1, 0.3])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_mixed_equals_spectral_on_lossy_twin_fock(self, n, mu):
        t = 0.8
        p = binomial_loss_pmf(n, mu).probs
        weights, labels = [], []
        for k1 in range(n + 1):
            for k2 in range(n + 1):
                weights.append(p[k1] * p[k2])
                labels.append((n - k1, n - k2))
        dec = MixedFockDecomposition(np.array(weights), labels, t)
        basis = TwoModeBasis(2 * n)
        psi = basis.fock_state(n, n)
        rho = basis.apply_loss(np.outer(psi, psi), mu)
        spectral = spectral_qfi_oracle(rho, basis.h_int(), t)
        mixed = mixed_qfi_oracle(dec)
        if spectral > 0:
            assert abs(mixed - spectral) / spectral < 1e-8

    def test_basis_loss_channel_matches_dense_kraus(self):
        basis = TwoModeBasis(4)
        labels = two_mode_labels(4)
        psi = basis.noon_state(3)
        rho = np.outer(psi, psi)
        got = basis.apply_loss(rho, 0.25)
        want = apply_loss_dense(rho.astype(complex), labels, 0.25)
        assert np.max(np.abs(got - want)) < 1e-12
