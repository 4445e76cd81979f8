import numpy as np
import pytest

from qutrit_qkd.linalg import (
    InvalidStateError,
    MixedState,
    ValidationError,
    computational_basis,
    diagonal_state,
    inner_product,
    joint_probability,
    make_state,
    maximally_entangled_state,
    normalize_coefficients,
    orthonormality_residual,
    phase_basis,
    relabel_b_swap12,
    state_norm_sq,
)

from oracles import born_probability_bruteforce


def random_state(rng):
    psi = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return psi / np.linalg.norm(psi)


def random_basis(rng):
    z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    q, r = np.linalg.qr(z)
    return (q * (np.diagonal(r) / np.abs(np.diagonal(r)))).conj().T


class TestMakeState:
    def test_equal_coefficients(self):
        psi = make_state((1 / np.sqrt(3), 1 / np.sqrt(3), 1 / np.sqrt(3)))
        for cell in [(0, 0), (1, 2), (2, 1)]:
            assert psi[cell] == pytest.approx(0.57735, abs=1e-5)
        assert state_norm_sq(psi) == pytest.approx(1.0, abs=1e-12)

    def test_single_term(self):
        psi = make_state((1, 0, 0))
        expected = np.zeros((3, 3))
        expected[0, 0] = 1
        assert np.allclose(psi, expected)

    def test_measured_coefficients_renormalized(self):
        psi = make_state((0.642, 0.546, 0.539))
        assert abs(psi[0, 0]) ** 2 == pytest.approx(0.642 ** 2 / 1.000801, rel=1e-6)
        assert state_norm_sq(psi) == pytest.approx(1.0, abs=1e-12)
        _, divisor = normalize_coefficients((0.642, 0.546, 0.539))
        assert divisor ** 2 == pytest.approx(1.000801, rel=1e-6)

    def test_zero_coefficients_rejected(self):
        with pytest.raises(InvalidStateError):
            make_state((0.0, 0.0, 0.0))

    def test_negative_coefficients_rejected(self):
        with pytest.raises(ValidationError):
            make_state((0.5, -0.5, 0.5))

    def test_random_triples_normalized(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            psi = make_state(rng.uniform(0.01, 5.0, size=3))
            assert abs(state_norm_sq(psi) - 1.0) < 1e-12


class TestRelabel:
    def test_maps_source_form_to_diagonal(self):
        assert np.allclose(relabel_b_swap12(make_state((1, 1, 1))),
                           maximally_entangled_state())

    def test_involution(self):
        rng = np.random.default_rng(2)
        psi = random_state(rng)
        assert np.allclose(relabel_b_swap12(relabel_b_swap12(psi)), psi)

    def test_product_state_fixed_point(self):
        psi = make_state((1, 0, 0))
        assert np.allclose(relabel_b_swap12(psi), psi)

    def test_preserves_inner_products(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a, b = random_state(rng), random_state(rng)
            before = inner_product(a, b)
            after = inner_product(relabel_b_swap12(a), relabel_b_swap12(b))
            assert abs(before - after) < 1e-12


class TestPhaseBasis:
    def test_offset_zero_is_fourier(self):
        j, k = np.meshgrid(np.arange(3), np.arange(3))
        dft = np.exp(2j * np.pi * j * k / 3) / np.sqrt(3)
        assert np.allclose(phase_basis("A", 0.0), dft)

    def test_orthonormal_for_any_offset(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            offset = rng.uniform(-5, 5)
            for party in ("A", "B"):
                assert orthonormality_residual(phase_basis(party, offset)) < 1e-12

    def test_bad_party(self):
        with pytest.raises(ValidationError):
            phase_basis("C", 0.0)


class TestJointProbability:
    def test_white_uniform(self):
        rng = np.random.default_rng(5)
        basis_a, basis_b = random_basis(rng), random_basis(rng)
        for k in range(3):
            for l in range(3):
                p = joint_probability(MixedState.white(), basis_a, k, basis_b, l)
                assert p == pytest.approx(1 / 9, abs=1e-12)

    def test_computational_eigenstate(self):
        mixed = MixedState.pure(make_state((1, 0, 0)))
        comp = computational_basis()
        assert joint_probability(mixed, comp, 0, comp, 0) == pytest.approx(1.0)

    def test_maximal_state_support(self):
        mixed = MixedState.pure(make_state((1, 1, 1)))
        comp = computational_basis()
        assert joint_probability(mixed, comp, 1, comp, 2) == pytest.approx(1 / 3)
        assert joint_probability(mixed, comp, 1, comp, 1) == pytest.approx(0.0, abs=1e-15)

    def test_non_orthonormal_basis_rejected(self):
        bad = np.eye(3, dtype=complex)
        bad[1, 0] = 0.5
        mixed = MixedState.pure(maximally_entangled_state())
        with pytest.raises(ValidationError):
            joint_probability(mixed, bad, 0, computational_basis(), 0)

    def test_born_totals(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            white = rng.uniform(0, 1)
            w1 = (1 - white) * rng.uniform(0, 1)
            w2 = 1 - white - w1
            mixed = MixedState(
                components=((w1, random_state(rng)), (w2, random_state(rng))),
                white_noise_weight=white,
            )
            basis_a, basis_b = random_basis(rng), random_basis(rng)
            total = sum(
                joint_probability(mixed, basis_a, k, basis_b, l)
                for k in range(3) for l in range(3)
            )
            assert abs(total - 1.0) < 1e-10

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            psi = random_state(rng)
            mixed = MixedState.pure(psi)
            basis_a, basis_b = random_basis(rng), random_basis(rng)
            k, l = rng.integers(0, 3, size=2)
            expected = born_probability_bruteforce(
                [(1.0, psi)], 0.0, basis_a, int(k), basis_b, int(l))
            got = joint_probability(mixed, basis_a, int(k), basis_b, int(l))
            assert abs(got - expected) < 1e-12

    def test_mixture_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            comps = [(0.3, random_state(rng)), (0.5, random_state(rng))]
            mixed = MixedState(components=tuple(comps), white_noise_weight=0.2)
            basis_a, basis_b = random_basis(rng), random_basis(rng)
            k, l = rng.integers(0, 3, size=2)
            expected = born_probability_bruteforce(
                comps, 0.2, basis_a, int(k), basis_b, int(l))
            assert abs(joint_probability(mixed, basis_a, int(k), basis_b, int(l))
                       - expected) < 1e-12


class TestMixedState:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            MixedState(components=((0.5, maximally_entangled_state()),),
                       white_noise_weight=0.6)

    def test_negative_weight_rejected(self):
        with pytest.raises(ValidationError):
            MixedState(components=((-0.1, maximally_entangled_state()),),
                       white_noise_weight=1.1)

    def test_component_must_be_normalized(self):
        with pytest.raises(ValidationError):
            MixedState(components=((1.0, np.eye(3, dtype=complex)),))

    def test_isotropic_range(self):
        with pytest.raises(ValidationError):
            MixedState.isotropic(maximally_entangled_state(), 1.2)

    def test_diagonal_state_normalizes(self):
        st = diagonal_state((2.0, 2.0, 1.0))
        assert state_norm_sq(st) == pytest.approx(1.0, abs=1e-12)
        assert st[0, 0] == pytest.approx(2.0 / 3.0)
