import numpy as np
import pytest

from qic import densecore as dc

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0])
SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TestTensor:
    def test_identity(self):
        np.testing.assert_array_equal(dc.tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_y_pair(self):
        expected = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])
        np.testing.assert_array_equal(dc.tensor(SY, SY), expected)

    def test_sigma_z_identity(self):
        np.testing.assert_array_equal(dc.tensor(SZ, np.eye(2)), np.diag([1, 1, -1, -1]))

    def test_index_rule(self, rng):
        a = rng.normal(size=(2, 3))
        b = rng.normal(size=(3, 2))
        out = dc.tensor(a, b)
        assert out[1 * 3 + 2, 2 * 2 + 1] == pytest.approx(a[1, 2] * b[2, 1])

    def test_needs_operand(self):
        with pytest.raises(ValueError):
            dc.tensor()


class TestPartialTrace:
    def test_product_state(self, rng):
        ra, rb = dc.random_density(2, rng), dc.random_density(3, rng)
        np.testing.assert_allclose(dc.partial_trace(np.kron(ra, rb), [2, 3], 0), ra, atol=1e-12)
        np.testing.assert_allclose(dc.partial_trace(np.kron(ra, rb), [2, 3], 1), rb, atol=1e-12)

    def test_singlet_marginal(self):
        np.testing.assert_allclose(dc.partial_trace(dc.projector(SINGLET), [2, 2], 0), np.eye(2) / 2)

    def test_full_trace(self, rng):
        rho = dc.random_density(6, rng)
        out = dc.partial_trace(rho, [2, 3], [])
        assert out.shape == (1, 1)
        assert out[0, 0] == pytest.approx(1.0)

    def test_three_parties(self, rng):
        ra, rb, rc = (dc.random_density(d, rng) for d in (2, 3, 2))
        rho = dc.tensor(ra, rb, rc)
        np.testing.assert_allclose(dc.partial_trace(rho, [2, 3, 2], [0, 2]), np.kron(ra, rc), atol=1e-12)
        np.testing.assert_allclose(dc.partial_trace(rho, [2, 3, 2], [2, 0]), np.kron(ra, rc), atol=1e-12)

    def test_dims_required(self, rng):
        with pytest.raises(ValueError):
            dc.partial_trace(np.eye(4), None, 0)
        with pytest.raises(ValueError):
            dc.partial_trace(np.eye(4), [2, 3], 0)
        with pytest.raises(ValueError):
            dc.partial_trace(np.eye(4), [2, 2], 2)


class TestPartialTranspose:
    def test_product_state_positive(self, rng):
        ra, rb = dc.random_density(2, rng), dc.random_density(2, rng)
        pt = dc.partial_transpose(np.kron(ra, rb), [2, 2])
        np.testing.assert_allclose(pt, np.kron(ra.T, rb), atol=1e-12)
        assert dc.hermitian_spectrum(pt).min() >= 0

    def test_singlet_spectrum(self):
        vals = dc.hermitian_spectrum(dc.partial_transpose(dc.projector(SINGLET), [2, 2]))
        np.testing.assert_allclose(vals, [0.5, 0.5, 0.5, -0.5], atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_isotropic_spectrum(self, d):
        w = 0.6
        psi = np.zeros(d * d)
        psi[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
        rho = (1 - w) * np.eye(d * d) / d**2 + w * dc.projector(psi)
        vals = dc.hermitian_spectrum(dc.partial_transpose(rho, [d, d]))
        plus = (1 - w) / d**2 + w / d
        minus = (1 - w) / d**2 - w / d
        expected = sorted([plus] * (d * (d + 1) // 2) + [minus] * (d * (d - 1) // 2), reverse=True)
        np.testing.assert_allclose(vals, expected, atol=1e-12)

    def test_entry_rule(self, rng):
        rho = dc.random_density(6, rng)
        pt = dc.partial_transpose(rho, [2, 3])
        t, tp = rho.reshape(2, 3, 2, 3), pt.reshape(2, 3, 2, 3)
        assert tp[0, 2, 1, 1] == pytest.approx(t[1, 2, 0, 1])

    def test_involution_and_sides(self, rng):
        rho = dc.random_density(6, rng)
        np.testing.assert_array_equal(dc.partial_transpose(dc.partial_transpose(rho, [2, 3]), [2, 3]), rho)
        np.testing.assert_allclose(dc.hermitian_spectrum(dc.partial_transpose(rho, [2, 3], 0)),
                                   dc.hermitian_spectrum(dc.partial_transpose(rho, [2, 3], 1)), atol=1e-12)

    def test_trace_kept(self, rng):
        rho = dc.random_density(6, rng)
        assert np.trace(dc.partial_transpose(rho, [3, 2])).real == pytest.approx(1.0)

    def test_not_bipartite(self):
        with pytest.raises(ValueError):
            dc.partial_transpose(np.eye(8), [2, 2, 2])


class TestSpectrum:
    def test_examples(self):
        np.testing.assert_allclose(dc.hermitian_spectrum(np.eye(3)), [1, 1, 1])
        np.testing.assert_allclose(dc.hermitian_spectrum(np.diag([0.3, 0.7])), [0.7, 0.3])
        np.testing.assert_allclose(dc.hermitian_spectrum(SX), [1, -1])

    def test_chop(self):
        vals = dc.hermitian_spectrum(np.diag([1.0, 5e-11, -5e-11]))
        assert vals.tolist() == [1.0, 0.0, 0.0]

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            dc.hermitian_spectrum(np.array([[0, 1], [0, 0]]))

    def test_hermitian_tolerance_relative(self):
        h = np.array([[1e3, 1e3], [1e3 + 1e-7, 0]])
        dc.check_hermitian(h)

    def test_eig_phases_and_order(self, rng):
        h = dc.random_hermitian(4, rng)
        vals, vecs = dc.hermitian_eig(h)
        assert np.all(np.diff(vals) <= 0)
        np.testing.assert_allclose(h @ vecs, vecs * vals, atol=1e-10)
        for k in range(4):
            col = vecs[:, k]
            pivot = col[np.argmax(np.abs(col))]
            assert abs(pivot.imag) < 1e-12 and pivot.real > 0

    def test_fix_phases_vector(self):
        out = dc.fix_phases(np.array([0.5j, -0.5j * np.sqrt(3)]))
        np.testing.assert_allclose(out, [-0.5, np.sqrt(3) / 2])

    def test_trace_norm(self, rng):
        assert dc.trace_norm(dc.random_density(5, rng)) == pytest.approx(1.0)
        assert dc.trace_norm(dc.partial_transpose(dc.projector(SINGLET), [2, 2])) == pytest.approx(2.0)
        assert dc.trace_norm(np.zeros((3, 3))) == 0.0


class TestSchmidt:
    def test_product(self):
        np.testing.assert_allclose(dc.schmidt_coefficients(np.kron([1, 0], [0, 1, 0]), [2, 3]), [1])

    def test_singlet(self):
        np.testing.assert_allclose(dc.schmidt_coefficients(SINGLET, [2, 2]), [2**-0.5] * 2)

    def test_max_entangled(self):
        d = 4
        psi = np.zeros(d * d)
        psi[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
        np.testing.assert_allclose(dc.schmidt_coefficients(psi, [d, d]), [d**-0.5] * d)

    def test_marginal_spectra(self, rng):
        for _ in range(20):
            psi = dc.random_pure_state(12, rng)
            rho = dc.projector(psi)
            sa = dc.hermitian_spectrum(dc.partial_trace(rho, [3, 4], 0))
            sb = dc.hermitian_spectrum(dc.partial_trace(rho, [3, 4], 1))
            np.testing.assert_allclose(sa, sb[:3], atol=1e-10)
            np.testing.assert_allclose(dc.schmidt_coefficients(psi, [3, 4]) ** 2, sa, atol=1e-10)


class TestMajorization:
    def test_examples(self):
        assert dc.majorization_compare([0.5, 0.5], [1, 0])
        assert not dc.majorization_compare([1, 0], [0.5, 0.5])
        assert dc.majorization_compare([0.2, 0.8], [0.8, 0.2])

    def test_weak(self):
        assert dc.majorization_compare([0.4, 0.4], [1, 0], mode="weak")
        assert not dc.majorization_compare([0.4, 0.4], [1, 0], mode="strict")

    def test_errors(self):
        with pytest.raises(ValueError):
            dc.majorization_compare([1], [1, 0])
        with pytest.raises(ValueError):
            dc.majorization_compare([1], [1], mode="loose")

    def test_sum_of_spectra(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            q, r = dc.random_hermitian(n, rng), dc.random_hermitian(n, rng)
            assert dc.majorization_compare(dc.hermitian_spectrum(q + r),
                                           dc.hermitian_spectrum(q) + dc.hermitian_spectrum(r))


class TestStates:
    def test_random_density_valid(self, rng):
        for rank in (None, 1, 3):
            dc.check_density(dc.random_density(4, rng, rank))
        assert np.linalg.matrix_rank(dc.random_density(4, rng, 1)) == 1

    def test_check_density_failures(self):
        with pytest.raises(ValueError):
            dc.check_density(np.eye(2))
        with pytest.raises(ValueError):
            dc.check_density(np.diag([1.5, -0.5]))

    def test_check_pure(self):
        dc.check_pure(SINGLET, [2, 2])
        with pytest.raises(ValueError):
            dc.check_pure(2 * SINGLET, [2, 2])
        with pytest.raises(ValueError):
            dc.check_pure(SINGLET, [2, 3])

    def test_purity(self, rng):
        assert dc.purity(np.eye(4) / 4) == pytest.approx(0.25)
        assert dc.purity(dc.projector(dc.random_pure_state(5, rng))) == pytest.approx(1.0)

    def test_random_unitary(self, rng):
        for d in (1, 2, 5):
            u = dc.random_unitary(d, rng)
            np.testing.assert_allclose(u @ u.conj().T, np.eye(d), atol=1e-12)

    def test_batch_pure_states(self, rng):
        psis = dc.random_pure_states(50, 6, rng)
        np.testing.assert_allclose(np.linalg.norm(psis, axis=1), 1.0)
