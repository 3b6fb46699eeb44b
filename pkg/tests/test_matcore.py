import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bellcm import matcore
from bellcm.matcore import OMEGA, PI_P, PI_Q, Quadrature
from bellcm.oracle import general_pseudoinverse


class TestSymplecticForm:
    def test_single_mode(self):
        np.testing.assert_array_equal(matcore.symplectic_form(1), [[0, 1], [-1, 0]])

    def test_two_modes_is_direct_sum(self):
        expected = np.zeros((4, 4))
        expected[:2, :2] = OMEGA
        expected[2:, 2:] = OMEGA
        np.testing.assert_array_equal(matcore.symplectic_form(2), expected)

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_squares_to_minus_identity(self, n):
        om = matcore.symplectic_form(n)
        np.testing.assert_array_equal(om @ om, -np.eye(2 * n))
        np.testing.assert_array_equal(om.T, -om)

    def test_zero_modes_rejected(self):
        with pytest.raises(ValueError):
            matcore.symplectic_form(0)


class TestBeamSplitter:
    def test_fully_transmissive_is_identity(self):
        np.testing.assert_array_equal(matcore.beam_splitter(1.0), np.eye(4))

    def test_balanced_entries(self):
        s = 1 / np.sqrt(2)
        expected = np.array(
            [[s, 0, s, 0], [0, s, 0, s], [-s, 0, s, 0], [0, -s, 0, s]]
        )
        np.testing.assert_allclose(matcore.beam_splitter(0.5), expected, rtol=0, atol=1e-15)

    def test_symplectic_at_03(self):
        K = matcore.beam_splitter(0.3)
        om = matcore.symplectic_form(2)
        np.testing.assert_allclose(K @ om @ K.T, om, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("T", [-0.1, 1.0001, np.nan])
    def test_out_of_range(self, T):
        with pytest.raises(ValueError):
            matcore.beam_splitter(T)

    @given(st.floats(0.0, 1.0))
    def test_always_symplectic(self, T):
        assert matcore.is_symplectic(matcore.beam_splitter(T), atol=1e-12)


class TestEmbedLastTwo:
    def test_no_leading_modes(self):
        K = matcore.beam_splitter(0.4)
        np.testing.assert_array_equal(matcore.embed_last_two(K, 0), K)

    def test_identity(self):
        np.testing.assert_array_equal(matcore.embed_last_two(np.eye(4), 1), np.eye(6))

    def test_layout(self):
        K = matcore.beam_splitter(0.5)
        E = matcore.embed_last_two(K, 2)
        assert E.shape == (8, 8)
        np.testing.assert_array_equal(E[:4, :4], np.eye(4))
        np.testing.assert_array_equal(E[4:, 4:], K)
        assert not E[:4, 4:].any() and not E[4:, :4].any()

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            matcore.embed_last_two(np.eye(2), 1)

    @given(st.floats(0.0, 1.0), st.integers(0, 4))
    def test_preserves_symplecticity(self, T, n):
        assert matcore.is_symplectic(matcore.embed_last_two(matcore.beam_splitter(T), n))


class TestProjectedPseudoinverse:
    def test_q(self):
        B = np.array([[2.0, 0.5], [0.5, 3.0]])
        np.testing.assert_array_equal(matcore.projected_pseudoinverse(B, Quadrature.Q), [[0.5, 0], [0, 0]])

    def test_identity_p(self):
        np.testing.assert_array_equal(matcore.projected_pseudoinverse(np.eye(2), Quadrature.P), PI_P)

    def test_p_matches_general(self):
        B = np.array([[4.0, 1.0], [1.0, 5.0]])
        closed = matcore.projected_pseudoinverse(B, Quadrature.P)
        np.testing.assert_allclose(closed, [[0, 0], [0, 0.2]], rtol=0, atol=1e-16)
        np.testing.assert_allclose(closed, general_pseudoinverse(PI_P @ B @ PI_P), rtol=0, atol=1e-12)

    @pytest.mark.parametrize("quad", list(Quadrature))
    def test_nonpositive_entry(self, quad):
        with pytest.raises(ValueError, match="positive definite"):
            matcore.projected_pseudoinverse(np.zeros((2, 2)), quad)

    @settings(max_examples=200)
    @given(
        st.floats(0.05, 20.0),
        st.floats(0.05, 20.0),
        st.floats(-0.99, 0.99),
        st.sampled_from(list(Quadrature)),
    )
    def test_agrees_with_general(self, a, b, rho, quad):
        c = rho * np.sqrt(a * b)
        B = np.array([[a, c], [c, b]])
        P = quad.projector
        np.testing.assert_allclose(
            matcore.projected_pseudoinverse(B, quad),
            general_pseudoinverse(P @ B @ P),
            rtol=0,
            atol=1e-12,
        )


class TestMinEigenvalue:
    def test_identity(self):
        assert matcore.min_sym_eigenvalue(np.eye(2)) == pytest.approx(1.0, abs=1e-14)

    def test_vacuum_saturates(self):
        assert matcore.min_sym_eigenvalue(np.eye(2), OMEGA) == pytest.approx(0.0, abs=1e-14)

    def test_thermal(self):
        # [[2, i], [-i, 2]] has eigenvalues 2 +- 1
        assert matcore.min_sym_eigenvalue(2 * np.eye(2), OMEGA) == pytest.approx(1.0, abs=1e-14)

    def test_non_square(self):
        with pytest.raises(ValueError):
            matcore.min_sym_eigenvalue(np.ones((2, 3)))

    @given(st.integers(0, 10_000))
    def test_hermitian_embedding_matches_complex_solver(self, seed):
        r = np.random.default_rng(seed)
        X = r.normal(size=(4, 4))
        Y = r.normal(size=(4, 4))
        X, Y = X + X.T, Y - Y.T
        expected = np.linalg.eigvalsh(X + 1j * Y)[0]
        assert matcore.min_sym_eigenvalue(X, Y) == pytest.approx(expected, abs=1e-10 * max(1, abs(expected)))


def test_projector_constants():
    np.testing.assert_array_equal(PI_Q + PI_P, np.eye(2))
    np.testing.assert_array_equal(matcore.X2, OMEGA)
