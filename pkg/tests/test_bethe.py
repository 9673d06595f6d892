"""Tests for tensor-space operators, qKZ Hamiltonians and the twisted bilinear forms."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wronski.bethe import (
    TensorSpace,
    big_R,
    big_R_factors,
    certify_form,
    commutator_norm,
    flip,
    literal_sign,
    local,
    positivity_reality_crosscheck,
    qkz_hamiltonians,
    qkz_residual,
    residue,
    site_R,
    transfer_B1,
    twist,
    twist_G,
    weight_patterns,
    yangian_degeneration,
    yangian_gram,
)
from wronski.checks import Outcome
from wronski.config import Settings, SolverConfig
from wronski.errors import HypothesisError, SingularOperatorError


def chain(z: list[float], q: list[float]) -> TensorSpace:
    return TensorSpace.create(len(q), z, q)


class TestTensorSpace:
    """Tests for TensorSpace validation."""

    def test_dimension(self) -> None:
        """dim = N^n."""
        assert chain([0.0, 1.0, 2.0], [1.0, 2.0]).dim == 8

    def test_too_large(self) -> None:
        """Spaces above 4096 dimensions are refused."""
        with pytest.raises(HypothesisError, match="exceeds 4096"):
            chain([float(k) for k in range(13)], [1.0, 2.0])

    def test_shape_mismatch(self) -> None:
        """z has n entries and Q has N."""
        with pytest.raises(HypothesisError):
            TensorSpace(2, 2, (0j,), (1 + 0j, 2 + 0j))

    def test_to_dict_real(self) -> None:
        """Real parameters serialize as plain numbers."""
        assert chain([2.0, 0.0], [1.0, 3.0]).to_dict() == {
            "N": 2,
            "n": 2,
            "z": [2.0, 0.0],
            "Q": [1.0, 3.0],
        }


class TestElementaryOperators:
    """Tests for flips, local operators and R-matrices."""

    def test_flip_is_involution(self) -> None:
        """P² = 1."""
        ts = chain([0.0, 1.0, 2.0], [1.0, 2.0])
        p = flip(ts, 0, 2).matrix
        assert_allclose(p @ p, np.eye(8))

    def test_flip_permutes_digits(self) -> None:
        """P^{(0,2)} sends e_(1,0,0) to e_(0,0,1)."""
        ts = chain([0.0, 1.0, 2.0], [1.0, 2.0])
        p = flip(ts, 0, 2).matrix
        assert p[1, 4] == 1.0

    def test_site_out_of_range(self) -> None:
        """Sites are 0-based and below n."""
        with pytest.raises(HypothesisError):
            flip(chain([0.0, 1.0], [1.0, 2.0]), 0, 2)

    def test_local_twist(self) -> None:
        """Q^{(1)} on two sites is 1 ⊗ diag(Q)."""
        ts = chain([0.0, 1.0], [1.0, 3.0])
        assert_allclose(twist(ts, 1).matrix, np.kron(np.eye(2), np.diag([1.0, 3.0])))
        assert local(ts, np.eye(2), 0).label == "X(0)"

    def test_unitarity(self) -> None:
        """R(x)R(-x) = (1 - x²)·1."""
        ts = chain([0.0, 1.0], [1.0, 2.0])
        product = site_R(2.0, 0, 1, ts) @ site_R(-2.0, 1, 0, ts)
        assert_allclose(product.matrix, -3 * np.eye(4))

    def test_same_site(self) -> None:
        """R^{(ii)} is undefined."""
        with pytest.raises(HypothesisError):
            site_R(1.0, 0, 0, chain([0.0, 1.0], [1.0, 2.0]))

    def test_factor_order(self) -> None:
        """Three sites order as R(1,2) R(0,2) R(0,1)."""
        assert big_R_factors(chain([0.0, 1.0, 2.0], [1.0])) == [(1, 2), (0, 2), (0, 1)]

    def test_big_r_single_site(self) -> None:
        """With one site the ordered product is empty."""
        assert_allclose(big_R(chain([0.5], [1.0, 2.0])).matrix, np.eye(2))


class TestQKZ:
    """Tests for the qKZ Hamiltonians and the transfer matrix B₁."""

    def test_single_site(self) -> None:
        """For n = 1, K_0 is the twist."""
        ts = chain([0.5], [1.0, 3.0])
        assert_allclose(qkz_hamiltonians(ts)[0].matrix, np.diag([1.0, 3.0]))
        assert qkz_residual(ts) < 1e-12

    def test_residues_match_hamiltonians(self) -> None:
        """K_i = ∏_{j≠i}(z_i - z_j)·Res_{z_i} B₁ on a generic chain."""
        ts = chain([0.3, 1.7, -1.1], [1.5, -0.7])
        assert qkz_residual(ts) < 1e-8

    def test_residues_three_states(self) -> None:
        """The identity also holds for N = 3."""
        ts = chain([0.0, 2.2], [0.5, -1.0, 2.0])
        assert qkz_residual(ts) < 1e-8

    def test_transfer_matrices_commute(self) -> None:
        """B₁(x) and B₁(y) commute."""
        ts = chain([0.3, 1.7, -1.1], [1.5, -0.7])
        assert commutator_norm(transfer_B1(0.37, ts), transfer_B1(-1.2, ts)) < 1e-10

    def test_hamiltonians_commute_with_transfer(self) -> None:
        """Each K_i commutes with B₁(x)."""
        ts = chain([0.3, 1.7, -1.1], [1.5, -0.7])
        b1 = transfer_B1(0.9, ts)
        for k in qkz_hamiltonians(ts):
            assert commutator_norm(k, b1) < 1e-9

    def test_large_x(self) -> None:
        """B₁(x) tends to (Σ Q_a)·1."""
        ts = chain([0.3, 1.7], [1.5, -0.7])
        assert_allclose(transfer_B1(1e9, ts).matrix, 0.8 * np.eye(4), atol=1e-8)

    def test_pole(self) -> None:
        """B₁ is not defined at an evaluation parameter."""
        with pytest.raises(HypothesisError, match="pole"):
            transfer_B1(1.7, chain([0.3, 1.7], [1.0, 2.0]))

    def test_residue_needs_distinct_parameters(self) -> None:
        """Coincident evaluation parameters give a double pole."""
        with pytest.raises(HypothesisError):
            residue(chain([1.0, 1.0], [1.0, 2.0]), 0)


class TestTwistedForms:
    """Tests for the Yangian form and its twisted variants."""

    def test_separated_decreasing(self) -> None:
        """z_0 - z_1 = 2 gives 2 + P with eigenvalues {3, 3, 3, 1}."""
        cert = certify_form(chain([2.0, 0.0], [1.0, 2.0]))
        assert cert.symmetry_defect < 1e-12
        assert cert.min_eigenvalue == pytest.approx(1.0)
        assert cert.max_eigenvalue == pytest.approx(3.0)
        assert cert.positive_definite

    def test_too_close(self) -> None:
        """A gap of 1/2 makes the form indefinite."""
        cert = certify_form(chain([0.5, 0.0], [1.0, 2.0]))
        assert cert.min_eigenvalue == pytest.approx(-0.5)
        assert not cert.definite

    def test_literal_orientation(self) -> None:
        """Increasing z flips the sign by literal_sign(n)."""
        cert = certify_form(chain([0.0, 2.0], [1.0, 2.0]))
        assert literal_sign(2) == -1
        assert cert.max_eigenvalue == pytest.approx(-1.0)
        assert cert.definite

    def test_literal_sign(self) -> None:
        """(-1)^{C(n-s, 2)}."""
        assert [literal_sign(n) for n in (1, 2, 3, 4, 5)] == [1, -1, -1, 1, 1]
        assert literal_sign(3, 1) == -1
        assert literal_sign(2, 2) == 1

    def test_complex_gram_rejected(self) -> None:
        """Definiteness is only certified for real forms."""
        ts = TensorSpace.create(2, [0.0, 2.0 + 1.0j], [1.0, 2.0])
        with pytest.raises(HypothesisError, match="hypotheses violated"):
            certify_form(ts)

    def test_g_zero_is_identity(self) -> None:
        """G_0 = 1 and the twisted Gram equals 𝐑."""
        ts = chain([2.0, 0.0], [1.0, 2.0])
        gram = yangian_gram(ts, twist_G(ts, 0))
        assert gram.descriptor == "twisted"
        assert_allclose(gram.gram, big_R(ts).matrix)

    def test_g_single_site(self) -> None:
        """For n = 1, G_1 = Q⁻¹."""
        ts = chain([0.5], [2.0, 4.0])
        assert_allclose(twist_G(ts, 1).matrix, np.diag([0.5, 0.25]))

    def test_g_one_of_two(self) -> None:
        """𝐑G_1 on two sites reduces to Q⁻¹ on site 0."""
        ts = chain([0.0, 0.3], [2.0, 4.0])
        gram = yangian_gram(ts, twist_G(ts, 1)).gram
        assert_allclose(gram, np.kron(np.diag([0.5, 0.25]), np.eye(2)), atol=1e-12)

    def test_g_full_increasing(self) -> None:
        """With s = n the block is increasing and the twisted form is positive."""
        ts = chain([0.0, 2.5], [1.0, 2.0])
        cert = certify_form(ts, twist_G(ts, 2))
        assert cert.symmetry_defect < 1e-10
        assert cert.positive_definite

    def test_singular_hamiltonian(self) -> None:
        """A zero twist value makes K_0 singular."""
        with pytest.raises(SingularOperatorError, match="K0"):
            twist_G(chain([0.5], [0.0, 1.0]), 1)

    def test_s_out_of_range(self) -> None:
        """s lies between 0 and n."""
        with pytest.raises(HypothesisError):
            twist_G(chain([0.5], [1.0, 2.0]), 2)

    def test_degeneration(self) -> None:
        """The normalized Gram approaches the identity as the spacing grows."""
        ts = chain([2.0, 0.0, -2.0], [1.0, 2.0])
        coarse = yangian_degeneration(ts, 1e2)
        fine = yangian_degeneration(ts, 1e4)
        assert fine < coarse
        assert fine < 1e-3


class TestCrossCheck:
    """Tests for the positivity and reality cross-check."""

    def test_weight_patterns(self) -> None:
        """Degree tuples summing to n, in lexicographic order."""
        assert weight_patterns(2, 2) == [(0, 2), (1, 1), (2, 0)]
        assert len(weight_patterns(3, 2)) == 6

    def test_positive_form_gives_real_solutions(self) -> None:
        """A positive form comes with real solutions for every pattern."""
        settings = Settings(solver=SolverConfig(starts=40))
        check = positivity_reality_crosscheck(chain([2.5, 0.5], [1.0, 2.0]), 0, settings)
        assert check.patterns == 3
        assert check.solutions >= 3
        assert check.outcome is Outcome.PASS

    def test_indefinite_form_makes_no_claim(self) -> None:
        """Without positivity nothing is solved."""
        check = positivity_reality_crosscheck(chain([0.5, 0.0], [1.0, 2.0]))
        assert check.outcome is Outcome.NO_CLAIM
        assert check.patterns == 0
        assert check.to_dict()["outcome"] == "no_claim"
