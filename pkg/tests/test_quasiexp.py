"""Tests for quasi-exponential spaces, Wronskians and the confluent family."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wronski.errors import (
    CoincidentBasesError,
    DegenerateSpaceError,
    HypothesisError,
    ZeroWronskianError,
)
from wronski.polycore import Polynomial
from wronski.quasiexp import (
    ConfluentFamily,
    Mode,
    QuasiExpSpace,
    confluent_identity_residual,
    confluent_limit,
    confluent_wronskian,
    discrete_derivative,
    discrete_rows,
    discrete_wronskian,
    expected_degree,
    rescale,
    richardson,
    standard_basis,
    step_limit_errors,
    vandermonde_product,
    wronski_leading_coefficient,
    wronskian,
    wronskian_degree,
)
from wronski.sampling import degree_space, item_rng


def exponent_space(sites: list[complex], polys: list[list[complex]]) -> QuasiExpSpace:
    return QuasiExpSpace.build(Mode.EXPONENT, sites, polys)


class TestQuasiExpSpace:
    """Tests for construction, grouping and serialization."""

    def test_empty_space_rejected(self) -> None:
        """A space needs at least one member."""
        with pytest.raises(DegenerateSpaceError):
            QuasiExpSpace(Mode.EXPONENT, ())

    def test_zero_base_rejected(self) -> None:
        """Multiplicative bases must be nonzero."""
        with pytest.raises(HypothesisError, match="zero base"):
            QuasiExpSpace.build(Mode.MULTIPLICATIVE, [0.0], [[1.0]])

    def test_groups_in_first_appearance_order(self) -> None:
        """Members sharing a site are grouped together."""
        space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, [2.0, 3.0, 2.0], [[1.0], [1.0], [0, 1]])
        groups = space.groups()
        assert [site for site, _ in groups] == [2.0, 3.0]
        assert groups[0][1] == [0, 2]

    def test_dependent_group_detected(self) -> None:
        """x and 2x at one site are dependent."""
        space = QuasiExpSpace.build(Mode.EXPONENT, [1.0, 1.0], [[0, 1], [0, 2]])
        with pytest.raises(DegenerateSpaceError, match="dependent"):
            space.check_independent()

    def test_to_dict_uses_mode_key(self) -> None:
        """Exponent-mode members serialize under 'exponent'."""
        data = exponent_space([0.5], [[1.0]]).to_dict()
        assert data["mode"] == "exponent"
        assert "exponent" in data["members"][0]

    def test_is_real(self) -> None:
        """Any non-real site or coefficient makes the basis non-real."""
        assert exponent_space([0.5], [[1.0, 2.0]]).is_real(1e-12)
        assert not exponent_space([0.5j], [[1.0]]).is_real(1e-12)


class TestStandardBasis:
    """Tests for reduced echelon bases."""

    def test_reduces_within_group(self) -> None:
        """{x^2 + x, x + 1} becomes {x + 1, x^2 - 1}."""
        space = exponent_space([0.0, 0.0], [[0, 1, 1], [1, 1, 0]])
        basis = standard_basis(space)
        assert_allclose(basis.members[0].poly.coeffs, [1, 1])
        assert_allclose(basis.members[1].poly.coeffs, [-1, 0, 1])

    def test_separate_groups_made_monic(self) -> None:
        """Each member at its own site is just made monic."""
        basis = standard_basis(exponent_space([1.0, 2.0], [[2, 4], [3]]))
        assert_allclose(basis.members[0].poly.coeffs, [0.5, 1])
        assert_allclose(basis.members[1].poly.coeffs, [1])

    def test_dependent_raises(self) -> None:
        """Dependent members have no standard basis."""
        with pytest.raises(DegenerateSpaceError):
            standard_basis(exponent_space([0.0, 0.0], [[0, 1], [0, 3]]))


class TestDiscreteWronskian:
    """Tests for discrete Wronskians."""

    def test_pure_exponentials(self) -> None:
        """det [[1, Q1], [1, Q2]] = Q2 - Q1 with prefactor Q1 Q2."""
        space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, [2.0, 5.0], [[1.0], [1.0]])
        value = discrete_wronskian(space)
        assert value.monic.degree == 0
        assert value.kappa == pytest.approx(3.0)
        assert value.prefactor == pytest.approx(10.0)

    def test_polynomial_parts(self) -> None:
        """{1, x} at one base Q has Wronskian Q."""
        space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, [3.0, 3.0], [[1.0], [0.0, 1.0]])
        value = discrete_wronskian(space)
        assert value.polynomial.allclose(Polynomial.constant(3.0))

    def test_exponent_mode_step(self) -> None:
        """{1, x} with exponent 0 at step h gives h."""
        value = discrete_wronskian(exponent_space([0.0, 0.0], [[1.0], [0.0, 1.0]]), h=0.25)
        assert value.polynomial.allclose(Polynomial.constant(0.25))

    def test_multiplicative_needs_unit_step(self) -> None:
        """Multiplicative mode rejects any step other than 1."""
        space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, [2.0], [[1.0]])
        with pytest.raises(HypothesisError, match="only step h = 1"):
            discrete_rows(space, 2.0)

    def test_zero_step_rejected(self) -> None:
        """h = 0 is not a step."""
        with pytest.raises(HypothesisError):
            discrete_rows(exponent_space([0.0], [[1.0]]), 0.0)

    def test_identical_members_give_zero(self) -> None:
        """Dependent members have an identically zero Wronskian."""
        space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, [2.0, 2.0], [[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(ZeroWronskianError):
            discrete_wronskian(space)

    def test_to_dict(self) -> None:
        """The prefactor kind depends on the mode."""
        space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, [2.0, 5.0], [[1.0], [1.0]])
        assert discrete_wronskian(space).to_dict()["prefactor_kind"] == "base_product"


class TestDifferentialWronskian:
    """Tests for the differential Wronskian."""

    def test_pure_exponentials(self) -> None:
        """det [[1, a], [1, b]] = b - a."""
        value = wronskian(exponent_space([1.0, 4.0], [[1.0], [1.0]]))
        assert value.kappa == pytest.approx(3.0)
        assert value.prefactor == pytest.approx(5.0)

    def test_monomials(self) -> None:
        """Wr(1, x) = 1."""
        value = wronskian(exponent_space([0.0, 0.0], [[1.0], [0.0, 1.0]]))
        assert value.polynomial.allclose(Polynomial.constant(1.0))

    def test_degree_matches_formula(self) -> None:
        """Wr(x, x^3) = 2x^3 has degree (1 + 3) - 1."""
        value = wronskian(exponent_space([0.0, 0.0], [[0, 1], [0, 0, 0, 1]]))
        assert value.monic.degree == wronskian_degree([[1, 3]])
        assert value.kappa == pytest.approx(2.0)

    def test_needs_exponent_mode(self) -> None:
        """The differential Wronskian is undefined for multiplicative spaces."""
        space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, [2.0], [[1.0]])
        with pytest.raises(HypothesisError):
            wronskian(space)

    def test_step_limit(self) -> None:
        """Wr_h / h^{N(N-1)/2} tends to Wr as h shrinks."""
        space = exponent_space([0.3, -0.7], [[1.0, 1.0], [2.0, 0.0, 1.0]])
        errors = step_limit_errors(space, [0.02, 0.01, 0.005])
        assert errors[2] < errors[1] < errors[0]
        assert errors[1] / errors[2] == pytest.approx(2.0, rel=0.25)


class TestDegreeFormulas:
    """Tests for degree bookkeeping."""

    def test_expected_degree(self) -> None:
        """n = lN - Σ n_i² + 1."""
        assert expected_degree(3, [1, 1]) == 5
        assert expected_degree(4, [2]) == 5

    def test_expected_degree_rejects_small_ambient(self) -> None:
        """l must exceed N."""
        with pytest.raises(ValueError):
            expected_degree(2, [1, 1])

    def test_wronskian_degree(self) -> None:
        """Degrees per group minus the triangular count."""
        assert wronskian_degree([[0, 1]]) == 0
        assert wronskian_degree([[2], [3]]) == 5

    @pytest.mark.parametrize(
        ("sites", "parts"),
        [([0.0, 0.0], [2]), ([0.0, 1.0], [1, 1])],
    )
    def test_full_degree_reaches_bound(self, sites: list[float], parts: list[int]) -> None:
        """Parts of degree l - 1 give a Wronskian of degree exactly n - 1."""
        value = wronskian(exponent_space(sites, [[1, 0, 1], [0, 1, 1]]))
        assert value.monic.degree == expected_degree(3, parts) - 1

    @pytest.mark.parametrize(
        ("sites", "parts", "reduced"),
        [([0.0, 0.0], [2], 1), ([0.0, 1.0], [1, 1], 2)],
    )
    def test_lowered_degree_stays_below_bound(
        self, sites: list[float], parts: list[int], reduced: int
    ) -> None:
        """Dropping a part to a constant leaves the degree strictly under n - 1."""
        value = wronskian(exponent_space(sites, [[1, 0, 1], [1]]))
        assert value.monic.degree == reduced
        assert value.monic.degree < expected_degree(3, parts) - 1

    def test_vandermonde_product(self) -> None:
        """(2 - 1)(4 - 1)(4 - 2) = 6."""
        assert vandermonde_product([1, 2, 4]) == pytest.approx(6.0)

    def test_leading_coefficient(self) -> None:
        """For constant parts the top coefficient is the Vandermonde product."""
        kappa = wronski_leading_coefficient(Mode.MULTIPLICATIVE, [2.0, 3.0], [0, 0])
        assert kappa == pytest.approx(1.0)


class TestRescale:
    """Tests for rescale()."""

    def test_bases_and_parts(self) -> None:
        """Exponent λ becomes base e^{hλ} and x stays monic x."""
        scaled = rescale(exponent_space([1.0], [[0.0, 1.0]]), 0.5)
        assert scaled.mode is Mode.MULTIPLICATIVE
        assert scaled.members[0].site == pytest.approx(np.exp(0.5))
        assert_allclose(scaled.members[0].poly.coeffs, [0, 1])


class TestConfluentFamily:
    """Tests for the confluent family and its limit."""

    def test_shape_validated(self) -> None:
        """The q-table must have d columns."""
        with pytest.raises(ValueError, match="shape"):
            ConfluentFamily(2, np.ones((2, 1)), (1.0,), (2,))

    def test_group_and_offset(self) -> None:
        """Indices map to pattern groups and offsets within them."""
        cf = ConfluentFamily(1, np.ones((3, 1)), (1.0, 2.0), (2, 1))
        assert [cf.group_of(i) for i in range(3)] == [0, 0, 1]
        assert [cf.offset_of(i) for i in range(3)] == [0, 1, 0]
        assert cf.limit_point() == [1.0, 1.0, 2.0]
        assert cf.spread_point(0.1) == pytest.approx([1.0, 1.1, 2.0])

    def test_coincident_bases_rejected(self) -> None:
        """W(x, 𝐐) is only defined for distinct bases."""
        cf = ConfluentFamily(1, np.array([[1.0], [2.0]]), (2.0,), (2,))
        with pytest.raises(CoincidentBasesError):
            confluent_wronskian(cf, [2.0, 2.0])

    def test_distinct_pattern_limit(self) -> None:
        """Without merging, c = 1 / (Q2 - Q1) and the difference check is exact."""
        cf = ConfluentFamily(1, np.array([[1.0], [2.0]]), (1.5, 3.0), (1, 1))
        limit = confluent_limit(cf)
        assert limit.constant == pytest.approx(1 / 1.5)
        assert limit.fd_residual < 1e-12

    def test_limit_identity(self) -> None:
        """The extrapolated Wronskian matches the explicit limit."""
        cf = ConfluentFamily(1, np.array([[1.0], [2.0]]), (2.0,), (2,))
        residual, _, explicit = confluent_identity_residual(cf)
        assert residual < 1e-4
        assert explicit.degree >= 0


class TestFiniteDifferences:
    """Tests for difference quotients and extrapolation."""

    def test_discrete_derivative(self) -> None:
        """(1.5² - 1²) / 0.5 = 2.5."""
        assert discrete_derivative(lambda q: q * q, 1.0, 0.5) == pytest.approx(2.5)

    def test_second_order(self) -> None:
        """The second forward difference of Q² is 2 at any step."""
        assert discrete_derivative(lambda q: q * q, 1.0, 0.3, order=2) == pytest.approx(2.0)

    def test_richardson_removes_linear_term(self) -> None:
        """f(h) = 1 + h extrapolates to 1."""
        value = richardson([np.array([2.0]), np.array([1.5])])
        assert value[0] == pytest.approx(1.0)


def recombined(space: QuasiExpSpace, rng: np.random.Generator) -> QuasiExpSpace:
    """A random invertible change of basis inside each site group, members shuffled."""
    sites: list[complex] = []
    polys: list[Polynomial] = []
    for site, indices in space.groups():
        k = len(indices)
        width = max(len(space.members[i].poly.coeffs) for i in indices)
        coeffs = np.array([space.members[i].poly.padded(width) for i in indices])
        unitary, _ = np.linalg.qr(rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
        mixing = unitary @ np.diag(rng.uniform(0.5, 2.0, k))
        sites.extend([site] * k)
        polys.extend(Polynomial(row) for row in mixing @ coeffs)
    order = rng.permutation(len(polys))
    return QuasiExpSpace.build(space.mode, [sites[j] for j in order], [polys[j] for j in order])


def monic_wronskian(space: QuasiExpSpace) -> Polynomial:
    if space.mode is Mode.MULTIPLICATIVE:
        return discrete_wronskian(space).monic
    return wronskian(space).monic


class TestBasisIndependence:
    """Tests that w(x) depends on the space and not on the chosen basis."""

    @pytest.mark.parametrize("index", range(12))
    def test_random_recombination(self, index: int) -> None:
        """Recombining members within site groups leaves the monic part unchanged."""
        rng = item_rng(11, index)
        _, _, space = degree_space(rng)
        before = monic_wronskian(space)
        after = monic_wronskian(recombined(space, rng))
        assert after.degree == before.degree
        assert after.allclose(before, 1e-9)

    @pytest.mark.parametrize("index", range(6))
    def test_standard_basis_keeps_monic_part(self, index: int) -> None:
        """The standard basis spans the same space, so w(x) agrees."""
        _, _, space = degree_space(item_rng(12, index))
        assert monic_wronskian(standard_basis(space)).allclose(monic_wronskian(space), 1e-9)
