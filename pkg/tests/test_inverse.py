"""Tests for the inverse Wronski solver, worked examples and region scans."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wronski.config import DEFAULT_SETTINGS, Settings, SolverConfig
from wronski.errors import GridTooLargeError, HypothesisError, SearchTooLargeError
from wronski.inverse import (
    Axis,
    InverseMode,
    InverseProblem,
    ScanRow,
    closed_form_matches,
    count_mismatches,
    differential_problem_of,
    disagreements,
    discrete_problem_of,
    example_closed_form,
    example_problem,
    example_reality_condition,
    find_bipartition,
    newton,
    reality_report,
    recovers,
    scan_lines,
    scan_region,
    solve_inverse,
    step_corollary_check,
    tangency_points,
    theorem_region_test,
)
from wronski.quasiexp import Mode, QuasiExpSpace, discrete_wronskian

FEW_STARTS = Settings(solver=SolverConfig(starts=60))


class TestInverseProblem:
    """Tests for problem construction."""

    def test_unknown_order(self) -> None:
        """Example 2 has unknowns a, c, b."""
        problem = example_problem(2, (2.0, -1.0))
        assert problem.unknowns == ((0, 0), (1, 0), (1, 2))

    def test_not_square(self) -> None:
        """The number of roots must match the number of unknowns."""
        with pytest.raises(HypothesisError, match="not square"):
            InverseProblem(InverseMode.DISCRETE, (0j,), (1 + 0j, 2 + 0j), (1, 1))

    def test_repeated_degree(self) -> None:
        """Degrees within one site group are distinct."""
        with pytest.raises(HypothesisError, match="repeated degree"):
            InverseProblem(InverseMode.DISCRETE, (0j, 1 + 0j), (2 + 0j, 2 + 0j), (1, 1))

    def test_zero_base(self) -> None:
        """Discrete problems need nonzero bases."""
        with pytest.raises(HypothesisError):
            InverseProblem(InverseMode.DISCRETE, (), (0j,), (0,))

    def test_example_one_needs_q_not_one(self) -> None:
        """Q = 1 puts both members on one base with equal degrees."""
        with pytest.raises(HypothesisError):
            example_problem(1, (1.0, 0.5))

    def test_space_and_unknowns_round_trip(self) -> None:
        """unknowns_of recovers the coefficients that built a space."""
        problem = example_problem(2, (2.0, -1.0))
        u = np.array([0.5, -2.0, 3.0], dtype=np.complex128)
        assert_allclose(problem.unknowns_of(problem.space(u)), u)


class TestExampleClosedForms:
    """Tests for the two worked examples."""

    def test_example_one_solutions(self) -> None:
        """Q = 2, A = 1 has solutions (a, b) = (2, -4) and (-1, -1)."""
        found = sorted(example_closed_form(1, (2.0, 1.0)), key=lambda u: u[0].real)
        assert_allclose(found[0], [-1, -1])
        assert_allclose(found[1], [2, -4])

    def test_closed_form_has_target_roots(self) -> None:
        """Each closed-form solution has Wronskian roots {0, A}."""
        problem = example_problem(1, (2.0, 1.0))
        for u in example_closed_form(1, (2.0, 1.0)):
            w = discrete_wronskian(problem.space(u)).monic
            assert_allclose(w.coeffs, [0, -1, 1], atol=1e-12)

    def test_example_two_solutions(self) -> None:
        """A = 2, B = -1 admits x^3 - 5x^2 with a = 0."""
        found = example_closed_form(2, (2.0, -1.0))
        assert any(np.allclose(u, [0, 0, -5]) for u in found)

    def test_reality_conditions(self) -> None:
        """The conditions are (Q - 1)²A² + 4Q and A² + B² - AB - 3/4."""
        assert example_reality_condition(1, (2.0, 1.0)) == pytest.approx(9.0)
        assert example_reality_condition(1, (-3.0, 0.5)) == pytest.approx(-8.0)
        assert example_reality_condition(2, (0.0, 0.0)) == pytest.approx(-0.75)

    def test_tangency_points_on_both_curves(self) -> None:
        """The ellipse discriminant vanishes at each tangency point."""
        for a, b in tangency_points():
            assert example_reality_condition(2, (a, b)) == pytest.approx(0.0)
            assert max(abs(a), abs(b), abs(a - b)) == pytest.approx(1.0)

    def test_unknown_example(self) -> None:
        """Only two worked examples exist."""
        with pytest.raises(ValueError):
            example_problem(3, (0.0, 0.0))


class TestSolver:
    """Tests for Newton and the multistart solver."""

    def test_newton_from_nearby_start(self) -> None:
        """Newton converges from a perturbed solution."""
        problem = example_problem(1, (2.0, 1.0))
        result = newton(problem, np.array([2.1, -3.9]))
        assert result is not None
        assert_allclose(result[0], [2, -4], atol=1e-9)

    def test_rejects_loose_residual(self) -> None:
        """A point 1e-9 off a solution is not accepted without iterating."""
        problem = example_problem(1, (2.0, 1.0))
        frozen = Settings(solver=SolverConfig(max_iterations=0, polish_iterations=0))
        assert newton(problem, np.array([2 + 1e-9, -4.0]), frozen) is None

    def test_polished_residual(self) -> None:
        """Accepted points meet the 1e-10 forward residual."""
        problem = example_problem(1, (2.0, 1.0))
        result = newton(problem, np.array([2 + 1e-9, -4.0]))
        assert result is not None
        assert result[1] <= 1e-10

    def test_finds_both_example_solutions(self) -> None:
        """The multistart solver recovers the closed-form pair."""
        solved = solve_inverse(example_problem(1, (2.0, 1.0)), FEW_STARTS)
        assert closed_form_matches(1, (2.0, 1.0), solved)
        assert reality_report(solved, 1e-8).all_real

    def test_non_real_region(self) -> None:
        """A negative condition gives non-real solutions."""
        solved = solve_inverse(example_problem(1, (-3.0, 0.5)), FEW_STARTS)
        assert solved.solutions
        assert not reality_report(solved, 1e-8).all_real

    def test_seeded_determinism(self) -> None:
        """Equal seeds give equal solution lists."""
        problem = example_problem(2, (2.0, -1.0))
        first = solve_inverse(problem, FEW_STARTS)
        second = solve_inverse(problem, FEW_STARTS)
        assert len(first.solutions) == len(second.solutions)
        for a, b in zip(first.solutions, second.solutions, strict=True):
            assert_allclose(a.unknowns, b.unknowns)

    def test_max_solutions_stops_early(self) -> None:
        """The search ends once enough solutions are known."""
        settings = Settings(solver=SolverConfig(starts=60, max_solutions=1))
        solved = solve_inverse(example_problem(1, (2.0, 1.0)), settings)
        assert len(solved.solutions) == 1
        assert solved.starts_used <= 60

    def test_no_unknowns(self) -> None:
        """A problem with nothing to solve has the one trivial solution."""
        problem = InverseProblem(InverseMode.DISCRETE, (), (2 + 0j,), (0,))
        solved = solve_inverse(problem)
        assert len(solved.solutions) == 1
        assert not solved.to_dict()["possibly_incomplete"]


class TestPlantedProblems:
    """Tests for problems built from a known space."""

    def test_differential(self) -> None:
        """Wr(x + 1, e^x) = x e^x, and the solver finds a = 1 again."""
        space = QuasiExpSpace.build(Mode.EXPONENT, [0.0, 1.0], [[1.0, 1.0], [1.0]])
        problem = differential_problem_of(space)
        assert_allclose(problem.targets, [0.0], atol=1e-12)
        assert recovers(solve_inverse(problem, FEW_STARTS), space)

    def test_discrete(self) -> None:
        """Wr^d(x + 2, 3^x) = 2x + 3 has the root -3/2."""
        space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, [1.0, 3.0], [[2.0, 1.0], [1.0]])
        problem = discrete_problem_of(space)
        assert_allclose(problem.targets, [-1.5], atol=1e-12)
        assert recovers(solve_inverse(problem, FEW_STARTS), space)

    def test_step_corollary(self) -> None:
        """Rescaling by h turns the step-h problem into a step-1 one."""
        space = QuasiExpSpace.build(Mode.EXPONENT, [0.0, 0.5], [[-1.0, 1.0], [1.0]])
        report = step_corollary_check(space, 0.5, FEW_STARTS)
        assert len(report.roots) == 1
        assert report.hypothesis
        assert report.all_real
        assert report.recovered
        assert report.roots[0].real == pytest.approx(1 + 0.5 / (np.exp(0.25) - 1))


class TestHypotheses:
    """Tests for the separation hypotheses."""

    def test_separated_roots(self) -> None:
        """Gaps of at least 1 satisfy hypothesis (1)."""
        assert theorem_region_test([0.0, 1.5, 3.0])
        assert theorem_region_test([0.0, 1.0])

    def test_close_roots_without_same_sign(self) -> None:
        """Close roots fail without the same-sign hypothesis."""
        assert not theorem_region_test([0.0, 0.5])

    def test_bipartition(self) -> None:
        """Two close roots can go to different parts."""
        assert find_bipartition([0.0, 0.5]) == frozenset({0})
        assert theorem_region_test([0.0, 0.5], same_sign_bases=True)

    def test_no_bipartition(self) -> None:
        """Three mutually close roots cannot be split into two separated parts."""
        assert find_bipartition([0.0, 0.3, 0.6]) is None
        assert not theorem_region_test([0.0, 0.3, 0.6], same_sign_bases=True)

    def test_search_limit(self) -> None:
        """The bipartition search stops at twelve roots."""
        with pytest.raises(SearchTooLargeError):
            find_bipartition([0.1 * k for k in range(13)])

    def test_complex_roots_rejected(self) -> None:
        """The region test is for real roots."""
        with pytest.raises(HypothesisError):
            theorem_region_test([1j])  # type: ignore[list-item]


class TestScans:
    """Tests for region scans."""

    def test_axis_values(self) -> None:
        """An axis includes both ends."""
        axis = Axis(-1.0, 1.0, 0.5)
        assert axis.count == 5
        assert axis.values() == [-1.0, -0.5, 0.0, 0.5, 1.0]

    def test_axis_validated(self) -> None:
        """A zero step is rejected."""
        with pytest.raises(ValueError):
            Axis(0.0, 1.0, 0.0)

    def test_example_one_needs_q(self) -> None:
        """Example 1 scans are along lines of fixed Q."""
        with pytest.raises(ValueError):
            scan_lines(1, Axis(0.0, 1.0, 0.5))

    def test_grid_limit(self) -> None:
        """Grids above a million points are refused."""
        with pytest.raises(GridTooLargeError):
            scan_lines(2, Axis(0.0, 2000.0, 1.0))

    def test_small_scan_agrees(self) -> None:
        """Solver verdicts match the sign test on a tiny Example 1 grid."""
        rows = scan_region(1, Axis(1.0, 2.0, 1.0), (2.0,), FEW_STARTS)
        assert [r.a for r in rows] == [1.0, 2.0]
        assert all(r.q == 2.0 and r.solution_count == 2 for r in rows)
        assert disagreements(rows) == 0
        assert rows[0].to_dict()["condition_sign"] == 1

    def test_example_two_counts(self) -> None:
        """Every point of a 3x3 Example 2 grid has exactly two solutions."""
        rows = scan_region(2, Axis(-1.0, 1.0, 1.0), (), FEW_STARTS)
        assert len(rows) == 9
        assert all(r.condition_sign != 0 for r in rows)
        assert [r.solution_count for r in rows] == [2] * 9
        assert count_mismatches(rows) == 0
        assert disagreements(rows) == 0

    def test_count_mismatches(self) -> None:
        """Missing or extra solutions count off the boundary only."""
        rows = [
            ScanRow(0.0, 0.0, None, -0.75, -1, False, 1, True),
            ScanRow(1.0, 0.0, None, 0.25, 1, True, 3, True),
            ScanRow(1.0, 0.5, None, 0.0, 0, True, 1, None),
            ScanRow(-1.0, 1.0, None, 2.25, 1, True, 2, True),
        ]
        assert count_mismatches(rows) == 2

    def test_default_settings_unchanged(self) -> None:
        """Scans never mutate the shared defaults."""
        assert DEFAULT_SETTINGS.solver.max_solutions is None
