"""Inverse Wronski solving, the two worked examples, and region scans.

Given bases (or exponents), standard-basis degrees and target roots, the
unknowns are the free coefficients of the standard basis and the equations
say that the Wronskian divided by its fixed leading coefficient equals the
monic target polynomial. The system is square.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from math import isclose, sqrt
from typing import Any

import numpy as np

from wronski.config import DEFAULT_SETTINGS, InverseProblemModel, Settings, from_complex, to_complex
from wronski.errors import GridTooLargeError, HypothesisError, SearchTooLargeError
from wronski.polycore import Polynomial, classify_real, from_roots, is_real, roots
from wronski.quasiexp import (
    Mode,
    QuasiExp,
    QuasiExpSpace,
    discrete_wronskian,
    raw_wronskian,
    rescale,
    same_site,
    standard_basis,
    wronski_leading_coefficient,
    wronskian,
)

logger = logging.getLogger(__name__)

MAX_BIPARTITION = 12
MAX_GRID_POINTS = 10**6
EXAMPLE_SOLUTIONS = 2
SCAN_SOLUTION_CAP = EXAMPLE_SOLUTIONS + 1
SCAN_FOLLOW_STARTS = 12
WARM_NUDGE = 1e-3j


class InverseMode(Enum):
    DISCRETE = "discrete"
    DIFFERENTIAL = "differential"


@dataclass(frozen=True)
class InverseProblem:
    """Find every space with prescribed Wronskian roots.

    Attributes:
        mode: Discrete step-1 Wronskian with bases, or differential with exponents.
        targets: Roots z_1..z_m of the target Wronskian.
        sites: Base (discrete) or exponent (differential) of each member.
        degrees: Standard-basis degree of each member.
    """

    mode: InverseMode
    targets: tuple[complex, ...]
    sites: tuple[complex, ...]
    degrees: tuple[int, ...]
    unknowns: tuple[tuple[int, int], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.sites) != len(self.degrees):
            raise HypothesisError("one degree per site is required")
        if any(d < 0 for d in self.degrees):
            raise HypothesisError("degrees must be nonnegative")
        if self.mode is InverseMode.DISCRETE and any(s == 0 for s in self.sites):
            raise HypothesisError("bases must be nonzero")
        positions: list[tuple[int, int]] = []
        for j, (site, d) in enumerate(zip(self.sites, self.degrees, strict=True)):
            group = [
                self.degrees[k] for k in range(len(self.sites)) if same_site(self.sites[k], site)
            ]
            if group.count(d) > 1:
                raise HypothesisError(f"repeated degree {d} within one site group")
            positions.extend((j, k) for k in range(d) if k not in group)
        object.__setattr__(self, "unknowns", tuple(positions))
        if len(positions) != len(self.targets):
            raise HypothesisError(
                f"system is not square: {len(positions)} unknowns for {len(self.targets)} roots"
            )

    @classmethod
    def from_model(cls, model: InverseProblemModel) -> "InverseProblem":
        return cls(
            InverseMode(model.mode),
            tuple(to_complex(t) for t in model.targets),
            tuple(to_complex(s) for s in model.sites),
            tuple(model.degrees),
        )

    @property
    def space_mode(self) -> Mode:
        return Mode.MULTIPLICATIVE if self.mode is InverseMode.DISCRETE else Mode.EXPONENT

    @property
    def target_polynomial(self) -> Polynomial:
        return from_roots(self.targets)

    def space(self, unknowns: np.ndarray) -> QuasiExpSpace:
        """Standard-basis space for a vector of free coefficients."""
        parts = [np.zeros(d + 1, dtype=np.complex128) for d in self.degrees]
        for j, d in enumerate(self.degrees):
            parts[j][d] = 1.0
        for value, (j, k) in zip(unknowns, self.unknowns, strict=True):
            parts[j][k] = value
        return QuasiExpSpace(
            self.space_mode,
            tuple(QuasiExp(s, Polynomial(p)) for s, p in zip(self.sites, parts, strict=True)),
        )

    def unknowns_of(self, space: QuasiExpSpace) -> np.ndarray:
        """Free coefficients of ``space`` after bringing it to standard form."""
        standard = standard_basis(space)
        by_site: dict[int, Polynomial] = {}
        used: set[int] = set()
        for j, (site, d) in enumerate(zip(self.sites, self.degrees, strict=True)):
            for k, member in enumerate(standard.members):
                if k not in used and same_site(member.site, site) and member.poly.degree == d:
                    by_site[j] = member.poly
                    used.add(k)
                    break
            else:
                raise HypothesisError(f"space has no member of degree {d} at site {site:.6g}")
        return np.array([by_site[j].coefficient(k) for j, k in self.unknowns])

    def wronskian_of(self, unknowns: np.ndarray) -> Polynomial:
        return raw_wronskian(
            self.space(unknowns), differential=self.mode is InverseMode.DIFFERENTIAL
        )


@dataclass(frozen=True)
class Solution:
    """One solution of an inverse problem.

    Attributes:
        unknowns: Free coefficients, in the problem's unknown order.
        space: The corresponding standard-basis space.
        residual: Coefficientwise forward residual against the target.
    """

    unknowns: np.ndarray
    space: QuasiExpSpace
    residual: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "unknowns": [from_complex(complex(u)) for u in self.unknowns],
            "space": self.space.to_dict(),
            "residual": self.residual,
        }


@dataclass(frozen=True)
class SolutionSet:
    """Distinct solutions found by the multistart solver.

    Attributes:
        problem: The problem solved.
        solutions: Deduplicated solutions in discovery order.
        starts_used: Starting points consumed (including warm starts).
        converged: Starts that reached the residual tolerance.
        dedup_radius: Radius used to merge solutions.
    """

    problem: InverseProblem
    solutions: tuple[Solution, ...]
    starts_used: int
    converged: int
    dedup_radius: float

    @property
    def possibly_incomplete(self) -> bool:
        return not self.solutions

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.problem.mode.value,
            "targets": [from_complex(t) for t in self.problem.targets],
            "solutions": [s.to_dict() for s in self.solutions],
            "starts_used": self.starts_used,
            "converged": self.converged,
            "dedup_radius": self.dedup_radius,
            "possibly_incomplete": self.possibly_incomplete,
        }


@dataclass(frozen=True)
class RealityReport:
    """Per-solution reality of an inverse solve.

    Attributes:
        verdicts: True where every site and coefficient is real.
        max_imag: Largest |Im| over each solution's sites and coefficients.
        tol: Reality tolerance used.
    """

    verdicts: tuple[bool, ...]
    max_imag: tuple[float, ...]
    tol: float

    @property
    def all_real(self) -> bool:
        return all(self.verdicts)

    def to_dict(self) -> dict[str, Any]:
        return {"verdicts": list(self.verdicts), "max_imag": list(self.max_imag), "tol": self.tol}


def _residual(
    problem: InverseProblem, lead: complex, target: np.ndarray, u: np.ndarray
) -> np.ndarray:
    w = problem.wronskian_of(u) / lead
    return w.padded(len(target) + 1)[: len(target)] - target


def _jacobian(problem: InverseProblem, lead: complex, u: np.ndarray) -> np.ndarray:
    """Exact Jacobian: the Wronskian is linear in each member."""
    size = len(problem.targets)
    jac = np.zeros((size, len(u)), dtype=np.complex128)
    differential = problem.mode is InverseMode.DIFFERENTIAL
    base = problem.space(u)
    for col, (j, k) in enumerate(problem.unknowns):
        members = list(base.members)
        members[j] = QuasiExp(members[j].site, Polynomial.monomial(k))
        w = raw_wronskian(QuasiExpSpace(base.mode, tuple(members)), differential=differential)
        jac[:, col] = (w / lead).padded(size)[:size]
    return jac


def newton(
    problem: InverseProblem,
    start: np.ndarray,
    settings: Settings = DEFAULT_SETTINGS,
    lead: complex | None = None,
) -> tuple[np.ndarray, float] | None:
    """Damped Newton from one start, followed by undamped polishing.

    Returns:
        The converged unknowns and their forward residual, or None.
    """
    if lead is None:
        lead = wronski_leading_coefficient(problem.space_mode, problem.sites, problem.degrees)
    target = problem.target_polynomial.padded(len(problem.targets) + 1)[: len(problem.targets)]
    scale = max(1.0, float(np.max(np.abs(target))) if len(target) else 1.0)
    u = np.array(start, dtype=np.complex128)
    if len(u) == 0:
        return u, 0.0
    f = _residual(problem, lead, target, u)
    norm = float(np.linalg.norm(f))
    for _ in range(settings.solver.max_iterations):
        if norm <= 1e-13 * scale:
            break
        try:
            step = np.linalg.solve(_jacobian(problem, lead, u), -f)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        while t > 1e-4:
            trial = u + t * step
            f_trial = _residual(problem, lead, target, trial)
            norm_trial = float(np.linalg.norm(f_trial))
            if norm_trial < norm:
                u, f, norm = trial, f_trial, norm_trial
                break
            t /= 2
        else:
            return None
    for _ in range(settings.solver.polish_iterations):
        try:
            step = np.linalg.solve(_jacobian(problem, lead, u), -f)
        except np.linalg.LinAlgError:
            break
        trial = u + step
        f_trial = _residual(problem, lead, target, trial)
        if np.linalg.norm(f_trial) >= norm:
            break
        u, f, norm = trial, f_trial, float(np.linalg.norm(f_trial))
    residual = float(np.max(np.abs(f)))
    if not np.all(np.isfinite(u)) or residual > settings.tolerances.forward_residual * scale:
        return None
    return u, residual


def solve_inverse(
    problem: InverseProblem,
    settings: Settings = DEFAULT_SETTINGS,
    warm_starts: Iterable[np.ndarray] = (),
    stream: Sequence[int] = (),
) -> SolutionSet:
    """Multistart Newton on the coefficient system.

    Warm starts are tried first, then random starts: start k draws complex
    Gaussian components from default_rng([seed, *stream, k]), scaled to the
    magnitude of the target roots. Solutions closer than the dedup radius
    (relative) are merged. With ``max_solutions`` set, the search stops once
    that many distinct solutions are known.

    Args:
        problem: A square inverse problem.
        settings: Solver settings and tolerances.
        warm_starts: Extra starting points tried before the random ones.
        stream: Extra integers mixed into the seed, so neighbouring work
            items draw independent starts.
    """
    solver = settings.solver
    lead = wronski_leading_coefficient(problem.space_mode, problem.sites, problem.degrees)
    spread = max([1.0, *(abs(t) for t in problem.targets)])
    radius = settings.tolerances.dedup_radius
    found: list[Solution] = []
    used = 0
    converged = 0

    def starts() -> Iterable[np.ndarray]:
        yield from warm_starts
        size = len(problem.unknowns)
        for k in range(solver.starts):
            rng = np.random.default_rng([solver.seed, *stream, k])
            yield spread * (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / sqrt(2)

    for start in starts():
        if solver.max_solutions is not None and len(found) >= solver.max_solutions:
            break
        used += 1
        result = newton(problem, start, settings, lead)
        if result is None:
            continue
        converged += 1
        u, residual = result
        size = 1 + float(np.max(np.abs(u), initial=0.0))
        if any(np.max(np.abs(u - s.unknowns), initial=0.0) <= radius * size for s in found):
            continue
        found.append(Solution(u, problem.space(u), residual))
        logger.debug("solution %d found at start %d (residual %.2e)", len(found), used, residual)
    if not found:
        logger.warning("no solutions after %d starts; result possibly incomplete", used)
    return SolutionSet(problem, tuple(found), used, converged, radius)


def reality_report(solutions: SolutionSet, tol: float) -> RealityReport:
    """Reality of each solution's sites and standard-basis coefficients."""
    verdicts: list[bool] = []
    max_imag: list[float] = []
    for s in solutions.solutions:
        values = np.concatenate(
            [np.array(solutions.problem.sites, dtype=np.complex128), s.unknowns]
        )
        verdicts.append(is_real(values, tol))
        max_imag.append(float(np.max(np.abs(values.imag), initial=0.0)))
    return RealityReport(tuple(verdicts), tuple(max_imag), tol)


# --- worked examples --------------------------------------------------------


def example_problem(example: int, params: Sequence[float]) -> InverseProblem:
    """Inverse problem of a worked example.

    Example 1 (params Q, A): Wr^d(x + a, (x + b)Q^x) has roots {0, A}.
    Example 2 (params A, B): Wr^d(x + a, x³ + bx² + c) has roots {0, A, B}.
    """
    if example == 1:
        q, a = params
        if q == 1:
            raise HypothesisError("Example 1 needs Q != 1")
        return InverseProblem(InverseMode.DISCRETE, (0j, complex(a)), (1 + 0j, complex(q)), (1, 1))
    if example == 2:
        a, b = params
        return InverseProblem(
            InverseMode.DISCRETE, (0j, complex(a), complex(b)), (1 + 0j, 1 + 0j), (1, 3)
        )
    raise ValueError(f"unknown example {example}")


def example_reality_condition(example: int, params: Sequence[float]) -> float:
    """Quantity whose sign decides reality of both solutions of a worked example.

    Example 1: (Q - 1)²A² + 4Q. Example 2: A² + B² - AB - 3/4.
    """
    if example == 1:
        q, a = params
        if q == 1:
            raise HypothesisError("Example 1 needs Q != 1")
        return (q - 1) ** 2 * a**2 + 4 * q
    if example == 2:
        a, b = params
        return a * a + b * b - a * b - 0.75
    raise ValueError(f"unknown example {example}")


def example_closed_form(example: int, params: Sequence[float]) -> list[np.ndarray]:
    """Both solutions of a worked example, in the unknown order of example_problem.

    Example 1: (Q - 1)a² + (QA - A - 2)a - (A + 1) = 0 and b = -1 - A - a;
    unknowns are (a, b).
    Example 2: 3a² + (2S + 3)a + (S + 1 + P) = 0 with S = A + B, P = AB,
    then b = -2S - 3 - 3a and c = a(1 + b); unknowns are (a, c, b).
    """
    if example == 1:
        q, big_a = params
        lead = q - 1
        linear = q * big_a - big_a - 2
        root = np.sqrt(complex(example_reality_condition(1, params)))
        out: list[np.ndarray] = []
        for sign in (1, -1):
            a = (-linear + sign * root) / (2 * lead)
            out.append(np.array([a, -1 - big_a - a]))
        return out
    if example == 2:
        big_a, big_b = params
        s, p = big_a + big_b, big_a * big_b
        root = np.sqrt(complex((2 * s + 3) ** 2 - 12 * (s + 1 + p)))
        out = []
        for sign in (1, -1):
            a = (-(2 * s + 3) + sign * root) / 6
            b = -2 * s - 3 - 3 * a
            out.append(np.array([a, a * (1 + b), b]))
        return out
    raise ValueError(f"unknown example {example}")


def tangency_points() -> list[tuple[float, float]]:
    """Points where the Example 2 ellipse touches the hexagon |A|=1, |B|=1, |A-B|=1."""
    return [(1.0, 0.5), (0.5, 1.0), (-0.5, 0.5), (-1.0, -0.5), (-0.5, -1.0), (0.5, -0.5)]


# --- hypotheses -------------------------------------------------------------


def _separated(values: Sequence[float], gap: float = 1.0) -> bool:
    ordered = sorted(values)
    return all(b - a >= gap - 1e-12 for a, b in zip(ordered, ordered[1:], strict=False))


def find_bipartition(z: Sequence[float]) -> frozenset[int] | None:
    """A subset I with both I and its complement separated by at least 1, if one exists.

    Raises:
        SearchTooLargeError: For more than 12 roots.
    """
    n = len(z)
    if n > MAX_BIPARTITION:
        raise SearchTooLargeError(n)
    for size in range(n // 2 + 1):
        for subset in combinations(range(n), size):
            inside = [z[i] for i in subset]
            outside = [z[i] for i in range(n) if i not in subset]
            if _separated(inside) and _separated(outside):
                return frozenset(subset)
    return None


def theorem_region_test(z: Sequence[float], same_sign_bases: bool = False) -> bool:
    """Whether real roots satisfy a reality hypothesis.

    Hypothesis (1): all pairwise gaps are at least 1. Hypothesis (2), only
    with ``same_sign_bases``: some bipartition has both parts separated.

    Raises:
        SearchTooLargeError: If hypothesis (2) must be searched for n > 12.
    """
    if any(not isinstance(v, float | int) for v in z):
        raise HypothesisError("roots must be real")
    if _separated(z):
        return True
    if not same_sign_bases:
        return False
    return find_bipartition(z) is not None


# --- region scans -----------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    """Values lo, lo + step, ... up to hi inclusive."""

    lo: float
    hi: float
    step: float

    def __post_init__(self) -> None:
        if self.step <= 0 or self.hi < self.lo:
            raise ValueError("axis needs step > 0 and hi >= lo")

    @property
    def count(self) -> int:
        return int(np.floor((self.hi - self.lo) / self.step + 1e-9)) + 1

    def values(self) -> list[float]:
        return [round(self.lo + k * self.step, 12) for k in range(self.count)]


@dataclass(frozen=True)
class ScanRow:
    """One grid point of a region scan.

    Attributes:
        a: The A coordinate.
        b: The B coordinate (Example 2) or None.
        q: The base Q (Example 1) or None.
        condition: The example's reality condition.
        condition_sign: 1, -1, or 0 inside the boundary band.
        solver_real: Whether every solution found is real.
        solution_count: Distinct solutions found.
        agree: Verdict equals the sign test; None inside the boundary band.
    """

    a: float
    b: float | None
    q: float | None
    condition: float
    condition_sign: int
    solver_real: bool
    solution_count: int
    agree: bool | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "A": self.a,
            "B": self.b,
            "Q": self.q,
            "condition": self.condition,
            "condition_sign": self.condition_sign,
            "solver_verdict": self.solver_real,
            "solution_count": self.solution_count,
            "agree": self.agree,
        }


def scan_lines(
    example: int, axis: Axis, qs: Sequence[float] = ()
) -> list[tuple[float, list[float]]]:
    """Grid lines of a scan: (Q, A values) for Example 1, (A, B values) for Example 2.

    Raises:
        GridTooLargeError: Over 10^6 grid points.
    """
    values = axis.values()
    if example == 1:
        if not qs:
            raise ValueError("Example 1 scans need at least one Q")
        total = len(values) * len(qs)
        lines = [(float(q), values) for q in qs]
    elif example == 2:
        total = len(values) ** 2
        lines = [(a, values) for a in values]
    else:
        raise ValueError(f"unknown example {example}")
    if total > MAX_GRID_POINTS:
        raise GridTooLargeError(total)
    return lines


def scan_line(
    example: int,
    line: int,
    fixed: float,
    values: Sequence[float],
    settings: Settings = DEFAULT_SETTINGS,
) -> list[ScanRow]:
    """Scan one grid line, warm-starting each point from its neighbour's solutions.

    Random starts at point k of line ``line`` are seeded with (seed, example, line, k).
    The search stops at three solutions, so an overcount stays visible. A point
    whose neighbour handed over both solutions first tries only SCAN_FOLLOW_STARTS
    random starts, and falls back to the full budget if it finds fewer than two.
    """
    band = settings.tolerances.boundary_band
    capped = settings.solver.model_copy(update={"max_solutions": SCAN_SOLUTION_CAP})
    full = settings.model_copy(update={"solver": capped})
    follow_solver = capped.model_copy(update={"starts": min(capped.starts, SCAN_FOLLOW_STARTS)})
    follow = settings.model_copy(update={"solver": follow_solver})
    rows: list[ScanRow] = []
    previous: list[np.ndarray] = []
    for index, value in enumerate(values):
        params = (fixed, value)
        problem = example_problem(example, params)
        # nudged copies leave the real line
        warm = [*previous, *(p + WARM_NUDGE * (1 + np.abs(p)) for p in previous)]
        stream = (example, line, index)
        solved = None
        if len(previous) >= EXAMPLE_SOLUTIONS:
            solved = solve_inverse(problem, follow, warm_starts=warm, stream=stream)
        if solved is None or len(solved.solutions) < EXAMPLE_SOLUTIONS:
            solved = solve_inverse(problem, full, warm_starts=warm, stream=stream)
        previous = [s.unknowns for s in solved.solutions]
        report = reality_report(solved, settings.tolerances.reality)
        condition = example_reality_condition(example, params)
        sign = 0 if abs(condition) < band else (1 if condition > 0 else -1)
        solver_real = bool(solved.solutions) and report.all_real
        agree = None if sign == 0 else solver_real == (sign > 0)
        count = len(solved.solutions)
        if example == 1:
            rows.append(ScanRow(value, None, fixed, condition, sign, solver_real, count, agree))
        else:
            rows.append(ScanRow(fixed, value, None, condition, sign, solver_real, count, agree))
    return rows


def scan_region(
    example: int, axis: Axis, qs: Sequence[float] = (), settings: Settings = DEFAULT_SETTINGS
) -> list[ScanRow]:
    """Sequential region scan in row-major order."""
    rows: list[ScanRow] = []
    for line, (fixed, values) in enumerate(scan_lines(example, axis, qs)):
        rows.extend(scan_line(example, line, fixed, values, settings))
    return rows


def disagreements(rows: Iterable[ScanRow]) -> int:
    """Grid points outside the boundary band where verdict and sign test differ."""
    return sum(1 for r in rows if r.agree is False)


def count_mismatches(rows: Iterable[ScanRow]) -> int:
    """Grid points outside the boundary band without exactly two solutions."""
    return sum(
        1 for r in rows if r.condition_sign != 0 and r.solution_count != EXAMPLE_SOLUTIONS
    )


# --- step-h corollary -------------------------------------------------------


@dataclass(frozen=True)
class StepCorollaryReport:
    """Step-h reality check of an exponent-mode space.

    Attributes:
        roots: Roots of the step-h discrete Wronskian.
        hypothesis: Roots real and pairwise at least |h| apart.
        all_real: Every solution of the rescaled inverse problem is real.
        recovered: The rescaled input space is among the solutions.
    """

    roots: tuple[complex, ...]
    hypothesis: bool
    all_real: bool
    recovered: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "roots": [from_complex(r) for r in self.roots],
            "hypothesis": self.hypothesis,
            "all_real": self.all_real,
            "recovered": self.recovered,
        }


def step_corollary_check(
    space: QuasiExpSpace, h: float, settings: Settings = DEFAULT_SETTINGS
) -> StepCorollaryReport:
    """Step-h reality check: rescale by h and solve the step-1 inverse problem."""
    tol = settings.tolerances.reality
    step_roots = roots(discrete_wronskian(space, h).monic).roots
    real = bool(np.all(classify_real(step_roots, tol)))
    hypothesis = real and _separated([float(r.real) for r in step_roots], abs(h))
    image = standard_basis(rescale(space, h))
    problem = InverseProblem(
        InverseMode.DISCRETE,
        tuple(complex(r) / h for r in step_roots),
        tuple(m.site for m in image.members),
        tuple(m.poly.degree for m in image.members),
    )
    solved = solve_inverse(problem, settings)
    recovered = recovers(solved, image)
    all_real = bool(solved.solutions) and reality_report(solved, tol).all_real
    found = tuple(complex(r) for r in step_roots)
    return StepCorollaryReport(found, hypothesis, all_real, recovered)


def differential_problem_of(space: QuasiExpSpace) -> InverseProblem:
    """Inverse problem whose solutions include ``space`` (differential Wronskian)."""
    standard = standard_basis(space)
    return InverseProblem(
        InverseMode.DIFFERENTIAL,
        tuple(complex(r) for r in roots(wronskian(standard).monic).roots),
        tuple(m.site for m in standard.members),
        tuple(m.poly.degree for m in standard.members),
    )


def discrete_problem_of(space: QuasiExpSpace) -> InverseProblem:
    """Inverse problem whose solutions include ``space`` (step-1 discrete Wronskian)."""
    standard = standard_basis(space)
    return InverseProblem(
        InverseMode.DISCRETE,
        tuple(complex(r) for r in roots(discrete_wronskian(standard).monic).roots),
        tuple(m.site for m in standard.members),
        tuple(m.poly.degree for m in standard.members),
    )


def recovers(solutions: SolutionSet, space: QuasiExpSpace, radius: float = 1e-6) -> bool:
    """Whether ``space`` is among the solutions, compared in standard coordinates."""
    planted = solutions.problem.unknowns_of(space)
    scale = 1 + float(np.max(np.abs(planted), initial=0.0))
    return any(
        float(np.max(np.abs(s.unknowns - planted), initial=0.0)) <= radius * scale
        for s in solutions.solutions
    )


def closed_form_matches(example: int, params: Sequence[float], solutions: SolutionSet) -> bool:
    """Whether the solver found exactly the two closed-form solutions."""
    expected = example_closed_form(example, params)
    if len(solutions.solutions) != len(expected):
        return False
    for e in expected:
        tol = 1e-6 * (1 + float(np.max(np.abs(e))))
        if not any(
            isclose(float(np.max(np.abs(s.unknowns - e))), 0.0, abs_tol=tol)
            for s in solutions.solutions
        ):
            return False
    return True
