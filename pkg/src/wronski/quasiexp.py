"""Spaces of quasi-exponentials and their Wronskians.

A member is p(x)·Q^x (multiplicative mode) or p(x)·e^{λx} (exponent mode).
Discrete Wronskians in multiplicative mode are taken only at integer step,
where Q^{x+j} = Q^x·Q^j needs no branch of the logarithm.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from math import prod
from typing import Any

import numpy as np
from numpy.polynomial import polynomial as npp
from scipy.linalg import svdvals

from wronski.config import QuasiExpSpaceModel, from_complex, to_complex
from wronski.errors import (
    CoincidentBasesError,
    DegenerateSpaceError,
    HypothesisError,
    ZeroWronskianError,
)
from wronski.polycore import Polynomial, as_polynomial, polynomial_determinant

logger = logging.getLogger(__name__)

SITE_TOL = 1e-12
WRONSKIAN_TRIM = 1e-10


class Mode(Enum):
    """How the site value of a member enters the function."""

    MULTIPLICATIVE = "multiplicative"
    EXPONENT = "exponent"


def same_site(a: complex, b: complex) -> bool:
    return abs(a - b) <= SITE_TOL * (1.0 + max(abs(a), abs(b)))


@dataclass(frozen=True)
class QuasiExp:
    """One member p(x)·site^x or p(x)·e^{site·x}."""

    site: complex
    poly: Polynomial


@dataclass(frozen=True)
class QuasiExpSpace:
    """Space spanned by quasi-exponentials.

    Attributes:
        mode: Whether sites are bases Q_i or exponents λ_i.
        members: Spanning members; their number is the dimension N.
    """

    mode: Mode
    members: tuple[QuasiExp, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise DegenerateSpaceError("a space needs at least one member")
        if self.mode is Mode.MULTIPLICATIVE:
            for k, member in enumerate(self.members):
                if member.site == 0:
                    raise HypothesisError(f"member {k} has zero base")

    @classmethod
    def build(
        cls, mode: Mode, sites: Sequence[complex], polys: Sequence[Polynomial | Sequence[complex]]
    ) -> "QuasiExpSpace":
        members = tuple(
            QuasiExp(complex(s), as_polynomial(p))
            for s, p in zip(sites, polys, strict=True)
        )
        return cls(mode, members)

    @classmethod
    def from_model(cls, model: QuasiExpSpaceModel) -> "QuasiExpSpace":
        mode = Mode(model.mode)
        members: list[QuasiExp] = []
        for m in model.members:
            pair = m.base if mode is Mode.MULTIPLICATIVE else m.exponent
            assert pair is not None
            poly = Polynomial(np.array([to_complex(c) for c in m.poly]))
            members.append(QuasiExp(to_complex(pair), poly))
        return cls(mode, tuple(members))

    def to_dict(self) -> dict[str, Any]:
        key = "base" if self.mode is Mode.MULTIPLICATIVE else "exponent"
        return {
            "mode": self.mode.value,
            "members": [
                {key: from_complex(m.site), "poly": m.poly.to_json()} for m in self.members
            ],
        }

    @property
    def dimension(self) -> int:
        return len(self.members)

    @property
    def sites(self) -> list[complex]:
        return [m.site for m in self.members]

    @property
    def polys(self) -> list[Polynomial]:
        return [m.poly for m in self.members]

    def groups(self) -> list[tuple[complex, list[int]]]:
        """Member indices grouped by equal site, in order of first appearance."""
        out: list[tuple[complex, list[int]]] = []
        for k, member in enumerate(self.members):
            for site, indices in out:
                if same_site(site, member.site):
                    indices.append(k)
                    break
            else:
                out.append((member.site, [k]))
        return out

    def check_independent(self, rank_tol: float = 1e-10) -> None:
        """Raise DegenerateSpaceError unless each site group has full rank."""
        for site, indices in self.groups():
            matrix = _coefficient_matrix([self.members[k].poly for k in indices])
            singular = svdvals(matrix)
            if singular[0] == 0 or singular[-1] <= rank_tol * singular[0]:
                raise DegenerateSpaceError(f"members at site {site:.6g} are dependent")

    def is_real(self, tol: float) -> bool:
        """Reality of the given basis (sites and every coefficient)."""
        values = [m.site for m in self.members]
        for m in self.members:
            values.extend(m.poly.coeffs.tolist())
        arr = np.asarray(values)
        return bool(np.all(np.abs(arr.imag) <= tol * (1.0 + np.abs(arr.real))))


def _coefficient_matrix(polys: Sequence[Polynomial]) -> np.ndarray:
    width = max(len(p.coeffs) for p in polys)
    return np.array([p.padded(width) for p in polys])


def standard_basis(space: QuasiExpSpace, rank_tol: float = 1e-10) -> QuasiExpSpace:
    """The standard basis of ``space``.

    Within each site group the polynomial parts become monic with strictly
    increasing degrees, and every coefficient sitting at another member's
    degree is eliminated (reduced row echelon form, pivoting from the top
    degree down).

    Raises:
        DegenerateSpaceError: If a group is numerically dependent.
    """
    members: list[QuasiExp] = []
    for site, indices in space.groups():
        matrix = _coefficient_matrix([space.members[k].poly for k in indices])
        rows = _reduced_echelon(matrix, rank_tol)
        if len(rows) < len(indices):
            raise DegenerateSpaceError(f"members at site {site:.6g} are dependent")
        rows.sort(key=lambda r: int(np.flatnonzero(r)[-1]))
        members.extend(QuasiExp(site, Polynomial(r)) for r in rows)
    return QuasiExpSpace(space.mode, tuple(members))


def _reduced_echelon(matrix: np.ndarray, rank_tol: float) -> list[np.ndarray]:
    m = matrix.astype(np.complex128).copy()
    n_rows, n_cols = m.shape
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    pivot_row = 0
    for col in range(n_cols - 1, -1, -1):
        if pivot_row == n_rows:
            break
        candidates = np.abs(m[pivot_row:, col])
        best = int(np.argmax(candidates))
        if candidates[best] <= rank_tol * scale:
            continue
        r = pivot_row + best
        m[[pivot_row, r]] = m[[r, pivot_row]]
        m[pivot_row] /= m[pivot_row, col]
        m[pivot_row, col] = 1.0
        for other in range(n_rows):
            if other != pivot_row and m[other, col] != 0:
                m[other] -= m[other, col] * m[pivot_row]
                m[other, col] = 0.0
        pivot_row += 1
    return [m[k] for k in range(pivot_row)]


@dataclass(frozen=True)
class WronskianValue:
    """A Wronskian factored as kappa · monic(x) · (exponential prefactor)^x.

    Attributes:
        monic: The monic polynomial w(x).
        kappa: Scalar factor.
        prefactor: Product of bases (the factor is prefactor^x) or sum of
            exponents (the factor is e^{prefactor·x}).
        mode: Which reading of ``prefactor`` applies.
    """

    monic: Polynomial
    kappa: complex
    prefactor: complex
    mode: Mode

    @property
    def polynomial(self) -> Polynomial:
        """kappa · w(x), the Wronskian with the exponential factor removed."""
        return self.monic * self.kappa

    def to_dict(self) -> dict[str, Any]:
        return {
            "monic": self.monic.to_json(),
            "kappa": from_complex(self.kappa),
            "prefactor": from_complex(self.prefactor),
            "prefactor_kind": (
                "base_product" if self.mode is Mode.MULTIPLICATIVE else "exponent_sum"
            ),
        }


def _factor(
    det: Polynomial, rows: list[list[Polynomial]], mode: Mode, prefactor: complex
) -> WronskianValue:
    reference = prod(max(entry.scale for entry in row) for row in rows)
    trimmed = det.trimmed(WRONSKIAN_TRIM, reference=reference)
    if trimmed.is_zero:
        raise ZeroWronskianError()
    return WronskianValue(trimmed.monic(), trimmed.leading, prefactor, mode)


def discrete_rows(space: QuasiExpSpace, h: float = 1.0) -> list[list[Polynomial]]:
    """Polynomial parts of f_i(x + jh), j = 0..N-1, with the common exponential removed.

    Raises:
        HypothesisError: On a non-unit step in multiplicative mode or h = 0.
    """
    if h == 0:
        raise HypothesisError("step h must be nonzero")
    if space.mode is Mode.MULTIPLICATIVE:
        if h != 1:
            raise HypothesisError("multiplicative mode supports only step h = 1")
        multipliers = space.sites
    else:
        multipliers = [complex(np.exp(lam * h)) for lam in space.sites]
    return [
        [m.poly.shift(j * h) * (c**j) for j in range(space.dimension)]
        for m, c in zip(space.members, multipliers, strict=True)
    ]


def differential_rows(space: QuasiExpSpace) -> list[list[Polynomial]]:
    """Row i holds (∂ + λ_i)^j p_i, the polynomial parts of the derivatives."""
    if space.mode is not Mode.EXPONENT:
        raise HypothesisError("the differential Wronskian needs exponent mode")
    rows: list[list[Polynomial]] = []
    for m in space.members:
        entry = m.poly
        row = [entry]
        for _ in range(1, space.dimension):
            entry = entry.derivative() + entry * m.site
            row.append(entry)
        rows.append(row)
    return rows


def raw_wronskian(
    space: QuasiExpSpace, *, differential: bool = False, h: float = 1.0
) -> Polynomial:
    """Untrimmed Wronskian polynomial; zero for dependent members, never raises on it."""
    rows = differential_rows(space) if differential else discrete_rows(space, h)
    return polynomial_determinant(rows)


def discrete_wronskian(space: QuasiExpSpace, h: float = 1.0) -> WronskianValue:
    """Determinant of f_i(x + (j-1)h), factored as kappa · w(x) · prefactor.

    Multiplicative mode accepts only h = 1. Exponent mode accepts any real
    nonzero h, with row multipliers e^{λ_i h}.

    Raises:
        HypothesisError: On a non-unit step in multiplicative mode or h = 0.
        ZeroWronskianError: If the members are dependent.
    """
    rows = discrete_rows(space, h)
    if space.mode is Mode.MULTIPLICATIVE:
        prefactor = complex(prod(space.sites))
    else:
        prefactor = complex(sum(space.sites))
    return _factor(polynomial_determinant(rows), rows, space.mode, prefactor)


def wronskian(space: QuasiExpSpace) -> WronskianValue:
    """Differential Wronskian of an exponent-mode space, as kappa · w(x) · e^{Σλ_i x}."""
    rows = differential_rows(space)
    return _factor(polynomial_determinant(rows), rows, Mode.EXPONENT, complex(sum(space.sites)))


def expected_degree(l: int, parts: Sequence[int]) -> int:  # noqa: E741
    """n = lN - Σ n_i² + 1, the dimension of the target of the Wronski map.

    A generic monic Wronskian of members with degrees below l has degree n - 1.
    """
    total = sum(parts)
    if any(p < 1 for p in parts):
        raise ValueError("multiplicities must be positive")
    if l <= total:
        raise ValueError(f"ambient bound l={l} must exceed N={total}")
    return l * total - sum(p * p for p in parts) + 1


def wronskian_degree(degrees_by_group: Sequence[Sequence[int]]) -> int:
    """Degree of the Wronskian for given standard-basis degrees per site group."""
    return sum(sum(ds) - len(ds) * (len(ds) - 1) // 2 for ds in degrees_by_group)


def rescale(space: QuasiExpSpace, h: float) -> QuasiExpSpace:
    """{f(xh) : f in V}: bases e^{hλ_i} and parts p_i(xh), made monic again."""
    if space.mode is not Mode.EXPONENT:
        raise HypothesisError("rescale needs exponent mode")
    if h == 0:
        raise HypothesisError("step h must be nonzero")
    members = tuple(
        QuasiExp(complex(np.exp(h * m.site)), m.poly.rescale(h).monic()) for m in space.members
    )
    return QuasiExpSpace(Mode.MULTIPLICATIVE, members)


def vandermonde_product(values: Sequence[complex]) -> complex:
    """∏_{i<j} (v_j - v_i)."""
    return complex(
        prod(values[j] - values[i] for i in range(len(values)) for j in range(i + 1, len(values)))
    )


# --- confluent family -------------------------------------------------------


@dataclass(frozen=True)
class ConfluentFamily:
    """The family p(x, Q, 𝐐) = x^d + Σ_j ∏_{r<j}(Q - Q_r) q_j(x).

    Attributes:
        d: Degree of the master monomial.
        q: Array of shape (N, d); row j holds the ascending coefficients of q_{j+1}.
        pattern: Distinct limit bases Q⁰_1..Q⁰_k.
        multiplicities: n_1..n_k with Σ n_i = N.
    """

    d: int
    q: np.ndarray
    pattern: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    _q: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        q = np.array(self.q, dtype=np.complex128)
        if q.ndim != 2 or q.shape[1] != self.d:
            raise ValueError(f"q-table must have shape (N, {self.d}), got {q.shape}")
        if sum(self.multiplicities) != q.shape[0]:
            raise ValueError("multiplicities must sum to the number of q rows")
        if len(self.pattern) != len(self.multiplicities):
            raise ValueError("one multiplicity per pattern base")
        object.__setattr__(self, "_q", q)

    @property
    def size(self) -> int:
        return int(self._q.shape[0])

    def group_of(self, i: int) -> int:
        """m(i) for a 0-based member index."""
        bound = 0
        for group, n in enumerate(self.multiplicities):
            bound += n
            if i < bound:
                return group
        raise IndexError(i)

    def offset_of(self, i: int) -> int:
        """r(i) for a 0-based member index."""
        return i - sum(self.multiplicities[: self.group_of(i)])

    def limit_point(self) -> list[complex]:
        """𝐐⁰ with each pattern base repeated n_i times."""
        return [b for b, n in zip(self.pattern, self.multiplicities, strict=True) for _ in range(n)]

    def spread_point(self, h: float) -> list[complex]:
        """𝐐⁰_h = (Q⁰_1, Q⁰_1 + h, ..., Q⁰_k + (n_k - 1)h)."""
        return [
            b + r * h
            for b, n in zip(self.pattern, self.multiplicities, strict=True)
            for r in range(n)
        ]

    def bivariate(self, bases: Sequence[complex]) -> np.ndarray:
        """Coefficients c[a, b] of x^a Q^b in p(x, Q, bases)."""
        table = np.zeros((self.d + 1, self.size), dtype=np.complex128)
        table[self.d, 0] = 1.0
        for j in range(self.size):
            in_q = npp.polyfromroots(list(bases[:j])) if j else np.ones(1)
            table[: self.d, : len(in_q)] += np.outer(self._q[j], in_q)
        return table

    def member(self, Q: complex, bases: Sequence[complex]) -> Polynomial:
        """p(x, Q, bases) as a polynomial in x."""
        table = self.bivariate(bases)
        return Polynomial(table @ np.power(complex(Q), np.arange(table.shape[1])))


def confluent_wronskian(cf: ConfluentFamily, bases: Sequence[complex]) -> Polynomial:
    """W(x, 𝐐): the discrete Wronskian of p(x, Q_i, 𝐐)·Q_i^x over ∏_{i<j}(Q_j - Q_i).

    Raises:
        CoincidentBasesError: If two bases coincide.
    """
    if len(bases) != cf.size:
        raise ValueError(f"need {cf.size} bases, got {len(bases)}")
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            if same_site(bases[i], bases[j]):
                raise CoincidentBasesError(i, j)
    space = QuasiExpSpace.build(Mode.MULTIPLICATIVE, bases, [cf.member(Q, bases) for Q in bases])
    value = discrete_wronskian(space)
    return value.polynomial / vandermonde_product(list(bases))


@dataclass(frozen=True)
class ConfluentLimit:
    """Explicit basis for the confluent limit of a family.

    Attributes:
        polys: p_i⁰(x), of degree d + r(i).
        bases: Q⁰_{m(i)} for each member.
        constant: c(𝐐⁰) without its exponential factor.
        fd_residual: Largest relative gap between p_i⁰ and its forward
            difference approximation at integer points.
    """

    polys: tuple[Polynomial, ...]
    bases: tuple[complex, ...]
    constant: complex
    fd_residual: float

    def space(self) -> QuasiExpSpace:
        return QuasiExpSpace.build(Mode.MULTIPLICATIVE, self.bases, self.polys)


def discrete_derivative(
    f: Callable[[complex], complex], Q: complex, h: float, order: int = 1
) -> complex:
    """τ^{(order)}_{Q,h} f (Q), the iterated forward difference quotient."""
    if order == 0:
        return f(Q)
    return (
        discrete_derivative(f, Q + h, h, order - 1) - discrete_derivative(f, Q, h, order - 1)
    ) / h


def _euler_difference(
    f: Callable[[complex], complex], h: float, order: int
) -> Callable[[complex], complex]:
    """(Q·τ_{Q,h})^order applied to f."""
    if order == 0:
        return f
    inner = _euler_difference(f, h, order - 1)
    return lambda Q: Q * discrete_derivative(inner, Q, h)


def confluent_limit(cf: ConfluentFamily, fd_step: float = 1e-5) -> ConfluentLimit:
    """Limit basis p_i⁰ and constant c(𝐐⁰).

    p_i⁰ = Q^{-r(i)} (x + Q∂_Q)^{r(i)} p(x, Q, 𝐐⁰) evaluated at Q = Q⁰_{m(i)}.
    """
    limit = cf.limit_point()
    table = cf.bivariate(limit)
    q_powers = np.arange(table.shape[1])
    polys: list[Polynomial] = []
    bases: list[complex] = []
    worst = 0.0
    for i in range(cf.size):
        base = cf.pattern[cf.group_of(i)]
        r = cf.offset_of(i)
        current = table
        for _ in range(r):
            raised = np.zeros((current.shape[0] + 1, current.shape[1]), dtype=np.complex128)
            raised[1:] += current
            raised[:-1] += current * q_powers
            current = raised
        poly = Polynomial(current @ np.power(base, q_powers)) * base ** (-r)
        polys.append(poly)
        bases.append(base)
        worst = max(worst, _fd_check(cf, limit, poly, base, r, fd_step))

    denominator: complex = 1.0
    for a in range(len(cf.pattern)):
        for b in range(a + 1, len(cf.pattern)):
            denominator *= (cf.pattern[b] - cf.pattern[a]) ** (
                cf.multiplicities[a] * cf.multiplicities[b]
            )
    for n in cf.multiplicities:
        denominator *= prod((n - j) ** j for j in range(1, n))
    logger.debug("confluent limit: fd residual %.3e", worst)
    return ConfluentLimit(tuple(polys), tuple(bases), 1.0 / denominator, worst)


def _fd_check(
    cf: ConfluentFamily, limit: list[complex], poly: Polynomial, base: complex, r: int, h: float
) -> float:
    worst = 0.0
    for k in range(poly.degree + 1):

        def f(Q: complex, k: int = k) -> complex:
            return complex(cf.member(Q, limit)(k)) * Q**k

        approx = _euler_difference(f, h, r)(base) * base ** (-r - k)
        exact = complex(poly(k))
        worst = max(worst, abs(approx - exact) / (1.0 + abs(exact)))
    return worst


def richardson(values: Sequence[np.ndarray], ratio: float = 2.0) -> np.ndarray:
    """Extrapolate a sequence computed at h, h/ratio, h/ratio², ... to h = 0."""
    table = [np.asarray(v, dtype=np.complex128) for v in values]
    for level in range(1, len(table)):
        factor = ratio**level
        table = [
            table[k + 1] + (table[k + 1] - table[k]) / (factor - 1) for k in range(len(table) - 1)
        ]
    return table[0]


def confluent_identity_residual(
    cf: ConfluentFamily, h0: float = 1e-2, levels: int = 5
) -> tuple[float, Polynomial, Polynomial]:
    """Compare lim_{h→0} W(x, 𝐐⁰_h) with c(𝐐⁰)·Wr^d(p_i⁰ (Q⁰_{m(i)})^x).

    Returns:
        Relative coefficientwise residual, the extrapolated limit, and the
        explicit right-hand side.
    """
    samples = [confluent_wronskian(cf, cf.spread_point(h0 / 2**k)) for k in range(levels)]
    width = max(len(s.coeffs) for s in samples)
    extrapolated = Polynomial(richardson([s.padded(width) for s in samples])).trimmed(1e-9)
    limit = confluent_limit(cf)
    explicit = discrete_wronskian(limit.space()).polynomial * limit.constant
    residual = extrapolated.distance(explicit) / max(explicit.scale, 1.0)
    return residual, extrapolated, explicit


def step_limit_errors(space: QuasiExpSpace, steps: Sequence[float]) -> list[float]:
    """Coefficientwise error of Wr^d_h(V)/h^{N(N-1)/2} against Wr(V) per step."""
    exact = wronskian(space).polynomial
    power = space.dimension * (space.dimension - 1) // 2
    errors: list[float] = []
    for h in steps:
        approx = discrete_wronskian(space, h).polynomial / h**power
        errors.append(approx.distance(exact))
    return errors


def wronski_leading_coefficient(
    mode: Mode, sites: Sequence[complex], degrees: Sequence[int]
) -> complex:
    """Top coefficient of the Wronskian of standard-basis members with given degrees.

    Only the leading monomials matter, so the value is computed from the
    space of pure monomials x^{d_i}·site^x.
    """
    polys = [Polynomial.monomial(d) for d in degrees]
    space = QuasiExpSpace.build(mode, sites, polys)
    value = discrete_wronskian(space) if mode is Mode.MULTIPLICATIVE else wronskian(space)
    return value.kappa
