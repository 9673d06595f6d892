"""Log-free quasi-polynomial spaces, their Fuchsian operators and the bispectral dual.

Members are x^z·p(x) with real z. The Euler operator θ = x∂ acts by
θ(x^z p) = x^z (z·p + x·p'), so every operator computation stays inside
polynomial arithmetic on the parts.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Any

import numpy as np
from scipy.linalg import null_space, svdvals

from wronski.config import (
    DEFAULT_SETTINGS,
    DualityConvention,
    QuasiPolySpaceModel,
    TableEntryModel,
    from_complex,
    to_complex,
)
from wronski.errors import (
    DegenerateSpaceError,
    HypothesisError,
    KernelDeficiencyError,
    NonFuchsianError,
    UnramifiedError,
    ZeroWronskianError,
)
from wronski.polycore import (
    Polynomial,
    RootMultiset,
    as_polynomial,
    from_roots,
    polynomial_determinant,
    roots,
)
from wronski.quasiexp import Mode, QuasiExp, QuasiExpSpace, discrete_wronskian, standard_basis

logger = logging.getLogger(__name__)

MAX_DIMENSION = 5
CLASS_TOL = 1e-9
TRIM = 1e-10


@dataclass(frozen=True)
class QuasiPoly:
    exponent: float
    poly: Polynomial


@dataclass(frozen=True)
class QuasiPolySpace:
    """Space spanned by x^{z_i}·p_i(x) with real exponents.

    Attributes:
        members: Spanning members. Any power of x dividing a part is moved
            into its exponent on construction, so every part has p(0) != 0.
    """

    members: tuple[QuasiPoly, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise DegenerateSpaceError("a space needs at least one member")
        normalized: list[QuasiPoly] = []
        for k, member in enumerate(self.members):
            if not np.isfinite(member.exponent):
                raise HypothesisError(f"member {k} has a non-finite exponent")
            if member.poly.is_zero:
                raise DegenerateSpaceError(f"member {k} is zero")
            coeffs = member.poly.coeffs
            valuation = int(np.flatnonzero(coeffs)[0])
            normalized.append(
                QuasiPoly(float(member.exponent) + valuation, Polynomial(coeffs[valuation:]))
            )
        object.__setattr__(self, "members", tuple(normalized))

    @classmethod
    def build(
        cls, exponents: Sequence[float], polys: Sequence[Polynomial | Sequence[complex]]
    ) -> "QuasiPolySpace":
        return cls(
            tuple(
                QuasiPoly(float(z), as_polynomial(p))
                for z, p in zip(exponents, polys, strict=True)
            )
        )

    @classmethod
    def from_model(cls, model: QuasiPolySpaceModel) -> "QuasiPolySpace":
        return cls.build(
            [m.exponent for m in model.members],
            [Polynomial(np.array([to_complex(c) for c in m.poly])) for m in model.members],
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "members": [{"exponent": m.exponent, "poly": m.poly.to_json()} for m in self.members]
        }

    @property
    def dimension(self) -> int:
        return len(self.members)

    def exponent_classes(self) -> list[tuple[float, list[int]]]:
        """Members grouped by exponent modulo integers, with the smallest exponent per class."""
        classes: list[tuple[float, list[int]]] = []
        for k, member in enumerate(self.members):
            for index, (base, indices) in enumerate(classes):
                gap = member.exponent - base
                if abs(gap - round(gap)) <= CLASS_TOL:
                    indices.append(k)
                    classes[index] = (min(base, member.exponent), indices)
                    break
            else:
                classes.append((member.exponent, [k]))
        return classes

    def class_matrix(self, base: float, indices: Sequence[int]) -> np.ndarray:
        """Rows of x^{z_k - base}·p_k coefficients, one per member of a class."""
        shifted = [
            Polynomial.monomial(int(round(self.members[k].exponent - base))) * self.members[k].poly
            for k in indices
        ]
        width = max(len(p.coeffs) for p in shifted)
        return np.array([p.padded(width) for p in shifted])

    def check_independent(self, rank_tol: float = 1e-10) -> None:
        for base, indices in self.exponent_classes():
            singular = svdvals(self.class_matrix(base, indices))
            if singular[-1] <= rank_tol * singular[0]:
                raise DegenerateSpaceError(f"members with exponent class {base:.6g} are dependent")


def euler_power(poly: Polynomial, z: float, power: int) -> Polynomial:
    """Part of θ^power (x^z p) after removing x^z, i.e. (z + θ)^power p."""
    x = Polynomial.x()
    out = poly
    for _ in range(power):
        out = out * z + x * out.derivative()
    return out


def _valuation(p: Polynomial, tol: float) -> int:
    if p.is_zero:
        return 10**9
    cutoff = tol * p.scale
    nonzero = np.flatnonzero(np.abs(p.coeffs) > cutoff)
    return int(nonzero[0]) if nonzero.size else 10**9


def _drop_low(p: Polynomial, count: int) -> Polynomial:
    if p.is_zero or count == 0:
        return p
    return Polynomial(p.coeffs[count:]) if len(p.coeffs) > count else Polynomial(np.zeros(1))


def _euler_minors(space: QuasiPolySpace) -> list[Polynomial]:
    """Δ_0..Δ_n: determinants of the (z_k + θ)^l p_k table with column j removed."""
    n = space.dimension
    table = [[euler_power(m.poly, m.exponent, l) for l in range(n + 1)] for m in space.members]
    minors: list[Polynomial] = []
    for j in range(n + 1):
        rows = [row[:j] + row[j + 1 :] for row in table]
        reference = float(np.prod([max(e.scale for e in row) for row in rows]))
        minors.append(polynomial_determinant(rows).trimmed(TRIM, reference=reference))
    return minors


def qp_wronskian(space: QuasiPolySpace) -> tuple[float, Polynomial, complex]:
    """Wronskian of a quasi-polynomial basis as κ·x^r·w(x) with w monic, w(0) != 0.

    Returns:
        The exponent r, the monic polynomial w and the scalar κ.

    Raises:
        ZeroWronskianError: If the members are dependent.
    """
    n = space.dimension
    top = _euler_minors(space)[n]
    if top.is_zero:
        raise ZeroWronskianError()
    valuation = _valuation(top, TRIM)
    w = _drop_low(top, valuation)
    r = sum(m.exponent for m in space.members) - n * (n - 1) / 2 + valuation
    return r, w.monic(), w.leading


def nonzero_wronskian_roots(space: QuasiPolySpace, polish_tol: float = 1e-10) -> RootMultiset:
    """Roots of w in Wr(V) = κ·x^r·w(x); all of them are nonzero by construction."""
    return roots(qp_wronskian(space)[1], polish_tol)


def monomial_exponent(space: QuasiPolySpace, rank_tol: float = 1e-10) -> float | None:
    """Smallest z with x^z in V, or None for a non-degenerate space."""
    found: list[float] = []
    for base, indices in space.exponent_classes():
        matrix = space.class_matrix(base, indices)
        scale = float(np.max(np.abs(matrix)))
        for k in range(matrix.shape[1]):
            target = np.zeros(matrix.shape[1], dtype=np.complex128)
            target[k] = 1.0
            coeffs, *_ = np.linalg.lstsq(matrix.T, target, rcond=None)
            if np.linalg.norm(matrix.T @ coeffs - target) <= 1e3 * rank_tol * max(scale, 1.0):
                found.append(base + k)
                break
    return min(found) if found else None


def is_degenerate(space: QuasiPolySpace) -> bool:
    return monomial_exponent(space) is not None


def reduce_degenerate(space: QuasiPolySpace, rank_tol: float = 1e-10) -> QuasiPolySpace:
    """(x∂ - z)V for the smallest monomial x^z in V; V itself if it has none.

    The monomial's class loses one dimension; other classes map injectively.
    """
    z = monomial_exponent(space, rank_tol)
    if z is None:
        return space
    members: list[QuasiPoly] = []
    for base, indices in space.exponent_classes():
        images = [
            QuasiPoly(space.members[k].exponent, _shifted_euler(space.members[k], z))
            for k in indices
        ]
        if abs((base - z) - round(base - z)) > CLASS_TOL:
            members.extend(images)
            continue
        nonzero = tuple(i for i in images if not i.poly.trimmed(TRIM).is_zero)
        if not nonzero:
            continue
        image_space = QuasiPolySpace(nonzero)
        matrix = image_space.class_matrix(base, range(image_space.dimension))
        _, singular, vh = np.linalg.svd(matrix)
        rank = int(np.sum(singular > rank_tol * singular[0]))
        for row in vh[:rank]:
            cleaned = np.where(np.abs(row) > TRIM * np.max(np.abs(row)), row, 0)
            members.append(QuasiPoly(base, Polynomial(cleaned)))
    if not members:
        raise DegenerateSpaceError("reduction of a one-dimensional monomial space is empty")
    logger.debug("reduced degenerate space at monomial exponent %.6g", z)
    return QuasiPolySpace(tuple(members))


def _shifted_euler(member: QuasiPoly, z: float) -> Polynomial:
    """Part of (θ - z)(x^{z_k} p) after removing x^{z_k}."""
    return member.poly * (member.exponent - z) + Polynomial.x() * member.poly.derivative()


# --- Fuchsian operator ------------------------------------------------------


@dataclass(frozen=True)
class FuchsianOperator:
    """Σ Ā_ij x^i θ^j with θ = x∂, cleared of denominators.

    Attributes:
        order: n, the θ-order.
        coefficients: T_0..T_n, where T_j(x) = Σ_i Ā_ij x^i. T_n is Ā_0(x), monic.
    """

    order: int
    coefficients: tuple[Polynomial, ...]

    def entry(self, i: int, j: int) -> complex:
        return self.coefficients[j].coefficient(i)

    def table(self, rtol: float = 1e-13) -> dict[tuple[int, int], complex]:
        """Entries {(i, j): Ā_ij} above ``rtol`` times the largest, in (i, j) order."""
        tol = rtol * max(c.scale for c in self.coefficients)
        out: dict[tuple[int, int], complex] = {}
        for j, poly in enumerate(self.coefficients):
            for i, c in enumerate(poly.coeffs):
                if abs(c) > tol:
                    out[(i, j)] = complex(c)
        return dict(sorted(out.items()))

    @property
    def x_degree(self) -> int:
        """s = max_j deg T_j."""
        return max(p.degree for p in self.coefficients)

    def apply(self, member: QuasiPoly) -> Polynomial:
        """Part of the operator applied to x^z p, with x^z removed."""
        total = Polynomial(np.zeros(1))
        for j, coeff in enumerate(self.coefficients):
            total = total + coeff * euler_power(member.poly, member.exponent, j)
        return total

    def residual(self, member: QuasiPoly) -> float:
        """Relative size of the operator applied to ``member``."""
        scale = max(c.scale for c in self.coefficients) * max(member.poly.scale, 1.0)
        return self.apply(member).scale / scale

    def to_entries(self) -> list[dict[str, Any]]:
        return [{"i": i, "j": j, "c": from_complex(c)} for (i, j), c in self.table().items()]

    @classmethod
    def from_entries(cls, entries: Iterable[TableEntryModel]) -> "FuchsianOperator":
        items = list(entries)
        if not items:
            raise NonFuchsianError("empty operator table")
        order = max(e.j for e in items)
        width = max(e.i for e in items) + 1
        arrays = [np.zeros(width, dtype=np.complex128) for _ in range(order + 1)]
        for e in items:
            arrays[e.j][e.i] += to_complex(e.c)
        return cls(order, tuple(Polynomial(a) for a in arrays))


def fuchsian_operator(
    space: QuasiPolySpace, *, require_nondegenerate: bool = False, root_tol: float = 1e-8
) -> FuchsianOperator:
    """The operator Ā_0(x)·D_V written as Σ Ā_ij x^i θ^j.

    The coefficient of θ^j is (-1)^{n+j}Δ_j, from expanding the θ-Wronskian of
    (members, f) along the row of f. Common roots of all coefficients are
    divided out and Ā_0 is made monic.

    Args:
        space: Independent members, at most five.
        require_nondegenerate: Raise instead of building the operator when V
            contains a monomial x^z.
        root_tol: Relative threshold for a root to count as common.

    Raises:
        HypothesisError: If dim V > 5.
        DegenerateSpaceError: For a degenerate V when ``require_nondegenerate``.
    """
    n = space.dimension
    if n > MAX_DIMENSION:
        raise HypothesisError(f"dimension {n} exceeds {MAX_DIMENSION}")
    if require_nondegenerate and is_degenerate(space):
        raise DegenerateSpaceError("space contains x^z; apply reduce_degenerate first")
    minors = _euler_minors(space)
    if minors[n].is_zero:
        raise ZeroWronskianError()
    coefficients = [minors[j] * (-1.0) ** (n + j) for j in range(n + 1)]

    common = min(_valuation(c, TRIM) for c in coefficients if not c.is_zero)
    coefficients = [_drop_low(c, common) for c in coefficients]
    coefficients = _strip_common_roots(coefficients, root_tol)

    lead = coefficients[n].leading
    coefficients = [(c / lead).trimmed(TRIM) for c in coefficients]
    monic_top = coefficients[n].monic()
    coefficients[n] = monic_top
    return FuchsianOperator(n, tuple(coefficients))


def _strip_common_roots(coefficients: list[Polynomial], tol: float) -> list[Polynomial]:
    top = len(coefficients) - 1
    while coefficients[top].degree > 0:
        candidates = roots(coefficients[top]).roots
        shared = None
        for r in candidates:
            if all(
                c.is_zero or abs(c(r)) <= tol * c.scale * (1.0 + abs(r)) ** c.degree
                for c in coefficients
            ):
                shared = complex(r)
                break
        if shared is None:
            break
        factor = Polynomial(np.array([-shared, 1.0]))
        coefficients = [c if c.is_zero else c.divmod(factor)[0] for c in coefficients]
        logger.debug("removed common root %.6g of the operator coefficients", shared)
    return coefficients


def indicial_polynomials(op: FuchsianOperator) -> tuple[Polynomial, Polynomial]:
    """χ⁰ and χ∞: monic rows of the table at the lowest and highest x-power.

    Raises:
        NonFuchsianError: If either extreme row lacks its θ^n entry.
    """
    table = op.table()
    powers = sorted({i for i, _ in table})
    rows: list[Polynomial] = []
    for i in (powers[0], powers[-1]):
        row = Polynomial(np.array([op.entry(i, j) for j in range(op.order + 1)]))
        if row.degree != op.order:
            raise NonFuchsianError(f"x^{i} row has no (x∂)^{op.order} coefficient")
        rows.append(row.monic())
    return rows[0], rows[1]


def local_exponents(space: QuasiPolySpace, tol: float = 1e-10) -> tuple[list[float], list[float]]:
    """Exponents at 0 and at ∞ read from a triangularized member list.

    Within each exponent class the coefficient rows are echelonized from the
    lowest power up (exponents at 0) and from the highest power down
    (exponents at ∞).
    """
    at_zero: list[float] = []
    at_infinity: list[float] = []
    for base, indices in space.exponent_classes():
        matrix = space.class_matrix(base, indices)
        at_zero.extend(base + c for c in _echelon_pivots(matrix, ascending=True, tol=tol))
        at_infinity.extend(base + c for c in _echelon_pivots(matrix, ascending=False, tol=tol))
    return sorted(at_zero), sorted(at_infinity)


def _echelon_pivots(matrix: np.ndarray, *, ascending: bool, tol: float) -> list[int]:
    m = matrix.astype(np.complex128).copy()
    scale = float(np.max(np.abs(m)))
    columns = range(m.shape[1]) if ascending else range(m.shape[1] - 1, -1, -1)
    pivots: list[int] = []
    row = 0
    for col in columns:
        if row == m.shape[0]:
            break
        best = row + int(np.argmax(np.abs(m[row:, col])))
        if abs(m[best, col]) <= tol * scale:
            continue
        m[[row, best]] = m[[best, row]]
        for other in range(row + 1, m.shape[0]):
            m[other] -= m[other, col] / m[row, col] * m[row]
        pivots.append(col)
        row += 1
    return pivots


def compute_Y(  # noqa: N802
    chi0: Polynomial, chi_inf: Polynomial, pairing_tol: float = 1e-7, check_tol: float = 1e-8
) -> Polynomial:
    """Minimal monic Y with Y(α - 1)·χ⁰(α) = Y(α)·χ∞(α).

    Common roots cancel. Each leftover root u of χ∞ is paired with a leftover
    root v of χ⁰ in the same class modulo integers (sorted within the class),
    u - v must be a positive integer, and Y collects v, v+1, ..., u-1.

    Raises:
        UnramifiedError: If the leftovers cannot be paired, or the identity
            fails to hold.
    """
    if chi0.degree != chi_inf.degree:
        raise UnramifiedError("indicial polynomials differ in degree")
    left = list(roots(chi0).roots)
    right = list(roots(chi_inf).roots)
    for u in list(right):
        match = next((v for v in left if abs(u - v) <= pairing_tol * (1 + abs(u))), None)
        if match is not None:
            left.remove(match)
            right.remove(u)

    chain: list[complex] = []
    for klass_u, klass_v in _integer_classes(right, left, pairing_tol):
        if len(klass_u) != len(klass_v):
            raise UnramifiedError("unpaired indicial roots")
        by_real = sorted(klass_u, key=lambda c: c.real), sorted(klass_v, key=lambda c: c.real)
        pairs = zip(*by_real, strict=True)
        for u, v in pairs:
            steps = int(round((u - v).real))
            if steps < 1:
                raise UnramifiedError(f"root gap {u - v:.6g} is not a positive integer")
            chain.extend(v + t for t in range(steps))

    y = from_roots(chain)
    lhs = y.shift(-1) * chi0
    rhs = y * chi_inf
    if lhs.distance(rhs) > check_tol * max(lhs.scale, rhs.scale, 1.0):
        raise UnramifiedError("Y identity does not hold")
    return y


def _integer_classes(
    first: list[complex], second: list[complex], tol: float
) -> list[tuple[list[complex], list[complex]]]:
    """Split both lists into classes whose members differ by integers."""
    classes: list[tuple[complex, list[complex], list[complex]]] = []
    for target, values in ((0, first), (1, second)):
        for value in values:
            for anchor, a, b in classes:
                gap = value - anchor
                if abs(gap.imag) <= tol and abs(gap.real - round(gap.real)) <= tol * (1 + abs(gap)):
                    (a if target == 0 else b).append(value)
                    break
            else:
                classes.append((value, [value], []) if target == 0 else (value, [], [value]))
    return [(a, b) for _, a, b in classes]


def y_polynomial(space: QuasiPolySpace) -> Polynomial:
    """Y_V for a non-degenerate space."""
    return compute_Y(*indicial_polynomials(fuchsian_operator(space)))


# --- bispectral dual --------------------------------------------------------


@dataclass(frozen=True)
class DifferenceOperator:
    """Σ c_ij x^j e^{σ·i·∂} with coefficients left of the shift.

    Attributes:
        table: Nonzero coefficients {(i, j): c_ij}.
        sign: σ, +1 for forward shifts and -1 for backward shifts.
    """

    table: dict[tuple[int, int], complex]
    sign: int = 1
    _rows: dict[int, Polynomial] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        rows: dict[int, Polynomial] = {}
        for i in sorted({i for i, _ in self.table}):
            width = max(j for ii, j in self.table if ii == i) + 1
            arr = np.zeros(width, dtype=np.complex128)
            for (ii, j), c in self.table.items():
                if ii == i:
                    arr[j] += c
            if not Polynomial(arr).is_zero:
                rows[i] = Polynomial(arr)
        object.__setattr__(self, "_rows", rows)

    @property
    def rows(self) -> dict[int, Polynomial]:
        """Shift index i to its coefficient polynomial C_i(x)."""
        return dict(self._rows)

    @property
    def order(self) -> int:
        if not self._rows:
            return 0
        return max(self._rows) - min(self._rows)

    def apply(self, base: complex, poly: Polynomial) -> Polynomial:
        """Part of the operator applied to p(x)·base^x, with base^x removed."""
        total = Polynomial(np.zeros(1))
        for i, coeff in self._rows.items():
            shift = self.sign * i
            total = total + coeff * poly.shift(shift) * base**shift
        return total

    def to_entries(self) -> list[dict[str, Any]]:
        return [{"i": i, "j": j, "c": from_complex(c)} for (i, j), c in sorted(self.table.items())]


def bispectral_dual(
    op: FuchsianOperator, convention: DualityConvention = DEFAULT_SETTINGS.duality
) -> DifferenceOperator:
    """Send each term Ā_ij x^i θ^j to Ā_ij x^j e^{±i∂}.

    With ``shift_left`` ordering the term is e^{±i∂} x^j = (x ± i)^j e^{±i∂},
    rewritten with coefficients on the left.
    """
    sign = 1 if convention.shift == "plus" else -1
    table: dict[tuple[int, int], complex] = {}
    for (i, j), c in op.table().items():
        if convention.ordering == "coefficient_left":
            table[(i, j)] = table.get((i, j), 0j) + c
            continue
        offset = sign * i
        for k in range(j + 1):
            key = (i, k)
            table[key] = table.get(key, 0j) + c * comb(j, k) * offset ** (j - k)
    return DifferenceOperator({k: v for k, v in table.items() if v != 0}, sign)


def characteristic_bases(op: DifferenceOperator) -> np.ndarray:
    """Nonzero roots of Σ_i c_{i,m} Q^{σi}, m the top x-degree over all rows."""
    rows = op.rows
    top = max(p.degree for p in rows.values())
    low = min(rows)
    high = max(rows)
    # multiply through by Q^{-σ·low} (σ=+1) or Q^{high} (σ=-1) to clear negative powers
    coeffs = np.zeros(high - low + 1, dtype=np.complex128)
    for i, p in rows.items():
        power = i - low if op.sign == 1 else high - i
        coeffs[power] += p.coefficient(top)
    if Polynomial(coeffs).degree < 1:
        return np.zeros(0, dtype=np.complex128)
    found = roots(Polynomial(coeffs)).roots
    return found[np.abs(found) > 1e-12]


def qe_kernel(
    op: DifferenceOperator, degree_bound: int = 10, base_tol: float = 1e-7, rcond: float = 1e-9
) -> QuasiExpSpace:
    """Quasi-exponential kernel of a difference operator, modulo 1-periodic factors.

    For each candidate base Q the coefficients of p (degree <= degree_bound)
    solving D(p·Q^x) = 0 form a null space. Candidates with multiplicity k
    are expected to carry k independent solutions.

    Raises:
        HypothesisError: If the operator has order zero.
        KernelDeficiencyError: If fewer than ``order`` solutions exist up to
            ``degree_bound``. The error carries the members found.
    """
    if op.order == 0:
        raise HypothesisError("operator has order zero")
    candidates = _cluster(characteristic_bases(op), base_tol)
    members: list[QuasiExp] = []
    for base in candidates:
        matrix = _kernel_matrix(op, base, degree_bound)
        basis = null_space(matrix, rcond=rcond)
        for column in basis.T:
            members.append(QuasiExp(base, Polynomial(column).trimmed(1e-9)))
    if len(members) < op.order:
        raise KernelDeficiencyError(members, op.order)
    space = standard_basis(QuasiExpSpace(Mode.MULTIPLICATIVE, tuple(members)))
    logger.debug("difference kernel: %d members over %d bases", len(members), len(candidates))
    return space


def _cluster(values: np.ndarray, tol: float) -> list[complex]:
    out: list[complex] = []
    for v in values:
        if not any(abs(v - c) <= tol * (1 + abs(c)) for c in out):
            group = [w for w in values if abs(w - v) <= tol * (1 + abs(v))]
            out.append(complex(np.mean(group)))
    return out


def _kernel_matrix(op: DifferenceOperator, base: complex, degree_bound: int) -> np.ndarray:
    columns: list[np.ndarray] = []
    images = [op.apply(base, Polynomial.monomial(k)) for k in range(degree_bound + 1)]
    height = max(len(p.coeffs) for p in images)
    for image in images:
        columns.append(image.padded(height))
    return np.array(columns).T


@dataclass(frozen=True)
class DualityCheck:
    """Outcome of comparing Wr^d of the dual kernel with Y_V.

    Attributes:
        y: Y_V.
        dual_wronskian: Monic discrete Wronskian of the dual kernel.
        shift: Integer s with the dual Wronskian equal to Y_V(x - s).
        distance: Coefficientwise gap at that shift.
        base_distance: Largest distance from a dual base to the nearest
            nonzero root of Wr(V).
    """

    y: Polynomial
    dual_wronskian: Polynomial
    shift: int
    distance: float
    base_distance: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "y": self.y.to_json(),
            "dual_wronskian": self.dual_wronskian.to_json(),
            "shift": self.shift,
            "distance": self.distance,
            "base_distance": self.base_distance,
        }


def duality_check(
    space: QuasiPolySpace,
    convention: DualityConvention = DEFAULT_SETTINGS.duality,
    degree_bound: int = 10,
    shifts: Sequence[int] | None = None,
) -> DualityCheck:
    """Compute Y_V and the dual kernel's Wronskian and compare them.

    Degenerate spaces are reduced first. With ``shifts`` given, the best
    matching shift among them is reported; otherwise the convention's own.
    """
    while is_degenerate(space):
        space = reduce_degenerate(space)
    op = fuchsian_operator(space, require_nondegenerate=True)
    y = compute_Y(*indicial_polynomials(op))
    kernel = qe_kernel(bispectral_dual(op, convention), degree_bound)
    dual = discrete_wronskian(kernel).monic
    tried = [convention.y_shift] if shifts is None else list(shifts)
    distance, shift = min((dual.distance(y.shift(-s)), s) for s in tried)

    wr_roots = nonzero_wronskian_roots(space).roots
    base_distance = 0.0
    for member in kernel.members:
        gap = float(np.min(np.abs(wr_roots - member.site))) if len(wr_roots) else float("inf")
        base_distance = max(base_distance, gap)
    return DualityCheck(y, dual, shift, distance, base_distance)


def calibrate_convention(
    spaces: Sequence[QuasiPolySpace], tol: float = 1e-6, shifts: Sequence[int] = range(-2, 3)
) -> DualityConvention:
    """Pick the dual substitution reading that satisfies the duality on every space.

    Each (shift sign, ordering) variant is tried in a fixed order together
    with every integer shift of Y. A variant passes when, on every space, the
    dual kernel is complete, its Wronskian matches Y_V at one common shift,
    and its bases are nonzero roots of Wr(V).

    Raises:
        HypothesisError: If no variant or more than one passes.
    """
    passing: list[DualityConvention] = []
    for shift_sign, ordering in product(("plus", "minus"), ("coefficient_left", "shift_left")):
        variant = DualityConvention(shift=shift_sign, ordering=ordering, y_shift=0)
        for s in shifts:
            ok = True
            for space in spaces:
                try:
                    result = duality_check(space, variant, shifts=[s])
                except (KernelDeficiencyError, ZeroWronskianError, DegenerateSpaceError):
                    ok = False
                    break
                if result.distance > tol or result.base_distance > tol:
                    ok = False
                    break
            if ok:
                passing.append(DualityConvention(shift=shift_sign, ordering=ordering, y_shift=s))
        logger.info("duality variant %s/%s checked", shift_sign, ordering)
    if len(passing) != 1:
        raise HypothesisError(f"calibration is not unique: {len(passing)} variants pass")
    logger.info("calibrated duality convention: %s", passing[0])
    return passing[0]
