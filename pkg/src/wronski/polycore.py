"""Dense complex polynomials, root multisets and reality classification.

Polynomials store ascending-degree complex coefficients in a read-only numpy
array. Arithmetic goes through numpy.polynomial.polynomial; roots come from
companion-matrix eigenvalues with a Newton polish.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.polynomial import polynomial as npp
from numpy.typing import ArrayLike, NDArray

from wronski.errors import ZeroPolynomialError

ComplexArray = NDArray[np.complex128]


def _freeze(values: ArrayLike) -> ComplexArray:
    arr = np.array(values, dtype=np.complex128, ndmin=1).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Univariate polynomial with complex coefficients.

    Attributes:
        coeffs: Coefficients in ascending degree. Exact trailing zeros are
            stripped on construction; the zero polynomial is ``[0]``.
    """

    coeffs: ComplexArray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=np.complex128, ndmin=1).ravel()
        nonzero = np.flatnonzero(arr)
        arr = arr[: nonzero[-1] + 1] if nonzero.size else np.zeros(1, dtype=np.complex128)
        object.__setattr__(self, "coeffs", _freeze(arr))

    @classmethod
    def constant(cls, value: complex) -> "Polynomial":
        return cls(np.array([value]))

    @classmethod
    def monomial(cls, degree: int, coefficient: complex = 1.0) -> "Polynomial":
        arr = np.zeros(degree + 1, dtype=np.complex128)
        arr[degree] = coefficient
        return cls(arr)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls(np.array([0.0, 1.0]))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    @property
    def scale(self) -> float:
        """Largest coefficient modulus, used for relative tolerances."""
        return float(np.max(np.abs(self.coeffs)))

    def trimmed(self, rtol: float, reference: float | None = None) -> "Polynomial":
        """Drop trailing coefficients below ``rtol`` times a reference scale.

        The reference defaults to the polynomial's own coefficient scale.
        """
        if self.is_zero:
            return self
        cutoff = rtol * (self.scale if reference is None else reference)
        arr = self.coeffs
        keep = len(arr)
        while keep > 1 and abs(arr[keep - 1]) <= cutoff:
            keep -= 1
        if keep == 1 and abs(arr[0]) <= cutoff:
            return Polynomial(np.zeros(1))
        return Polynomial(arr[:keep])

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ZeroPolynomialError()
        arr = np.array(self.coeffs) / self.coeffs[-1]
        arr[-1] = 1.0
        return Polynomial(arr)

    def __call__(self, x: ArrayLike) -> Any:
        return npp.polyval(x, self.coeffs)

    def __add__(self, other: "Polynomial | complex") -> "Polynomial":
        other_c = other.coeffs if isinstance(other, Polynomial) else np.array([other])
        return Polynomial(npp.polyadd(self.coeffs, other_c))

    __radd__ = __add__

    def __sub__(self, other: "Polynomial | complex") -> "Polynomial":
        other_c = other.coeffs if isinstance(other, Polynomial) else np.array([other])
        return Polynomial(npp.polysub(self.coeffs, other_c))

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.coeffs)

    def __mul__(self, other: "Polynomial | complex") -> "Polynomial":
        if isinstance(other, Polynomial):
            return Polynomial(npp.polymul(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Polynomial":
        return Polynomial(self.coeffs / scalar)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        quotient, remainder = npp.polydiv(self.coeffs, other.coeffs)
        return Polynomial(quotient), Polynomial(remainder)

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial(np.zeros(1))
        return Polynomial(npp.polyder(self.coeffs))

    def shift(self, t: complex) -> "Polynomial":
        """Return p(x + t)."""
        if len(self.coeffs) == 1 or t == 0:
            return self
        composed = np.polynomial.Polynomial(self.coeffs)(np.polynomial.Polynomial([t, 1.0]))
        return Polynomial(composed.coef)

    def rescale(self, h: complex) -> "Polynomial":
        """Return p(h x)."""
        powers = np.power(complex(h), np.arange(len(self.coeffs)))
        return Polynomial(self.coeffs * powers)

    def coefficient(self, k: int) -> complex:
        return complex(self.coeffs[k]) if 0 <= k < len(self.coeffs) else 0j

    def padded(self, length: int) -> ComplexArray:
        """Coefficient vector zero-padded (never truncated) to ``length``."""
        out = np.zeros(max(length, len(self.coeffs)), dtype=np.complex128)
        out[: len(self.coeffs)] = self.coeffs
        return out

    def distance(self, other: "Polynomial") -> float:
        """Max coefficientwise difference."""
        n = max(len(self.coeffs), len(other.coeffs))
        return float(np.max(np.abs(self.padded(n) - other.padded(n))))

    def allclose(self, other: "Polynomial", rtol: float = 1e-9) -> bool:
        scale = max(self.scale, other.scale, 1.0)
        return self.distance(other) <= rtol * scale

    def to_json(self) -> list[list[float]]:
        """Serialize as [[re, im], ...] in ascending degree."""
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[float]]) -> "Polynomial":
        return cls(np.array([complex(re, im) for re, im in data]))

    def __repr__(self) -> str:
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs)
        return f"Polynomial([{terms}])"


@dataclass(frozen=True, eq=False)
class RootMultiset:
    """Roots with multiplicity.

    Attributes:
        roots: Roots, repeated according to multiplicity.
        tol: Clustering tolerance used when comparing multisets.
    """

    roots: ComplexArray
    tol: float = 1e-8

    def __post_init__(self) -> None:
        object.__setattr__(self, "roots", _freeze(np.asarray(self.roots).reshape(-1)))

    def __len__(self) -> int:
        return len(self.roots)

    def sorted(self) -> ComplexArray:
        return self.roots[np.lexsort((self.roots.imag, self.roots.real))]


def roots(p: Polynomial, polish_tol: float = 1e-10, max_polish: int = 8) -> RootMultiset:
    """Roots of ``p`` with multiplicity.

    Companion-matrix eigenvalues, then a few Newton steps per root. A step is
    kept only if it lowers |p(r)|, so clustered roots are never pushed apart.

    Args:
        p: Nonzero polynomial.
        polish_tol: Stop polishing once |p(r)| falls below this times the
            coefficient scale.
        max_polish: Newton steps per root.

    Raises:
        ZeroPolynomialError: If ``p`` is the zero polynomial.
    """
    if p.is_zero:
        raise ZeroPolynomialError()
    if p.degree == 0:
        return RootMultiset(np.zeros(0, dtype=np.complex128))
    estimates = npp.polyroots(p.coeffs).astype(np.complex128)
    dp = p.derivative()
    target = polish_tol * p.scale
    polished = np.empty_like(estimates)
    for k, r in enumerate(estimates):
        value = abs(p(r))
        for _ in range(max_polish):
            if value <= target:
                break
            slope = dp(r)
            if slope == 0:
                break
            candidate = r - p(r) / slope
            candidate_value = abs(p(candidate))
            if candidate_value >= value:
                break
            r, value = candidate, candidate_value
        polished[k] = r
    return RootMultiset(polished)


def from_roots(rs: RootMultiset | Iterable[complex]) -> Polynomial:
    """Monic polynomial with exactly the given roots (1 for the empty multiset)."""
    values = rs.roots if isinstance(rs, RootMultiset) else np.array(list(rs), dtype=np.complex128)
    if len(values) == 0:
        return Polynomial.constant(1.0)
    return Polynomial(npp.polyfromroots(values))


def classify_real(values: Iterable[complex] | ArrayLike, tol: float) -> NDArray[np.bool_]:
    """Per-value reality verdict: |Im v| <= tol * (1 + |Re v|)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    arr = np.asarray(values, dtype=np.complex128).reshape(-1)
    return np.abs(arr.imag) <= tol * (1.0 + np.abs(arr.real))


def is_real(values: Iterable[complex] | ArrayLike, tol: float) -> bool:
    return bool(np.all(classify_real(values, tol)))


def match_roots(
    first: ArrayLike, second: ArrayLike
) -> tuple[list[tuple[complex, complex]], float]:
    """Pair two equal-size multisets greedily after a lexicographic sort.

    Each element of ``first`` (in (Re, Im) order) takes the nearest unused
    element of ``second``.

    Returns:
        The pairs and the largest pairing distance (0.0 for empty input).
    """
    a = np.asarray(first, dtype=np.complex128).reshape(-1)
    b = np.asarray(second, dtype=np.complex128).reshape(-1)
    if len(a) != len(b):
        raise ValueError(f"cannot pair multisets of sizes {len(a)} and {len(b)}")
    a = a[np.lexsort((a.imag, a.real))]
    b = b[np.lexsort((b.imag, b.real))]
    unused = list(range(len(b)))
    pairs: list[tuple[complex, complex]] = []
    worst = 0.0
    for value in a:
        distances = [abs(value - b[k]) for k in unused]
        best = int(np.argmin(distances))
        partner = b[unused.pop(best)]
        pairs.append((complex(value), complex(partner)))
        worst = max(worst, distances[best])
    return pairs, float(worst)


def polynomial_determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a square matrix with polynomial entries.

    Cofactor expansion along the first row up to size 4; fraction-free
    (Bareiss) elimination with row pivoting above that. Bareiss divisions are
    exact in exact arithmetic, and the numerical remainder is discarded.
    """
    size = len(matrix)
    if size == 0:
        return Polynomial.constant(1.0)
    if size <= 4:
        return _cofactor_determinant([list(row) for row in matrix])
    return _bareiss_determinant([list(row) for row in matrix])


def _cofactor_determinant(matrix: list[list[Polynomial]]) -> Polynomial:
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    if size == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = Polynomial(np.zeros(1))
    for col in range(size):
        entry = matrix[0][col]
        if entry.is_zero:
            continue
        minor = [row[:col] + row[col + 1 :] for row in matrix[1:]]
        term = entry * _cofactor_determinant(minor)
        total = total + term if col % 2 == 0 else total - term
    return total


def _bareiss_determinant(matrix: list[list[Polynomial]]) -> Polynomial:
    size = len(matrix)
    sign = 1.0
    previous = Polynomial.constant(1.0)
    m = [row[:] for row in matrix]
    for k in range(size - 1):
        pivot_row = max(range(k, size), key=lambda r: m[r][k].scale if not m[r][k].is_zero else -1)
        if m[pivot_row][k].is_zero:
            return Polynomial(np.zeros(1))
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                numerator = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                quotient, _ = numerator.divmod(previous)
                m[i][j] = quotient
        previous = m[k][k]
    return m[size - 1][size - 1] * sign


def as_polynomial(value: "Polynomial | ArrayLike") -> Polynomial:
    """Accept either a Polynomial or an ascending coefficient sequence."""
    return value if isinstance(value, Polynomial) else Polynomial(np.asarray(value))
