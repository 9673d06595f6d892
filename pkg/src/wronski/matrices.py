"""Structured matrices whose spectra are Wronskian roots, and rank-one matrix pairs.

Three families are built here:

- 𝒵ᵈ(𝐐, a): off-diagonal Q_i/(Q_j - Q_i), diagonal a_i. Its eigenvalues are
  the roots of Wr^d((x - ā_i)Q_i^x) with ā_i = a_i + m_ii.
- 𝒵(𝛌, a): off-diagonal 1/(λ_j - λ_i), diagonal a_i. Its eigenvalues are the
  roots of Wr((x - ã_i)e^{λ_i x}) with ã_i = a_i + Σ_{s≠i} 1/(λ_i - λ_s).
- 𝒬ᵈ(𝐳, b): entries b_j/(z_i - z_j + 1). Its eigenvalues are the nonzero roots
  of Wr(x^{z_i}(x - b̃_i)) with b̃_i = b_i ∏_{s≠i}(z_i - z_s)/(z_i - z_s - 1).
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from math import prod
from typing import Any

import numpy as np
from scipy.linalg import eig, eigvals, svdvals

from wronski.checks import Outcome
from wronski.config import CMPairModel, StructuredParamsModel, from_complex, to_complex
from wronski.errors import HypothesisError, SingularOperatorError
from wronski.inverse import find_bipartition, theorem_region_test
from wronski.polycore import Polynomial, classify_real, is_real, match_roots, roots
from wronski.quasiexp import Mode, QuasiExpSpace, discrete_wronskian, vandermonde_product, wronskian
from wronski.quasipoly import QuasiPolySpace, nonzero_wronskian_roots

logger = logging.getLogger(__name__)

SITE_MARGIN = 1e-10
QD_SCALE = 1.0


class Kind(Enum):
    ZD = "zd"
    Z = "z"
    QD = "qd"


@dataclass(frozen=True)
class StructuredMatrixParams:
    """Sites and diagonal (or weight) vector of a structured matrix.

    Attributes:
        kind: Which family.
        sites: Bases 𝐐 (zd), exponents 𝛌 (z) or points 𝐳 (qd).
        weights: Diagonal a (zd, z) or weights b (qd).
    """

    kind: Kind
    sites: tuple[complex, ...]
    weights: tuple[complex, ...]

    def __post_init__(self) -> None:
        if len(self.sites) != len(self.weights) or not self.sites:
            raise HypothesisError("sites and weights must be nonempty and of equal length")
        n = len(self.sites)
        for i in range(n):
            if self.kind is Kind.ZD and abs(self.sites[i]) <= SITE_MARGIN:
                raise HypothesisError(f"base {i} is zero")
            for j in range(n):
                if i == j:
                    continue
                gap = self.sites[i] - self.sites[j]
                if abs(gap) <= SITE_MARGIN:
                    raise HypothesisError(f"sites {i} and {j} coincide")
                if self.kind is Kind.QD and abs(gap - 1) <= SITE_MARGIN:
                    raise HypothesisError(f"sites {i} and {j} differ by 1")

    @classmethod
    def create(
        cls, kind: Kind | str, sites: Sequence[complex], weights: Sequence[complex]
    ) -> "StructuredMatrixParams":
        return cls(
            Kind(kind), tuple(complex(s) for s in sites), tuple(complex(w) for w in weights)
        )

    @classmethod
    def from_model(cls, model: StructuredParamsModel) -> "StructuredMatrixParams":
        return cls.create(
            model.kind, [to_complex(s) for s in model.sites], [to_complex(w) for w in model.weights]
        )

    @property
    def size(self) -> int:
        return len(self.sites)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "sites": [from_complex(s) for s in self.sites],
            "weights": [from_complex(w) for w in self.weights],
        }


def build(params: StructuredMatrixParams) -> np.ndarray:
    """The structured matrix, entry by entry from the closed forms."""
    s = np.array(params.sites, dtype=np.complex128)
    n = params.size
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            if params.kind is Kind.QD:
                out[i, j] = params.weights[j] / (s[i] - s[j] + 1)
            elif i == j:
                out[i, j] = params.weights[i]
            elif params.kind is Kind.ZD:
                out[i, j] = s[i] / (s[j] - s[i])
            else:
                out[i, j] = 1.0 / (s[j] - s[i])
    return out


# --- Vandermonde lemma ------------------------------------------------------


def vandermonde(bases: Sequence[complex]) -> tuple[np.ndarray, np.ndarray]:
    """S with entries Q_i^{j-1} and S̄ with entries (j-1)Q_i^{j-1}."""
    q = np.asarray(bases, dtype=np.complex128)
    powers = np.arange(len(q))
    s = np.power.outer(q, powers)
    return s, s * powers


def m_closed_form(bases: Sequence[complex]) -> np.ndarray:
    """M = S̄S⁻¹ in closed form.

    m_ij = Q_i ∏_{s≠i,j}(Q_i - Q_s) / ∏_{s≠j}(Q_j - Q_s),
    m_ii = Q_i Σ_{s≠i} 1/(Q_i - Q_s).
    """
    q = list(bases)
    n = len(q)
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            if i == j:
                out[i, i] = q[i] * sum(1 / (q[i] - q[s]) for s in range(n) if s != i)
            else:
                top = prod(q[i] - q[s] for s in range(n) if s not in (i, j))
                bottom = prod(q[j] - q[s] for s in range(n) if s != j)
                out[i, j] = q[i] * top / bottom
    return out


@dataclass(frozen=True)
class VandermondeCheck:
    """Closed-form M against S̄S⁻¹, and det S against ∏_{i<j}(Q_j - Q_i).

    Attributes:
        m: The closed-form matrix.
        residual: ‖M - S̄S⁻¹‖ relative to ‖M‖ (or 1).
        det_residual: Relative gap between det S and the Vandermonde product.
    """

    m: np.ndarray
    residual: float
    det_residual: float

    def to_dict(self) -> dict[str, Any]:
        return {"residual": self.residual, "det_residual": self.det_residual}


def vandermonde_m(bases: Sequence[complex]) -> VandermondeCheck:
    """Closed-form M = S̄S⁻¹ with its verification residuals."""
    _check_distinct(bases)
    s, s_bar = vandermonde(bases)
    direct = np.linalg.solve(s.T, s_bar.T).T
    m = m_closed_form(bases)
    residual = float(np.linalg.norm(m - direct) / max(1.0, float(np.linalg.norm(m))))
    expected = vandermonde_product(list(bases))
    det_residual = abs(np.linalg.det(s) - expected) / max(1.0, abs(expected))
    return VandermondeCheck(m, residual, float(det_residual))


def _check_distinct(bases: Sequence[complex]) -> None:
    for i in range(len(bases)):
        if abs(bases[i]) <= SITE_MARGIN:
            raise HypothesisError(f"base {i} is zero")
        for j in range(i + 1, len(bases)):
            if abs(bases[i] - bases[j]) <= SITE_MARGIN:
                raise HypothesisError(f"bases {i} and {j} nearly coincide")


def conjugation_check(bases: Sequence[complex], a: Sequence[complex]) -> float:
    """‖A + B - D⁻¹MD - 𝒵ᵈ‖ relative to ‖𝒵ᵈ‖ (or 1).

    A = diag(a), B = diag(m_ii), D = diag(∏_{s≠i}(Q_i - Q_s)).
    """
    _check_distinct(bases)
    q = list(bases)
    n = len(q)
    m = m_closed_form(q)
    d = np.array([prod(q[i] - q[s] for s in range(n) if s != i) for i in range(n)])
    lhs = np.diag(np.asarray(a, dtype=np.complex128)) + np.diag(np.diag(m)) - (m * d) / d[:, None]
    target = build(StructuredMatrixParams.create(Kind.ZD, q, a))
    return float(np.linalg.norm(lhs - target) / max(1.0, float(np.linalg.norm(target))))


# --- spectra against Wronskians ---------------------------------------------


def corrected_weights(params: StructuredMatrixParams) -> list[complex]:
    """ā_i (zd), ã_i (z) or b̃_i (qd): the roots or weights of the companion space."""
    s = list(params.sites)
    n = params.size
    if params.kind is Kind.ZD:
        m = m_closed_form(s)
        return [params.weights[i] + m[i, i] for i in range(n)]
    if params.kind is Kind.Z:
        return [
            params.weights[i] + sum(1 / (s[i] - s[k]) for k in range(n) if k != i)
            for i in range(n)
        ]
    return [
        params.weights[i]
        * prod((s[i] - s[k]) / (s[i] - s[k] - 1) for k in range(n) if k != i)
        for i in range(n)
    ]


def companion_space(params: StructuredMatrixParams) -> QuasiExpSpace | QuasiPolySpace:
    """The space whose Wronskian roots are the eigenvalues of the structured matrix."""
    weights = corrected_weights(params)
    parts = [Polynomial(np.array([-w, 1.0])) for w in weights]
    if params.kind is Kind.ZD:
        return QuasiExpSpace.build(Mode.MULTIPLICATIVE, params.sites, parts)
    if params.kind is Kind.Z:
        return QuasiExpSpace.build(Mode.EXPONENT, params.sites, parts)
    if not is_real(params.sites, 1e-12):
        raise HypothesisError("qd sites must be real")
    return QuasiPolySpace.build([float(z.real) for z in params.sites], parts)


def wronskian_roots(params: StructuredMatrixParams) -> np.ndarray:
    space = companion_space(params)
    if isinstance(space, QuasiPolySpace):
        return QD_SCALE * nonzero_wronskian_roots(space).roots
    value = discrete_wronskian(space) if params.kind is Kind.ZD else wronskian(space)
    return roots(value.monic).roots


@dataclass(frozen=True)
class SpectralComparison:
    """Eigenvalues paired against Wronskian roots.

    Attributes:
        eigenvalues: Eigenvalues of the structured matrix.
        wronskian_roots: Roots of the companion Wronskian.
        distance: Largest pairing distance (inf if the counts differ).
    """

    eigenvalues: np.ndarray
    wronskian_roots: np.ndarray
    distance: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "eigenvalues": [from_complex(complex(v)) for v in self.eigenvalues],
            "wronskian_roots": [from_complex(complex(v)) for v in self.wronskian_roots],
            "distance": self.distance,
        }


def spectrum_vs_wronskian(params: StructuredMatrixParams) -> SpectralComparison:
    eigenvalues = eigvals(build(params))
    found = wronskian_roots(params)
    if len(found) != len(eigenvalues):
        return SpectralComparison(eigenvalues, found, float("inf"))
    _, distance = match_roots(eigenvalues, found)
    return SpectralComparison(eigenvalues, found, distance)


@dataclass(frozen=True)
class RealityVerdict:
    """Reality theorem check on one structured matrix.

    Attributes:
        eigenvalues: Spectrum of the matrix.
        hypothesis: Whether the theorem's hypotheses hold.
        weights_real: Whether the diagonal (or weight) vector is real.
    """

    eigenvalues: np.ndarray
    hypothesis: bool
    weights_real: bool

    @property
    def outcome(self) -> Outcome:
        if not self.hypothesis:
            return Outcome.NO_CLAIM
        return Outcome.PASS if self.weights_real else Outcome.FAIL

    def to_dict(self) -> dict[str, Any]:
        return {
            "eigenvalues": [from_complex(complex(v)) for v in self.eigenvalues],
            "hypothesis": self.hypothesis,
            "weights_real": self.weights_real,
            "outcome": self.outcome.value,
        }


def reality_verdict(params: StructuredMatrixParams, tol: float = 1e-8) -> RealityVerdict:
    """Check the matrix reality theorem for one instance.

    zd: real distinct bases, real eigenvalues separated by 1, or bases of one
    sign with a separated bipartition. z: real exponents and real
    eigenvalues. qd: real sites, nonzero distinct real eigenvalues, and
    sites pairwise more than 1 apart, or eigenvalues of one sign with a
    separated bipartition of the sites.
    """
    eigenvalues = eigvals(build(params))
    weights_real = is_real(params.weights, tol)
    sites_real = is_real(params.sites, tol)
    eig_real = bool(np.all(classify_real(eigenvalues, tol)))
    if not (sites_real and eig_real):
        return RealityVerdict(eigenvalues, False, weights_real)
    ev = sorted(float(v.real) for v in eigenvalues)
    sites = [float(s.real) for s in params.sites]
    if params.kind is Kind.ZD:
        same_sign = all(s > 0 for s in sites) or all(s < 0 for s in sites)
        hypothesis = theorem_region_test(ev, same_sign_bases=same_sign)
    elif params.kind is Kind.Z:
        hypothesis = True
    else:
        distinct = all(abs(b - a) > tol for a, b in zip(ev, ev[1:], strict=False))
        nonzero = all(abs(v) > tol for v in ev)
        ordered = sorted(sites)
        strict = all(b - a > 1 for a, b in zip(ordered, ordered[1:], strict=False))
        same_sign = all(v > 0 for v in ev) or all(v < 0 for v in ev)
        split = same_sign and find_bipartition(sites) is not None
        hypothesis = distinct and nonzero and (strict or split)
    return RealityVerdict(eigenvalues, hypothesis, weights_real)


def qd_wronskian_scale(instances: Sequence[StructuredMatrixParams]) -> tuple[float, float]:
    """Least-squares scale s with trace(𝒬ᵈ) = s·Σ(nonzero Wronskian roots).

    Returns:
        The fitted scale and the largest pairing distance at that scale.
    """
    num = 0j
    den = 0.0
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    for params in instances:
        if params.kind is not Kind.QD:
            raise ValueError("scale calibration needs qd instances")
        eigenvalues = eigvals(build(params))
        space = companion_space(params)
        assert isinstance(space, QuasiPolySpace)
        found = nonzero_wronskian_roots(space).roots
        total = complex(np.sum(found))
        num += complex(np.trace(build(params))) * total.conjugate()
        den += abs(total) ** 2
        pairs.append((eigenvalues, found))
    scale = float((num / den).real) if den else 1.0
    worst = 0.0
    for eigenvalues, found in pairs:
        if len(found) != len(eigenvalues):
            return scale, float("inf")
        worst = max(worst, match_roots(eigenvalues, scale * found)[1])
    logger.info("qd eigenvalue scale fitted at %.12g over %d instances", scale, len(pairs))
    return scale, worst


# --- Calogero-Moser pairs ---------------------------------------------------


class PairMode(Enum):
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class CMPair:
    """Square matrices (Z, Q) tested for Z - Q⁻¹ZQ = 1 - K or [Q, Z] = 1 - K."""

    z: np.ndarray
    q: np.ndarray
    mode: PairMode

    def __post_init__(self) -> None:
        z = np.atleast_2d(np.asarray(self.z, dtype=np.complex128))
        q = np.atleast_2d(np.asarray(self.q, dtype=np.complex128))
        if z.shape != q.shape or z.shape[0] != z.shape[1]:
            raise HypothesisError("Z and Q must be square matrices of one size")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_model(cls, model: CMPairModel) -> "CMPair":
        z = np.array([[to_complex(c) for c in row] for row in model.Z])
        q = np.array([[to_complex(c) for c in row] for row in model.Q])
        return cls(z, q, PairMode(model.mode))

    @property
    def size(self) -> int:
        return int(self.z.shape[0])


@dataclass(frozen=True)
class RankOneReport:
    """Rank of K for a matrix pair.

    Attributes:
        holds: K is nonzero with second singular value below the threshold.
        k: The matrix K.
        gap: Second singular value over the largest (0 for size 1).
    """

    holds: bool
    k: np.ndarray
    gap: float

    def to_dict(self) -> dict[str, Any]:
        return {"holds": self.holds, "gap": self.gap}


def defect_matrix(pair: CMPair) -> np.ndarray:
    """K from the defining equation of the pair's mode.

    Raises:
        SingularOperatorError: If Q is numerically singular in multiplicative mode.
    """
    ident = np.eye(pair.size)
    if pair.mode is PairMode.ADDITIVE:
        return ident - (pair.q @ pair.z - pair.z @ pair.q)
    condition = float(np.linalg.cond(pair.q))
    if not np.isfinite(condition) or condition > 1e12:
        raise SingularOperatorError("Q", condition)
    return ident - (pair.z - np.linalg.solve(pair.q, pair.z @ pair.q))


def cm_rank_one(pair: CMPair, rel_tol: float = 1e-9) -> RankOneReport:
    k = defect_matrix(pair)
    singular = svdvals(k)
    if singular[0] == 0:
        return RankOneReport(False, k, float("inf"))
    gap = float(singular[1] / singular[0]) if len(singular) > 1 else 0.0
    return RankOneReport(gap <= rel_tol, k, gap)


def structured_pair(params: StructuredMatrixParams) -> CMPair:
    """The rank-one pair a structured family belongs to.

    zd: (𝒵ᵈ, diag 𝐐), multiplicative. z: (𝒵, diag 𝛌), additive.
    qd: (diag 𝐳, 𝒬ᵈ), multiplicative.
    """
    matrix = build(params)
    diag = np.diag(np.array(params.sites, dtype=np.complex128))
    if params.kind is Kind.ZD:
        return CMPair(matrix, diag, PairMode.MULTIPLICATIVE)
    if params.kind is Kind.Z:
        return CMPair(matrix, diag, PairMode.ADDITIVE)
    return CMPair(diag, matrix, PairMode.MULTIPLICATIVE)


def rank_one_identity_residual(params: StructuredMatrixParams) -> float:
    """Entrywise gap of the exact rank-one identity of a structured family.

    zd: Z - Q⁻¹ZQ = 1 - 𝟙 (all-ones). z: [diag 𝛌, 𝒵] = 1 - 𝟙.
    qd: 𝒬ᵈZ - Z𝒬ᵈ - 𝒬ᵈ = -𝟙·bᵀ with Z = diag 𝐳.
    """
    n = params.size
    ones = np.ones((n, n))
    matrix = build(params)
    diag = np.diag(np.array(params.sites, dtype=np.complex128))
    if params.kind is Kind.ZD:
        q = np.array(params.sites, dtype=np.complex128)
        lhs = matrix - matrix * (q[None, :] / q[:, None])
        expected = np.eye(n) - ones
    elif params.kind is Kind.Z:
        lhs = diag @ matrix - matrix @ diag
        expected = np.eye(n) - ones
    else:
        lhs = matrix @ diag - diag @ matrix - matrix
        expected = -np.outer(np.ones(n), np.array(params.weights))
    return float(np.max(np.abs(lhs - expected)))


@dataclass(frozen=True)
class RealFormResult:
    """Outcome of conjugating a rank-one pair to real form.

    Attributes:
        c: The conjugating matrix, or None on failure.
        reason: Empty on success, otherwise why no real form was produced.
        imag_defect: ‖Im(C⁻¹QC)‖ + ‖Im(C⁻¹ZC)‖ for the returned C.
        diagonal: The structured diagonal vector recovered on the way.
    """

    c: np.ndarray | None
    reason: str
    imag_defect: float
    diagonal: tuple[complex, ...] = ()

    @property
    def ok(self) -> bool:
        return self.c is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "reason": self.reason,
            "imag_defect": self.imag_defect,
            "diagonal": [from_complex(d) for d in self.diagonal],
        }


def _imag_defect(pair: CMPair, c: np.ndarray) -> float:
    q = np.linalg.solve(c, pair.q @ c)
    z = np.linalg.solve(c, pair.z @ c)
    return float(np.linalg.norm(q.imag) + np.linalg.norm(z.imag))


def realize_real_form(pair: CMPair, tol: float = 1e-8) -> RealFormResult:
    """Find C with C⁻¹QC and C⁻¹ZC real, for semisimple Q with distinct eigenvalues.

    Q is diagonalized; in that basis K is rank one with unit diagonal, and
    conjugating by diag(u), u the first column of K, turns K into the
    all-ones matrix and Z into structured form (𝒵ᵈ or 𝒵). The real form
    exists when that structured diagonal is real.

    Raises:
        HypothesisError: If Q has repeated eigenvalues ("semisimple case only").
    """
    if is_real(pair.q.ravel(), tol) and is_real(pair.z.ravel(), tol):
        ident = np.eye(pair.size, dtype=np.complex128)
        return RealFormResult(ident, "", _imag_defect(pair, ident), tuple(np.diag(pair.z)))
    if not cm_rank_one(pair).holds:
        return RealFormResult(None, "K is not rank one", float("inf"))

    values, vectors = eig(pair.q)
    order = np.lexsort((values.imag, values.real))
    values, vectors = values[order], vectors[:, order]
    spread = max(1.0, float(np.max(np.abs(values))))
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= 1e-8 * spread:
                raise HypothesisError("semisimple case only")
    if not is_real(values, tol):
        return RealFormResult(None, "Q has non-real eigenvalues", float("inf"))

    z_spec = eigvals(pair.z)
    if not is_real(z_spec, tol):
        return RealFormResult(None, "Z has non-real eigenvalues", float("inf"))
    if pair.mode is PairMode.MULTIPLICATIVE:
        bases = [float(v.real) for v in values]
        same_sign = all(b > 0 for b in bases) or all(b < 0 for b in bases)
        if not theorem_region_test(sorted(float(v.real) for v in z_spec), same_sign):
            return RealFormResult(None, "separation hypothesis fails", float("inf"))

    k = np.linalg.solve(vectors, defect_matrix(pair) @ vectors)
    u = k[:, 0]
    if np.min(np.abs(u)) <= 1e-12 * max(1.0, float(np.max(np.abs(u)))):
        return RealFormResult(None, "rank-one factor has a zero entry", float("inf"))
    c = vectors * u[None, :]
    structured = np.linalg.solve(c, pair.z @ c)
    diagonal = tuple(complex(d) for d in np.diag(structured))
    if not is_real(diagonal, tol):
        return RealFormResult(None, "structured diagonal is not real", float("inf"), diagonal)
    defect = _imag_defect(pair, c)
    logger.debug("real form found with imaginary defect %.2e", defect)
    return RealFormResult(c, "", defect, diagonal)
