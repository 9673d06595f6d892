"""Dense XXX-chain operators on (ℂ^N)^{⊗n}: R-matrices, qKZ Hamiltonians, B₁, twisted forms.

Basis vectors are indexed by digit strings (a_0, ..., a_{n-1}) with site 0 the
most significant digit, which is the numpy C-order of the shape (N,)*n and
the order of numpy.kron. Sites are 0-based in this module.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product
from math import comb, prod
from typing import Any

import numpy as np
from scipy.linalg import eigvalsh

from wronski.checks import Outcome
from wronski.config import DEFAULT_SETTINGS, BetheConfigModel, Settings
from wronski.errors import HypothesisError, SingularOperatorError
from wronski.inverse import InverseMode, InverseProblem, reality_report, solve_inverse

logger = logging.getLogger(__name__)

MAX_DIMENSION = 4096


@dataclass(frozen=True)
class TensorSpace:
    """Tensor product of n evaluation modules ℂ^N.

    Attributes:
        N: Local dimension.
        n: Number of sites.
        z: Evaluation parameters z_0..z_{n-1}.
        Q: Diagonal twist Q_0..Q_{N-1}.
    """

    N: int  # noqa: N815
    n: int
    z: tuple[complex, ...]
    Q: tuple[complex, ...]  # noqa: N815

    def __post_init__(self) -> None:
        if self.N < 1 or self.n < 1:
            raise HypothesisError("N and n must be positive")
        if self.N**self.n > MAX_DIMENSION:
            raise HypothesisError(f"N^n = {self.N**self.n} exceeds {MAX_DIMENSION}")
        if len(self.z) != self.n or len(self.Q) != self.N:
            raise HypothesisError("need n evaluation parameters and N twist values")

    @classmethod
    def create(
        cls, N: int, z: Sequence[complex], Q: Sequence[complex]  # noqa: N803
    ) -> "TensorSpace":
        return cls(N, len(z), tuple(complex(v) for v in z), tuple(complex(v) for v in Q))

    @classmethod
    def from_model(cls, model: BetheConfigModel) -> "TensorSpace":
        z = tuple(complex(v) for v in model.z)
        return cls(model.N, model.n, z, tuple(complex(v) for v in model.Q))

    @property
    def dim(self) -> int:
        return self.N**self.n

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0 for v in (*self.z, *self.Q))

    def with_z(self, z: Sequence[complex]) -> "TensorSpace":
        return TensorSpace(self.N, self.n, tuple(complex(v) for v in z), self.Q)

    def to_dict(self) -> dict[str, Any]:
        real = self.is_real
        return {
            "N": self.N,
            "n": self.n,
            "z": [v.real if real else [v.real, v.imag] for v in self.z],
            "Q": [v.real if real else [v.real, v.imag] for v in self.Q],
        }


@dataclass(frozen=True)
class TensorOperator:
    """Dense operator on a TensorSpace with a provenance label."""

    matrix: np.ndarray
    label: str

    def __matmul__(self, other: "TensorOperator") -> "TensorOperator":
        return TensorOperator(self.matrix @ other.matrix, f"{self.label}·{other.label}")

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def distance(self, other: "TensorOperator") -> float:
        """Operator 2-norm of the difference."""
        return float(np.linalg.norm(self.matrix - other.matrix, 2))


@dataclass(frozen=True)
class BilinearFormGram:
    """Gram matrix of ⟨v, w⟩ = vᵀ·gram·w in the standard basis.

    Attributes:
        gram: The Gram matrix.
        descriptor: "shapovalov", "yangian" or "twisted".
    """

    gram: np.ndarray
    descriptor: str


def identity(ts: TensorSpace) -> TensorOperator:
    return TensorOperator(np.eye(ts.dim, dtype=np.complex128), "1")


def _check_site(ts: TensorSpace, *sites: int) -> None:
    for s in sites:
        if not 0 <= s < ts.n:
            raise HypothesisError(f"site {s} out of range for n={ts.n}")


def flip(ts: TensorSpace, i: int, j: int) -> TensorOperator:
    """P^{(ij)}: swaps the tensor factors at sites i and j."""
    _check_site(ts, i, j)
    shape = (ts.N,) * ts.n
    digits = np.array(np.unravel_index(np.arange(ts.dim), shape))
    swapped = digits.copy()
    swapped[[i, j]] = digits[[j, i]]
    image = np.ravel_multi_index(tuple(swapped), shape)
    matrix = np.zeros((ts.dim, ts.dim), dtype=np.complex128)
    matrix[image, np.arange(ts.dim)] = 1.0
    return TensorOperator(matrix, f"P({i},{j})")


def local(ts: TensorSpace, op: np.ndarray, site: int, label: str = "X") -> TensorOperator:
    """op acting on one site, identity elsewhere."""
    _check_site(ts, site)
    before = np.eye(ts.N**site)
    after = np.eye(ts.N ** (ts.n - site - 1))
    return TensorOperator(np.kron(np.kron(before, op), after), f"{label}({site})")


def elementary(N: int, a: int, b: int) -> np.ndarray:  # noqa: N803
    """E_ab = e_a e_bᵀ on ℂ^N."""
    out = np.zeros((N, N), dtype=np.complex128)
    out[a, b] = 1.0
    return out


def site_R(x: complex, i: int, j: int, ts: TensorSpace) -> TensorOperator:  # noqa: N802
    """R^{(ij)}(x) = x + P^{(ij)}.

    Raises:
        HypothesisError: If i == j or a site is out of range.
    """
    if i == j:
        raise HypothesisError("R-matrix needs two distinct sites")
    p = flip(ts, i, j)
    return TensorOperator(x * np.eye(ts.dim) + p.matrix, f"R({i},{j})")


def twist(ts: TensorSpace, site: int) -> TensorOperator:
    """Q^{(site)}: the diagonal twist on one site."""
    return local(ts, np.diag(np.array(ts.Q, dtype=np.complex128)), site, "Q")


def _r(ts: TensorSpace, i: int, j: int) -> TensorOperator:
    return site_R(ts.z[i] - ts.z[j], i, j, ts)


def _ordered(ts: TensorSpace, factors: Sequence[tuple[int, int]], label: str) -> TensorOperator:
    matrix = np.eye(ts.dim, dtype=np.complex128)
    for i, j in factors:
        matrix = matrix @ _r(ts, i, j).matrix
    return TensorOperator(matrix, label)


def big_R_factors(  # noqa: N802
    ts: TensorSpace, sites: Sequence[int] | None = None
) -> list[tuple[int, int]]:
    """Factor order of the ordered product, left to right, over the given sites.

    For sites 0..n-1 it is R^{(n-2,n-1)} ... R^{(1,n-1)} ... R^{(1,2)}
    R^{(0,n-1)} ... R^{(0,2)} R^{(0,1)}.
    """
    chosen = list(range(ts.n)) if sites is None else list(sites)
    factors: list[tuple[int, int]] = []
    for pos in range(len(chosen) - 2, -1, -1):
        i = chosen[pos]
        factors.extend((i, chosen[k]) for k in range(len(chosen) - 1, pos, -1))
    return factors


def big_R(ts: TensorSpace) -> TensorOperator:  # noqa: N802
    """The ordered R-matrix product defining the Yangian form; identity for n = 1."""
    return _ordered(ts, big_R_factors(ts), "𝐑")


def qkz_hamiltonians(ts: TensorSpace) -> list[TensorOperator]:
    """K_i = R^{(i,i-1)} ... R^{(i,0)} · Q^{(i)} · R^{(i,n-1)} ... R^{(i,i+1)}."""
    out: list[TensorOperator] = []
    for i in range(ts.n):
        left = _ordered(ts, [(i, j) for j in range(i - 1, -1, -1)], "L")
        right = _ordered(ts, [(i, j) for j in range(ts.n - 1, i, -1)], "R")
        out.append(TensorOperator(left.matrix @ twist(ts, i).matrix @ right.matrix, f"K{i}"))
    return out


def _monodromy(
    ts: TensorSpace, locals_: Sequence[list[list[np.ndarray]]]
) -> list[list[np.ndarray]]:
    """Coproduct Δ(T_ab) = Σ_i T_ib ⊗ T_ai over all sites, site 0 leftmost."""
    n_local = ts.N
    current = locals_[-1]
    for site_table in reversed(locals_[:-1]):
        current = [
            [
                sum(np.kron(site_table[i][b], current[a][i]) for i in range(n_local))
                for b in range(n_local)
            ]
            for a in range(n_local)
        ]
    return current


def _site_table(ts: TensorSpace, x: complex, site: int) -> list[list[np.ndarray]]:
    """T_ab(x) on one evaluation module: δ_ab + E_ba/(x - z)."""
    return [
        [
            (np.eye(ts.N) if a == b else 0) + elementary(ts.N, b, a) / (x - ts.z[site])
            for b in range(ts.N)
        ]
        for a in range(ts.N)
    ]


def _contract(ts: TensorSpace, table: list[list[np.ndarray]]) -> np.ndarray:
    return sum(ts.Q[a] * table[a][a] for a in range(ts.N))


def transfer_B1(x: complex, ts: TensorSpace) -> TensorOperator:  # noqa: N802
    """B₁(x) = Σ_a Q_a T_aa(x) on the tensor product of evaluation modules.

    Raises:
        HypothesisError: If x is a pole z_i.
    """
    for k, zk in enumerate(ts.z):
        if abs(x - zk) <= 1e-12 * (1 + abs(zk)):
            raise HypothesisError(f"x coincides with the pole z_{k}")
    tables = [_site_table(ts, x, k) for k in range(ts.n)]
    return TensorOperator(_contract(ts, _monodromy(ts, tables)), "B1")


def residue(ts: TensorSpace, site: int) -> TensorOperator:
    """Res_{x = z_site} B₁(x), from the simple pole of that site's factor.

    Raises:
        HypothesisError: If another site shares the evaluation parameter.
    """
    _check_site(ts, site)
    x = ts.z[site]
    tables: list[list[list[np.ndarray]]] = []
    for k in range(ts.n):
        if k == site:
            tables.append(
                [[elementary(ts.N, b, a) for b in range(ts.N)] for a in range(ts.N)]
            )
            continue
        if abs(ts.z[k] - x) <= 1e-12 * (1 + abs(x)):
            raise HypothesisError("residue needs distinct evaluation parameters")
        tables.append(_site_table(ts, x, k))
    return TensorOperator(_contract(ts, _monodromy(ts, tables)), f"Res B1 at z{site}")


def qkz_residual(ts: TensorSpace) -> float:
    """Largest ‖K_i - ∏_{j≠i}(z_i - z_j)·Res_{z_i} B₁‖ over all sites."""
    worst = 0.0
    for i, k in enumerate(qkz_hamiltonians(ts)):
        factor = prod(ts.z[i] - ts.z[j] for j in range(ts.n) if j != i)
        worst = max(worst, float(np.linalg.norm(k.matrix - factor * residue(ts, i).matrix, 2)))
    return worst


def commutator_norm(a: TensorOperator, b: TensorOperator) -> float:
    return float(np.linalg.norm(a.matrix @ b.matrix - b.matrix @ a.matrix, 2))


def twist_G(ts: TensorSpace, s: int, max_condition: float = 1e12) -> TensorOperator:  # noqa: N802
    """G_s = (K_0 K_1 ... K_{s-1})^{-1}; G_0 is the identity.

    Raises:
        SingularOperatorError: If some K_i is near-singular.
    """
    if not 0 <= s <= ts.n:
        raise HypothesisError(f"s must lie in 0..{ts.n}")
    if s == 0:
        return identity(ts)
    product_ = np.eye(ts.dim, dtype=np.complex128)
    for i, k in enumerate(qkz_hamiltonians(ts)[:s]):
        condition = float(np.linalg.cond(k.matrix))
        if not np.isfinite(condition) or condition > max_condition:
            raise SingularOperatorError(f"K{i}", condition)
        product_ = product_ @ k.matrix
    return TensorOperator(np.linalg.inv(product_), f"G{s}")


def yangian_gram(ts: TensorSpace, g: TensorOperator | None = None) -> BilinearFormGram:
    """Gram of ⟨v, w⟩_{𝐑g} = ⟨v, 𝐑 g w⟩; the Shapovalov Gram is the identity."""
    r = big_R(ts).matrix
    if g is None:
        return BilinearFormGram(r, "yangian")
    return BilinearFormGram(r @ g.matrix, "twisted")


def form_symmetry_defect(gram: np.ndarray, op: TensorOperator) -> float:
    """‖opᵀ·gram - gram·op‖: zero when op is symmetric for the form."""
    return float(np.linalg.norm(op.matrix.T @ gram - gram @ op.matrix, 2))


@dataclass(frozen=True)
class FormCertificate:
    """Definiteness report of a real bilinear form.

    Attributes:
        symmetry_defect: ‖G - Gᵀ‖ relative to ‖G‖.
        min_eigenvalue: Smallest eigenvalue of the symmetrized Gram.
        max_eigenvalue: Largest eigenvalue of the symmetrized Gram.
    """

    symmetry_defect: float
    min_eigenvalue: float
    max_eigenvalue: float

    @property
    def positive_definite(self) -> bool:
        return self.min_eigenvalue > 0

    @property
    def definite(self) -> bool:
        return self.min_eigenvalue > 0 or self.max_eigenvalue < 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "symmetry_defect": self.symmetry_defect,
            "min_eig": self.min_eigenvalue,
            "max_eig": self.max_eigenvalue,
            "positive_definite": self.positive_definite,
            "definite": self.definite,
        }


def certify_form(
    ts: TensorSpace, g: TensorOperator | None = None, imag_tol: float = 1e-10
) -> FormCertificate:
    """Symmetry and definiteness of ⟨·,·⟩_{𝐑g} on the real span.

    Raises:
        HypothesisError: If the Gram is not real ("hypotheses violated").
    """
    gram = yangian_gram(ts, g).gram
    scale = max(1.0, float(np.max(np.abs(gram))))
    if float(np.max(np.abs(gram.imag))) > imag_tol * scale:
        raise HypothesisError("hypotheses violated: Gram matrix is not real")
    real = gram.real
    defect = float(np.linalg.norm(real - real.T) / max(1.0, float(np.linalg.norm(real))))
    values = eigvalsh((real + real.T) / 2)
    return FormCertificate(defect, float(values[0]), float(values[-1]))


def literal_sign(n: int, s: int = 0) -> int:
    """Sign of the form when both blocks are ordered z_i - z_j > 1 for i > j."""
    return -1 if comb(n - s, 2) % 2 else 1


def yangian_degeneration(ts: TensorSpace, spacing: float = 1e3) -> float:
    """Off-diagonal mass of the normalized Yangian Gram at z_i = spacing^{n-1-i}.

    Each R^{(ij)}(z_i - z_j) is divided by z_i - z_j, so the Gram tends to the
    identity as the spacing grows. The mass is the largest row sum of
    off-diagonal moduli.
    """
    z = [spacing ** (ts.n - 1 - i) for i in range(ts.n)]
    spread = ts.with_z(z)
    normalized = big_R(spread).matrix
    for i, j in big_R_factors(spread):
        normalized = normalized / (spread.z[i] - spread.z[j])
    off = np.abs(normalized - np.diag(np.diag(normalized)))
    return float(np.max(off.sum(axis=1)))


def weight_patterns(N: int, n: int) -> list[tuple[int, ...]]:  # noqa: N803
    """Degree tuples (d_0, ..., d_{N-1}) with Σ d = n, in lexicographic order."""
    return [d for d in product(range(n + 1), repeat=N) if sum(d) == n]


@dataclass(frozen=True)
class CrossCheck:
    """Positivity of a twisted form against reality of the matching inverse problems.

    Attributes:
        certificate: The form certificate.
        patterns: Degree patterns solved.
        solutions: Total solutions found over all patterns.
        all_real: Every solution found is real.
    """

    certificate: FormCertificate
    patterns: int
    solutions: int
    all_real: bool

    @property
    def outcome(self) -> Outcome:
        if not self.certificate.positive_definite:
            return Outcome.NO_CLAIM
        return Outcome.PASS if self.all_real else Outcome.FAIL

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.certificate.to_dict(),
            "patterns": self.patterns,
            "solutions": self.solutions,
            "all_real": self.all_real,
            "outcome": self.outcome.value,
        }


def positivity_reality_crosscheck(
    ts: TensorSpace, s: int = 0, settings: Settings = DEFAULT_SETTINGS
) -> CrossCheck:
    """Certify the 𝐑G_s form; if positive, solve every discrete problem with bases Q, roots z.

    Each degree pattern with Σ d = n gives one square problem. Reality of all
    solutions is expected whenever the form is positive definite.
    """
    certificate = certify_form(ts, twist_G(ts, s))
    if not certificate.positive_definite:
        return CrossCheck(certificate, 0, 0, True)
    total = 0
    all_real = True
    patterns = weight_patterns(ts.N, ts.n)
    for degrees in patterns:
        problem = InverseProblem(InverseMode.DISCRETE, ts.z, ts.Q, degrees)
        solved = solve_inverse(problem, settings)
        total += len(solved.solutions)
        if not reality_report(solved, settings.tolerances.reality).all_real:
            all_real = False
            logger.warning("non-real solution for degrees %s under a positive form", degrees)
    return CrossCheck(certificate, len(patterns), total, all_real)
