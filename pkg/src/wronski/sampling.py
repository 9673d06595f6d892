"""Seeded random instances for the verification sweeps.

Every generator takes a numpy Generator. Sweeps derive it per work item with
``item_rng(seed, index)``, so any single instance can be regenerated on its
own and results never depend on how items are scheduled.

Families provided:
1. Structured-matrix parameters (zd, z, qd) and Vandermonde bases.
2. Inverse problems under the reality hypotheses, and planted real spaces.
3. Real exponent-mode spaces and confluent families for the limit checks, and
   full-degree spaces for the degree bound.
4. Log-free quasi-polynomial spaces for the duality check.
5. Bethe configurations: separated, split-separated and generic.
"""

from collections.abc import Sequence

import numpy as np

from wronski.bethe import TensorSpace, weight_patterns
from wronski.inverse import InverseMode, InverseProblem
from wronski.matrices import Kind, StructuredMatrixParams
from wronski.polycore import Polynomial
from wronski.quasiexp import ConfluentFamily, Mode, QuasiExpSpace, standard_basis
from wronski.quasipoly import QuasiPolySpace

MAX_TRIES = 1000


def item_rng(seed: int, index: int) -> np.random.Generator:
    """The generator of work item ``index`` in a sweep seeded with ``seed``."""
    return np.random.default_rng([seed, index])


def _complex_normal(rng: np.random.Generator, size: int, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


def spread_reals(
    rng: np.random.Generator, size: int, lo: float, hi: float, min_gap: float
) -> list[float]:
    """``size`` uniform values on [lo, hi] with pairwise gaps at least ``min_gap``."""
    for _ in range(MAX_TRIES):
        values = sorted(float(v) for v in rng.uniform(lo, hi, size))
        if all(b - a >= min_gap for a, b in zip(values, values[1:], strict=False)):
            return [float(v) for v in rng.permutation(values)]
    raise ValueError(f"cannot place {size} points on [{lo}, {hi}] with gap {min_gap}")


def separated_chain(
    rng: np.random.Generator, size: int, start: float = 0.0, gap: float = 1.0
) -> list[float]:
    """Increasing values whose consecutive gaps exceed ``gap`` by a random margin."""
    values = [start + float(rng.uniform(-1.0, 1.0))]
    for _ in range(size - 1):
        values.append(values[-1] + gap + float(rng.uniform(0.05, 1.5)))
    return values


def _spread_complex(
    rng: np.random.Generator, size: int, min_gap: float, min_modulus: float = 0.0
) -> list[complex]:
    for _ in range(MAX_TRIES):
        values = _complex_normal(rng, size, 2.0)
        ok = all(abs(v) >= min_modulus for v in values) and all(
            abs(values[i] - values[j]) >= min_gap for i in range(size) for j in range(i)
        )
        if ok:
            return [complex(v) for v in values]
    raise ValueError("cannot draw well-separated complex points")


# --- structured matrices ------------------------------------------------------


def structured_params(
    kind: Kind | str, rng: np.random.Generator, max_size: int = 5
) -> StructuredMatrixParams:
    """Random generic parameters; qd sites are real and kept away from unit gaps."""
    kind = Kind(kind)
    size = int(rng.integers(1, max_size + 1))
    weights = [complex(w) for w in _complex_normal(rng, size)]
    if kind is Kind.QD:
        for _ in range(MAX_TRIES):
            sites = spread_reals(rng, size, -3.0, 3.0, 0.3)
            if all(abs(abs(a - b) - 1) >= 0.1 for a in sites for b in sites if a != b):
                return StructuredMatrixParams.create(kind, sites, weights)
        raise ValueError("cannot draw qd sites away from unit gaps")
    min_modulus = 0.3 if kind is Kind.ZD else 0.0
    points = _spread_complex(rng, size, 0.3, min_modulus)
    return StructuredMatrixParams.create(kind, points, weights)


def vandermonde_instance(
    rng: np.random.Generator, max_size: int = 6
) -> tuple[list[complex], list[complex]]:
    """Distinct nonzero bases and a diagonal vector for the conjugation identity."""
    size = int(rng.integers(1, max_size + 1))
    bases = _spread_complex(rng, size, 0.3, 0.3)
    return bases, [complex(a) for a in _complex_normal(rng, size)]


# --- inverse problems -------------------------------------------------------


def _degrees(rng: np.random.Generator, members: int, max_total: int) -> tuple[int, ...]:
    total = int(rng.integers(1, max_total + 1))
    patterns = weight_patterns(members, total)
    return patterns[int(rng.integers(len(patterns)))]


def theorem_problem(
    mode: InverseMode, rng: np.random.Generator, max_members: int = 3, max_total: int = 4
) -> InverseProblem:
    """A problem meeting the reality hypothesis of its mode.

    Discrete: real distinct nonzero bases, real roots pairwise more than 1
    apart. Differential: real distinct exponents, arbitrary real roots.
    """
    members = int(rng.integers(1, max_members + 1))
    degrees = _degrees(rng, members, max_total)
    n = sum(degrees)
    if mode is InverseMode.DISCRETE:
        signs = rng.choice([-1.0, 1.0], members)
        magnitudes = spread_reals(rng, members, 0.3, 3.0, 0.3)
        sites = [m * s for m, s in zip(magnitudes, signs, strict=True)]
        targets = [float(t) for t in rng.permutation(separated_chain(rng, n))]
    else:
        sites = spread_reals(rng, members, -2.0, 2.0, 0.3)
        targets = [float(t) for t in rng.uniform(-3.0, 3.0, n)]
    return InverseProblem(
        mode,
        tuple(complex(t) for t in targets),
        tuple(complex(s) for s in sites),
        degrees,
    )


def planted_space(mode: Mode, rng: np.random.Generator, max_members: int = 3) -> QuasiExpSpace:
    """A real space in standard form with random real coefficients."""
    members = int(rng.integers(1, max_members + 1))
    degrees = _degrees(rng, members, 4)
    if mode is Mode.MULTIPLICATIVE:
        sites = spread_reals(rng, members, 0.3, 3.0, 0.3)
    else:
        sites = spread_reals(rng, members, -2.0, 2.0, 0.3)
    polys = [Polynomial(np.append(rng.uniform(-2.0, 2.0, d), 1.0)) for d in degrees]
    return standard_basis(QuasiExpSpace.build(mode, sites, polys))


def exponent_space(rng: np.random.Generator, max_members: int = 3) -> QuasiExpSpace:
    """Real exponent-mode space for the step-limit and step-h checks."""
    return planted_space(Mode.EXPONENT, rng, max_members)


def degree_space(
    rng: np.random.Generator, max_members: int = 3
) -> tuple[int, tuple[int, ...], QuasiExpSpace]:
    """A space with every part of degree below l, returned as (l, group sizes, space).

    Members of one group share a site. Parts have random complex coefficients
    and degree l - 1, except that half of the instances lower one member's
    degree.
    """
    mode = Mode.MULTIPLICATIVE if rng.integers(2) == 0 else Mode.EXPONENT
    size = int(rng.integers(1, max_members + 1))
    groups = int(rng.integers(1, size + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, size), groups - 1, replace=False))
    parts = tuple(b - a for a, b in zip([0, *cuts], [*cuts, size], strict=True))
    ambient = size + int(rng.integers(1, 3))
    if mode is Mode.MULTIPLICATIVE:
        pattern = spread_reals(rng, groups, 0.5, 3.0, 0.4)
    else:
        pattern = spread_reals(rng, groups, -2.0, 2.0, 0.4)
    sites = [site for site, k in zip(pattern, parts, strict=True) for _ in range(k)]
    degrees = [ambient - 1] * size
    if rng.random() < 0.5:
        degrees[int(rng.integers(size))] = int(rng.integers(0, ambient - 1))
    polys = [Polynomial(_complex_normal(rng, d + 1)) for d in degrees]
    return ambient, parts, QuasiExpSpace.build(mode, sites, polys)


def confluent_family(rng: np.random.Generator, max_members: int = 3) -> ConfluentFamily:
    """Random family with one repeated pattern base at least."""
    d = int(rng.integers(1, 3))
    size = int(rng.integers(2, max_members + 1))
    groups = int(rng.integers(1, size))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, size), groups - 1, replace=False))
    multiplicities = tuple(b - a for a, b in zip([0, *cuts], [*cuts, size], strict=True))
    pattern = tuple(complex(p) for p in spread_reals(rng, groups, 0.5, 3.0, 0.4))
    q = rng.uniform(-1.0, 1.0, (size, d))
    return ConfluentFamily(d, q, pattern, multiplicities)


# --- quasi-polynomial spaces ------------------------------------------------


def duality_space(rng: np.random.Generator, max_members: int = 3) -> QuasiPolySpace:
    """Random log-free space with real exponents and real parts of degree at most 3."""
    members = int(rng.integers(1, max_members + 1))
    exponents = spread_reals(rng, members, -1.0, 1.0, 0.2)
    polys: list[Polynomial] = []
    for _ in range(members):
        degree = int(rng.integers(1, 4))
        coeffs = rng.uniform(-2.0, 2.0, degree + 1)
        coeffs[0] = coeffs[0] if abs(coeffs[0]) >= 0.2 else 1.0
        coeffs[-1] = 1.0
        polys.append(Polynomial(coeffs))
    return QuasiPolySpace.build(exponents, polys)


def calibration_spaces() -> list[QuasiPolySpace]:
    """One-member spaces whose dual kernels are known in closed form."""
    return [
        QuasiPolySpace.build([0.5], [Polynomial(np.array([-2.0, 1.0]))]),
        QuasiPolySpace.build([-0.25], [Polynomial(np.array([-1.5, -2.5, 1.0]))]),
        QuasiPolySpace.build([1.0 / 3.0], [Polynomial(np.array([3.0, 1.0]))]),
    ]


# --- Bethe configurations ---------------------------------------------------


def _shape(rng: np.random.Generator, max_n: int, max_local: int) -> tuple[int, int]:
    return int(rng.integers(1, max_local + 1)), int(rng.integers(1, max_n + 1))


def _away_from_poles(z: Sequence[float], margin: float = 0.05) -> bool:
    return all(
        abs(a - b) >= margin and abs(abs(a - b) - 1) >= margin
        for i, a in enumerate(z)
        for b in z[:i]
    )


def positive_config(rng: np.random.Generator, max_n: int = 3, max_local: int = 3) -> TensorSpace:
    """Decreasing z with consecutive gaps above 1 and arbitrary real nonzero Q."""
    N, n = _shape(rng, max_n, max_local)  # noqa: N806
    z = list(reversed(separated_chain(rng, n)))
    q = [float(v) if abs(v) >= 0.1 else 1.0 for v in rng.uniform(-3.0, 3.0, N)]
    return TensorSpace.create(N, z, q)


def split_config(
    rng: np.random.Generator, max_n: int = 3, max_local: int = 3
) -> tuple[TensorSpace, int]:
    """Positive Q, head block 0..s-1 increasing and tail block decreasing, gaps above 1."""
    N, n = _shape(rng, max_n, max_local)  # noqa: N806
    s = int(rng.integers(0, n + 1))
    q = spread_reals(rng, N, 0.2, 3.0, 0.1)
    for _ in range(MAX_TRIES):
        head = separated_chain(rng, s, float(rng.uniform(-3.0, 3.0))) if s else []
        tail = (
            list(reversed(separated_chain(rng, n - s, float(rng.uniform(-3.0, 3.0)))))
            if n > s
            else []
        )
        z = head + tail
        if _away_from_poles(z):
            return TensorSpace.create(N, z, q), s
    raise ValueError("cannot draw a split configuration away from the poles")


def generic_config(rng: np.random.Generator, max_n: int = 3, max_local: int = 3) -> TensorSpace:
    """Generic real z away from coincidences and unit gaps, generic real Q."""
    N, n = _shape(rng, max_n, max_local)  # noqa: N806
    for _ in range(MAX_TRIES):
        z = [float(v) for v in rng.uniform(-3.0, 3.0, n)]
        if _away_from_poles(z, 0.1):
            q = spread_reals(rng, N, 0.2, 3.0, 0.1)
            return TensorSpace.create(N, z, q)
    raise ValueError("cannot draw a generic configuration")
