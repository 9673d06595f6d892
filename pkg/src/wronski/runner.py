"""Sweep runner for the randomized verification checks.

A sweep is a named worker applied to item indices 0..count-1. Each worker
regenerates its instance from (seed, index), runs one check and returns a
CheckResult, so sweeps can be fanned out over processes without changing a
single output byte.
"""

import asyncio
import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Any, TypeVar

import numpy as np

from wronski import bethe, sampling
from wronski.checks import CheckResult, Outcome, verdict
from wronski.config import DEFAULT_SETTINGS, Settings
from wronski.errors import WronskiError
from wronski.inverse import (
    InverseMode,
    differential_problem_of,
    discrete_problem_of,
    reality_report,
    recovers,
    solve_inverse,
    step_corollary_check,
)
from wronski.matrices import (
    Kind,
    cm_rank_one,
    conjugation_check,
    rank_one_identity_residual,
    spectrum_vs_wronskian,
    structured_pair,
    vandermonde_m,
)
from wronski.quasiexp import (
    Mode,
    confluent_identity_residual,
    discrete_wronskian,
    expected_degree,
    standard_basis,
    step_limit_errors,
    wronskian,
    wronskian_degree,
)
from wronski.quasipoly import calibrate_convention, duality_check

logger = logging.getLogger(__name__)

T = TypeVar("T")
U = TypeVar("U")

PAIRING_TOL = 1e-7
VANDERMONDE_TOL = 1e-9
RANK_ONE_TOL = 1e-12
OPERATOR_TOL = 1e-8
SYMMETRY_TOL = 1e-10
REALITY_TOL = 1e-6
CONFLUENT_TOL = 1e-4
DUALITY_TOL = 1e-6
STEP_FACTOR = (1.5, 2.5)
STEPS = (0.02, 0.01, 0.005, 0.0025)

Worker = Callable[[int], CheckResult]


async def run_sweep(worker: Callable[[T], U], items: Sequence[T], jobs: int = 1) -> list[U]:
    """Apply ``worker`` to every item, in parallel processes when ``jobs > 1``.

    Args:
        worker: Picklable callable (top-level function or partial of one).
        items: Work items.
        jobs: Number of worker processes; 1 runs inline.

    Returns:
        One result per item, in item order.
    """
    if jobs <= 1 or len(items) <= 1:
        return [worker(item) for item in items]
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [loop.run_in_executor(pool, worker, item) for item in items]
        return list(await asyncio.gather(*futures))


def guarded(check: str, index: int, body: Callable[[], CheckResult]) -> CheckResult:
    """Run one check, turning a package error into an ERROR result."""
    try:
        return body()
    except (WronskiError, np.linalg.LinAlgError) as exc:
        logger.info("%s #%d raised %s: %s", check, index, type(exc).__name__, exc)
        return CheckResult(check, index, Outcome.ERROR, detail=f"{type(exc).__name__}: {exc}")


# --- workers ------------------------------------------------------------------


def spectral_item(kind: Kind, seed: int, settings: Settings, index: int) -> CheckResult:
    """Eigenvalues of a random structured matrix against its companion Wronskian roots."""
    name = f"spectral-{kind.value}"

    def body() -> CheckResult:
        params = sampling.structured_params(kind, sampling.item_rng(seed, index))
        comparison = spectrum_vs_wronskian(params)
        metrics = {"size": params.size, "distance": comparison.distance}
        return CheckResult(name, index, verdict(comparison.distance <= PAIRING_TOL), metrics)

    return guarded(name, index, body)


def vandermonde_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """Closed-form M = S̄S⁻¹ and the conjugation identity on random bases."""

    def body() -> CheckResult:
        bases, a = sampling.vandermonde_instance(sampling.item_rng(seed, index))
        check = vandermonde_m(bases)
        conj = conjugation_check(bases, a)
        worst = max(check.residual, conj)
        metrics = {"size": len(bases), "residual": check.residual, "conjugation": conj}
        return CheckResult("vandermonde", index, verdict(worst <= VANDERMONDE_TOL), metrics)

    return guarded("vandermonde", index, body)


def rank_one_item(kind: Kind, seed: int, settings: Settings, index: int) -> CheckResult:
    """Exact rank-one identity of a structured family, plus the SVD rank test."""
    name = f"rank-one-{kind.value}"

    def body() -> CheckResult:
        params = sampling.structured_params(kind, sampling.item_rng(seed, index))
        residual = rank_one_identity_residual(params)
        report = cm_rank_one(structured_pair(params), settings.tolerances.rank_one)
        ok = residual <= RANK_ONE_TOL and report.holds
        metrics = {"size": params.size, "residual": residual, "gap": report.gap}
        return CheckResult(name, index, verdict(ok), metrics)

    return guarded(name, index, body)


def positive_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """Yangian form on a decreasing, unit-separated configuration."""

    def body() -> CheckResult:
        ts = sampling.positive_config(sampling.item_rng(seed, index))
        cert = bethe.certify_form(ts)
        ok = cert.symmetry_defect <= SYMMETRY_TOL and cert.positive_definite
        metrics = {"N": ts.N, "n": ts.n, **cert.to_dict()}
        return CheckResult("bethe-positive", index, verdict(ok), metrics)

    return guarded("bethe-positive", index, body)


def split_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """G_s-twisted form on a split-separated configuration with positive Q."""

    def body() -> CheckResult:
        ts, s = sampling.split_config(sampling.item_rng(seed, index))
        cert = bethe.certify_form(ts, bethe.twist_G(ts, s))
        ok = cert.symmetry_defect <= SYMMETRY_TOL and cert.positive_definite
        metrics = {"N": ts.N, "n": ts.n, "s": s, **cert.to_dict()}
        return CheckResult("bethe-split", index, verdict(ok), metrics)

    return guarded("bethe-split", index, body)


def qkz_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """Residue identity, commutativity and 𝐑-symmetry of the K_i and B₁."""

    def body() -> CheckResult:
        rng = sampling.item_rng(seed, index)
        ts = sampling.generic_config(rng)
        ks = bethe.qkz_hamiltonians(ts)
        gram = bethe.big_R(ts).matrix
        residue = bethe.qkz_residual(ts)
        commute = max(
            (bethe.commutator_norm(a, b) for i, a in enumerate(ks) for b in ks[:i]), default=0.0
        )
        symmetry = max(bethe.form_symmetry_defect(gram, k) for k in ks)
        x1, x2 = (complex(v) + 0.5j for v in rng.uniform(-3.0, 3.0, 2))
        transfer = bethe.commutator_norm(bethe.transfer_B1(x1, ts), bethe.transfer_B1(x2, ts))
        worst = max(residue, commute, symmetry, transfer)
        metrics = {
            "N": ts.N,
            "n": ts.n,
            "residue": residue,
            "commutator": commute,
            "symmetry": symmetry,
            "transfer_commutator": transfer,
        }
        return CheckResult("bethe-qkz", index, verdict(worst <= OPERATOR_TOL), metrics)

    return guarded("bethe-qkz", index, body)


def crosscheck_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """Positive twisted form implies real solutions at the same (z, Q)."""

    def body() -> CheckResult:
        ts, s = sampling.split_config(sampling.item_rng(seed, index), max_n=2, max_local=2)
        result = bethe.positivity_reality_crosscheck(ts, s, settings)
        return CheckResult("bethe-crosscheck", index, result.outcome, result.to_dict())

    return guarded("bethe-crosscheck", index, body)


def theorem_item(mode: InverseMode, seed: int, settings: Settings, index: int) -> CheckResult:
    """Every solution of a problem meeting the reality hypothesis is real."""
    name = f"theorem-{mode.value}"

    def body() -> CheckResult:
        problem = sampling.theorem_problem(mode, sampling.item_rng(seed, index))
        solved = solve_inverse(problem, settings)
        report = reality_report(solved, REALITY_TOL)
        metrics = {
            "n": len(problem.targets),
            "solutions": len(solved.solutions),
            "max_imag": max(report.max_imag, default=0.0),
        }
        if solved.possibly_incomplete:
            return CheckResult(name, index, Outcome.NO_CLAIM, metrics, "no solutions found")
        return CheckResult(name, index, verdict(report.all_real), metrics)

    return guarded(name, index, body)


def planted_item(mode: Mode, seed: int, settings: Settings, index: int) -> CheckResult:
    """Forward Wronskian then inverse solve recovers a planted real space."""
    name = f"planted-{mode.value}"

    def body() -> CheckResult:
        space = sampling.planted_space(mode, sampling.item_rng(seed, index))
        if mode is Mode.MULTIPLICATIVE:
            problem = discrete_problem_of(space)
        else:
            problem = differential_problem_of(space)
        solved = solve_inverse(problem, settings)
        found = recovers(solved, space, settings.tolerances.dedup_radius * 100)
        metrics = {"n": len(problem.targets), "solutions": len(solved.solutions)}
        return CheckResult(name, index, verdict(found), metrics)

    return guarded(name, index, body)


def step_limit_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """First-order convergence of the scaled step-h Wronskian."""

    def body() -> CheckResult:
        space = sampling.exponent_space(sampling.item_rng(seed, index))
        errors = step_limit_errors(space, STEPS)
        if errors[-1] <= 1e-12:
            return CheckResult("step-limit", index, Outcome.NO_CLAIM, {"error": errors[-1]})
        factor = errors[-2] / errors[-1]
        ok = STEP_FACTOR[0] <= factor <= STEP_FACTOR[1]
        metrics = {"N": space.dimension, "error": errors[-1], "factor": factor}
        return CheckResult("step-limit", index, verdict(ok), metrics)

    return guarded("step-limit", index, body)


def degree_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """Monic Wronskian degree against the bound lN - Σn_i², attained at full degree."""

    def body() -> CheckResult:
        ambient, parts, space = sampling.degree_space(sampling.item_rng(seed, index))
        if space.mode is Mode.MULTIPLICATIVE:
            value = discrete_wronskian(space)
        else:
            value = wronskian(space)
        standard = standard_basis(space)
        predicted = wronskian_degree(
            [[standard.members[k].poly.degree for k in group] for _, group in standard.groups()]
        )
        bound = expected_degree(ambient, parts) - 1
        full = all(p.degree == ambient - 1 for p in space.polys)
        observed = value.monic.degree
        ok = observed == predicted <= bound and (observed == bound or not full)
        metrics = {"N": space.dimension, "l": ambient, "degree": observed, "bound": bound}
        return CheckResult("degree", index, verdict(ok), metrics)

    return guarded("degree", index, body)


def confluent_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """Extrapolated confluent Wronskian against the explicit limit basis."""

    def body() -> CheckResult:
        cf = sampling.confluent_family(sampling.item_rng(seed, index))
        residual, _, _ = confluent_identity_residual(cf)
        metrics = {"N": cf.size, "residual": residual}
        return CheckResult("confluent", index, verdict(residual <= CONFLUENT_TOL), metrics)

    return guarded("confluent", index, body)


def step_corollary_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """Step-h reality on real exponent-mode spaces whose roots are separated by |h|."""

    def body() -> CheckResult:
        rng = sampling.item_rng(seed, index)
        space = sampling.exponent_space(rng)
        h = float(rng.uniform(0.2, 1.0))
        report = step_corollary_check(space, h, settings)
        if not report.hypothesis:
            return CheckResult("step-h", index, Outcome.NO_CLAIM, {"h": h})
        ok = report.all_real and report.recovered
        return CheckResult("step-h", index, verdict(ok), {"h": h, **report.to_dict()})

    return guarded("step-h", index, body)


def duality_item(seed: int, settings: Settings, index: int) -> CheckResult:
    """Wronskian of the dual kernel against Y_V under the calibrated convention."""

    def body() -> CheckResult:
        space = sampling.duality_space(sampling.item_rng(seed, index))
        result = duality_check(space, settings.duality)
        ok = result.distance <= DUALITY_TOL and result.base_distance <= DUALITY_TOL
        metrics = {
            "n": space.dimension,
            "distance": result.distance,
            "base_distance": result.base_distance,
        }
        return CheckResult("duality", index, verdict(ok), metrics)

    return guarded("duality", index, body)


@dataclass(frozen=True)
class Sweep:
    """A named randomized check.

    Attributes:
        name: Sweep name used on the command line.
        worker: Function of (seed, settings, index).
        count: Instance count of the full acceptance run.
    """

    name: str
    worker: Callable[[int, Settings, int], CheckResult]
    count: int

    def bind(self, seed: int, settings: Settings) -> Worker:
        return partial(self.worker, seed, settings)


SWEEPS: dict[str, Sweep] = {
    s.name: s
    for s in (
        Sweep("spectral-zd", partial(spectral_item, Kind.ZD), 500),
        Sweep("spectral-z", partial(spectral_item, Kind.Z), 500),
        Sweep("spectral-qd", partial(spectral_item, Kind.QD), 500),
        Sweep("vandermonde", vandermonde_item, 200),
        Sweep("rank-one-zd", partial(rank_one_item, Kind.ZD), 200),
        Sweep("rank-one-z", partial(rank_one_item, Kind.Z), 200),
        Sweep("rank-one-qd", partial(rank_one_item, Kind.QD), 200),
        Sweep("bethe-positive", positive_item, 100),
        Sweep("bethe-split", split_item, 100),
        Sweep("bethe-qkz", qkz_item, 100),
        Sweep("bethe-crosscheck", crosscheck_item, 100),
        Sweep("theorem-discrete", partial(theorem_item, InverseMode.DISCRETE), 200),
        Sweep("theorem-differential", partial(theorem_item, InverseMode.DIFFERENTIAL), 200),
        Sweep("planted-multiplicative", partial(planted_item, Mode.MULTIPLICATIVE), 100),
        Sweep("planted-exponent", partial(planted_item, Mode.EXPONENT), 100),
        Sweep("step-limit", step_limit_item, 100),
        Sweep("degree", degree_item, 200),
        Sweep("confluent", confluent_item, 100),
        Sweep("step-h", step_corollary_item, 50),
        Sweep("duality", duality_item, 100),
    )
}


def calibrated(settings: Settings) -> Settings:
    """Settings whose duality convention is re-derived on the one-member spaces."""
    convention = calibrate_convention(sampling.calibration_spaces())
    if convention != settings.duality:
        logger.warning("calibration disagrees with configured convention: %s", convention)
    return settings.model_copy(update={"duality": convention})


async def run_named(
    name: str,
    count: int | None = None,
    seed: int = 0,
    settings: Settings = DEFAULT_SETTINGS,
    jobs: int = 1,
) -> list[CheckResult]:
    """Run one registered sweep with ``count`` instances (its full count by default)."""
    sweep = SWEEPS[name]
    if name == "duality":
        settings = calibrated(settings)
    total = sweep.count if count is None else count
    logger.info("sweep %s: %d instances, seed %d, %d jobs", name, total, seed, jobs)
    results = await run_sweep(sweep.bind(seed, settings), range(total), jobs)
    return sorted(results, key=lambda r: r.index)


def summarize_results(results: Sequence[CheckResult]) -> dict[str, Any]:
    """Compute summary statistics from check results.

    Args:
        results: Results of one or more sweeps.

    Returns:
        Counts per outcome, the pass rate among decided checks, and the
        largest value of every numeric metric.
    """
    total = len(results)
    counts = {o.value: sum(1 for r in results if r.outcome is o) for o in Outcome}
    decided = counts["pass"] + counts["fail"]
    worst: dict[str, float] = {}
    for r in results:
        for key, value in r.metrics.items():
            if isinstance(value, bool) or not isinstance(value, int | float):
                continue
            worst[key] = max(worst.get(key, float("-inf")), float(value))
    return {
        "total": total,
        **counts,
        "pass_rate": counts["pass"] / decided if decided else None,
        "max": dict(sorted(worst.items())),
    }
