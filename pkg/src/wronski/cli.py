"""Command-line entry point: ``wronski <subcommand> [options]``.

Exit status is 0 when every assertion of the run holds, 1 when one fails,
and 2 for usage errors, malformed input documents or unwritable outputs.
Reports go to ``--out`` (stdout when omitted); a one-line summary is printed
when a report file is written.
"""

import argparse
import asyncio
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from wronski import bethe, inverse, matrices, quasiexp, quasipoly
from wronski.checks import CheckResult, verdict
from wronski.config import (
    BetheConfigModel,
    CMPairModel,
    InverseProblemModel,
    QuasiExpSpaceModel,
    QuasiPolySpaceModel,
    Settings,
    StructuredParamsModel,
    load_settings,
)
from wronski.errors import WronskiError
from wronski.polycore import roots
from wronski.report import Format, emit_report
from wronski.runner import SWEEPS, run_named, run_sweep, summarize_results
from wronski.sampling import calibration_spaces

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)

EXAMPLE1_QS = (-3.0, -1.0, -0.25, 0.5, 2.0)
PAIRING_TOL = 1e-7
SYMMETRY_TOL = 1e-10
DUALITY_TOL = 1e-6
SCAN_COLUMNS = (
    "condition",
    "condition_sign",
    "solver_verdict",
    "solution_count",
    "agree",
)

FAMILIES: dict[str, tuple[str, ...]] = {
    "wronskian": ("degree", "step-limit", "confluent", "step-h"),
    "inverse": (
        "theorem-discrete",
        "theorem-differential",
        "planted-multiplicative",
        "planted-exponent",
    ),
    "cm-check": ("rank-one-zd", "rank-one-z", "rank-one-qd"),
    "bethe-check": ("bethe-positive", "bethe-split", "bethe-qkz", "bethe-crosscheck"),
    "dual-check": ("duality",),
}


class UsageError(Exception):
    """Bad command-line usage or input document; exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation.

    Attributes:
        command: Subcommand name.
        seed: Base seed for every random stream.
        tol: Reality tolerance override.
        starts: Multistart count override.
        jobs: Worker processes for sweeps.
        out: Report path, or None for stdout.
        fmt: Report format.
        config: Optional settings JSON.
        options: Subcommand-specific arguments.
    """

    command: str
    seed: int = 0
    tol: float | None = None
    starts: int | None = None
    jobs: int = 1
    out: Path | None = None
    fmt: Format = "json"
    config: Path | None = None
    options: dict[str, Any] = field(default_factory=dict)

    def settings(self) -> Settings:
        """Settings from the config file with flag overrides applied."""
        base = load_settings(self.config)
        solver: dict[str, Any] = {"seed": self.seed}
        if self.starts is not None:
            solver["starts"] = self.starts
        tolerances: dict[str, Any] = {}
        if self.tol is not None:
            tolerances["reality"] = self.tol
        return base.model_copy(
            update={
                "solver": base.solver.model_copy(update=solver),
                "tolerances": base.tolerances.model_copy(update=tolerances),
            }
        )


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Random seed")
    common.add_argument("--tol", type=float, default=None, help="Reality tolerance")
    common.add_argument("--starts", type=int, default=None, help="Multistart Newton starts")
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for sweeps")
    common.add_argument("--out", type=Path, default=None, help="Report file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="Report format")
    common.add_argument("--config", type=Path, default=None, help="Settings JSON file")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    parser = argparse.ArgumentParser(prog="wronski", description="Reality checks for Wronski maps")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        if name in FAMILIES:
            p.add_argument(
                "--random",
                type=int,
                default=None,
                metavar="K",
                help="Run K random instances instead of one input",
            )
            p.add_argument(
                "--family",
                choices=FAMILIES[name],
                action="append",
                help="Restrict --random to these sweeps",
            )
        return p

    p = add("wronskian", "Discrete or differential Wronskian of a space")
    p.add_argument("--space", type=Path, help="QuasiExpSpace JSON")
    p.add_argument("--step", type=float, default=1.0, help="Discrete step h")

    p = add("inverse", "Solve an inverse Wronski problem")
    p.add_argument("--problem", type=Path, help="Inverse problem JSON")
    p.add_argument("--example", type=int, choices=(1, 2), help="Worked example instead of a file")
    p.add_argument("--params", type=_floats, help="Example parameters (Q,A or A,B)")

    p = add("scan", "Reality region scan of a worked example")
    p.add_argument("--example", type=int, choices=(1, 2), required=True)
    p.add_argument("--min", type=float, default=-3.0, dest="lo")
    p.add_argument("--max", type=float, default=3.0, dest="hi")
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--q", type=_floats, default=None, help="Example 1 bases Q")

    p = add("matrix-check", "Spectrum of a structured matrix against Wronskian roots")
    p.add_argument("--kind", choices=("zd", "z", "qd"), default="zd")
    p.add_argument("--params", type=Path, help="Structured params JSON")
    p.add_argument("--random", type=int, default=None, metavar="K")

    p = add("cm-check", "Rank-one test and real form of a matrix pair")
    p.add_argument("--pair", type=Path, help="CM pair JSON")

    p = add("bethe-check", "Yangian or twisted form certificate")
    p.add_argument("--input", type=Path, help="Bethe config JSON")
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--n", type=int, dest="n")
    p.add_argument("--z", type=_floats)
    p.add_argument("--q", type=_floats)
    p.add_argument("--s", type=int, default=0)

    p = add("dual-check", "Bispectral duality Wr^d(V*) = Y_V")
    p.add_argument("--space", type=Path, help="QuasiPolySpace JSON")
    p.add_argument("--calibrate", action="store_true", help="Re-derive the convention")

    p = add("selftest", "Every acceptance sweep at reduced size")
    p.add_argument("--scale", type=float, default=0.1, help="Fraction of the full counts")
    return parser


def _load(model: type[M], path: Path | None, what: str) -> M:
    if path is None:
        raise UsageError(f"{what} input is required")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        lines = [f"{path}: invalid {what}"]
        for error in exc.errors():
            loc = ".".join(str(part) for part in error["loc"]) or "<root>"
            lines.append(f"  {loc}: {error['msg']}")
        raise UsageError("\n".join(lines)) from exc


@dataclass
class CommandResult:
    """What a subcommand produced: the report document and whether it passed."""

    document: Any
    ok: bool
    summary: str
    rows: list[dict[str, Any]] | None = None
    columns: Sequence[str] = ()
    keys: Sequence[str] = ()


async def _sweeps(cfg: RunConfig, names: Sequence[str], count: int | None) -> CommandResult:
    settings = cfg.settings()
    document: dict[str, Any] = {"seed": cfg.seed, "sweeps": {}}
    all_results: list[CheckResult] = []
    ok = True
    for name in names:
        results = await run_named(name, count, cfg.seed, settings, cfg.jobs)
        summary = summarize_results(results)
        document["sweeps"][name] = {"summary": summary, "results": results}
        all_results.extend(results)
        ok = ok and all(r.passed for r in results)
        logger.info("%s: %d pass, %d fail", name, summary["pass"], summary["fail"])
    metric_keys = sorted({k for r in all_results for k in r.metrics})
    rows = [r.to_dict() for r in all_results]
    total = summarize_results(all_results)
    return CommandResult(
        document,
        ok,
        f"{total['pass']} pass, {total['fail']} fail, {total['error']} error, "
        f"{total['no_claim']} no claim",
        rows,
        ["check", "index", "outcome", *metric_keys, "detail"],
        ["check", "index"],
    )


def _random_names(cfg: RunConfig) -> list[str]:
    chosen = cfg.options.get("family")
    if cfg.command == "matrix-check":
        kind = cfg.options["kind"]
        names = [f"spectral-{kind}", f"rank-one-{kind}"]
        return [*names, "vandermonde"] if kind == "zd" else names
    return list(chosen) if chosen else list(FAMILIES[cfg.command])


def cmd_wronskian(cfg: RunConfig) -> CommandResult:
    space = quasiexp.QuasiExpSpace.from_model(
        _load(QuasiExpSpaceModel, cfg.options.get("space"), "space")
    )
    space.check_independent()
    if space.mode is quasiexp.Mode.MULTIPLICATIVE:
        value = quasiexp.discrete_wronskian(space, cfg.options.get("step", 1.0))
    else:
        value = quasiexp.wronskian(space)
    found = roots(value.monic) if value.monic.degree > 0 else None
    document = {
        **value.to_dict(),
        "roots": [] if found is None else found.sorted(),
        "degree": value.monic.degree,
    }
    return CommandResult(document, True, f"degree {value.monic.degree}")


def cmd_inverse(cfg: RunConfig) -> CommandResult:
    settings = cfg.settings()
    example = cfg.options.get("example")
    if example is not None:
        params = cfg.options.get("params")
        if not params or len(params) != 2:
            raise UsageError("--example needs --params with two values")
        problem = inverse.example_problem(example, params)
    else:
        problem = inverse.InverseProblem.from_model(
            _load(InverseProblemModel, cfg.options.get("problem"), "inverse problem")
        )
    solved = inverse.solve_inverse(problem, settings)
    report = inverse.reality_report(solved, settings.tolerances.reality)
    document: dict[str, Any] = {**solved.to_dict(), "reality": report.to_dict()}
    ok = not solved.possibly_incomplete
    if example is not None:
        matches = inverse.closed_form_matches(example, params, solved)
        document["closed_form_matches"] = matches
        ok = ok and matches
    summary = f"{len(solved.solutions)} solutions, all real: {report.all_real}"
    return CommandResult(document, ok, summary)


async def cmd_scan(cfg: RunConfig) -> CommandResult:
    example = cfg.options["example"]
    settings = cfg.settings()
    axis = inverse.Axis(cfg.options["lo"], cfg.options["hi"], cfg.options["step"])
    qs = cfg.options.get("q") or (EXAMPLE1_QS if example == 1 else ())
    lines = inverse.scan_lines(example, axis, qs)
    items = [(line, fixed, values) for line, (fixed, values) in enumerate(lines)]
    chunks = await run_sweep(_ScanWorker(example, settings), items, cfg.jobs)
    rows = [r for chunk in chunks for r in chunk]
    bad = inverse.disagreements(rows)
    miscounted = inverse.count_mismatches(rows)
    keys = ["Q", "A"] if example == 1 else ["A", "B"]
    columns = [*keys, *SCAN_COLUMNS]
    document = {
        "example": example,
        "points": len(rows),
        "disagreements": bad,
        "count_mismatches": miscounted,
        "rows": rows,
    }
    dict_rows = [r.to_dict() for r in rows]
    summary = f"{len(rows)} points, {bad} disagreements, {miscounted} count mismatches"
    ok = bad == 0 and miscounted == 0
    return CommandResult(document, ok, summary, dict_rows, columns, keys)


@dataclass(frozen=True)
class _ScanWorker:
    example: int
    settings: Settings

    def __call__(self, item: tuple[int, float, list[float]]) -> list[inverse.ScanRow]:
        line, fixed, values = item
        return inverse.scan_line(self.example, line, fixed, values, self.settings)


def cmd_matrix(cfg: RunConfig) -> CommandResult:
    model = _load(StructuredParamsModel, cfg.options.get("params"), "structured params")
    params = matrices.StructuredMatrixParams.from_model(model)
    comparison = matrices.spectrum_vs_wronskian(params)
    verdict = matrices.reality_verdict(params, cfg.settings().tolerances.reality)
    residual = matrices.rank_one_identity_residual(params)
    document = {
        "params": params,
        "spectrum": comparison,
        "reality": verdict,
        "rank_one_residual": residual,
    }
    ok = comparison.distance <= PAIRING_TOL
    return CommandResult(document, ok, f"pairing distance {comparison.distance:.3e}")


def cmd_cm(cfg: RunConfig) -> CommandResult:
    pair = matrices.CMPair.from_model(_load(CMPairModel, cfg.options.get("pair"), "CM pair"))
    rank = matrices.cm_rank_one(pair, cfg.settings().tolerances.rank_one)
    document: dict[str, Any] = {"size": pair.size, "mode": pair.mode.value, "rank_one": rank}
    if rank.holds:
        try:
            document["real_form"] = matrices.realize_real_form(pair)
        except WronskiError as exc:
            document["real_form"] = {"ok": False, "reason": str(exc)}
    return CommandResult(document, rank.holds, f"rank one: {rank.holds} (gap {rank.gap:.3e})")


def cmd_bethe(cfg: RunConfig) -> CommandResult:
    opts = cfg.options
    if opts.get("input") is not None:
        model = _load(BetheConfigModel, opts["input"], "Bethe config")
    else:
        z, q = opts.get("z"), opts.get("q")
        if z is None or q is None or opts.get("N") is None:
            raise UsageError("bethe-check needs --input or --N, --z and --q")
        n = opts.get("n") if opts.get("n") is not None else len(z)
        try:
            model = BetheConfigModel(N=opts["N"], n=n, z=z, Q=q, s=opts.get("s", 0))
        except ValidationError as exc:
            raise UsageError("; ".join(e["msg"] for e in exc.errors())) from exc
    ts = bethe.TensorSpace.from_model(model)
    g = bethe.twist_G(ts, model.s) if model.s else None
    cert = bethe.certify_form(ts, g)
    document = {
        "config": ts,
        "s": model.s,
        **cert.to_dict(),
        "qkz_residual": bethe.qkz_residual(ts),
    }
    ok = cert.symmetry_defect <= SYMMETRY_TOL
    return CommandResult(document, ok, f"min_eig {cert.min_eigenvalue:.17g}")


def cmd_dual(cfg: RunConfig) -> CommandResult:
    settings = cfg.settings()
    convention = settings.duality
    if cfg.options.get("calibrate"):
        convention = quasipoly.calibrate_convention(calibration_spaces())
    if cfg.options.get("space") is None:
        if not cfg.options.get("calibrate"):
            raise UsageError("dual-check needs --space, --calibrate or --random")
        document = {"convention": convention.model_dump()}
        return CommandResult(document, True, f"convention {convention}")
    space = quasipoly.QuasiPolySpace.from_model(
        _load(QuasiPolySpaceModel, cfg.options["space"], "quasi-polynomial space")
    )
    result = quasipoly.duality_check(space, convention)
    document = {"convention": convention.model_dump(), **result.to_dict()}
    ok = result.distance <= DUALITY_TOL and result.base_distance <= DUALITY_TOL
    return CommandResult(document, ok, f"distance {result.distance:.3e}")


def selftest_examples() -> list[CheckResult]:
    """Fixed example-level checks run by selftest."""
    out: list[CheckResult] = []
    ts = bethe.TensorSpace.create(2, [3.0, 1.0], [1.0, 1.0])
    cert = bethe.certify_form(ts)
    gap_ok = verdict(abs(cert.min_eigenvalue - 1) <= 1e-10)
    out.append(CheckResult("gap-two-min-eig", 0, gap_ok, {"min_eig": cert.min_eigenvalue}))
    worst = max(abs(inverse.example_reality_condition(2, p)) for p in inverse.tangency_points())
    out.append(CheckResult("tangency", 0, verdict(worst == 0), {"max_condition": worst}))
    sharp = inverse.example_reality_condition(1, (-1.0, 1.0))
    out.append(CheckResult("sharpness", 0, verdict(sharp == 0), {"condition": sharp}))
    return out


async def cmd_selftest(cfg: RunConfig) -> CommandResult:
    scale = cfg.options.get("scale", 0.1)
    settings = cfg.settings()
    document: dict[str, Any] = {"seed": cfg.seed, "scale": scale, "sweeps": {}}
    examples = selftest_examples()
    document["examples"] = examples
    ok = all(r.passed for r in examples)
    for name, sweep in SWEEPS.items():
        count = max(5, int(sweep.count * scale))
        results = await run_named(name, count, cfg.seed, settings, cfg.jobs)
        document["sweeps"][name] = summarize_results(results)
        ok = ok and all(r.passed for r in results)
    for example in (1, 2):
        axis = inverse.Axis(-2.0, 2.0, 0.5)
        rows = inverse.scan_region(example, axis, EXAMPLE1_QS if example == 1 else (), settings)
        bad = inverse.disagreements(rows)
        miscounted = inverse.count_mismatches(rows)
        document[f"scan_example_{example}"] = {
            "points": len(rows),
            "disagreements": bad,
            "count_mismatches": miscounted,
        }
        ok = ok and bad == 0 and miscounted == 0
    return CommandResult(document, ok, "selftest passed" if ok else "selftest failed")


async def run(cfg: RunConfig) -> int:
    """Dispatch one invocation; returns the exit status."""
    try:
        random_count = cfg.options.get("random")
        if random_count is not None:
            if random_count < 1:
                raise UsageError("--random needs a positive count")
            outcome = await _sweeps(cfg, _random_names(cfg), random_count)
        elif cfg.command == "scan":
            outcome = await cmd_scan(cfg)
        elif cfg.command == "selftest":
            outcome = await cmd_selftest(cfg)
        else:
            handlers = {
                "wronskian": cmd_wronskian,
                "inverse": cmd_inverse,
                "matrix-check": cmd_matrix,
                "cm-check": cmd_cm,
                "bethe-check": cmd_bethe,
                "dual-check": cmd_dual,
            }
            outcome = handlers[cfg.command](cfg)
    except UsageError as exc:
        print(f"wronski {cfg.command}: {exc}", file=sys.stderr)
        return 2
    except WronskiError as exc:
        print(f"wronski {cfg.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    try:
        if cfg.fmt == "csv" and outcome.rows is not None:
            emit_report(cfg.out, outcome.rows, "csv", outcome.columns, outcome.keys)
        elif cfg.fmt == "csv":
            emit_report(cfg.out, [outcome.document], "csv")
        else:
            emit_report(cfg.out, outcome.document, "json")
    except OSError as exc:
        print(f"wronski {cfg.command}: cannot write report: {exc}", file=sys.stderr)
        return 2
    if cfg.out is not None:
        print(f"{cfg.command}: {outcome.summary}")
        print(f"Saved to {cfg.out}")
    return 0 if outcome.ok else 1


def config_from_args(args: argparse.Namespace) -> RunConfig:
    common = {"command", "seed", "tol", "starts", "jobs", "out", "format", "config", "verbose"}
    options = {k: v for k, v in vars(args).items() if k not in common}
    fmt = args.format
    if fmt is None:
        fmt = "csv" if args.out is not None and args.out.suffix == ".csv" else "json"
    return RunConfig(
        command=args.command,
        seed=args.seed,
        tol=args.tol,
        starts=args.starts,
        jobs=max(1, args.jobs),
        out=args.out,
        fmt=fmt,
        config=args.config,
        options=options,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        cfg.settings()
    except (OSError, ValueError) as exc:
        print(f"wronski: bad configuration: {exc}", file=sys.stderr)
        return 2
    return asyncio.run(run(cfg))


if __name__ == "__main__":
    sys.exit(main())
