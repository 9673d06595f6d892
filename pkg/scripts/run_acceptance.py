#!/usr/bin/env python3
"""Run every acceptance sweep at full size and save one JSON file."""

import argparse
import asyncio
import json
import logging
import time
from datetime import UTC, datetime
from pathlib import Path

from wronski.config import DEFAULT_SETTINGS
from wronski.inverse import Axis, count_mismatches, disagreements, scan_region
from wronski.report import to_jsonable
from wronski.runner import SWEEPS, run_named, summarize_results

EXAMPLE1_QS = (-3.0, -1.0, -0.25, 0.5, 2.0)

# Sweeps grouped by acceptance criterion
CRITERIA = {
    "spectral": ("spectral-zd", "spectral-z", "spectral-qd"),
    "vandermonde": ("vandermonde",),
    "rank-one": ("rank-one-z", "rank-one-qd", "rank-one-zd"),
    "bethe-positivity": ("bethe-positive", "bethe-split", "bethe-crosscheck"),
    "qkz": ("bethe-qkz",),
    "theorem-sampling": (
        "theorem-discrete",
        "theorem-differential",
        "planted-multiplicative",
        "planted-exponent",
    ),
    "limits": ("degree", "step-limit", "confluent", "step-h"),
    "duality": ("duality",),
}


async def main() -> None:
    parser = argparse.ArgumentParser(description="Run the acceptance sweeps")
    parser.add_argument("--seed", type=int, default=0, help="Random seed")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes")
    parser.add_argument("--scale", type=float, default=1.0, help="Fraction of full counts")
    parser.add_argument("--skip-scans", action="store_true", help="Skip the region scans")
    parser.add_argument(
        "--output-dir", type=Path, default=Path("data/results"), help="Output directory"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Verbose output")
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    settings = DEFAULT_SETTINGS.model_copy(
        update={"solver": DEFAULT_SETTINGS.solver.model_copy(update={"seed": args.seed})}
    )

    results: dict[str, dict[str, object]] = {}
    failed: list[str] = []
    for criterion, names in CRITERIA.items():
        print(f"\n=== {criterion} ===")
        for name in names:
            count = max(1, int(SWEEPS[name].count * args.scale))
            start = time.perf_counter()
            outcome = await run_named(name, count, args.seed, settings, args.jobs)
            summary = summarize_results(outcome)
            summary["seconds"] = round(time.perf_counter() - start, 3)
            results[name] = {"summary": summary, "results": outcome}
            print(f"{name}: {summary['pass']}/{summary['total']} pass "
                  f"({summary['fail']} fail, {summary['error']} error) in {summary['seconds']}s")
            if summary["fail"] or summary["error"]:
                failed.append(name)

    if not args.skip_scans:
        for example, axis, qs in (
            (1, Axis(-3.0, 3.0, 0.05), EXAMPLE1_QS),
            (2, Axis(-2.0, 2.0, 0.05), ()),
        ):
            start = time.perf_counter()
            rows = scan_region(example, axis, qs, settings)
            bad = disagreements(rows)
            miscounted = count_mismatches(rows)
            seconds = round(time.perf_counter() - start, 3)
            results[f"scan-example-{example}"] = {
                "summary": {
                    "points": len(rows),
                    "disagreements": bad,
                    "count_mismatches": miscounted,
                    "seconds": seconds,
                }
            }
            print(f"scan example {example}: {len(rows)} points, {bad} disagreements, "
                  f"{miscounted} count mismatches in {seconds}s")
            if bad or miscounted:
                failed.append(f"scan-example-{example}")

    print("\n" + "=" * 60)
    print("ALL CRITERIA PASS" if not failed else f"FAILED: {', '.join(failed)}")
    print("=" * 60)

    args.output_dir.mkdir(parents=True, exist_ok=True)
    timestamp = datetime.now(UTC).strftime("%Y%m%d_%H%M%S")
    output_path = args.output_dir / f"acceptance_seed{args.seed}_{timestamp}.json"
    with open(output_path, "w") as f:
        json.dump(
            to_jsonable(
                {
                    "metadata": {
                        "seed": args.seed,
                        "scale": args.scale,
                        "jobs": args.jobs,
                        "timestamp": timestamp,
                    },
                    "results": results,
                    "failed": failed,
                }
            ),
            f,
            indent=2,
        )

    print(f"\nSaved to {output_path}")


if __name__ == "__main__":
    asyncio.run(main())
