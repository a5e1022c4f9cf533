"""Command-line front end.

Exit codes: 0 success, 1 configuration or I/O error, 2 a requested
H-theorem check (or a unitarity constraint) failed.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .channels import (
    channel_from_blocks,
    check_unitarity_constraints,
    entropy_gain,
    h_theorem_verdict,
    unitality_criterion_defect,
    unitality_defect,
)
from .errors import ConstraintViolation, UnitalLabError
from .linalg import max_abs, validate_density_matrix
from .results import ScenarioResult
from .scenarios import (
    diagonal_reservoir_channel,
    one_d_scatterer,
    run_nspin,
    three_lead_demon,
    tls_random_walk,
)
from .serialization import ConfigError, atomic_write_text, dumps, load_json, matrix_to_json

log = logging.getLogger("unital_lab")

OUTPUT_ENV = "UNITAL_LAB_OUTPUT"
EXIT_OK, EXIT_ERROR, EXIT_CHECK_FAILED = 0, 1, 2
UNITAL_TOL = 1e-10
MONOTONE_TOL = 1e-9
TRAJECTORY_COLUMNS = ("step", "s_in", "s_out", "delta_s", "eq1_bound")


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_path: Path
    output_dir: Path
    seed: int | None = None
    format: str = "json"
    jobs: int = 1
    max_n: int | None = None


def run_point(scenario: str, point: dict, seed: int | None, max_n: int | None) -> dict:
    """Run one scenario configuration; returns the result as a JSON-ready dict."""
    if scenario == "three-lead":
        result = three_lead_demon(cfgmod.three_lead_config(point))
    elif scenario == "one-d":
        result = one_d_scatterer(**cfgmod.one_d_args(point))
    elif scenario == "nspin":
        result = run_nspin(cfgmod.nspin_config(point, max_n), max_n)
    elif scenario == "tls-walk":
        result = tls_random_walk(cfgmod.tls_walk_config(point, seed))
    elif scenario == "diagonal":
        result = diagonal_reservoir_channel(**cfgmod.diagonal_args(point))
    else:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}")
    result.metadata["config"] = {k: v for k, v in point.items() if k != "sweep"}
    if seed is not None:
        result.metadata["seed"] = seed
    return result.to_dict()


def expand_points(config: dict) -> list[dict]:
    sweep = config.get("sweep")
    if sweep is None:
        return [config]
    if not isinstance(sweep, list) or not all(isinstance(p, dict) for p in sweep) or not sweep:
        raise ConfigError("sweep", "expected a non-empty list of override objects")
    base = {k: v for k, v in config.items() if k != "sweep"}
    return [{**base, **p} for p in sweep]


def point_seeds(seed: int | None, n: int) -> list[int | None]:
    """Independent per-point seeds split from one 64-bit manifest seed."""
    if seed is None:
        return [None] * n
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(c.generate_state(1, dtype=np.uint64)[0] >> 1) for c in children]


def failed_expectations(config: dict, result: ScenarioResult) -> list[str]:
    failures = []
    if config.get("expect_unital"):
        worst = max(result.unitality_max_defect or 0.0, result.criterion.max_abs if result.criterion else 0.0)
        if worst > UNITAL_TOL:
            failures.append(f"expected a unital channel, defect is {worst:.3e}")
    if config.get("expect_monotone"):
        low = min((r.delta_s for r in result.trajectory), default=0.0)
        if low < -MONOTONE_TOL:
            failures.append(f"expected non-decreasing entropy, min step delta_s is {low:.3e}")
    return failures


def _fmt(x) -> str:
    return "" if x is None else format(float(x), ".12g")


def result_csv(result: ScenarioResult) -> str:
    if result.series is not None:
        lines = ["N,commutator_norm"] + [f"{n},{_fmt(v)}" for n, v in result.series]
    else:
        lines = [",".join(TRAJECTORY_COLUMNS)]
        for step, r in enumerate(result.trajectory, start=1):
            lines.append(",".join([str(step), _fmt(r.s_in), _fmt(r.s_out), _fmt(r.delta_s), _fmt(r.eq1_bound)]))
    return "\n".join(lines) + "\n"


def run_scenario(manifest: RunManifest, scenario: str) -> int:
    try:
        config = load_json(manifest.config_path)
        points = expand_points(config)
        if manifest.seed is None:
            seeds = [None] * len(points)
        else:
            seeds = point_seeds(manifest.seed, len(points))
        args = [(scenario, p, s, manifest.max_n) for p, s in zip(points, seeds)]
        if manifest.jobs > 1 and len(points) > 1:
            with ProcessPoolExecutor(max_workers=manifest.jobs) as pool:
                dicts = list(pool.map(run_point, *zip(*args)))
        else:
            dicts = [run_point(*a) for a in args]
    except ConstraintViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (ConfigError, UnitalLabError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    results = [ScenarioResult.from_dict(d) for d in dicts]
    out = manifest.output_dir
    try:
        if manifest.format in ("json", "both"):
            doc = dicts[0] if len(dicts) == 1 else {"scenario": scenario, "points": dicts}
            atomic_write_text(out / f"{scenario}.json", dumps(doc))
        if manifest.format in ("csv", "both"):
            if len(results) == 1:
                atomic_write_text(out / f"{scenario}.csv", result_csv(results[0]))
            else:
                for k, r in enumerate(results):
                    atomic_write_text(out / f"{scenario}.p{k:03d}.csv", result_csv(r))
    except OSError as exc:
        print(f"error: cannot write report to {out}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    failures = [msg for p, r in zip(points, results) for msg in failed_expectations(p, r)]
    for r in results:
        summary = r.trajectory[-1].delta_s if r.trajectory else None
        log.info("%s: unitality defect %s, final delta_s %s", scenario, r.unitality_max_defect, summary)
    if failures:
        for msg in failures:
            print(f"check failed: {msg}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def check_channel(manifest: RunManifest) -> int:
    try:
        spec = load_json(manifest.config_path)
        blocks, pi, state = cfgmod.channel_spec(spec)
        validate_density_matrix(pi)
        if state is not None:
            validate_density_matrix(state)
    except (ConfigError, UnitalLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    checks = [check_unitarity_constraints(b) for b in blocks]
    report: dict = {
        "unitarity": [
            {"block": b.label, "passed": c.passed, "max_violation": c.max_violation,
             "left_violation": c.left_violation, "right_violation": c.right_violation}
            for b, c in zip(blocks, checks)
        ],
    }
    status = EXIT_OK
    if not all(c.passed for c in checks):
        worst = max(c.max_violation for c in checks)
        left = max(c.left_violation for c in checks)
        report["verdict"] = None
        print(f"unitarity constraints violated: max violation {worst:.3e} (U^+U relation {left:.3e})", file=sys.stderr)
        status = EXIT_CHECK_FAILED
    else:
        try:
            crits = [unitality_criterion_defect(b, pi) for b in blocks]
            phi = channel_from_blocks(blocks, pi)
            n = blocks[0].dim_sys
            if state is None:
                rho_blocks = [b.weight * np.eye(n) / n for b in blocks]
            else:
                rho_blocks = [state[k * n:(k + 1) * n, k * n:(k + 1) * n] for k in range(len(blocks))]
            verdict = h_theorem_verdict(blocks, rho_blocks, pi)
            defect = unitality_defect(phi)
            entropy = entropy_gain(phi, state).to_dict() if state is not None else None
        except (UnitalLabError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        report["criterion"] = [
            {"block": b.label, "max_abs": c.max_abs, "values": matrix_to_json(c.values)}
            for b, c in zip(blocks, crits)
        ]
        report["unitality_defect"] = {"max_abs": defect.max_abs, "matrix": matrix_to_json(defect.matrix)}
        report["verdict"] = {
            "guaranteed": verdict.guaranteed,
            "witness": None if verdict.witness is None else verdict.witness._asdict(),
        }
        report["entropy"] = entropy
        report["criterion_vs_stinespring"] = max_abs(
            np.concatenate([c.values.ravel() for c in crits])
            - np.concatenate([
                defect.matrix[k * n:(k + 1) * n, k * n:(k + 1) * n].ravel() for k in range(len(blocks))
            ])
        )
    try:
        atomic_write_text(manifest.output_dir / "verdict.json", dumps(report))
    except OSError as exc:
        print(f"error: cannot write verdict to {manifest.output_dir}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unital-lab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("scenario", help="run one of the physical scenarios")
    sc.add_argument("name", choices=cfgmod.SCENARIOS)
    sc.add_argument("--config", required=True, type=Path)
    sc.add_argument("--output", type=Path, default=None)
    sc.add_argument("--seed", type=int, default=None)
    sc.add_argument("--format", choices=("json", "csv", "both"), default="json")
    sc.add_argument("--jobs", type=int, default=1)
    sc.add_argument("--max-n", type=int, default=None, help="largest spin count for the nspin scenario")

    ck = sub.add_parser("check", help="evaluate a channel-spec JSON file")
    ck.add_argument("--config", required=True, type=Path)
    ck.add_argument("--output", type=Path, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    output = args.output or Path(os.environ.get(OUTPUT_ENV, "unital_lab_output"))
    if args.command == "scenario":
        manifest = RunManifest(
            "scenario", args.config, output, args.seed, args.format, max(1, args.jobs), args.max_n
        )
        return run_scenario(manifest, args.name)
    manifest = RunManifest("check", args.config, output)
    return check_channel(manifest)


if __name__ == "__main__":
    sys.exit(main())
