#!/usr/bin/env python3
"""Run spinor reconstruction pipelines on catalog or file scenes.

Usage:
    spinform run <scene> [--resolution N] [--mesh out.obj] [--report out.json] [--pipeline P]
    spinform scenes [--json]

Examples:
    # Sphere reconstruction with every verification residual
    spinform run round_sphere --resolution 65

    # Weierstrass round trip on Enneper's surface, report only
    spinform run enneper --pipeline roundtrip --report enneper.json

    # Scene described in a file, verbose
    spinform run my_scene.yaml --log-level INFO

Exit status:
    0  every residual is under its tolerance
    1  some residual is over its tolerance (the report is still written)
    2  unknown scene, invalid input or a failed solve
    3  output could not be written
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from spinform.configs import default_gate, list_scenes, load_scene_config, scene_config
from spinform.core.base import PIPELINES, RunConfig, SolverConfig, ToleranceGate
from spinform.core.constants import MIN_RESOLUTION
from spinform.core.exceptions import SceneError, SpinformError
from spinform.core.pipeline import PipelineOutcome, run_pipeline
from spinform.geometry.scenes import Scene
from spinform.immersion.export import write_obj
from spinform.spaceforms.ambient import hyperboloid_to_poincare
from spinform.utils.logging import get_logger, set_log_level
from spinform.utils.results import generate_summary_report, report_to_json, save_report_json

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_INPUT = 2
EXIT_IO = 3


def _tolerance(text: str) -> Tuple[str, ToleranceGate]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"Expected NAME=VALUE, got {text!r}")
    try:
        floor = float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Tolerance of {name!r} is not a number") from exc
    return name, ToleranceGate(constant=0.0, order=0, floor=floor)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the ``run`` and ``scenes`` subcommands."""
    parser = argparse.ArgumentParser(
        prog="spinform",
        description="Spinor representation of submanifolds: reconstruct and verify scenes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a pipeline on one scene")
    run.add_argument("scene", help="Catalog scene name or path to a JSON/YAML scene file")
    run.add_argument(
        "--resolution",
        "-n",
        type=int,
        default=None,
        help=f"Nodes per axis (at least {MIN_RESOLUTION}; default: scene setting)",
    )
    run.add_argument("--mesh", type=Path, default=None, help="OBJ output path")
    run.add_argument("--report", type=Path, default=None, help="JSON report output path")
    run.add_argument(
        "--pipeline",
        "-p",
        choices=PIPELINES,
        default=None,
        help="Pipeline to run (default: scene setting)",
    )
    run.add_argument(
        "--tolerance",
        "-t",
        type=_tolerance,
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="Fixed tolerance for one residual (repeatable)",
    )
    run.add_argument(
        "--output-dir",
        "-o",
        type=Path,
        default=None,
        help="Directory for default output files (default: base config output.dir)",
    )
    run.add_argument("--no-save", action="store_true", help="Don't write default output files")
    run.add_argument(
        "--poincare", action="store_true", help="Write hyperbolic meshes in the Poincaré ball"
    )
    run.add_argument("--json", action="store_true", help="Print the report as JSON")
    run.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="Logging level (default: base config logging.level)",
    )

    scenes = sub.add_parser("scenes", help="List catalog scenes")
    scenes.add_argument("--json", action="store_true", help="Machine-readable listing")
    return parser


def catalog_listing() -> List[Dict[str, Any]]:
    """Name, p, q, ambient and reference oracle of every catalog scene."""
    return [Scene.from_config(load_scene_config(name)).summary() for name in list_scenes()]


def _print_scenes(as_json: bool) -> int:
    listing = catalog_listing()
    if as_json:
        print(json.dumps(listing, indent=2, sort_keys=True))
        return EXIT_OK
    print("Available scenes:")
    for entry in listing:
        print(
            f"  - {entry['name']:<20} p={entry['p']} q={entry['q']} "
            f"{entry['ambient']:<10} {entry['oracle']}"
        )
    return EXIT_OK


def _write_mesh(
    outcome: PipelineOutcome, path: Path, scene: Scene, poincare: bool
) -> Optional[Path]:
    if outcome.result is None or scene.p != 2:
        logger.warning(f"No surface mesh for {scene.name!r} (p = {scene.p})")
        return None
    positions = outcome.result.positions
    metadata: Dict[str, Any] = {"scene": scene.name, "ambient": scene.ambient}
    if poincare and scene.kappa == -1:
        positions = hyperboloid_to_poincare(positions)
        metadata["model"] = "poincare_ball"
    return write_obj(path, positions, metadata)


def run(config: RunConfig, settings: Dict[str, Any], args: argparse.Namespace) -> int:
    """Execute one run and write its outputs.

    Returns
    -------
    int
        Exit status.
    """
    scene = Scene.from_config(settings)
    if config.resolution is not None:
        scene = scene.with_resolution(config.resolution)
    if config.tolerances:
        scene = replace(scene, tolerances={**scene.tolerances, **config.tolerances})
    solver = SolverConfig.from_dict(settings.get("solver") or {})

    outcome = run_pipeline(scene, config.pipeline, solver, default_gate(settings))
    report = outcome.report

    output = settings.get("output") or {}
    output_dir = args.output_dir or Path(output.get("dir", "results"))
    stem = f"{scene.name}_{scene.resolution}_{report.pipeline}"
    report_path = config.report_path
    mesh_path = config.mesh_path
    if not args.no_save:
        report_path = report_path or output_dir / f"{stem}.json"
        if mesh_path is None and output.get("mesh", True) and scene.p == 2:
            mesh_path = output_dir / f"{stem}.obj"

    try:
        if report_path is not None:
            save_report_json(report, report_path)
        if mesh_path is not None:
            _write_mesh(outcome, mesh_path, scene, args.poincare or output.get("poincare", False))
    except OSError as exc:
        logger.error(f"Cannot write output: {exc}")
        return EXIT_IO

    if args.json:
        sys.stdout.write(report_to_json(report))
    else:
        print(generate_summary_report([report]))
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point.

    Returns
    -------
    int
        Exit code.
    """
    args = build_parser().parse_args(argv)

    if args.command == "scenes":
        return _print_scenes(args.json)

    try:
        settings = scene_config(args.scene)
        set_log_level(args.log_level or (settings.get("logging") or {}).get("level", "WARNING"))
        config = RunConfig(
            scene=args.scene,
            resolution=args.resolution,
            mesh_path=args.mesh,
            report_path=args.report,
            pipeline=args.pipeline,
            tolerances=dict(args.tolerance),
        )
        return run(config, settings, args)
    except FileNotFoundError as exc:
        logger.error(str(exc))
        print(f"spinform: unknown scene {args.scene!r}; see 'spinform scenes'", file=sys.stderr)
        return EXIT_INPUT
    except (SceneError, ValueError) as exc:
        print(f"spinform: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SpinformError as exc:
        print(f"spinform: run failed: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
