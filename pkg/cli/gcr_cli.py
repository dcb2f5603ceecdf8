# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import argparse
import json
import logging
import os
import sys
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from .. import __version__
from ..geometry.gcr_errors import GCRConfigError, GCRGeometryError
from ..geometry.gcr_file_keys import (
    EXIT_CONFIG_ERROR,
    EXIT_GEOMETRY_DEGENERATE,
    EXIT_PASS,
    EXIT_VERIFICATION_FAILED,
    FLATNESS_REPORT_FILE_NAME,
    KEY_PAYLOAD,
    KEY_PAYLOAD_SHA256,
    KEY_RUN,
    KEY_SURFACE,
    MANIFEST_FILE_NAME,
    MESH_FILE_NAME,
    SCALARS_FILE_NAME,
    VERIFICATION_REPORT_FILE_NAME,
)
from ..geometry.utils import format_floats, sha256_of
from ..verification.gcr_verifier import GCRVerifier
from .gcr_run_config import parse_grid, parse_tolerances, RunConfig
from .gcr_surface_config_provider import GCRSurfaceConfigProvider
from .mesh_export import build_mesh_export


class ColoredFormatter(logging.Formatter):
    """Custom formatter with colors for different log levels"""

    # ANSI color codes
    COLORS = {
        "DEBUG": "\033[36m",  # Cyan
        "INFO": "\033[32m",  # Green
        "WARNING": "\033[33m",  # Orange/Yellow
        "ERROR": "\033[31m",  # Red
        "CRITICAL": "\033[35m",  # Magenta
        "RESET": "\033[0m",  # Reset
    }

    def format(self, record):
        color = self.COLORS.get(record.levelname, self.COLORS["RESET"])
        original_levelname = record.levelname
        record.levelname = f"{color}{record.levelname}{self.COLORS['RESET']}"
        formatted_message = super().format(record)
        # Restore the original level name for other handlers
        record.levelname = original_levelname
        return formatted_message


def setup_logging_format(verbose: bool = False) -> None:
    root_logger = logging.getLogger()
    # main() may run several times in one process
    for existing in list(root_logger.handlers):
        if isinstance(existing.formatter, ColoredFormatter):
            root_logger.removeHandler(existing)

    handler = logging.StreamHandler()
    handler.setFormatter(ColoredFormatter(fmt="%(name)-20s - %(levelname)-8s - %(message)s"))
    root_logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    root_logger.addHandler(handler)


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="gcr_minkowski",
        description="Construct and verify space-like GCR surfaces in Minkowski 3-space",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", type=str, required=True, help="path to a surface config or manifest JSON"
    )
    common.add_argument("--out", type=str, default=".", help="output folder")
    common.add_argument(
        "--grid", type=str, default="41x41", help="sampling grid as NSxNT (default 41x41)"
    )
    common.add_argument(
        "--fd-step", type=float, default=None, help="finite-difference step for surface jets"
    )
    common.add_argument(
        "--field-fd-step",
        type=float,
        default=None,
        help="finite-difference step for derived fields (theta, k2, e1, metric)",
    )
    common.add_argument(
        "--tol",
        type=str,
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override one check tolerance, may be repeated",
    )
    common.add_argument(
        "--fd-jets",
        action="store_true",
        help="use finite-difference jets even when analytic ones exist",
    )
    common.add_argument("--no-progress", action="store_true", help="hide progress bars")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    subparsers.add_parser(
        "generate", parents=[common], help="write an OBJ mesh, scalars CSV and manifest"
    )
    subparsers.add_parser("verify", parents=[common], help="run every GCR check on a grid")
    subparsers.add_parser("flatcheck", parents=[common], help="check flatness on a grid")
    return parser.parse_args(argv)


def build_run_config(args: argparse.Namespace) -> RunConfig:
    ns, nt = parse_grid(args.grid)
    run_config = RunConfig(
        config_path=args.config,
        out_dir=args.out,
        ns=ns,
        nt=nt,
        analytic_jets=not args.fd_jets,
        tolerance_overrides=parse_tolerances(args.tol),
        show_progress=not args.no_progress,
    )
    if args.fd_step is not None:
        run_config.fd_step = args.fd_step
    if args.field_fd_step is not None:
        run_config.field_fd_step = args.field_fd_step
    run_config.validate()
    return run_config


def write_json_report(file_path: str, payload: Dict[str, Any], command: str) -> None:
    """Payload plus its hash; run metadata stays outside the hashed part."""
    document = {
        KEY_PAYLOAD: payload,
        KEY_PAYLOAD_SHA256: sha256_of(payload),
        KEY_RUN: {
            "command": command,
            "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "version": __version__,
        },
    }
    with open(file_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(document, f, indent=2)
        f.write("\n")
    logging.getLogger(__name__).info("Wrote %s", file_path)


def cmd_generate(run_config: RunConfig) -> int:
    resolved = GCRSurfaceConfigProvider(run_config.config_path).get_surface()
    verifier = GCRVerifier(
        resolved.verification_target,
        run_config.verification_settings(),
        resolved.config_sha256,
    )
    mesh = build_mesh_export(
        resolved.raw, run_config.ns, run_config.nt, verifier, run_config.show_progress
    )

    os.makedirs(run_config.out_dir, exist_ok=True)
    mesh.write_obj(os.path.join(run_config.out_dir, MESH_FILE_NAME), resolved.name)
    mesh.write_scalars_csv(os.path.join(run_config.out_dir, SCALARS_FILE_NAME))

    theta_range = mesh.theta_range()
    payload = format_floats(
        {
            "config_sha256": resolved.config_sha256,
            "mesh": {
                "obj": MESH_FILE_NAME,
                "scalars": SCALARS_FILE_NAME,
                "ns": run_config.ns,
                "nt": run_config.nt,
                "vertices": len(mesh.vertices),
                "quads": len(mesh.faces),
            },
            "theta_range": list(theta_range) if theta_range is not None else None,
        }
    )
    # kept as plain numbers so the manifest can be read back as a config
    payload[KEY_SURFACE] = resolved.config
    write_json_report(
        os.path.join(run_config.out_dir, MANIFEST_FILE_NAME), payload, "generate"
    )
    return EXIT_PASS


def cmd_verify(run_config: RunConfig) -> int:
    resolved = GCRSurfaceConfigProvider(run_config.config_path).get_surface()
    verifier = GCRVerifier(
        resolved.verification_target,
        run_config.verification_settings(),
        resolved.config_sha256,
    )
    report = verifier.full_report(run_config.ns, run_config.nt)

    os.makedirs(run_config.out_dir, exist_ok=True)
    write_json_report(
        os.path.join(run_config.out_dir, VERIFICATION_REPORT_FILE_NAME),
        report.to_payload(),
        "verify",
    )

    for name, check in sorted(report.checks.items()):
        print(
            f"{name:<22} {'PASS' if check.passed else 'FAIL'}  max {check.max:.3e}  "
            f"mean {check.mean:.3e}  tol {check.tolerance:.1e}  points {check.count}"
        )
    print(
        f"{report.surface_name}: {'PASS' if report.passed else 'FAIL'} "
        f"({report.excluded_count} excluded, {report.degenerate_count} degenerate points)"
    )

    if report.degenerate_count:
        return EXIT_GEOMETRY_DEGENERATE
    return EXIT_PASS if report.passed else EXIT_VERIFICATION_FAILED


def cmd_flatcheck(run_config: RunConfig) -> int:
    resolved = GCRSurfaceConfigProvider(run_config.config_path).get_surface()
    verifier = GCRVerifier(
        resolved.verification_target,
        run_config.verification_settings(),
        resolved.config_sha256,
    )
    report = verifier.flatness_report(run_config.ns, run_config.nt)

    os.makedirs(run_config.out_dir, exist_ok=True)
    write_json_report(
        os.path.join(run_config.out_dir, FLATNESS_REPORT_FILE_NAME),
        report.to_payload(),
        "flatcheck",
    )

    print(
        f"{report.surface_name}: {'FLAT' if report.passed else 'NOT FLAT'}  "
        f"max |K_ext| {report.max_abs_K_ext:.3e}  min |K_ext| {report.min_abs_K_ext:.3e}  "
        f"max |k1| {report.max_abs_k1:.3e}"
    )
    if report.flatness_condition is not None:
        print(f"flatness condition residual {report.flatness_condition:.3e}")
    if report.theta_plus_u is not None:
        print(f"max |theta + u - c1| {report.theta_plus_u:.3e}")

    if report.degenerate_count:
        return EXIT_GEOMETRY_DEGENERATE
    return EXIT_PASS if report.passed else EXIT_VERIFICATION_FAILED


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "flatcheck": cmd_flatcheck,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    setup_logging_format(args.verbose)
    # Set up named logger for the main application
    logger = logging.getLogger("GCRMinkowski")

    try:
        run_config = build_run_config(args)
        logger.info("Running %s on %s", args.command, run_config.config_path)
        return COMMANDS[args.command](run_config)
    except GCRGeometryError as e:
        # before RuntimeError: geometry errors derive from it
        logger.error("Degenerate geometry: %s", e)
        return EXIT_GEOMETRY_DEGENERATE
    except GCRConfigError as e:
        logger.error("Invalid configuration: %s", e)
        return EXIT_CONFIG_ERROR
    except (RuntimeError, OSError) as e:
        logger.error("Cannot read input: %s", e)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
