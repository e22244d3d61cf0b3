"""
Radar-Camera Calibration - Command Line Interface
Synthesize scenes, calibrate, project radar detections and evaluate calibrations.

Exit codes: 0 ok, 2 config/input error, 3 no RANSAC consensus, 4 insufficient data.
"""

import argparse
import dataclasses
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, List, Optional

# Add the src directory to the Python path
sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from core.correspondence import associate, block_sample, select_time_window
from core.io import (
    read_calibration,
    read_detections,
    read_intrinsics,
    read_scene_config,
    write_calibration,
    write_dataset,
    write_overlay,
    write_projection,
    write_report,
)
from core.metrics import evaluate
from core.solver import calibrate
from core.synth import generate
from core.utils.config import PROJECT_ROOT, config
from core.utils.logger import setup_logging
from shared.errors import CalibrationError, InsufficientDataError, NoConsensusError
from shared.models import (
    MIN_SAMPLE,
    CalibrationArtifact,
    LmConfig,
    MatcherConfig,
    MatcherStrategy,
    RansacConfig,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_CONSENSUS = 3
EXIT_INSUFFICIENT = 4

CALIBRATION_FILE = 'calibration.json'
OVERLAY_FILE = 'overlay.csv'
REPORT_FILE = 'report.json'


def _created_at(flag: Optional[str]) -> str:
    return flag or config.get_created_at() or datetime.now(timezone.utc).isoformat(timespec='seconds')


def _matcher_config(args: argparse.Namespace, prior_path: Optional[str]) -> MatcherConfig:
    prior = read_calibration(prior_path).pose if prior_path else None
    return MatcherConfig(
        strategy=args.matcher,
        prior_pose=prior,
        gate_px=args.gate_px,
        require_one_to_one=config.get('matcher.require_one_to_one'),
    )


def cmd_synth(args: argparse.Namespace) -> int:
    """Generate a synthetic dataset from a scene configuration JSON."""
    scene = read_scene_config(args.config)
    if args.seed is not None:
        scene = dataclasses.replace(scene, seed=args.seed)
    dataset = generate(scene)
    paths = write_dataset(dataset, args.out_dir)
    logger.info("Synthetic dataset: %s", ", ".join(str(p) for p in paths.values()))
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    """Associate, block-sample, calibrate and evaluate; write calibration, overlay and report."""
    K, image_w, image_h = read_intrinsics(args.intrinsics)
    camera = read_detections(args.camera, 'camera')
    radar = read_detections(args.radar, 'radar')
    camera, radar = select_time_window(camera, radar, 0.0, args.window_seconds)

    matcher = _matcher_config(args, args.prior)
    corrs = associate(camera, radar, K, matcher)
    sampled = block_sample(corrs, image_w, image_h, args.block_size, args.stride_blocks)
    if len(sampled) < MIN_SAMPLE:
        raise InsufficientDataError(
            f"{len(sampled)} correspondences left after block sampling ({len(corrs)} before); "
            f"calibration needs at least {MIN_SAMPLE}",
            count=len(sampled), required=MIN_SAMPLE,
        )

    ransac_settings = config.get_ransac_config()
    ransac_cfg = RansacConfig(
        max_iterations=int(ransac_settings['max_iterations']),
        inlier_threshold=args.ransac_threshold,
        confidence=float(ransac_settings['confidence']),
        seed=args.seed,
    )
    lm_cfg = LmConfig(**config.get_lm_config())
    estimate = calibrate(sampled, K, ransac_cfg, lm_cfg)
    if not estimate.converged:
        logger.warning("LM refinement did not converge; writing the best pose found")

    report = evaluate(estimate.pose, K, sampled, args.ransac_threshold)
    metrics = report.summary()
    metrics.update({
        'final_cost': estimate.final_cost,
        'converged': estimate.converged,
        'lm_iterations': estimate.iterations_used,
        'ransac_iterations': estimate.ransac_iterations,
        'n_correspondences': len(corrs),
    })
    artifact = CalibrationArtifact(
        intrinsics=K,
        pose=estimate.pose,
        metrics=metrics,
        config={
            'matcher': {'strategy': matcher.strategy.value, 'gate_px': matcher.gate_px,
                        'require_one_to_one': matcher.require_one_to_one},
            'sampling': {'block_size': args.block_size, 'stride_blocks': args.stride_blocks},
            'ransac': ransac_cfg.to_dict(),
            'lm': lm_cfg.to_dict(),
            'window': {'calibration_seconds': args.window_seconds},
        },
        tool_version=config.get('app.version'),
        created_at=_created_at(args.created_at),
    )

    out_dir = Path(args.out_dir)
    write_calibration(artifact, out_dir / CALIBRATION_FILE)
    write_overlay(estimate.pose, K, sampled, out_dir / OVERLAY_FILE, args.ransac_threshold)
    write_report(report, out_dir / REPORT_FILE)
    logger.info("Calibrated on %d sampled correspondences: %d inliers, RMSRE %.3f px (all %.3f px)",
                report.n_all, report.n_inliers, report.rmsre_inliers or float('nan'), report.rmsre_all)
    return EXIT_OK


def cmd_project(args: argparse.Namespace) -> int:
    """Project radar detections through a stored calibration."""
    artifact = read_calibration(args.calibration)
    radar = read_detections(args.radar, 'radar')
    write_projection(artifact.pose, artifact.intrinsics, radar, args.output)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    """Evaluate a stored calibration on a (held-out) window of detections."""
    artifact = read_calibration(args.calibration)
    camera = read_detections(args.camera, 'camera')
    radar = read_detections(args.radar, 'radar')
    camera, radar = select_time_window(camera, radar, args.start_seconds, args.window_seconds)

    # The stored pose doubles as the prior of the nearest-prior matcher
    matcher = MatcherConfig(
        strategy=args.matcher,
        prior_pose=artifact.pose,
        gate_px=args.gate_px,
        require_one_to_one=config.get('matcher.require_one_to_one'),
    )
    corrs = associate(camera, radar, artifact.intrinsics, matcher)
    if not corrs:
        raise InsufficientDataError("No correspondences in the evaluation window", count=0, required=1)

    report = evaluate(artifact.pose, artifact.intrinsics, corrs, args.inlier_threshold)
    write_report(report, args.output)
    return EXIT_OK


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _add_matcher_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--matcher', choices=[s.value for s in MatcherStrategy],
                        default=config.get('matcher.strategy'),
                        help="Association strategy: object ids or nearest projection under a prior")
    parser.add_argument('--gate-px', type=_positive_float, default=float(config.get('matcher.gate_px')),
                        help="Gate of the nearest-prior matcher in pixels")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the synth, calibrate, project and evaluate subcommands."""
    parser = argparse.ArgumentParser(
        prog='rccal',
        description="Targetless radar-camera extrinsic calibration toolkit.",
    )
    parser.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help="Override the configured log level")
    sub = parser.add_subparsers(dest='command', required=True)

    synth = sub.add_parser('synth', help="Generate a synthetic radar-camera dataset")
    synth.add_argument('config', nargs='?', default=str(PROJECT_ROOT / 'config' / 'scene.json'),
                       help="Scene configuration JSON")
    synth.add_argument('--out-dir', default='synthetic', help="Output directory")
    synth.add_argument('--seed', type=int, default=None, help="Override the scene seed")
    synth.set_defaults(handler=cmd_synth)

    cal = sub.add_parser('calibrate', help="Estimate the radar-to-camera pose")
    cal.add_argument('camera', help="Camera detections CSV")
    cal.add_argument('radar', help="Radar detections CSV")
    cal.add_argument('intrinsics', help="Camera intrinsics JSON")
    _add_matcher_flags(cal)
    cal.add_argument('--prior', default=None, help="Calibration JSON used as the nearest-prior matcher's pose")
    cal.add_argument('--block-size', type=int, default=int(config.get('sampling.block_size')),
                     help="Block sampling cell size in pixels")
    cal.add_argument('--stride-blocks', type=int, default=int(config.get('sampling.stride_blocks')),
                     help="Keep every n-th cell along each image axis")
    cal.add_argument('--ransac-threshold', type=_positive_float,
                     default=float(config.get('ransac.inlier_threshold_px')),
                     help="RANSAC inlier threshold in pixels")
    cal.add_argument('--seed', type=int, default=int(config.get('ransac.seed')), help="RANSAC seed")
    cal.add_argument('--window-seconds', type=_positive_float,
                     default=float(config.get('window.calibration_seconds')),
                     help="Calibrate on detections within this many seconds of the first one")
    cal.add_argument('--created-at', default=None, help="Timestamp recorded in the artifact")
    cal.add_argument('--out-dir', default='.', help="Directory for calibration.json, overlay.csv, report.json")
    cal.set_defaults(handler=cmd_calibrate)

    proj = sub.add_parser('project', help="Project radar detections into the image")
    proj.add_argument('calibration', help="Calibration JSON")
    proj.add_argument('radar', help="Radar detections CSV")
    proj.add_argument('--output', default='projected.csv', help="Output CSV")
    proj.set_defaults(handler=cmd_project)

    ev = sub.add_parser('evaluate', help="Reprojection errors of a calibration on held-out detections")
    ev.add_argument('calibration', help="Calibration JSON")
    ev.add_argument('camera', help="Camera detections CSV")
    ev.add_argument('radar', help="Radar detections CSV")
    _add_matcher_flags(ev)
    ev.add_argument('--start-seconds', type=float, default=0.0,
                    help="Window start, seconds after the first detection")
    ev.add_argument('--window-seconds', type=_positive_float, default=None,
                    help="Window length in seconds (default: until the end)")
    ev.add_argument('--inlier-threshold', type=_positive_float,
                    default=float(config.get('ransac.inlier_threshold_px')),
                    help="Inlier threshold in pixels")
    ev.add_argument('--output', default=REPORT_FILE, help="Output report JSON")
    ev.set_defaults(handler=cmd_evaluate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and map failures onto exit codes."""
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level)
    handler: Callable[[argparse.Namespace], int] = args.handler

    try:
        return handler(args)
    except InsufficientDataError as e:
        logger.error("Insufficient data (%d of %d required): %s", e.count, e.required, e)
        return EXIT_INSUFFICIENT
    except NoConsensusError as e:
        logger.error("No consensus: %s", e)
        return EXIT_NO_CONSENSUS
    except (CalibrationError, OSError) as e:
        logger.error("%s: %s", e.__class__.__name__, e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
