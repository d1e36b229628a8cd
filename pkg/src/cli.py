"""randwave command line entry point"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .models.config import EXPERIMENTS
from .orchestrator.coordinator import DEFAULT_OUT_DIR, run
from .persistence.manifest import verify_manifest
from .utils.config_loader import ConfigLoader
from .utils.env_loader import EnvLoader
from .utils.errors import ConfigError
from .utils.logger import configure_logging, setup_logger

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_EXPERIMENT_ERROR = 1
EXIT_CONFIG_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randwave",
        description="Randomized-data cubic NLS experiments on a periodic box",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="flat key = value run configuration")
        p.add_argument("--seed", type=int, default=None, help="master seed (overrides randomization.seed)")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--workers", type=int, default=None, help="parallel ensemble workers")

    verify = sub.add_parser("verify-manifest", help="re-hash the files listed in a run manifest")
    verify.add_argument("out", help="output directory holding manifest.json")
    return parser


def _verify(out: str) -> int:
    report = verify_manifest(Path(out))
    for rel in report.missing:
        print(f"missing: {rel}")
    for rel in report.changed:
        print(f"changed: {rel}")
    if report.ok:
        print(f"{out}: manifest ok")
    return EXIT_OK if report.ok else EXIT_EXPERIMENT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one experiment and return the process exit code

    Precedence for every setting: CLI flag > config file > environment > default.
    """
    args = build_parser().parse_args(argv)
    if args.command == "verify-manifest":
        return _verify(args.out)

    env = EnvLoader().get_run_defaults()
    # .env may set LOG_LEVEL after import-time configuration
    configure_logging(force=True)
    overrides = {"experiment.name": args.command}
    if args.seed is not None:
        overrides["randomization.seed"] = args.seed
    try:
        cfg = ConfigLoader().load(args.config, overrides)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"randwave: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    workers = args.workers or cfg.workers or env["workers"]
    out_dir = Path(args.out or cfg.output.dir or env["output_dir"] or DEFAULT_OUT_DIR)
    manifest = run(cfg, out_dir=out_dir, workers=workers)

    record = manifest.experiments[args.command]
    print(f"{args.command}: {record.status} ({len(manifest.files)} files in {out_dir})")
    if record.error:
        print(f"  {record.error}", file=sys.stderr)
    return EXIT_EXPERIMENT_ERROR if manifest.has_errors else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
