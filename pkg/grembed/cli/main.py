import argparse
import logging
import sys
from dataclasses import replace
from typing import List, Optional

from grembed.cli.config import PipelineConfig
from grembed.cli.pipeline import ALL, STAGES, run_stage
from grembed.cli.synthetic import SyntheticSpec, generate_synthetic
from grembed.embed.types import METHODS
from grembed.errors import GrembedError, MissingArtifactError
from grembed.utils import setup_logging

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_MISSING_ARTIFACT = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; missing keys take their defaults")
    common.add_argument("--seed", type=int, help="Master seed, overrides the config file")
    common.add_argument("--out", help="Output directory, overrides the config file")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")

    parser = argparse.ArgumentParser(prog="grembed", description="Graph-embedding social restaurant recommender")
    commands = parser.add_subparsers(dest="command", required=True)
    for stage in STAGES + (ALL,):
        sub = commands.add_parser(stage, parents=[common], help=f"Run the '{stage}' stage")
        sub.add_argument(
            "--method",
            action="append",
            choices=METHODS,
            help="Embedding method for embed/cluster/recommend; repeat for several (default: all)",
        )

    synth = commands.add_parser("synth", parents=[common], help="Write a planted-community dataset")
    defaults = SyntheticSpec()
    synth.add_argument("--communities", type=int, default=defaults.communities)
    synth.add_argument("--users-per-community", type=int, default=defaults.users_per_community)
    synth.add_argument("--restaurants-per-community", type=int, default=defaults.restaurants_per_community)
    synth.add_argument("--intra-like", type=float, default=defaults.intra_like)
    synth.add_argument("--cross-like", type=float, default=defaults.cross_like)
    synth.add_argument("--dislike", type=float, default=defaults.dislike)
    synth.add_argument("--intra-friend", type=float, default=defaults.intra_friend)
    synth.add_argument("--inter-friend", type=float, default=defaults.inter_friend)
    return parser


def load_config(args: argparse.Namespace) -> PipelineConfig:
    """Config file (or defaults) with ``--seed`` and ``--out`` applied on top."""
    config = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["output_dir"] = args.out
    return replace(config, **overrides).check()


def _synth(args: argparse.Namespace) -> None:
    spec = SyntheticSpec(
        communities=args.communities,
        users_per_community=args.users_per_community,
        restaurants_per_community=args.restaurants_per_community,
        intra_like=args.intra_like,
        cross_like=args.cross_like,
        dislike=args.dislike,
        intra_friend=args.intra_friend,
        inter_friend=args.inter_friend,
        seed=args.seed if args.seed is not None else SyntheticSpec.seed,
    )
    for path in generate_synthetic(spec, args.out or "data"):
        logging.info("Wrote %s", path)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(logging.DEBUG if args.verbose else logging.INFO)

    try:
        if args.command == "synth":
            _synth(args)
        else:
            run_stage(args.command, load_config(args), methods=args.method)
    except MissingArtifactError as e:
        logging.error(str(e))
        return EXIT_MISSING_ARTIFACT
    except ValueError as e:
        logging.error(str(e))
        return EXIT_INVALID
    except (GrembedError, OSError) as e:
        logging.error(str(e))
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
