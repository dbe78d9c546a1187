"""
xokde-bench - Benchmark harness for the online KDE classifier
Version: 1.0.0

Usage:
    python main.py --dataset data/iris.csv [--covariance full|diag] [--shuffles 12] ...
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

# Import configuration and utilities
import config
from src.models.report import ExperimentConfig
from src.services.experiment_runner import ExperimentRunner
from src.services.report_generator import ReportGenerator
from src.utils.constants import EXIT_CODES
from src.utils.exceptions import DatasetParseError
from src.utils.helpers import setup_logging


def build_parser() -> argparse.ArgumentParser:
    """Command-line interface of the benchmark"""
    bench = config.BENCH_CONFIG
    engine = config.ENGINE_CONFIG

    parser = argparse.ArgumentParser(
        prog=config.CLI_NAME,
        description=f"{config.APP_DESCRIPTION} (v{config.APP_VERSION})"
    )
    parser.add_argument("--dataset", required=True, help="delimiter-separated file with one label column")
    parser.add_argument("--covariance", choices=["full", "diag", "diagonal"], default=engine["COVARIANCE"],
                        help="covariance representation (default: %(default)s)")
    parser.add_argument("--shuffles", type=int, default=bench["SHUFFLES"], help="number of random shuffles")
    parser.add_argument("--train-frac", type=float, default=bench["TRAIN_FRACTION"],
                        help="fraction of samples used for training, in (0, 1)")
    parser.add_argument("--seed", type=int, default=bench["SEED"], help="master seed of the shuffles")
    parser.add_argument("--dth", type=float, default=engine["D_TH"], help="compression threshold D_th")
    parser.add_argument("--forgetting", type=float, default=engine["FORGETTING"], help="forgetting factor in (0, 1]")
    parser.add_argument("--trigger-floor", type=int, default=engine["TRIGGER_FLOOR"],
                        help="minimum component count before compression")
    parser.add_argument("--trigger-growth", type=float, default=engine["TRIGGER_GROWTH"],
                        help="compress when the count reaches growth x count after last compression")
    parser.add_argument("--no-revitalize", action="store_true", help="skip revitalization after compression")
    parser.add_argument("--no-final-compress", action="store_true",
                        help="report the models as left by the trigger, without compressing after training")
    parser.add_argument("--label-col", default=bench["LABEL_COLUMN"], help="last, first or a column index")
    parser.add_argument("--skip-header", action="store_true", help="ignore the first line of the file")
    parser.add_argument("--delimiter", default=bench["DELIMITER"], help="field separator (default: %(default)r)")
    parser.add_argument("--output", choices=config.OUTPUT_FORMATS, default=bench["OUTPUT_FORMAT"],
                        help="report format")
    parser.add_argument("--out", help="write the report to this path instead of stdout")
    parser.add_argument("--jobs", type=int, default=bench["JOBS"], help="shuffles run in parallel processes")
    parser.add_argument("--memory", action="store_true", help="record process RSS after each shuffle")
    parser.add_argument("--no-timing", action="store_true",
                        help="clear timing and memory fields so reports of equal seeds are byte-identical")
    parser.add_argument("--quiet", action="store_true", help="no progress bar or summary")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main application function"""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(level=args.log_level or ("WARNING" if args.quiet else None))
    logger = logging.getLogger(config.APP_NAME)

    try:
        experiment = ExperimentConfig(
            dataset_path=args.dataset,
            covariance=args.covariance,
            shuffles=args.shuffles,
            train_fraction=args.train_frac,
            seed=args.seed,
            d_th=args.dth,
            forgetting=args.forgetting,
            trigger_floor=args.trigger_floor,
            trigger_growth=args.trigger_growth,
            revitalize=not args.no_revitalize,
            output_format=args.output,
            label_column=args.label_col,
            skip_header=args.skip_header,
            delimiter=args.delimiter,
            jobs=args.jobs,
            record_memory=args.memory,
            final_compress=not args.no_final_compress
        )
    except ValueError as e:
        parser.print_usage(sys.stderr)
        print(f"{config.CLI_NAME}: error: {str(e)}", file=sys.stderr)
        return EXIT_CODES['CONFIG_ERROR']

    runner = ExperimentRunner(show_progress=not args.quiet)
    generator = ReportGenerator()

    try:
        report = runner.run_experiment(experiment)
        if args.no_timing:
            report = report.without_timing()
        text = generator.emit_report(report, experiment.output_format)

        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
            logger.info(f"Report written to {args.out}")
        else:
            sys.stdout.write(text)

    except (OSError, DatasetParseError) as e:
        print(f"{config.CLI_NAME}: error: {str(e)}", file=sys.stderr)
        return EXIT_CODES['IO_ERROR']

    if not args.quiet:
        print(generator.summary_text(report), file=sys.stderr)

    return EXIT_CODES['SUCCESS']


if __name__ == "__main__":
    sys.exit(main())
