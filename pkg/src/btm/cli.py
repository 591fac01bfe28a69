"""Command-line front end.

Subcommands mirror the pipeline stages so each is independently invokable:

    btm synth      generate a synthetic corpus-pair fixture
    btm match      one direction's cross assignment only
    btm analyze    full pipeline: assignments, strengths, measures, validation
    btm validate   agreement (kappa) between strength and cosine matching
    btm plot-data  recompute the composition table from an existing report

Exit codes: 0 success, 1 input or configuration error, 2 violated internal
invariant. ``BTM_LOG`` selects the log level. The analysis itself is free of
randomness; ``--threads`` only fans out the matcher and never changes output.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import cooccur, matcher, measures, report, synth, validate
from .errors import BtmError, ConfigError
from .interchange import load_bundle, write_bundle

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    """Everything one full analysis run depends on."""

    c1: Path
    c2: Path
    out: Path
    pool: str = "both"
    unique_threshold: float = measures.UNIQUE_TOPIC_THRESHOLD
    cosine_outlier: bool = True
    top_k: int = report.DEFAULT_TOP_K
    merge_below: float = report.DEFAULT_MERGE_BELOW
    threads: int = 1

    def validate(self) -> None:
        if self.c1.resolve() == self.c2.resolve():
            raise ConfigError("the two bundle paths must be distinct")
        if not 0.0 < self.unique_threshold <= 1.0:
            raise ConfigError(f"unique threshold must lie in (0, 1], got {self.unique_threshold}")
        if not 0.0 <= self.merge_below <= 1.0:
            raise ConfigError(f"merge-below must lie in [0, 1], got {self.merge_below}")
        if self.top_k <= 0:
            raise ConfigError(f"top-k must be positive, got {self.top_k}")
        if self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}")
        if self.pool not in cooccur.POOLS:
            raise ConfigError(f"pool must be one of {cooccur.POOLS}, got {self.pool!r}")


def _generated_at() -> str | None:
    # Wall-clock stamps would break byte-identical reruns; honor the
    # reproducible-build convention instead.
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    return None if epoch is None else epoch


def run_analyze(config: RunConfig) -> report.AnalysisReport:
    """Execute the full pipeline and write every export into ``config.out``."""
    config.validate()
    bundle1 = load_bundle(config.c1)
    bundle2 = load_bundle(config.c2)

    table = matcher.build_assignment_table(bundle1, bundle2, threads=config.threads)

    counts_1to2 = cooccur.count_pairs(table, "1to2", config.pool)
    counts_2to1 = cooccur.count_pairs(table, "2to1", config.pool)
    s_1to2 = cooccur.pairing_strengths(counts_1to2)
    s_2to1 = cooccur.pairing_strengths(counts_2to1)
    s_1to2.validate()
    s_2to1.validate()

    diagnostics = cooccur.outlier_diagnostics(s_1to2, s_2to1)
    m_1to2 = measures.build_measure_report(
        s_1to2, bundle1, config.unique_threshold, diagnostics.for_direction("1to2")
    )
    m_2to1 = measures.build_measure_report(
        s_2to1, bundle2, config.unique_threshold, diagnostics.for_direction("2to1")
    )

    val_1to2, val_2to1 = _validation_reports(bundle1, bundle2, s_1to2, s_2to1, config.cosine_outlier)

    result = report.build_report(
        bundle1,
        bundle2,
        m_1to2,
        m_2to1,
        val_1to2,
        val_2to1,
        pool=config.pool,
        unique_threshold=config.unique_threshold,
        cosine_outlier=config.cosine_outlier,
        top_k=config.top_k,
        merge_below=config.merge_below,
        generated_at=_generated_at(),
    )

    out = config.out
    out.mkdir(parents=True, exist_ok=True)
    report.write_report_json(result, out / "report.json")
    report.write_plot_data_csv(
        report.plot_data(result, config.top_k, config.merge_below), out / "plot_data.csv"
    )
    matcher.write_assignment_table_csv(table, out / "assignments_table.csv")
    cooccur.write_strengths_csv(counts_1to2, s_1to2, out / "strengths_1to2.csv")
    cooccur.write_strengths_csv(counts_2to1, s_2to1, out / "strengths_2to1.csv")
    log.info("analysis written to %s", out)
    return result


def _validation_reports(bundle1, bundle2, s_1to2, s_2to1, cosine_outlier: bool):
    btm_1to2 = validate.btm_match(s_1to2)
    btm_2to1 = validate.btm_match(s_2to1)
    cos_1to2 = validate.cosine_match(
        bundle1, bundle2, include_outlier=cosine_outlier,
        domain=btm_1to2.labels, direction="1to2",
    )
    cos_2to1 = validate.cosine_match(
        bundle2, bundle1, include_outlier=cosine_outlier,
        domain=btm_2to1.labels, direction="2to1",
    )
    return (
        validate.validation_report("1to2", btm_1to2, cos_1to2, s_1to2),
        validate.validation_report("2to1", btm_2to1, cos_2to1, s_2to1),
    )


def _dump_json(data: dict, path: Path | None) -> None:
    text = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _cmd_synth(args) -> int:
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: not valid JSON ({exc})") from exc
    else:
        raw = {}
    if args.seed is not None:
        raw["seed"] = args.seed
    config = synth.SynthConfig.from_dict(raw)
    bundle1, bundle2, truth = synth.generate_pair(config)
    out = Path(args.out)
    write_bundle(bundle1, out / "c1")
    write_bundle(bundle2, out / "c2")
    payload = {"config": config.to_json_dict(), **truth.to_json_dict()}
    _dump_json(payload, out / "ground_truth.json")
    log.info("synthetic pair written to %s", out)
    return 0


def _cmd_match(args) -> int:
    bundle1 = load_bundle(args.c1)
    bundle2 = load_bundle(args.c2)
    if args.direction == "1to2":
        docs, model = bundle2, bundle1  # model-1 topics assigned to corpus-2 docs
    else:
        docs, model = bundle1, bundle2
    assigned = matcher.assign_cross_topics(docs, model, threads=args.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "cross_assignments.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["doc_id", "topic_id", "similarity"])
        for doc_id, topic, sim in assigned:
            writer.writerow([doc_id, topic, repr(sim)])
    return 0


def _cmd_analyze(args) -> int:
    config = RunConfig(
        c1=Path(args.c1),
        c2=Path(args.c2),
        out=Path(args.out),
        pool=args.pool,
        unique_threshold=args.unique_threshold,
        cosine_outlier=args.cosine_outlier == "on",
        top_k=args.top_k,
        merge_below=args.merge_below,
        threads=args.threads,
    )
    run_analyze(config)
    return 0


def _cmd_validate(args) -> int:
    bundle1 = load_bundle(args.c1)
    bundle2 = load_bundle(args.c2)
    table = matcher.build_assignment_table(bundle1, bundle2, threads=args.threads)
    s_1to2 = cooccur.pairing_strengths(cooccur.count_pairs(table, "1to2", args.pool))
    s_2to1 = cooccur.pairing_strengths(cooccur.count_pairs(table, "2to1", args.pool))
    val_1to2, val_2to1 = _validation_reports(
        bundle1, bundle2, s_1to2, s_2to1, args.cosine_outlier == "on"
    )
    payload = {"1to2": val_1to2, "2to1": val_2to1}
    _dump_json(payload, None if args.out is None else Path(args.out) / "validation.json")
    return 0


def _cmd_plot_data(args) -> int:
    data = report.load_report_json(args.report)
    rows = report.plot_data(data, top_k=args.top_k, merge_below=args.merge_below)
    report.write_plot_data_csv(rows, args.out)
    return 0


def _add_common_pair_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c1", required=True, help="bundle directory of corpus 1")
    p.add_argument("--c2", required=True, help="bundle directory of corpus 2")
    p.add_argument("--threads", type=int, default=1, help="matcher fan-out hint")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="btm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus pair")
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.add_argument("--config", default=None, help="JSON file with generator settings")
    p.add_argument("--out", required=True, help="output directory (c1/, c2/, ground_truth.json)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("match", help="cross-assign one corpus against the other model")
    _add_common_pair_flags(p)
    p.add_argument(
        "--direction",
        choices=("1to2", "2to1"),
        default="1to2",
        help="1to2 applies model 1 to corpus 2's documents",
    )
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("analyze", help="run the full analysis pipeline")
    _add_common_pair_flags(p)
    p.add_argument("--pool", choices=cooccur.POOLS, default="both")
    p.add_argument("--unique-threshold", type=float, default=measures.UNIQUE_TOPIC_THRESHOLD)
    p.add_argument("--cosine-outlier", choices=("on", "off"), default="on")
    p.add_argument("--top-k", type=int, default=report.DEFAULT_TOP_K)
    p.add_argument("--merge-below", type=float, default=report.DEFAULT_MERGE_BELOW)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("validate", help="kappa agreement between matching methods")
    _add_common_pair_flags(p)
    p.add_argument("--pool", choices=cooccur.POOLS, default="both")
    p.add_argument("--cosine-outlier", choices=("on", "off"), default="on")
    p.add_argument("--out", default=None, help="output directory (stdout when omitted)")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("plot-data", help="composition table from an existing report")
    p.add_argument("--report", required=True, help="path to report.json")
    p.add_argument("--top-k", type=int, default=report.DEFAULT_TOP_K)
    p.add_argument("--merge-below", type=float, default=report.DEFAULT_MERGE_BELOW)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_plot_data)

    return parser


def _setup_logging() -> None:
    level = os.environ.get("BTM_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BtmError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        log.error("i/o error: %s", exc)
        return 1
    except Exception:
        log.exception("internal error")
        return 2


if __name__ == "__main__":
    sys.exit(main())
