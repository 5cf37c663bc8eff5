"""The annorate command line: fetch, score, stats and audit subcommands.

All outputs are deterministic for identical inputs: TSV files use tab
separators, LF line endings, decimal points and 7 decimal places. Exit
codes are script-friendly: 0 ok, 2 every fetch failed, 3 findings present
with --fail-on-findings, 64 usage error, 65 no input data.
"""

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import corpus as corpus_mod
from . import ingest
from .audit import DEFAULT_NEAR_DUP_THRESHOLD, audit_corpus, audit_entry
from .isatab import SCORED_TYPES, AnnotationType
from .ontology import OntologyCatalog
from .pipeline import AccessionResolver, annotation_details, load_corpus, process_study
from .scoring import EntryScore, TypeScore, log_transform

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ALL_FETCH_FAILED = 2
EXIT_FINDINGS = 3
EXIT_USAGE = 64
EXIT_NO_INPUT = 65

SCORES_TSV_COLUMNS = (
    "study_id",
    "total_annotations",
    "score_terms",
    "log_score_terms",
    "score_annotations",
    "log_score_annotations",
)

ENV_BASE_URL = "ANNORATE_BASE_URL"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _near_dup_threshold(value: str) -> float:
    threshold = float(value)
    if not 0.0 < threshold <= 0.5:
        raise argparse.ArgumentTypeError("must be in (0, 0.5]")
    return threshold


def _concurrency(value: str) -> int:
    workers = int(value)
    if workers < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return workers


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="annorate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_fetch = sub.add_parser("fetch", help="download investigation files")
    p_fetch.add_argument("--ids", type=Path, help="local file of study identifiers")
    p_fetch.add_argument("--out", type=Path, required=True, help="corpus directory")
    p_fetch.add_argument("--base-url", default=None, help="repository base URL")
    p_fetch.add_argument("--concurrency", type=_concurrency, default=4)
    p_fetch.add_argument("--no-cache", action="store_true", help="re-download existing files")

    p_score = sub.add_parser("score", help="score a corpus directory")
    p_score.add_argument("--corpus", type=Path, required=True, help="corpus directory")
    p_score.add_argument("--catalog", type=Path, help="prefix<TAB>obo-path catalog file")
    p_score.add_argument("--out", type=Path, required=True, help="output directory")
    p_score.add_argument("--concurrency", type=_concurrency, default=1)
    p_score.add_argument(
        "--probe",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="probe unresolved accession URLs over the network",
    )

    p_stats = sub.add_parser("stats", help="corpus statistics and figure data")
    p_stats.add_argument("--scores", type=Path, required=True, help="scores.tsv from `annorate score`")
    p_stats.add_argument("--out", type=Path, required=True, help="output directory")
    p_stats.add_argument(
        "--score-column",
        choices=corpus_mod.SCORE_COLUMNS,
        default="log_terms",
        help="column for the histogram",
    )
    p_stats.add_argument(
        "--log-base-check",
        action="store_true",
        help="verify the input's log columns against the log transform",
    )

    p_audit = sub.add_parser("audit", help="report metadata irregularities")
    p_audit.add_argument("--corpus", type=Path, required=True, help="corpus directory")
    p_audit.add_argument("--catalog", type=Path, help="prefix<TAB>obo-path catalog file")
    p_audit.add_argument("--out", type=Path, required=True, help="output directory")
    p_audit.add_argument(
        "--near-dup-threshold", type=_near_dup_threshold, default=DEFAULT_NEAR_DUP_THRESHOLD
    )
    p_audit.add_argument(
        "--probe", action=argparse.BooleanOptionalAction, default=False
    )
    p_audit.add_argument(
        "--fail-on-findings",
        action="store_true",
        help="exit 3 when any irregularity is found",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "fetch":
        return cmd_fetch(args)
    if args.command == "score":
        return cmd_score(args)
    if args.command == "stats":
        return cmd_stats(args)
    if args.command == "audit":
        return cmd_audit(args)
    return EXIT_USAGE


def run() -> None:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(main())


def cmd_fetch(args) -> int:
    base_url = args.base_url or os.environ.get(ENV_BASE_URL) or ingest.DEFAULT_BASE_URL
    if args.ids is not None:
        ids = ingest.list_studies(ids_file=args.ids)
    else:
        ids = ingest.list_studies(base_url=base_url)
    manifest = ingest.fetch_corpus(
        ids,
        args.out,
        base_url=base_url,
        concurrency=args.concurrency,
        cache=not args.no_cache,
    )
    print(f"fetched {manifest.fetched_count}/{len(ids)} studies into {args.out}")
    if ids and manifest.fetched_count == 0:
        return EXIT_ALL_FETCH_FAILED
    return EXIT_OK


def cmd_score(args) -> int:
    studies, failures = load_corpus(args.corpus)
    if not studies:
        print(f"no parseable investigation files under {args.corpus}", file=sys.stderr)
        return EXIT_NO_INPUT
    resolver = _make_resolver(args.catalog, args.probe)
    workers = max(1, args.concurrency)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda s: process_study(s, resolver), studies))
    results.sort(key=lambda r: (-r.score.log_terms, r.score.study_id))

    args.out.mkdir(parents=True, exist_ok=True)
    _write_scores_tsv(args.out / "scores.tsv", [r.score for r in results])
    _write_scores_json(args.out / "scores.json", results, resolver)
    for failure in failures:
        print(f"skipped: {failure}", file=sys.stderr)
    print(f"scored {len(results)} studies into {args.out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    entries = _read_entries(args.scores)
    if not entries:
        print(f"no score rows in {args.scores}", file=sys.stderr)
        return EXIT_NO_INPUT
    if args.log_base_check:
        mismatches = _log_base_mismatches(entries)
        for study_id, column in mismatches:
            print(f"log-base check: {study_id} {column} inconsistent", file=sys.stderr)
        if not mismatches:
            print("log-base check: all log columns consistent with the transform")
    args.out.mkdir(parents=True, exist_ok=True)

    columns = ("log_terms", "log_annotations")
    stats = {c: corpus_mod.corpus_stats(entries, c) for c in columns}
    with _tsv_writer(args.out / "stats.tsv") as out:
        out.write("statistic\t" + "\t".join(columns) + "\n")
        rows = (
            ("mean", lambda s: s.mean),
            ("std_dev", lambda s: s.std_dev),
            ("max", lambda s: s.max),
            ("min_annotated", lambda s: s.min_annotated),
            ("pct_above_mean", lambda s: s.pct_above_mean),
        )
        for name, get in rows:
            cells = [_fmt(get(stats[c])) for c in columns]
            out.write(name + "\t" + "\t".join(cells) + "\n")

    dist = corpus_mod.distribution(entries, args.score_column)
    with _tsv_writer(args.out / "hist.tsv") as out:
        out.write("bin_low\tcount\n")
        for lo, count in dist.histogram:
            out.write(f"{lo}\t{count}\n")
    with _tsv_writer(args.out / "boxplot.tsv") as out:
        out.write("type\tmin\tq1\tmedian\tq3\tmax\n")
        for annotation_type in SCORED_TYPES:
            box = dist.per_type_boxplot.get(annotation_type)
            if box is None:
                continue
            cells = (box.minimum, box.q1, box.median, box.q3, box.maximum)
            out.write(annotation_type.value + "\t" + "\t".join(_fmt(c) for c in cells) + "\n")
    with _tsv_writer(args.out / "gaps.tsv") as out:
        out.write("type\tavg_gap_pct\n")
        for annotation_type in SCORED_TYPES:
            gap = dist.avg_weighting_gap.get(annotation_type)
            if gap is None:
                continue
            out.write(f"{annotation_type.value}\t{_fmt(gap)}\n")

    print(f"wrote stats for {len(entries)} entries into {args.out}")
    return EXIT_OK


def cmd_audit(args) -> int:
    studies, failures = load_corpus(args.corpus)
    if not studies:
        print(f"no parseable investigation files under {args.corpus}", file=sys.stderr)
        return EXIT_NO_INPUT
    resolver = _make_resolver(args.catalog, args.probe)
    findings = []
    for study in studies:
        findings.extend(audit_entry(study, resolver.resolution))
    findings.extend(audit_corpus(studies, near_dup_threshold=args.near_dup_threshold))

    args.out.mkdir(parents=True, exist_ok=True)
    report = [
        {"study_id": f.study_id, "kind": f.kind.value, "evidence": f.evidence}
        for f in findings
    ]
    with open(args.out / "audit.json", "w", encoding="utf-8", newline="\n") as out:
        json.dump(report, out, indent=2)
        out.write("\n")
    for failure in failures:
        print(f"skipped: {failure}", file=sys.stderr)
    print(f"{len(report)} findings written to {args.out / 'audit.json'}")
    if report and args.fail_on_findings:
        return EXIT_FINDINGS
    return EXIT_OK


def _make_resolver(catalog_path: Path | None, probe: bool) -> AccessionResolver:
    if catalog_path is not None:
        catalog = OntologyCatalog.from_file(catalog_path)
    else:
        log.warning("no ontology catalog supplied; every term scores 0")
        catalog = OntologyCatalog()
    prober = ingest.probe_accession if probe else None
    return AccessionResolver(catalog, prober=prober)


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{value:.7f}"


def _tsv_writer(path: Path):
    return open(path, "w", encoding="utf-8", newline="\n")


def _write_scores_tsv(path: Path, scores: list[EntryScore]) -> None:
    with _tsv_writer(path) as out:
        out.write("\t".join(SCORES_TSV_COLUMNS) + "\n")
        for s in scores:
            out.write(
                "\t".join(
                    (
                        s.study_id,
                        str(s.total_annotations),
                        _fmt(s.global_terms),
                        _fmt(s.log_terms),
                        _fmt(s.global_annotations),
                        _fmt(s.log_annotations),
                    )
                )
                + "\n"
            )


def _write_scores_json(path: Path, results, resolver) -> None:
    payload = []
    for result in results:
        score = result.score
        details = annotation_details(result.metadata, resolver)
        types = {}
        for annotation_type in SCORED_TYPES:
            ts = score.per_type[annotation_type]
            types[annotation_type.value] = {
                "annotation_count": ts.annotation_count,
                "term_count": ts.term_count,
                "score_sum": ts.score_sum,
                "by_annotations": ts.by_annotations,
                "by_terms": ts.by_terms,
                "annotations": details[annotation_type.value],
            }
        payload.append(
            {
                "study_id": score.study_id,
                "source_path": result.metadata.source_path,
                "total_annotations": score.total_annotations,
                "global_terms": score.global_terms,
                "log_terms": score.log_terms,
                "global_annotations": score.global_annotations,
                "log_annotations": score.log_annotations,
                "warnings": result.metadata.warnings,
                "types": types,
            }
        )
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        json.dump(payload, out, indent=2)
        out.write("\n")


def _log_base_mismatches(entries: list[EntryScore]) -> list[tuple[str, str]]:
    mismatches = []
    for entry in entries:
        pairs = (
            ("log_terms", entry.global_terms, entry.log_terms),
            ("log_annotations", entry.global_annotations, entry.log_annotations),
        )
        for column, score, logged in pairs:
            if abs(log_transform(score) - logged) > 1e-6:
                mismatches.append((entry.study_id, column))
    return mismatches


def _read_entries(scores_path: Path) -> list[EntryScore]:
    """Rebuild entry scores from scores.tsv (plus scores.json when present)."""
    if not scores_path.exists():
        return []
    per_type_by_study: dict[str, dict[AnnotationType, TypeScore]] = {}
    json_path = scores_path.with_name("scores.json")
    if json_path.exists():
        for record in json.loads(json_path.read_text(encoding="utf-8")):
            types = {}
            for type_name, ts in record.get("types", {}).items():
                types[AnnotationType(type_name)] = TypeScore(
                    annotation_count=ts["annotation_count"],
                    term_count=ts["term_count"],
                    score_sum=ts["score_sum"],
                    by_annotations=ts["by_annotations"],
                    by_terms=ts["by_terms"],
                )
            per_type_by_study[record["study_id"]] = types

    entries = []
    lines = scores_path.read_text(encoding="utf-8").splitlines()
    for line in lines[1:]:
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != len(SCORES_TSV_COLUMNS):
            log.warning("skipping malformed score row: %r", line)
            continue
        study_id = cells[0]
        entries.append(
            EntryScore(
                study_id=study_id,
                per_type=per_type_by_study.get(study_id, {}),
                global_terms=float(cells[2]),
                log_terms=float(cells[3]),
                global_annotations=float(cells[4]),
                log_annotations=float(cells[5]),
                total_annotations=int(cells[1]),
            )
        )
    return entries
