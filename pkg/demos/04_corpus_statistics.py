"""Statistics over a scored corpus: summary numbers and figure-ready series.

Scores every study in the bundled corpus, then derives the corpus mean,
sample standard deviation, maximum, the minimum among annotated entries and
the share of entries above the mean, plus a 10-point histogram, per-type
boxplot five-number summaries and the average gap between the two score
weightings.
"""

from pathlib import Path

from annorate import (
    AccessionResolver,
    OntologyCatalog,
    corpus_stats,
    distribution,
    load_corpus,
    score_entry,
)

DATA = Path(__file__).parent / "data"

studies, failures = load_corpus(DATA / "corpus")
resolver = AccessionResolver(OntologyCatalog.from_file(DATA / "ontologies" / "catalog.tsv"))
entries = [score_entry(study, resolver.score) for study in studies]
print(f"scored {len(entries)} studies ({len(failures)} files skipped)")

for column in ("log_terms", "log_annotations"):
    stats = corpus_stats(entries, column)
    print()
    print(f"[{column}]")
    print(f"  mean               {stats.mean:12.7f}")
    print(f"  std dev (sample)   {stats.std_dev:12.7f}")
    print(f"  max                {stats.max:12.7f}")
    minimum = "n/a" if stats.min_annotated is None else f"{stats.min_annotated:.7f}"
    print(f"  min (annotated)    {minimum:>12s}")
    print(f"  % above mean       {stats.pct_above_mean:12.7f}")

dist = distribution(entries, "log_terms")
print()
print("log score histogram (10-point bins):")
for lo, count in dist.histogram:
    bar = "#" * count
    print(f"  [{lo:3d},{lo + 10:3d}) {count:3d} {bar}")

print()
print("annotation-weighted score spread per type (annotated entries only):")
for annotation_type, box in dist.per_type_boxplot.items():
    print(
        f"  {annotation_type.value:9s} min {box.minimum:.3f}  q1 {box.q1:.3f}"
        f"  median {box.median:.3f}  q3 {box.q3:.3f}  max {box.maximum:.3f}"
    )

print()
print("average weighting gap per type (percentage points):")
for annotation_type, gap in dist.avg_weighting_gap.items():
    note = "  <- unannotated terms drag this type" if gap > 0 else ""
    print(f"  {annotation_type.value:9s} {gap:8.4f}{note}")
