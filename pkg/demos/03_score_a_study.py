"""Score one study end to end: catalog, resolver, per-type tallies, globals.

Each annotation's specificity comes from the ontology named by its PURL
prefix, looked up in a catalog of OBO files. Two weightings aggregate per
type: dividing the score sum by the number of annotations, or by the number
of term slots (which punishes free text left unannotated). The global score
is 100 times the mean over the four scored types, and the log transform
compresses the top of that range.
"""

from pathlib import Path

from annorate import (
    AccessionResolver,
    OntologyCatalog,
    SCORED_TYPES,
    load_investigation,
    score_entry,
)

DATA = Path(__file__).parent / "data"

catalog = OntologyCatalog.from_file(DATA / "ontologies" / "catalog.tsv")
print("catalog prefixes:", ", ".join(sorted(catalog.prefixes)))

(study,) = load_investigation(DATA / "corpus" / "MTBLS95" / "i_Investigation.txt")
resolver = AccessionResolver(catalog)
entry = score_entry(study, resolver.score)

print()
print(f"{'type':9s} {'ann':>4s} {'sum':>6s} {'terms':>6s} {'by ann':>8s} {'by terms':>9s}")
for annotation_type in SCORED_TYPES:
    t = entry.per_type[annotation_type]
    print(
        f"{annotation_type.value:9s} {t.annotation_count:4d} {t.score_sum:6.2f}"
        f" {t.term_count:6d} {t.by_annotations:8.7f} {t.by_terms:9.7f}"
    )

print()
print(f"score (terms weighted):        {entry.global_terms:.7f}")
print(f"log score (terms weighted):    {entry.log_terms:.7f}")
print(f"score (annotation weighted):   {entry.global_annotations:.7f}")
print(f"log score (annotation weighted): {entry.log_annotations:.7f}")
print(f"total annotations:             {entry.total_annotations}")

# Unannotated factor and protocol strings keep their types at zero while
# still occupying two of the four slots of the global mean, so an entry can
# never look better than its least annotated types allow.
assert entry.per_type[SCORED_TYPES[1]].term_count > 0
assert entry.per_type[SCORED_TYPES[1]].by_terms == 0.0
