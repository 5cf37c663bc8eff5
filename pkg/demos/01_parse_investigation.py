"""Parse an ISA-Tab investigation file and look at its term slots.

Investigation files carry one field per row; the annotation-type rows hold
free-text term labels, and parallel rows hold the ontology accessions that
should annotate them. Labels and accessions pair up by cell position, so a
label without a matching accession cell is an unannotated term.
"""

from pathlib import Path

from annorate import AnnotationType, load_investigation

DATA = Path(__file__).parent / "data"

(study,) = load_investigation(DATA / "corpus" / "MTBLS95" / "i_Investigation.txt")

print(f"study: {study.study_id}")
print(f"source: {study.source_path}")
print()

for annotation_type in AnnotationType:
    slots = study.slots[annotation_type]
    terms = study.term_count(annotation_type)
    annotations = study.annotation_count(annotation_type)
    print(f"{annotation_type.value:9s} {annotations} annotations / {terms} terms")
    for slot in slots:
        marker = "  +" if slot.is_annotated else "  -"
        accession = slot.accession or "(no accession)"
        print(f"{marker} {slot.label!r:50s} {accession}")
    print()

# The design row has seven labels but only six accession cells: the trailing
# label has nothing to pair with and parses as an unannotated term.
design = study.slots[AnnotationType.DESIGN]
assert design[-1].accession == ""
print("last design label is unannotated:", repr(design[-1].label))
