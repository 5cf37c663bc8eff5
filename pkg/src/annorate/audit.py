"""Detection of structural irregularities in study metadata.

Per-entry checks flag accession problems (non-PURL links, empty-label
annotations, broken or uncatalogued terms), identical (label, accession)
pairs listed more than once, and labels that appear under two annotation
types with the accession under exactly one of them. Corpus-wide checks flag
near-duplicate entry pairs whose slot multisets are identical or almost so.

Labels are compared case-insensitively with collapsed whitespace; accessions
are compared exactly. Findings report, never repair: repeated annotations
are left in place for scoring, which tallies files as they are.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .accession import AccessionRef, Resolution, classify_accession
from .isatab import AnnotationType, StudyMetadata


class IrregularityKind(Enum):
    BROKEN_ACCESSION = "BrokenAccession"
    NON_PURL_ACCESSION = "NonPurlAccession"
    REPEATED_ANNOTATION = "RepeatedAnnotation"
    CROSS_TYPE_UNANNOTATED_DUPLICATE = "CrossTypeUnannotatedDuplicate"
    NEAR_DUPLICATE_ENTRY = "NearDuplicateEntry"
    ONTOLOGY_UNAVAILABLE = "OntologyUnavailable"
    EMPTY_LABEL_ANNOTATION = "EmptyLabelAnnotation"


@dataclass(frozen=True)
class Irregularity:
    study_id: str
    kind: IrregularityKind
    evidence: str


#: Supplies the resolution outcome for a scorable accession.
Resolver = Callable[[AccessionRef], Resolution]

DEFAULT_NEAR_DUP_THRESHOLD = 0.10


def audit_entry(
    metadata: StudyMetadata, resolution: Resolver | None = None
) -> list[Irregularity]:
    """Audit one entry; ``resolution`` defaults to treating everything resolved.

    Findings come out in a stable order: per-slot classification and
    resolution findings in (type, slot) order, then repeated pairs and
    cross-type duplicates in order of first occurrence.
    """
    findings: list[Irregularity] = []
    study_id = metadata.study_id

    pair_counts: dict[tuple[str, str], list] = {}
    label_types: dict[str, dict[AnnotationType, bool]] = {}
    first_labels: dict[str, str] = {}

    for annotation_type in AnnotationType:
        for slot in metadata.slots.get(annotation_type, []):
            label_key = _normalize_label(slot.label)
            if slot.accession:
                ref = classify_accession(slot.accession)
                if not slot.label:
                    findings.append(
                        Irregularity(
                            study_id,
                            IrregularityKind.EMPTY_LABEL_ANNOTATION,
                            f"{annotation_type.value}: {slot.accession}",
                        )
                    )
                if not ref.is_scorable:
                    findings.append(
                        Irregularity(
                            study_id,
                            IrregularityKind.NON_PURL_ACCESSION,
                            f"{annotation_type.value}: {slot.accession}",
                        )
                    )
                else:
                    outcome = resolution(ref) if resolution else Resolution.RESOLVED
                    if outcome is Resolution.BROKEN:
                        findings.append(
                            Irregularity(
                                study_id,
                                IrregularityKind.BROKEN_ACCESSION,
                                f"{annotation_type.value}: {slot.accession}",
                            )
                        )
                    elif outcome is Resolution.NOT_IN_CATALOG:
                        findings.append(
                            Irregularity(
                                study_id,
                                IrregularityKind.ONTOLOGY_UNAVAILABLE,
                                f"{annotation_type.value}: {slot.accession}",
                            )
                        )
            record = pair_counts.setdefault(
                (label_key, slot.accession), [0, slot.label, annotation_type]
            )
            record[0] += 1
            if slot.label:
                first_labels.setdefault(label_key, slot.label)
                per_type = label_types.setdefault(label_key, {})
                per_type[annotation_type] = per_type.get(annotation_type, False) or bool(
                    slot.accession
                )

    for (label_key, accession), (count, first_label, first_type) in pair_counts.items():
        if count > 1:
            shown = first_label if first_label else "<empty label>"
            shown_acc = accession if accession else "<no accession>"
            findings.append(
                Irregularity(
                    study_id,
                    IrregularityKind.REPEATED_ANNOTATION,
                    f"{shown!r} / {shown_acc} listed {count} times"
                    f" (first under {first_type.value})",
                )
            )

    for label_key, per_type in label_types.items():
        if len(per_type) < 2:
            continue
        annotated = [t for t, has_acc in per_type.items() if has_acc]
        if len(annotated) == 1:
            unannotated = [t.value for t in per_type if not per_type[t]]
            findings.append(
                Irregularity(
                    study_id,
                    IrregularityKind.CROSS_TYPE_UNANNOTATED_DUPLICATE,
                    f"{first_labels[label_key]!r} annotated under {annotated[0].value},"
                    f" unannotated under {', '.join(unannotated)}",
                )
            )

    return findings


def audit_corpus(
    entries: list[StudyMetadata],
    near_dup_threshold: float = DEFAULT_NEAR_DUP_THRESHOLD,
) -> list[Irregularity]:
    """Flag near-duplicate entry pairs across a corpus.

    A pair is flagged when the two (type, label, accession) slot multisets
    are identical, or when the number of differing slots is within
    ``near_dup_threshold`` of the larger entry's slot count (a 1-in-10
    difference is flagged at the default 0.10). Each unordered pair is
    reported at most once, on the lexically first study id.
    """
    findings: list[Irregularity] = []
    multisets = [(_slot_multiset(e), e.study_id) for e in entries]
    for i in range(len(multisets)):
        for j in range(i + 1, len(multisets)):
            (ms_a, id_a), (ms_b, id_b) = multisets[i], multisets[j]
            size = max(sum(ms_a.values()), sum(ms_b.values()))
            shared = sum((ms_a & ms_b).values())
            differ = size - shared
            if differ <= near_dup_threshold * size:
                first, second = sorted((id_a, id_b))
                findings.append(
                    Irregularity(
                        first,
                        IrregularityKind.NEAR_DUPLICATE_ENTRY,
                        f"matches {second} ({differ} of {size} slots differ)",
                    )
                )
    return findings


def _normalize_label(label: str) -> str:
    return " ".join(label.lower().split())


def _slot_multiset(metadata: StudyMetadata) -> Counter:
    return Counter(
        (annotation_type.value, _normalize_label(slot.label), slot.accession)
        for annotation_type in AnnotationType
        for slot in metadata.slots.get(annotation_type, [])
    )
