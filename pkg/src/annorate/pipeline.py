"""Wiring between parsed metadata, ontology catalogs and the scorers.

The full offline pipeline is: load investigation files from a directory,
resolve each slot's accession against an :class:`~annorate.ontology.OntologyCatalog`,
score entries and audit them. Network probing is an optional add-on that
only refines *why* an accession could not be resolved (broken versus not in
the catalog); it never changes scores.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .accession import AccessionRef, Resolution, classify_accession
from .audit import Irregularity, audit_entry
from .isatab import SCORED_TYPES, MalformedFileError, StudyMetadata, load_investigation
from .ontology import DepthMetrics, OntologyCatalog
from .scoring import EntryScore, score_entry

log = logging.getLogger(__name__)

#: Optional network prober: scorable accession -> Resolved/Broken.
Prober = Callable[[AccessionRef], Resolution]


class AccessionResolver:
    """Scores and resolves accessions against a catalog, caching per URL.

    ``score`` returns the term's specificity, or 0.0 when it cannot be
    resolved (the annotation still counts). ``resolution`` distinguishes
    Resolved / Broken / NotInCatalog; Broken requires a prober, otherwise
    anything unresolvable is NotInCatalog.
    """

    def __init__(self, catalog: OntologyCatalog, prober: Prober | None = None):
        self.catalog = catalog
        self.prober = prober
        self._resolutions: dict[str, Resolution] = {}

    def metrics(self, ref: AccessionRef) -> DepthMetrics | None:
        if not ref.is_scorable:
            return None
        return self.catalog.lookup(ref.ontology_prefix, ref.curie)

    def score(self, ref: AccessionRef) -> float:
        found = self.metrics(ref)
        return found.score if found is not None else 0.0

    def resolution(self, ref: AccessionRef) -> Resolution:
        cached = self._resolutions.get(ref.raw)
        if cached is not None:
            return cached
        if self.metrics(ref) is not None:
            outcome = Resolution.RESOLVED
        elif self.prober is not None and self.prober(ref) is Resolution.BROKEN:
            outcome = Resolution.BROKEN
        else:
            outcome = Resolution.NOT_IN_CATALOG
        self._resolutions[ref.raw] = outcome
        return outcome


@dataclass
class StudyResult:
    metadata: StudyMetadata
    score: EntryScore
    findings: list[Irregularity] = field(default_factory=list)


def load_corpus(corpus_dir: str | Path) -> tuple[list[StudyMetadata], list[str]]:
    """Parse every ``i_*.txt`` under a directory, skipping unparseable files.

    Returns the parsed studies (file order, then block order) and a list of
    per-file failure descriptions.
    """
    corpus_dir = Path(corpus_dir)
    studies: list[StudyMetadata] = []
    failures: list[str] = []
    for path in sorted(corpus_dir.rglob("i_*.txt")):
        try:
            studies.extend(load_investigation(path))
        except (MalformedFileError, OSError) as exc:
            log.warning("skipping %s: %s", path, exc)
            failures.append(f"{path}: {exc}")
    return studies, failures


def process_study(metadata: StudyMetadata, resolver: AccessionResolver) -> StudyResult:
    """Score and audit one study with a shared resolver."""
    return StudyResult(
        metadata=metadata,
        score=score_entry(metadata, resolver.score),
        findings=audit_entry(metadata, resolver.resolution),
    )


def annotation_details(
    metadata: StudyMetadata, resolver: AccessionResolver
) -> dict[str, list[dict]]:
    """Per-annotation depth metrics for report serialization.

    One record per scorable accession of each scored type, in slot order,
    with null metrics when the term is not in the catalog.
    """
    details: dict[str, list[dict]] = {}
    for annotation_type in SCORED_TYPES:
        records = []
        for slot in metadata.slots.get(annotation_type, []):
            if not slot.accession:
                continue
            ref = classify_accession(slot.accession)
            if not ref.is_scorable:
                continue
            metrics = resolver.metrics(ref)
            records.append(
                {
                    "label": slot.label,
                    "accession": slot.accession,
                    "term": ref.curie,
                    "depth": metrics.depth if metrics else None,
                    "branch_length": metrics.branch_length if metrics else None,
                    "score": metrics.score if metrics else 0.0,
                    "resolution": resolver.resolution(ref).value,
                }
            )
        details[annotation_type.value] = records
    return details
