"""annorate rates the quality of ontology annotations in ISA-Tab study metadata.

Each annotated term is scored by its specificity within its ontology (depth
over branch length, in [0, 1]); per-type and per-entry scores aggregate those
values under two weightings (by annotations and by term slots), with a log
transform for entry-level comparison. On top of scoring, the package computes
corpus statistics and distribution data, and audits metadata for structural
irregularities such as broken PURLs, repeated annotations and near-duplicate
entries.

The pieces compose freely: parse with :func:`parse_investigation` or
:func:`load_investigation`, load ontologies with :func:`load_obo` or an
:class:`OntologyCatalog`, then score with :func:`score_entry` through an
:class:`AccessionResolver`. The ``annorate`` command line drives the same
code over whole corpus directories.
"""

from .accession import AccessionKind, AccessionRef, Resolution, classify_accession
from .audit import (
    Irregularity,
    IrregularityKind,
    audit_corpus,
    audit_entry,
)
from .corpus import (
    BoxplotStats,
    CorpusStats,
    Distribution,
    EmptyCorpusError,
    corpus_stats,
    distribution,
)
from .ingest import (
    CorpusManifest,
    ManifestEntry,
    NetworkError,
    fetch_corpus,
    list_studies,
    probe_accession,
)
from .isatab import (
    SCORED_TYPES,
    AnnotationType,
    MalformedFileError,
    StudyMetadata,
    TermSlot,
    load_investigation,
    parse_investigation,
)
from .ontology import (
    CycleDetectedError,
    DepthMetrics,
    EmptyOntologyError,
    OntologyCatalog,
    OntologyGraph,
    UnknownTermError,
    load_obo,
)
from .pipeline import AccessionResolver, load_corpus, process_study
from .scoring import (
    DomainError,
    EntryScore,
    TypeScore,
    log_transform,
    score_entry,
    type_tally,
)

__version__ = "0.1.0"

__all__ = [
    "AccessionKind",
    "AccessionRef",
    "AccessionResolver",
    "AnnotationType",
    "BoxplotStats",
    "CorpusManifest",
    "CorpusStats",
    "CycleDetectedError",
    "DepthMetrics",
    "Distribution",
    "DomainError",
    "EmptyCorpusError",
    "EmptyOntologyError",
    "EntryScore",
    "Irregularity",
    "IrregularityKind",
    "MalformedFileError",
    "ManifestEntry",
    "NetworkError",
    "OntologyCatalog",
    "OntologyGraph",
    "Resolution",
    "SCORED_TYPES",
    "StudyMetadata",
    "TermSlot",
    "TypeScore",
    "UnknownTermError",
    "audit_corpus",
    "audit_entry",
    "classify_accession",
    "corpus_stats",
    "distribution",
    "fetch_corpus",
    "list_studies",
    "load_corpus",
    "load_investigation",
    "load_obo",
    "log_transform",
    "parse_investigation",
    "probe_accession",
    "process_study",
    "score_entry",
    "type_tally",
]
