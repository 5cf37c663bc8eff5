"""Ontology is-a graphs and term specificity metrics.

Graphs are loaded from OBO 1.2/1.4 flat files and restricted to one id
prefix. A term's specificity is its depth divided by its branch length,
both counted in edges:

* depth: longest path from any root down to the term (roots are at 0);
* branch length: longest root-to-leaf path that passes through the term,
  which equals depth plus the longest descending path to a leaf.

The score therefore lies in [0, 1]: a root with descendants scores 0, a
leaf scores 1, and the score never decreases when walking down a branch.
A single isolated term (root and leaf at once, 0/0) is defined to score 1.

Only ``is_a`` edges contribute; other relationship types and cross-prefix
parents are dropped at load time. Graphs are immutable after loading and
safe to query from any number of threads.
"""

from dataclasses import dataclass
from pathlib import Path
import logging

log = logging.getLogger(__name__)


class OntologyError(Exception):
    """Base class for ontology loading and query errors."""


class CycleDetectedError(OntologyError):
    """The is-a graph contains a cycle; ``cycle`` lists one offending loop."""

    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("is_a cycle detected: " + " -> ".join(cycle))


class EmptyOntologyError(OntologyError):
    """No (matching) terms were parsed from the OBO content."""


class UnknownTermError(KeyError):
    """Queried term is not part of the graph."""


@dataclass(frozen=True)
class DepthMetrics:
    depth: int
    branch_length: int
    score: float


class OntologyGraph:
    """Immutable is-a DAG over the terms of one ontology prefix.

    Depth and height (longest descending path) are precomputed for every
    term in topological order at construction, so individual queries are
    dictionary lookups.
    """

    def __init__(self, prefix: str, parents: dict[str, set[str]]):
        self.prefix = prefix
        self._parents = {t: frozenset(ps) for t, ps in parents.items()}
        self._children: dict[str, set[str]] = {t: set() for t in self._parents}
        for term, ps in self._parents.items():
            for p in ps:
                self._children[p].add(term)
        self.roots = frozenset(t for t, ps in self._parents.items() if not ps)
        order = self._topological_order()
        self._depth: dict[str, int] = {}
        for term in order:
            ps = self._parents[term]
            self._depth[term] = max((self._depth[p] + 1 for p in ps), default=0)
        self._height: dict[str, int] = {}
        for term in reversed(order):
            cs = self._children[term]
            self._height[term] = max((self._height[c] + 1 for c in cs), default=0)

    def _topological_order(self) -> list[str]:
        remaining = {t: len(ps) for t, ps in self._parents.items()}
        ready = sorted(t for t, n in remaining.items() if n == 0)
        order: list[str] = []
        while ready:
            term = ready.pop()
            order.append(term)
            for child in self._children[term]:
                remaining[child] -= 1
                if remaining[child] == 0:
                    ready.append(child)
        if len(order) < len(self._parents):
            stuck = {t for t in self._parents if t not in set(order)}
            raise CycleDetectedError(self._find_cycle(stuck))
        return order

    def _find_cycle(self, stuck: set[str]) -> list[str]:
        # Every stuck node has a parent inside the stuck set; walking up
        # parent links must eventually revisit a node.
        start = next(iter(sorted(stuck)))
        seen: dict[str, int] = {}
        path = [start]
        while path[-1] not in seen:
            seen[path[-1]] = len(path) - 1
            nxt = next(iter(sorted(p for p in self._parents[path[-1]] if p in stuck)))
            path.append(nxt)
        return path[seen[path[-1]]:]

    @property
    def terms(self) -> frozenset[str]:
        return frozenset(self._parents)

    def __contains__(self, term: str) -> bool:
        return term in self._parents

    def __len__(self) -> int:
        return len(self._parents)

    def parents(self, term: str) -> frozenset[str]:
        self._check(term)
        return self._parents[term]

    def children(self, term: str) -> frozenset[str]:
        self._check(term)
        return frozenset(self._children[term])

    def depth(self, term: str) -> int:
        """Edge count of the longest path from any root down to ``term``."""
        self._check(term)
        return self._depth[term]

    def branch_length(self, term: str) -> int:
        """Edge count of the longest root-to-leaf path through ``term``."""
        self._check(term)
        return self._depth[term] + self._height[term]

    def specificity(self, term: str) -> DepthMetrics:
        """Depth, branch length and the depth/branch score for ``term``."""
        self._check(term)
        depth = self._depth[term]
        branch = depth + self._height[term]
        score = depth / branch if branch > 0 else 1.0
        return DepthMetrics(depth=depth, branch_length=branch, score=score)

    def _check(self, term: str) -> None:
        if term not in self._parents:
            raise UnknownTermError(term)


def load_obo(content: str, prefix: str) -> OntologyGraph:
    """Build an :class:`OntologyGraph` from OBO flat-file content.

    Keeps the non-obsolete ``[Term]`` stanzas whose id carries ``prefix``
    (the part before the first colon). ``is_a`` targets outside the prefix,
    or pointing at obsolete/unknown terms, are dropped; a term left with no
    parents becomes a root.

    Raises ``EmptyOntologyError`` when nothing matches and
    ``CycleDetectedError`` when the retained edges are cyclic.
    """
    stanzas = _term_stanzas(content)
    keep: dict[str, list[str]] = {}
    for term_id, parents, obsolete in stanzas:
        if obsolete or _id_prefix(term_id) != prefix:
            continue
        keep[term_id] = parents
    if not keep:
        raise EmptyOntologyError(f"no terms with prefix {prefix!r} parsed")
    graph_parents: dict[str, set[str]] = {}
    for term_id, parents in keep.items():
        graph_parents[term_id] = {p for p in parents if p in keep}
    return OntologyGraph(prefix, graph_parents)


def _term_stanzas(content: str):
    """Yield (id, is_a parents, is_obsolete) triples from ``[Term]`` stanzas."""
    term_id = None
    parents: list[str] = []
    obsolete = False
    in_term = False
    for line in content.splitlines():
        line = line.strip()
        if line.startswith("["):
            if in_term and term_id:
                yield term_id, parents, obsolete
            in_term = line == "[Term]"
            term_id, parents, obsolete = None, [], False
            continue
        if not in_term or not line:
            continue
        tag, _, value = line.partition(":")
        value = value.split("!", 1)[0].strip()
        if tag == "id":
            term_id = value
        elif tag == "is_a" and value:
            parents.append(value.split()[0])
        elif tag == "is_obsolete" and value.lower() == "true":
            obsolete = True
    if in_term and term_id:
        yield term_id, parents, obsolete


def _id_prefix(term_id: str) -> str:
    return term_id.split(":", 1)[0]


class OntologyCatalog:
    """Read-only map from ontology prefix to a loaded :class:`OntologyGraph`.

    Built from a TSV file of ``prefix<TAB>obo-path`` lines (relative paths
    resolve against the catalog file's directory). Entries whose OBO file is
    missing or unloadable are skipped with a warning: an incomplete catalog
    degrades lookups to ``None``, it never crashes scoring.
    """

    def __init__(self, graphs: dict[str, OntologyGraph] | None = None):
        self._graphs = dict(graphs or {})

    @classmethod
    def from_file(cls, catalog_path: str | Path) -> "OntologyCatalog":
        catalog_path = Path(catalog_path)
        graphs: dict[str, OntologyGraph] = {}
        for lineno, line in enumerate(
            catalog_path.read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            prefix, _, obo_ref = line.partition("\t")
            prefix = prefix.strip()
            obo_path = Path(obo_ref.strip())
            if not prefix or not obo_ref.strip():
                log.warning("%s:%d: skipping malformed catalog line", catalog_path, lineno)
                continue
            if not obo_path.is_absolute():
                obo_path = catalog_path.parent / obo_path
            try:
                content = obo_path.read_text(encoding="utf-8")
                graphs[prefix] = load_obo(content, prefix)
            except (OSError, OntologyError) as exc:
                log.warning("catalog prefix %s unavailable: %s", prefix, exc)
        return cls(graphs)

    @property
    def prefixes(self) -> frozenset[str]:
        return frozenset(self._graphs)

    def get(self, prefix: str) -> OntologyGraph | None:
        return self._graphs.get(prefix)

    def lookup(self, prefix: str, term_id: str) -> DepthMetrics | None:
        """Metrics for ``term_id``, or None when the prefix or term is absent."""
        graph = self._graphs.get(prefix)
        if graph is None or term_id not in graph:
            return None
        return graph.specificity(term_id)
