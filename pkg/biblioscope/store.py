"""On-disk corpus store of TSV tables and a JSON manifest."""
import datetime
import json
import logging
import os
from collections import Counter, defaultdict

import pandas

from biblioscope.corpus import (Affiliation, Authorship, CorpusBuilder,
                                Document)
from biblioscope.errors import InputError, StoreIntegrityError
from biblioscope.publishers import journal_publishers
from biblioscope.tagfile import (Location, Origin, ParseDiagnostic, Severity,
                                 parse_files)
from biblioscope.utils import sha256_file

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"
FORMAT_VERSION = 1

TABLES = {
    "documents": ("doc_id", "origin", "ut", "year", "title", "source_name",
                  "publisher", "doc_type", "times_cited", "n_cited_refs",
                  "language", "file", "line"),
    "authorships": ("doc_id", "position", "raw_name", "normalized_key",
                    "full_name", "countries"),
    "affiliations": ("doc_id", "position", "raw_address", "country",
                     "linked_authors"),
    "sources": ("source_name", "publisher", "documents"),
    "categories": ("doc_id", "position", "category"),
    "diagnostics": ("severity", "file", "line", "message"),
}

# Separator of list values inside one TSV cell
LIST_SEPARATOR = ";"


def _write_table(path, name, rows):
    frame = pandas.DataFrame(rows, columns=list(TABLES[name]))
    frame.to_csv(path, sep="\t", index=False, lineterminator="\n")


def _read_table(path, name):
    try:
        frame = pandas.read_csv(path, sep="\t", dtype=str,
                                keep_default_na=False)
    except (OSError, pandas.errors.ParserError) as exception:
        raise StoreIntegrityError(f"Can not read table {path}: {exception}")
    except pandas.errors.EmptyDataError:
        raise StoreIntegrityError(f"Table {path} is empty")
    if tuple(frame.columns) != TABLES[name]:
        raise StoreIntegrityError(f"Table {path} has unexpected columns")
    return frame


def _join(values):
    return LIST_SEPARATOR.join(values)


def _split(text):
    return tuple(text.split(LIST_SEPARATOR)) if text else ()


def ingest_timestamp(paths):
    """Timestamp recorded in the manifest.

    ``SOURCE_DATE_EPOCH`` is used when set, otherwise the modification time
    of the newest input file.
    """
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        seconds = int(epoch)
    else:
        seconds = int(max(os.path.getmtime(path) for path in paths))
    moment = datetime.datetime.fromtimestamp(seconds, datetime.timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


class CorpusStore:
    """Directory of normalized corpus tables.

    Every table is a tab separated file with a header row. Rows are sorted
    by ``doc_id`` and position, so writing the same documents twice gives
    identical files.
    """

    def __init__(self, path):
        """Initialize store.

        :param path: store directory
        """
        self.path = str(path)

    def table_path(self, name):
        """Path of a table file."""
        return os.path.join(self.path, f"{name}.tsv")

    @property
    def manifest_path(self):
        """Path of the manifest file."""
        return os.path.join(self.path, MANIFEST)

    def manifest(self):
        """Read the manifest.

        :returns: manifest as dict
        """
        try:
            with open(self.manifest_path, encoding="utf-8") as open_file:
                return json.load(open_file)
        except FileNotFoundError:
            raise InputError(f"{self.path} is not a corpus store "
                             f"(no {MANIFEST})")
        except (OSError, ValueError) as exception:
            raise StoreIntegrityError(f"Can not read {self.manifest_path}: "
                                      f"{exception}")

    @property
    def origin(self):
        """Origin of the stored records."""
        return Origin(self.manifest()["origin"])

    def write(self, documents, diagnostics, origin, inputs, checksums):
        """Replace the contents of the store.

        :param documents: linked documents
        :param diagnostics: list of :class:`ParseDiagnostic`
        :param origin: :class:`Origin` of the documents
        :param inputs: list of input file paths
        :param dict checksums: checksums of the map files used
        :returns: manifest as dict
        """
        documents = sorted(documents, key=lambda doc: doc.doc_id)
        os.makedirs(self.path, exist_ok=True)

        tables = {name: [] for name in TABLES}
        for doc in documents:
            location = doc.source_location or Location("", 0)
            tables["documents"].append((
                doc.doc_id, doc.origin.value, doc.ut,
                "" if doc.year is None else doc.year, doc.title,
                doc.source_name, doc.publisher, doc.doc_type,
                doc.times_cited, doc.n_cited_refs, doc.language,
                location.file, location.line
            ))
            links = doc.author_countries or ((),) * len(doc.authors)
            for author, countries in zip(doc.authors, links):
                tables["authorships"].append((
                    doc.doc_id, author.position, author.raw_name,
                    author.normalized_key, author.full_name,
                    _join(countries)
                ))
            for position, affiliation in enumerate(doc.affiliations,
                                                   start=1):
                tables["affiliations"].append((
                    doc.doc_id, position, affiliation.raw_address,
                    affiliation.country,
                    _join(affiliation.linked_author_keys)
                ))
            for position, category in enumerate(doc.categories, start=1):
                tables["categories"].append((doc.doc_id, position, category))

        papers = Counter(doc.source_name for doc in documents)
        publishers = journal_publishers(documents)
        tables["sources"] = [(source, publishers[source], papers[source])
                             for source in sorted(papers)]
        tables["diagnostics"] = [
            (diagnostic.severity.value, diagnostic.location.file,
             diagnostic.location.line, diagnostic.message)
            for diagnostic in diagnostics
        ]

        for name, rows in tables.items():
            _write_table(self.table_path(name), name, rows)

        severities = Counter(diagnostic.severity.value
                             for diagnostic in diagnostics)
        manifest = {
            "format_version": FORMAT_VERSION,
            "origin": Origin(origin).value,
            "ingested": ingest_timestamp(inputs),
            "counts": {name: len(rows) for name, rows in tables.items()},
            "diagnostics": {severity.value: severities[severity.value]
                            for severity in Severity},
            "inputs": {os.path.basename(str(path)): sha256_file(path)
                       for path in inputs},
            "config": dict(sorted(checksums.items())),
        }
        with open(self.manifest_path, "w", encoding="utf-8",
                  newline="\n") as open_file:
            json.dump(manifest, open_file, indent=2, sort_keys=True)
            open_file.write("\n")
        logger.info("Wrote %d documents to %s", len(documents), self.path)
        return manifest

    def load(self):
        """Reconstruct linked documents from the tables.

        :returns: list of :class:`~biblioscope.corpus.Document` sorted by
            ``doc_id``
        """
        self.manifest()
        authors = defaultdict(list)
        for row in _read_table(self.table_path("authorships"),
                               "authorships").itertuples(index=False):
            authors[row.doc_id].append(row)
        affiliations = defaultdict(list)
        for row in _read_table(self.table_path("affiliations"),
                               "affiliations").itertuples(index=False):
            affiliations[row.doc_id].append(row)
        categories = defaultdict(list)
        for row in _read_table(self.table_path("categories"),
                               "categories").itertuples(index=False):
            categories[row.doc_id].append(row)

        documents = []
        for row in _read_table(self.table_path("documents"),
                               "documents").itertuples(index=False):
            doc_authors = sorted(authors[row.doc_id],
                                 key=lambda item: int(item.position))
            doc_affiliations = sorted(affiliations[row.doc_id],
                                      key=lambda item: int(item.position))
            doc_categories = sorted(categories[row.doc_id],
                                    key=lambda item: int(item.position))
            try:
                documents.append(Document(
                    doc_id=row.doc_id,
                    origin=Origin(row.origin),
                    year=int(row.year) if row.year else None,
                    title=row.title,
                    source_name=row.source_name,
                    publisher=row.publisher,
                    doc_type=row.doc_type,
                    authors=tuple(
                        Authorship(raw_name=author.raw_name,
                                   normalized_key=author.normalized_key,
                                   position=int(author.position),
                                   full_name=author.full_name)
                        for author in doc_authors
                    ),
                    affiliations=tuple(
                        Affiliation(raw_address=affiliation.raw_address,
                                    linked_author_keys=_split(
                                        affiliation.linked_authors
                                    ),
                                    country=affiliation.country)
                        for affiliation in doc_affiliations
                    ),
                    times_cited=int(row.times_cited),
                    n_cited_refs=int(row.n_cited_refs),
                    categories=tuple(category.category
                                     for category in doc_categories),
                    language=row.language,
                    ut=row.ut,
                    author_countries=tuple(_split(author.countries)
                                           for author in doc_authors),
                    source_location=Location(row.file, int(row.line))
                ))
            except ValueError as exception:
                raise StoreIntegrityError(
                    f"Invalid row of document {row.doc_id}: {exception}"
                )
        logger.debug("Loaded %d documents from %s", len(documents), self.path)
        return sorted(documents, key=lambda doc: doc.doc_id)

    def diagnostics(self):
        """Read the diagnostics persisted at ingest.

        :returns: list of :class:`~biblioscope.tagfile.ParseDiagnostic`
        """
        return [
            ParseDiagnostic(Severity(row.severity), row.message,
                            Location(row.file, int(row.line)))
            for row in _read_table(self.table_path("diagnostics"),
                                   "diagnostics").itertuples(index=False)
        ]

    def verify(self):
        """Check referential integrity and manifest counts.

        :returns: number of documents in the store
        """
        manifest = self.manifest()
        frames = {name: _read_table(self.table_path(name), name)
                  for name in TABLES}

        problems = []
        for name, frame in frames.items():
            expected = manifest.get("counts", {}).get(name)
            if expected != len(frame):
                problems.append(f"{name}: manifest count {expected}, "
                                f"table has {len(frame)} rows")

        doc_ids = set(frames["documents"]["doc_id"])
        if len(doc_ids) != len(frames["documents"]):
            problems.append("documents: duplicate doc_id")
        for name in ("authorships", "affiliations", "categories"):
            orphans = sorted(set(frames[name]["doc_id"]) - doc_ids)
            if orphans:
                problems.append(f"{name}: unknown doc_id {orphans[0]}")
        sources = set(frames["sources"]["source_name"])
        missing = sorted(set(frames["documents"]["source_name"]) - sources)
        if missing:
            problems.append(f"sources: missing source {missing[0]!r}")

        if problems:
            raise StoreIntegrityError(
                f"Store {self.path} is inconsistent: " + "; ".join(problems)
            )
        return len(doc_ids)


def ingest(paths, origin, config, store_path):
    """Parse export files and write their documents to a store.

    :param paths: list of export file paths
    :param origin: :class:`~biblioscope.tagfile.Origin` of the files
    :param config: :class:`~biblioscope.config.RunConfig`
    :param store_path: store directory
    :returns: :class:`CorpusStore`
    """
    origin = Origin(origin)
    paths = [str(path) for path in paths]
    if not paths:
        raise InputError("No input files given")

    lexicon = config.lexicon()
    config.region_map(lexicon)

    results = parse_files(paths, origin, workers=config.workers)
    builder = CorpusBuilder(lexicon)
    diagnostics = []
    for path, result in zip(paths, results):
        diagnostics.extend(result.diagnostics)
        if not result.records:
            raise InputError(f"No records could be parsed from {path} "
                             f"({len(result.diagnostics)} diagnostics)")
        builder.add_records(result.records)
    diagnostics.extend(builder.diagnostics)

    documents = builder.documents()
    if not documents:
        raise InputError(
            "No documents could be built from "
            + ", ".join(os.path.basename(path) for path in paths)
        )

    store = CorpusStore(store_path)
    store.write(documents, diagnostics, origin, paths,
                config.map_checksums())
    return store
