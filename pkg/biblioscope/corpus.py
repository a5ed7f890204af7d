"""Normalized bibliographic documents built from tagged records."""
import enum
import functools
import hashlib
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Optional

from unidecode import unidecode

from biblioscope.errors import ConfigurationError, RecordRejectedError
from biblioscope.tagfile import (Location, Origin, ParseDiagnostic, Severity,
                                 field_text, field_values)
from biblioscope.utils import fold_text, read_map_file

logger = logging.getLogger(__name__)

UNRESOLVED = "UNRESOLVED"

# Countries that must belong to the LAC region
LAC_COUNTRIES = (
    "Argentina", "Bolivia", "Brazil", "Chile", "Colombia", "Costa Rica",
    "Cuba", "Dominican Republic", "Ecuador", "El Salvador", "Guatemala",
    "Honduras", "Mexico", "Nicaragua", "Panama", "Paraguay", "Peru",
    "Puerto Rico", "Uruguay", "Venezuela",
)


class Region(str, enum.Enum):
    """World regions used to aggregate countries."""

    AFRICA = "AFRICA"
    ASIA = "ASIA"
    EUROPE = "EUROPE"
    LAC = "LAC"
    OCEANIA = "OCEANIA"
    USA_CANADA = "USA_CANADA"

    @property
    def label(self):
        """Human readable region name."""
        return REGION_LABELS[self]


REGION_LABELS = {
    Region.AFRICA: "Africa",
    Region.ASIA: "Asia",
    Region.EUROPE: "Europe",
    Region.LAC: "LAC",
    Region.OCEANIA: "Oceania",
    Region.USA_CANADA: "USA&Canada",
}

_BRACKET_RE = re.compile(r"^\s*\[([^\]]*)\]\s*(.*)$")
_REPRINT_RE = re.compile(
    r"^(.*?)\s*\((?:reprint|corresponding) author\)\s*,\s*(.*)$",
    re.IGNORECASE
)
_USA_RE = re.compile(
    r"^(?:[A-Z]{2}\s+)?(?:\d{5}(?:-\d{4})?\s+)?USA$", re.IGNORECASE
)
_GIVEN_NAME_SPLIT_RE = re.compile(r"[\s.\-]+")


class Lexicon:
    """Mapping from address spellings to canonical country names."""

    def __init__(self, aliases):
        """Initialize lexicon.

        :param dict aliases: alias -> country mapping
        """
        self.aliases = {fold_text(alias): country
                        for alias, country in aliases.items()}

    @classmethod
    def load(cls, path):
        """Load lexicon from a ``countries.map`` file.

        :param path: path to the map file
        :returns: :class:`Lexicon`
        """
        aliases = {}
        folded = {}
        for line_number, (alias, country) in read_map_file(path, 2):
            key = fold_text(alias)
            if key in folded and folded[key] != country:
                raise ConfigurationError(
                    f"alias {alias!r} maps to both {folded[key]!r} and "
                    f"{country!r}", path=path, line=line_number
                )
            folded[key] = country
            aliases[alias] = country
        logger.debug("Loaded %d country aliases from %s", len(aliases), path)
        return cls(aliases)

    @property
    def countries(self):
        """Set of canonical country names."""
        return set(self.aliases.values())

    def lookup(self, text):
        """Find the country of an address token.

        :param str text: address token
        :returns: country name or ``None``
        """
        return self.aliases.get(fold_text(text))


class RegionMap:
    """Total mapping from countries to world regions."""

    def __init__(self, entries):
        """Initialize region map.

        :param dict entries: country -> :class:`Region` mapping
        """
        self.entries = {
            country: Region(region) for country, region in entries.items()
        }

    @classmethod
    def load(cls, path):
        """Load region map from a ``regions.map`` file.

        :param path: path to the map file
        :returns: :class:`RegionMap`
        """
        entries = {}
        for line_number, (country, region) in read_map_file(path, 2):
            try:
                region = Region(region.upper())
            except ValueError:
                raise ConfigurationError(
                    f"unknown region {region!r}", path=path, line=line_number
                )
            if country in entries and entries[country] != region:
                raise ConfigurationError(
                    f"country {country!r} listed twice", path=path,
                    line=line_number
                )
            entries[country] = region
        return cls(entries)

    def with_overrides(self, overrides):
        """Return a copy with some countries moved to other regions.

        :param dict overrides: country -> region mapping
        :returns: :class:`RegionMap`
        """
        entries = dict(self.entries)
        for country, region in overrides.items():
            if country not in entries:
                raise ConfigurationError(
                    f"region override for unknown country {country!r}"
                )
            try:
                entries[country] = Region(str(region).upper())
            except ValueError:
                raise ConfigurationError(
                    f"unknown region {region!r} in override of {country!r}"
                )
        return RegionMap(entries)

    def validate(self, lexicon):
        """Check that every lexicon country has a region.

        :param Lexicon lexicon: lexicon to check against
        :returns: ``None``
        """
        missing = sorted(lexicon.countries - set(self.entries))
        if missing:
            raise ConfigurationError(
                "countries without a region: " + ", ".join(missing)
            )
        for country in LAC_COUNTRIES:
            if self.entries.get(country, Region.LAC) is not Region.LAC:
                logger.warning("%s is mapped to %s instead of LAC",
                               country, self.entries[country].value)

    def lac_countries(self):
        """Sorted list of countries in the LAC region."""
        return sorted(country for country, region in self.entries.items()
                      if region is Region.LAC)

    def __contains__(self, country):
        """Check if country is mapped."""
        return country in self.entries


@dataclass(frozen=True)
class Authorship:
    """Author of a document in byline order."""

    raw_name: str
    normalized_key: str
    position: int
    full_name: str = ""


@dataclass(frozen=True)
class Affiliation:
    """Address of a document and the authors linked to it."""

    raw_address: str
    linked_author_keys: tuple
    country: str


@dataclass(frozen=True)
class Document:
    """Normalized bibliographic unit.

    ``author_countries`` holds the result of author-address linkage, one
    tuple of countries per author, or ``None`` before linking.
    """

    doc_id: str
    origin: Origin
    year: Optional[int]
    title: str
    source_name: str
    publisher: str
    doc_type: str
    authors: tuple
    affiliations: tuple
    times_cited: int
    n_cited_refs: int
    categories: tuple
    language: str
    ut: str = ""
    author_countries: Optional[tuple] = None
    source_location: Optional[Location] = field(default=None, compare=False)


@functools.lru_cache(maxsize=65536)
def normalize_author(raw_name):
    """Normalize an author name to a matching key.

    The key is the accent-free, case-folded surname followed by a comma and
    at most two initials of the given names, e.g. ``"Velez-Cuartas, G. A."``
    becomes ``"velez-cuartas,ga"``. A given-name token of one or two
    letters is read as a run of initials and a longer token contributes its
    first letter, in any letter case, so ``"GARCIA, JUAN LUIS"``,
    ``"Garcia, JL"`` and ``"garcia,jl"`` share a key. A name without a
    separable given name is folded as a whole.

    :param str raw_name: author name as written in the record
    :returns: normalized key
    """
    if raw_name is None or not raw_name.strip():
        raise ValueError("Author name is empty")
    name = unidecode(raw_name).strip()

    if "," in name:
        surname, given = name.split(",", 1)
    else:
        parts = name.split()
        if len(parts) >= 2 and _is_initials_token(parts[-1]):
            surname, given = " ".join(parts[:-1]), parts[-1]
        else:
            logger.warning("Author name %r has no separable given name",
                           raw_name)
            return fold_text(name)

    return f"{fold_text(surname)},{_initials(given)}"


def _is_initials_token(token):
    """Check if a name token without comma looks like initials."""
    letters = token.replace(".", "").replace("-", "")
    return letters.isalpha() and (len(letters) <= 2 or token.endswith("."))


def _initials(given):
    """Extract up to two lower case initials from given names."""
    letters = []
    for token in _GIVEN_NAME_SPLIT_RE.split(given.strip()):
        alpha = "".join(char for char in token if char.isalpha())
        if len(alpha) <= 2:
            # Run of initials such as "GA"
            letters.extend(alpha)
        else:
            letters.append(alpha[0])
    return "".join(letters[:2]).lower()


def extract_country(raw_address, lexicon):
    """Resolve the country of an address.

    The last comma separated element of the address is matched against the
    lexicon. US addresses ending in ``"<STATE> <ZIP> USA"`` resolve to USA.

    :param str raw_address: address text
    :param Lexicon lexicon: country lexicon
    :returns: country name or :data:`UNRESOLVED`
    """
    token = raw_address.rsplit(",", 1)[-1].strip().rstrip(".").strip()
    if not token:
        return UNRESOLVED
    country = lexicon.lookup(token)
    if country is not None:
        return country
    if _USA_RE.match(token):
        return lexicon.lookup("USA") or UNRESOLVED
    return UNRESOLVED


def region_of(country, region_map):
    """Return region of a resolved country.

    :param str country: country name
    :param RegionMap region_map: region map
    :returns: :class:`Region`
    """
    return region_map.entries[country]


def make_doc_id(origin, ut, title, year, source_name):
    """Compute a stable document identifier.

    :returns: 16 character hex string
    """
    origin = Origin(origin).value
    if ut:
        basis = f"{origin}\x1fUT\x1f{ut}"
    else:
        basis = f"{origin}\x1f{title}\x1f{year}\x1f{source_name}"
    return hashlib.sha1(basis.encode("utf-8")).hexdigest()[:16]


def _diagnose(diagnostics, severity, message, location):
    if location is None:
        location = Location("<unknown>", 1)
    if severity is Severity.ERROR:
        logger.error("%s: %s", location, message)
    else:
        logger.warning("%s: %s", location, message)
    if diagnostics is not None:
        diagnostics.append(ParseDiagnostic(severity, message, location))


def _count(record, tag, diagnostics, default=0):
    text = field_text(record, tag)
    if not text:
        return default
    if text.isdigit():
        return int(text)
    _diagnose(diagnostics, Severity.WARNING,
              f"non-numeric {tag} value {text!r} treated as 0",
              record.source_location)
    return 0


def _parse_address(line):
    """Split a C1 line into linked author names and the address."""
    match = _BRACKET_RE.match(line)
    if not match:
        return [], line.strip()
    names = [name.strip() for name in match.group(1).split(";")]
    return [name for name in names if name], match.group(2).strip()


def build_document(record, lexicon, diagnostics=None):
    """Interpret a tagged record as a document.

    :param TaggedRecord record: parsed export record
    :param Lexicon lexicon: country lexicon for addresses
    :param list diagnostics: list where warnings are appended
    :returns: unlinked :class:`Document`
    """
    location = record.source_location
    au_names = [name for name in field_values(record, "AU") if name]
    af_names = [name for name in field_values(record, "AF") if name]
    if not au_names and not af_names:
        raise RecordRejectedError("record has neither AU nor AF authors",
                                  location=location)

    # AU lines are counted, AF is only used for display
    names = au_names or af_names
    full_names = af_names if len(af_names) == len(names) else [""] * len(names)
    authors = tuple(
        Authorship(raw_name=name, normalized_key=normalize_author(name),
                   position=position, full_name=full_name)
        for position, (name, full_name)
        in enumerate(zip(names, full_names), start=1)
    )

    affiliations = []
    for line in field_values(record, "C1"):
        linked_names, address = _parse_address(line)
        if not address:
            continue
        affiliations.append(Affiliation(
            raw_address=address,
            linked_author_keys=tuple(normalize_author(name)
                                     for name in linked_names),
            country=extract_country(address, lexicon)
        ))
    if not affiliations:
        reprint = field_text(record, "RP")
        if reprint:
            match = _REPRINT_RE.match(reprint)
            linked = ()
            address = reprint
            if match:
                linked = (normalize_author(match.group(1)),) \
                    if match.group(1).strip() else ()
                address = match.group(2).strip()
            affiliations.append(Affiliation(
                raw_address=address,
                linked_author_keys=linked,
                country=extract_country(address, lexicon)
            ))

    year_text = field_text(record, "PY")
    year = int(year_text) if year_text.isdigit() else None
    if year is None:
        _diagnose(diagnostics, Severity.WARNING,
                  "record has no publication year", location)

    categories = field_values(record, "WC") or field_values(record, "SC")
    title = field_text(record, "TI")
    source_name = field_text(record, "SO")
    ut = field_text(record, "UT")

    return Document(
        doc_id=make_doc_id(record.origin, ut, title, year, source_name),
        origin=record.origin,
        year=year,
        title=title,
        source_name=source_name,
        publisher=field_text(record, "PU"),
        doc_type=field_text(record, "DT"),
        authors=authors,
        affiliations=tuple(affiliations),
        times_cited=_count(record, "TC", diagnostics),
        n_cited_refs=_count(record, "NR", diagnostics,
                            default=len(field_values(record, "CR"))),
        categories=tuple(dict.fromkeys(categories)),
        language=field_text(record, "LA"),
        ut=ut,
        source_location=location
    )


def _match_author(key, authors):
    """Find the author keys a bracketed name refers to.

    Exact key matches win. Otherwise a unique author with the same surname
    and compatible initials (one a prefix of the other) is accepted.
    """
    exact = [author.normalized_key for author in authors
             if author.normalized_key == key]
    if exact:
        return exact[:1]
    surname, _, initials = key.partition(",")
    compatible = {
        author.normalized_key for author in authors
        if author.normalized_key.partition(",")[0] == surname
        and (author.normalized_key.partition(",")[2].startswith(initials)
             or initials.startswith(author.normalized_key.partition(",")[2]))
    }
    return sorted(compatible) if len(compatible) == 1 else []


def link_authors_addresses(doc, diagnostics=None):
    """Link every author of a document to countries.

    Authors named in a bracketed address prefix are linked to the resolved
    countries of those addresses. Other authors inherit all resolved
    countries of the document, with repetition. When every author is
    bracketed, resolved addresses that kept no author link are shared by
    all authors, so each resolved country of the document gets credit.

    :param Document doc: document to link
    :param list diagnostics: list where warnings are appended
    :returns: list of country lists, one per author in byline order
    """
    resolved = [affiliation.country for affiliation in doc.affiliations
                if affiliation.country != UNRESOLVED]
    bracketed = {}
    orphaned = []
    for affiliation in doc.affiliations:
        linked = False
        for key in affiliation.linked_author_keys:
            matches = _match_author(key, doc.authors)
            if not matches:
                _diagnose(diagnostics, Severity.WARNING,
                          f"linked author {key!r} is not an author of the "
                          f"document; link dropped", doc.source_location)
                continue
            linked = True
            for author_key in matches:
                countries = bracketed.setdefault(author_key, [])
                if affiliation.country != UNRESOLVED:
                    countries.append(affiliation.country)
        if not linked and affiliation.country != UNRESOLVED:
            orphaned.append(affiliation.country)

    links = [bracketed.get(author.normalized_key)
             for author in doc.authors]
    if orphaned and links and all(links):
        links = [countries + orphaned for countries in links]
    return [list(countries or resolved) for countries in links]


def link_document(doc, diagnostics=None):
    """Return a copy of document with author linkage filled in.

    :param Document doc: document to link
    :param list diagnostics: list where warnings are appended
    :returns: linked :class:`Document`
    """
    links = link_authors_addresses(doc, diagnostics)
    return replace(doc, author_countries=tuple(tuple(countries)
                                               for countries in links))


def author_links(doc):
    """Return per-author countries of a document, linking if needed."""
    if doc.author_countries is not None:
        return doc.author_countries
    return link_authors_addresses(doc)


class CorpusBuilder:
    """Build linked documents from parse results.

    Diagnostics of rejected and suspicious records are collected in
    :attr:`diagnostics`. Documents are kept unique by ``doc_id``.
    """

    def __init__(self, lexicon):
        """Initialize builder.

        :param Lexicon lexicon: country lexicon
        """
        self.lexicon = lexicon
        self.diagnostics = []
        self._documents = {}

    def add_records(self, records):
        """Build, link and collect documents.

        :param records: iterable of :class:`TaggedRecord`
        :returns: number of documents added
        """
        added = 0
        for record in records:
            try:
                doc = build_document(record, self.lexicon, self.diagnostics)
            except RecordRejectedError as exception:
                _diagnose(self.diagnostics, Severity.ERROR,
                          exception.message, exception.location)
                continue
            if doc.doc_id in self._documents:
                _diagnose(self.diagnostics, Severity.WARNING,
                          f"duplicate document {doc.doc_id} skipped",
                          record.source_location)
                continue
            self._documents[doc.doc_id] = link_document(doc,
                                                        self.diagnostics)
            added += 1
        return added

    def documents(self):
        """Return documents ordered by ``doc_id``."""
        return [self._documents[doc_id] for doc_id in sorted(self._documents)]
