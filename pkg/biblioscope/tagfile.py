"""Parser for field-tagged citation index export files.

The Web of Science family of indexes (Core Collection and SciELO Citation
Index) exports records in a plain text format where every field line
starts with a two character tag followed by one space::

    FN Clarivate Analytics Web of Science
    VR 1.0
    PT J
    AU Velez, G
       Lucio, D
    TI A title
    ER

    EF

A line starting with three spaces continues the value list of the previous
tag, ``ER`` ends a record and ``EF`` ends the file. ``FN`` and ``VR`` lines
before the first record form a header that is not a document.
"""
import enum
import functools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

from biblioscope.errors import InputError

logger = logging.getLogger(__name__)

RECORD_END_TAG = "ER"
FILE_END_TAG = "EF"
RECORD_START_TAG = "PT"
HEADER_TAGS = ("FN", "VR")

# Tags whose value lines are separate list elements
LIST_PER_LINE_TAGS = ("AU", "AF", "C1", "CR")
# Tags whose joined value is a "; " separated list
DELIMITED_TAGS = ("WC", "SC")

CONTINUATION_PREFIX = "   "

_TAG_CHARS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789")


class Origin(str, enum.Enum):
    """Citation index a record was exported from."""

    WOS = "wos"
    SCIELO = "scielo"


class Severity(str, enum.Enum):
    """Severity of a parse diagnostic."""

    WARNING = "WARNING"
    ERROR = "ERROR"


class Location(NamedTuple):
    """Position in an input file. Line numbers start from 1."""

    file: str
    line: int

    def __str__(self):
        """Format location as ``file:line``."""
        return f"{self.file}:{self.line}"


class ParseDiagnostic(NamedTuple):
    """Recoverable problem found while reading input."""

    severity: Severity
    message: str
    location: Location


@dataclass(frozen=True)
class TaggedRecord:
    """Raw export record before interpretation.

    ``fields`` is an ordered tuple of ``(tag, values)`` pairs where
    ``values`` is a non-empty tuple of text lines. Unknown tags are kept
    verbatim.
    """

    fields: tuple
    origin: Origin
    source_location: Location

    @property
    def tags(self):
        """Tags of the record in file order."""
        return [tag for tag, _ in self.fields]

    @functools.cached_property
    def field_index(self):
        """Value lines of every tag, built once per record."""
        index = {}
        for tag, values in self.fields:
            index.setdefault(tag, []).extend(values)
        return index


class ParseResult(NamedTuple):
    """Records, diagnostics and header found in one input."""

    records: list
    diagnostics: list
    header: Optional[TaggedRecord]


def _is_field_line(line):
    """Check if line starts with a tag followed by a space or line end."""
    return (
        len(line) >= 2
        and line[0] in _TAG_CHARS
        and line[1] in _TAG_CHARS
        and (len(line) == 2 or line[2] == " ")
    )


class _StreamParser:
    """State machine reading one stream line by line."""

    def __init__(self, origin, name):
        self.origin = Origin(origin)
        self.name = name
        self.records = []
        self.diagnostics = []
        self.header_fields = []
        self.header_line = None
        self.block = None
        self.block_start = None
        self.current = None
        self.ended = False
        self.trailing_reported = False

    def diagnose(self, severity, message, line_number):
        location = Location(self.name, line_number)
        self.diagnostics.append(ParseDiagnostic(severity, message, location))
        if severity is Severity.ERROR:
            logger.error("%s: %s", location, message)
        else:
            logger.warning("%s: %s", location, message)

    def decode(self, raw, line_number):
        if isinstance(raw, str):
            return raw
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError:
            self.diagnose(
                Severity.WARNING,
                "invalid UTF-8 replaced with U+FFFD",
                line_number
            )
            return raw.decode("utf-8", errors="replace")

    def discard_block(self, reason):
        self.diagnose(
            Severity.ERROR,
            f"record starting at line {self.block_start} has no "
            f"{RECORD_END_TAG} line ({reason}); record discarded",
            self.block_start
        )
        self.block = None
        self.current = None

    def close_block(self):
        self.records.append(TaggedRecord(
            fields=tuple((tag, tuple(values)) for tag, values in self.block),
            origin=self.origin,
            source_location=Location(self.name, self.block_start)
        ))
        self.block = None
        self.current = None

    def feed(self, raw, line_number):
        line = self.decode(raw, line_number)
        if line_number == 1:
            line = line.lstrip("\ufeff")
        line = line.rstrip("\r\n")

        if self.ended:
            if line.strip() and not self.trailing_reported:
                self.diagnose(
                    Severity.WARNING,
                    f"text after {FILE_END_TAG} ignored",
                    line_number
                )
                self.trailing_reported = True
            return

        if not line.strip():
            return

        if line.startswith(CONTINUATION_PREFIX):
            if self.current is None:
                self.diagnose(
                    Severity.WARNING,
                    "continuation line without a preceding tag skipped",
                    line_number
                )
            else:
                self.current.append(line[3:].strip())
            return

        if not _is_field_line(line):
            self.diagnose(
                Severity.WARNING,
                f"unrecognized line skipped: {line[:40]!r}",
                line_number
            )
            return

        tag = line[:2]
        value = line[3:].strip()

        if tag == FILE_END_TAG:
            if self.block is not None:
                self.discard_block(f"{FILE_END_TAG} reached")
            self.ended = True
            self.current = None
            return

        if tag == RECORD_END_TAG:
            if self.block is None:
                self.diagnose(
                    Severity.WARNING,
                    f"{RECORD_END_TAG} without an open record ignored",
                    line_number
                )
            else:
                self.close_block()
            return

        if self.block is None and tag in HEADER_TAGS:
            values = [value]
            self.header_fields.append((tag, values))
            if self.header_line is None:
                self.header_line = line_number
            self.current = values
            return

        if self.block is not None and tag == RECORD_START_TAG:
            # A new record begins while the previous one is still open
            self.discard_block(f"next {RECORD_START_TAG} line reached")

        if self.block is None:
            self.block = []
            self.block_start = line_number

        values = [value]
        self.block.append((tag, values))
        self.current = values

    def finish(self):
        if self.block is not None:
            self.discard_block("end of input reached")
        header = None
        if self.header_fields:
            header = TaggedRecord(
                fields=tuple(
                    (tag, tuple(values)) for tag, values in self.header_fields
                ),
                origin=self.origin,
                source_location=Location(self.name, self.header_line)
            )
        logger.debug("%s: parsed %d records with %d diagnostics",
                     self.name, len(self.records), len(self.diagnostics))
        return ParseResult(self.records, self.diagnostics, header)


def parse_stream(stream, origin, name="<stream>"):
    """Parse a field-tagged export stream.

    The stream may yield either text or UTF-8 encoded byte lines. Bytes
    that are not valid UTF-8 are replaced with U+FFFD and reported as
    warnings. Malformed blocks are reported as errors and skipped, parsing
    continues with the next record.

    :param stream: iterable of lines, e.g. an open file
    :param origin: :class:`Origin` of the records
    :param str name: file name used in record and diagnostic locations
    :returns: :class:`ParseResult`
    """
    parser = _StreamParser(origin, name)
    for line_number, raw in enumerate(stream, start=1):
        parser.feed(raw, line_number)
    return parser.finish()


def parse_file(path, origin):
    """Parse a field-tagged export file.

    :param path: path to the export file
    :param origin: :class:`Origin` of the records
    :returns: :class:`ParseResult`
    """
    name = str(path).replace("\\", "/").rsplit("/", 1)[-1]
    try:
        with open(path, "rb") as open_file:
            return parse_stream(open_file, origin, name=name)
    except OSError as exception:
        raise InputError(f"Can not read {path}: {exception.strerror}")


def parse_files(paths, origin, workers=1):
    """Parse several export files, concurrently if ``workers`` > 1.

    :param paths: list of file paths
    :param origin: :class:`Origin` of the records
    :param int workers: number of parser threads
    :returns: list of :class:`ParseResult` in the order of ``paths``
    """
    if workers <= 1 or len(paths) <= 1:
        return [parse_file(path, origin) for path in paths]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda path: parse_file(path, origin),
                                 paths))


def field_values(record, tag):
    """Return values of a tag.

    For AU, AF, C1 and CR each line is one element. WC and SC values are
    joined and split on semicolons. Other tags return their value lines.

    :param TaggedRecord record: record to read
    :param str tag: two character tag
    :returns: list of strings, empty if the tag is absent
    """
    lines = list(record.field_index.get(tag, ()))
    if tag in DELIMITED_TAGS:
        joined = " ".join(lines)
        return [item.strip() for item in joined.split(";") if item.strip()]
    return lines


def field_text(record, tag):
    """Return the value lines of a tag joined with spaces.

    :param TaggedRecord record: record to read
    :param str tag: two character tag
    :returns: joined text, empty string if the tag is absent
    """
    return " ".join(field_values(record, tag)).strip()


def serialize_record(record):
    """Render a record in the field-tagged grammar.

    :param TaggedRecord record: record to serialize
    :returns: record text terminated by an ``ER`` line
    """
    lines = []
    for tag, values in record.fields:
        lines.append(f"{tag} {values[0]}")
        lines.extend(CONTINUATION_PREFIX + value for value in values[1:])
    lines.append(RECORD_END_TAG)
    return "\n".join(lines) + "\n"
