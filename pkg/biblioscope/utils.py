"""Small text and file helpers shared by the biblioscope modules."""
import hashlib
import re

from unidecode import unidecode

from biblioscope.errors import ConfigurationError

_WHITESPACE_RE = re.compile(r"\s+")


def fold_text(text):
    """Fold text for matching.

    Accents are transliterated to ASCII, the result is case-folded and runs
    of whitespace are collapsed to a single space.

    :param str text: text to fold
    :returns: folded text
    """
    return _WHITESPACE_RE.sub(" ", unidecode(text).casefold()).strip()


def sha256_file(path):
    """Compute the SHA-256 checksum of a file.

    :param path: path to the file
    :returns: hex digest
    """
    digest = hashlib.sha256()
    with open(path, "rb") as open_file:
        for chunk in iter(lambda: open_file.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def read_map_file(path, columns):
    """Read a line-oriented, tab separated map file.

    Empty lines and lines starting with ``#`` are skipped. Every other line
    must contain exactly ``columns`` non-empty tab separated fields.

    :param path: path to the map file
    :param int columns: number of fields on each line
    :returns: list of ``(line number, fields)`` tuples
    """
    rows = []
    try:
        with open(path, encoding="utf-8-sig") as open_file:
            for line_number, line in enumerate(open_file, start=1):
                line = line.rstrip("\r\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                fields = [field.strip() for field in line.split("\t")]
                if len(fields) != columns or not all(fields):
                    raise ConfigurationError(
                        f"expected {columns} tab separated fields",
                        path=path, line=line_number
                    )
                rows.append((line_number, fields))
    except OSError as exception:
        raise ConfigurationError(
            f"can not read file: {exception.strerror}", path=path
        )
    return rows


def pajek_label(text):
    """Quote a vertex label for a Pajek file.

    Pajek labels can not contain double quotes, so they become single
    quotes.

    :param str text: label text
    :returns: label wrapped in double quotes
    """
    return '"{}"'.format(text.replace('"', "'"))
