"""Descriptive statistics, country production and category volumes."""
import enum
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy

from biblioscope.corpus import UNRESOLVED, author_links
from biblioscope.errors import IndicatorError
from biblioscope.utils import fold_text

logger = logging.getLogger(__name__)


class Attribute(str, enum.Enum):
    """Document attributes summarized by :func:`summarize_attribute`."""

    AUTHORS = "AUTHORS"
    ADDRESSES = "ADDRESSES"
    TIMES_CITED = "TIMES_CITED"
    CITED_REFERENCES = "CITED_REFERENCES"
    SUBJECT_CATEGORIES = "SUBJECT_CATEGORIES"
    PAPERS_PER_SOURCE = "PAPERS_PER_SOURCE"

    @property
    def label(self):
        """Row label used in reports."""
        return ATTRIBUTE_LABELS[self]


ATTRIBUTE_LABELS = {
    Attribute.AUTHORS: "Authors",
    Attribute.ADDRESSES: "Addresses",
    Attribute.TIMES_CITED: "Times cited",
    Attribute.CITED_REFERENCES: "Cited references",
    Attribute.SUBJECT_CATEGORIES: "Subject Categories",
    Attribute.PAPERS_PER_SOURCE: "Indexed Sources",
}


@dataclass(frozen=True)
class AttributeSummary:
    """Total, mean and population standard deviation of an attribute.

    ``distinct`` is the number of different authors, addresses, categories
    or sources, and ``None`` for citation counts.
    """

    attribute: Attribute
    total: int
    mean: float
    stddev: float
    distinct: Optional[int] = None


@dataclass(frozen=True)
class CountryProduction:
    """Whole, fractional and first-author counts of a country."""

    country: str
    records: int
    fractional: float
    first_author: int


@dataclass(frozen=True)
class CategoryVolume:
    """Number and share of documents in a subject category."""

    category: str
    count: int
    share: float
    rank: int


@dataclass(frozen=True)
class CrossRankRow:
    """Category volumes of two corpora side by side.

    Fields of a side are ``None`` when the category is missing from it.
    """

    category: str
    rank_a: Optional[int]
    count_a: Optional[int]
    share_a: Optional[float]
    rank_b: Optional[int]
    count_b: Optional[int]
    share_b: Optional[float]


_PER_DOCUMENT = {
    Attribute.AUTHORS: lambda doc: len(doc.authors),
    Attribute.ADDRESSES: lambda doc: len(doc.affiliations),
    Attribute.TIMES_CITED: lambda doc: doc.times_cited,
    Attribute.CITED_REFERENCES: lambda doc: doc.n_cited_refs,
    Attribute.SUBJECT_CATEGORIES: lambda doc: len(doc.categories),
}


def _distinct(corpus, attribute):
    if attribute is Attribute.AUTHORS:
        return len({author.normalized_key
                    for doc in corpus for author in doc.authors})
    if attribute is Attribute.ADDRESSES:
        return len({fold_text(affiliation.raw_address)
                    for doc in corpus for affiliation in doc.affiliations})
    if attribute is Attribute.SUBJECT_CATEGORIES:
        return len({category for doc in corpus for category in doc.categories})
    return None


def summarize_attribute(corpus, attribute):
    """Summarize one attribute over a corpus.

    Per-document attributes are summed over documents and their mean and
    population standard deviation are taken over documents. For
    ``PAPERS_PER_SOURCE`` the total is the number of distinct sources and
    the distribution is the number of documents per source.

    :param corpus: sequence of :class:`~biblioscope.corpus.Document`
    :param attribute: :class:`Attribute` to summarize
    :returns: :class:`AttributeSummary`
    """
    corpus = list(corpus)
    attribute = Attribute(attribute)
    if not corpus:
        raise IndicatorError("Can not summarize an empty corpus")

    if attribute is Attribute.PAPERS_PER_SOURCE:
        papers = Counter(doc.source_name for doc in corpus)
        values = [papers[source] for source in sorted(papers)]
        total = len(papers)
        mean = len(corpus) / len(papers)
        distinct = len(papers)
    else:
        values = [_PER_DOCUMENT[attribute](doc) for doc in corpus]
        total = sum(values)
        mean = total / len(corpus)
        distinct = _distinct(corpus, attribute)

    stddev = float(numpy.std(numpy.asarray(values, dtype=numpy.float64)))
    return AttributeSummary(attribute, total, mean, stddev, distinct)


def summarize_corpus(corpus):
    """Summarize all attributes in report order.

    :param corpus: sequence of documents
    :returns: list of :class:`AttributeSummary`
    """
    corpus = list(corpus)
    return [summarize_attribute(corpus, attribute) for attribute in Attribute]


def country_production(corpus, lac_filter=None):
    """Count documents per country.

    ``records`` counts documents with at least one resolved address in the
    country. ``fractional`` splits every document equally between its
    authors and the share of each author equally between the author's
    linked countries. ``first_author`` counts documents whose first author
    is linked to the country; a first author linked to several countries
    credits each of them fully.

    :param corpus: sequence of linked documents
    :param lac_filter: optional collection of countries to report
    :returns: list of :class:`CountryProduction`, largest first
    """
    records = Counter()
    first_author = Counter()
    credits = defaultdict(list)

    for doc in corpus:
        records.update({affiliation.country
                        for affiliation in doc.affiliations
                        if affiliation.country != UNRESOLVED})
        links = author_links(doc)
        n_authors = len(links)
        for countries in links:
            if not countries:
                continue
            for country, count in Counter(countries).items():
                credits[country].append(count / (n_authors * len(countries)))
        if links and links[0]:
            first_author.update(set(links[0]))

    rows = [
        CountryProduction(
            country=country,
            records=count,
            # fsum is exact, so the result does not depend on document order
            fractional=math.fsum(credits[country]),
            first_author=first_author[country]
        )
        for country, count in records.items()
        if lac_filter is None or country in lac_filter
    ]
    rows.sort(key=lambda row: (-row.records, -row.fractional, row.country))
    return rows


def category_volume(corpus):
    """Count documents per subject category.

    A document with several categories counts once in each of them, so the
    shares may sum to more than one. Ranks are dense over counts.

    :param corpus: sequence of documents
    :returns: list of :class:`CategoryVolume`, largest first
    """
    corpus = list(corpus)
    counts = Counter(category for doc in corpus
                     for category in set(doc.categories))
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))

    volumes = []
    rank = 0
    previous = None
    for category, count in ordered:
        if count != previous:
            rank += 1
            previous = count
        volumes.append(CategoryVolume(category, count, count / len(corpus),
                                      rank))
    return volumes


def cross_rank(volumes_a, volumes_b, top=None):
    """Join category volumes of two corpora by category label.

    Rows follow the ranking of ``volumes_a``. Categories found only in
    ``volumes_b`` follow in its order unless ``top`` limits the table to
    the first rows of ``volumes_a``.

    :param volumes_a: list of :class:`CategoryVolume`
    :param volumes_b: list of :class:`CategoryVolume`
    :param int top: number of rows of side a to keep
    :returns: list of :class:`CrossRankRow`
    """
    by_label_b = {volume.category: volume for volume in volumes_b}
    rows = []
    selected = volumes_a if top is None else volumes_a[:top]
    for volume in selected:
        other = by_label_b.get(volume.category)
        rows.append(CrossRankRow(
            volume.category, volume.rank, volume.count, volume.share,
            other.rank if other else None,
            other.count if other else None,
            other.share if other else None
        ))
    if top is None:
        labels_a = {volume.category for volume in volumes_a}
        rows.extend(
            CrossRankRow(volume.category, None, None, None,
                         volume.rank, volume.count, volume.share)
            for volume in volumes_b if volume.category not in labels_a
        )
    return rows
