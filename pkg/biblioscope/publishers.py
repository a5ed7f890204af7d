"""Classification of publishers by semantic roots of their names."""
import enum
import functools
import logging
import os
import re
from collections import Counter, defaultdict
from dataclasses import dataclass

from unidecode import unidecode

from biblioscope.errors import ConfigurationError
from biblioscope.utils import read_map_file

logger = logging.getLogger(__name__)

UNCLASSIFIED = "UNCLASSIFIED"

DEFAULT_RULES_PATH = os.path.join(os.path.dirname(__file__), "data",
                                  "publisher_rules.map")


class PublisherClass(str, enum.Enum):
    """Nature of a publishing source."""

    COMMERCIAL_GENERIC = "COMMERCIAL_GENERIC"
    COMMERCIAL_BRAND = "COMMERCIAL_BRAND"
    ACADEMIC = "ACADEMIC"


@dataclass(frozen=True)
class RootRule:
    """Semantic root (or group of roots) and its class and priority."""

    roots: tuple
    root_class: PublisherClass
    priority: int

    @property
    def label(self):
        """Name of the rule, e.g. ``"Asso, Soc"``."""
        return ", ".join(self.roots)

    def matches(self, publisher):
        """Check if any root of the rule occurs in publisher name."""
        return any(_root_pattern(root).search(publisher)
                   for root in self.roots)


@functools.lru_cache(maxsize=None)
def _root_pattern(root):
    """Compile a case-insensitive pattern matching root at a word start."""
    parts = []
    for word in root.split():
        parts.append("(?:&|and)" if word == "&" else re.escape(word))
    return re.compile(r"(?<![0-9a-z])" + r"\s+".join(parts), re.IGNORECASE)


def validate_rules(rules):
    """Check that rule priorities are unique and roots are not empty.

    :param rules: list of :class:`RootRule`
    :returns: ``None``
    """
    priorities = Counter(rule.priority for rule in rules)
    duplicates = sorted(priority for priority, count in priorities.items()
                        if count > 1)
    if duplicates:
        raise ConfigurationError(
            "duplicate rule priorities: "
            + ", ".join(str(priority) for priority in duplicates)
        )
    for rule in rules:
        if not rule.roots or not all(root.strip() for root in rule.roots):
            raise ConfigurationError(f"rule {rule.label!r} has an empty root")


def load_rules(path=DEFAULT_RULES_PATH):
    """Load rules from a ``publisher_rules.map`` file.

    :param path: path to the rules file
    :returns: list of :class:`RootRule` in file order
    """
    rules = []
    for line_number, (priority, root_class, roots) \
            in read_map_file(path, 3):
        try:
            rule = RootRule(
                roots=tuple(root.strip() for root in roots.split("|")),
                root_class=PublisherClass(root_class.upper()),
                priority=int(priority)
            )
        except ValueError as exception:
            raise ConfigurationError(str(exception), path=path,
                                     line=line_number)
        rules.append(rule)
    try:
        validate_rules(rules)
    except ConfigurationError as exception:
        raise ConfigurationError(exception.message, path=path)
    return rules


def classify_publisher(publisher, rules):
    """Assign one semantic root to a publisher.

    When several roots occur in the name, the rule with the highest
    priority wins.

    :param str publisher: publisher name (PU field)
    :param rules: list of :class:`RootRule`
    :returns: label of the winning rule or :data:`UNCLASSIFIED`
    """
    if not publisher or not publisher.strip():
        return UNCLASSIFIED
    text = unidecode(publisher)
    best = None
    for rule in rules:
        if (best is None or rule.priority > best.priority) \
                and rule.matches(text):
            best = rule
    return best.label if best else UNCLASSIFIED


@dataclass(frozen=True)
class PublisherProfile:
    """Number of journals per semantic root.

    ``counts`` maps rule labels to journal counts in rule order.
    """

    counts: dict
    unclassified: int
    total: int
    rules: tuple

    def percentage(self, label):
        """Share of journals assigned to a label, in percent."""
        if not self.total:
            return 0.0
        count = self.unclassified if label == UNCLASSIFIED \
            else self.counts[label]
        return 100.0 * count / self.total

    def rows(self):
        """Return ``(label, count, percentage)`` rows, unclassified last."""
        rows = [(label, count, self.percentage(label))
                for label, count in self.counts.items()]
        rows.append((UNCLASSIFIED, self.unclassified,
                     self.percentage(UNCLASSIFIED)))
        return rows

    def by_class(self):
        """Aggregate journal counts per :class:`PublisherClass`."""
        totals = {publisher_class: 0 for publisher_class in PublisherClass}
        for rule in self.rules:
            totals[rule.root_class] += self.counts[rule.label]
        return totals


def journal_publishers(corpus):
    """Find the publisher of every source of a corpus.

    The most frequent non-empty PU value of the source's documents is used,
    ties go to the alphabetically first name.

    :param corpus: sequence of documents
    :returns: dict source name -> publisher, ``""`` if unknown
    """
    names = defaultdict(Counter)
    for doc in corpus:
        counter = names[doc.source_name]
        if doc.publisher:
            counter[doc.publisher] += 1
    publishers = {}
    for source, counter in names.items():
        ranked = sorted(counter.items(), key=lambda item: (-item[1], item[0]))
        publishers[source] = ranked[0][0] if ranked else ""
    return publishers


def publisher_profile(corpus, rules):
    """Classify the distinct journals of a corpus.

    Every journal is counted once, no matter how many documents it has.

    :param corpus: sequence of documents
    :param rules: list of :class:`RootRule`
    :returns: :class:`PublisherProfile`
    """
    counts = {rule.label: 0 for rule in rules}
    unclassified = 0
    publishers = journal_publishers(corpus)
    for source in sorted(publishers):
        label = classify_publisher(publishers[source], rules)
        if label == UNCLASSIFIED:
            unclassified += 1
        else:
            counts[label] += 1
    logger.debug("Classified %d journals, %d unclassified",
                 len(publishers), unclassified)
    return PublisherProfile(counts, unclassified, len(publishers),
                            tuple(rules))
