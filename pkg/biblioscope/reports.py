"""Reports computed from corpus stores."""
import enum
import logging
import os

import pandas

from biblioscope.collaboration import (build_collab_graph,
                                       count_region_pairs, export_pajek)
from biblioscope.errors import InputError
from biblioscope.indicators import (category_volume, country_production,
                                    cross_rank, summarize_corpus)
from biblioscope.overlay import ExportFormat, export_overlay, project_overlay
from biblioscope.publishers import UNCLASSIFIED, publisher_profile

logger = logging.getLogger(__name__)


class Report(str, enum.Enum):
    """Available reports."""

    STATS = "stats"
    COUNTRIES = "countries"
    PUBLISHERS = "publishers"
    PAIRS = "pairs"
    GRAPH = "graph"
    OVERLAY = "overlay"
    CATEGORIES = "categories"
    CROSSRANK = "crossrank"


def _number(value, digits=2):
    # Means, deviations, shares and percentages use two decimals
    return "" if value is None else f"{value:.{digits}f}"


def _optional(value):
    return "" if value is None else value


def write_tsv(path, columns, rows):
    """Write rows to a tab separated file with a header row.

    :param path: output path
    :param columns: column names
    :param rows: list of row tuples
    :returns: ``path``
    """
    frame = pandas.DataFrame(rows, columns=list(columns))
    frame.to_csv(path, sep="\t", index=False, lineterminator="\n")
    return path


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as open_file:
        open_file.write(text)
    return path


def stats_report(corpus, output_dir):
    """Write descriptive statistics of every attribute."""
    rows = [(summary.attribute.label, summary.total, _number(summary.mean),
             _number(summary.stddev), _optional(summary.distinct))
            for summary in summarize_corpus(corpus)]
    return [write_tsv(os.path.join(output_dir, "stats.tsv"),
                      ("Attribute", "N", "Mean", "SD", "Distinct"), rows)]


def countries_report(corpus, region_map, output_dir, lac_only=False):
    """Write whole, fractional and first-author counts per country."""
    lac_filter = set(region_map.lac_countries()) if lac_only else None
    rows = []
    for production in country_production(corpus, lac_filter):
        region = region_map.entries.get(production.country)
        rows.append((
            production.country,
            region.label if region else "",
            production.records,
            _number(100.0 * production.records / len(corpus)),
            _number(production.fractional, 4),
            production.first_author
        ))
    return [write_tsv(os.path.join(output_dir, "countries.tsv"),
                      ("Country", "Region", "Records", "Percentage",
                       "Fractional", "First author"), rows)]


def publishers_report(corpus, rules, output_dir):
    """Write journal counts per publisher root."""
    profile = publisher_profile(corpus, rules)
    classes = {rule.label: rule.root_class.value for rule in rules}
    rows = [(label, classes.get(label, "") if label != UNCLASSIFIED else "",
             count, _number(percentage))
            for label, count, percentage in profile.rows()]
    return [write_tsv(os.path.join(output_dir, "publishers.tsv"),
                      ("Root", "Class", "Journals", "Percentage"), rows)]


def pairs_report(corpus, region_map, output_dir, multiplicity=False):
    """Write ranked region pair counts."""
    tally = count_region_pairs(corpus, region_map, multiplicity=multiplicity)
    if tally.unresolved:
        logger.info("%d addresses with undetermined country",
                    tally.unresolved)
    return [write_tsv(os.path.join(output_dir, "pairs.tsv"),
                      ("Rank", "Number", "Collaboration"), tally.ranked())]


def graph_report(corpus, region_map, output_dir):
    """Write the collaboration network in Pajek format."""
    graph = build_collab_graph(corpus, region_map)
    return [_write_text(os.path.join(output_dir, "collaboration.net"),
                        export_pajek(graph))]


def overlay_report(corpus, basemap, output_dir, scaling, top_labels):
    """Write the overlay map as Pajek files and SVG."""
    overlay = project_overlay(category_volume(corpus), basemap, scaling)
    paths = export_overlay(overlay, ExportFormat.PAJEK, output_dir)
    paths += export_overlay(overlay, ExportFormat.SVG, output_dir,
                            top_labels=top_labels)
    paths.append(write_tsv(os.path.join(output_dir, "overlay_unmatched.tsv"),
                           ("Category",),
                           [(label,) for label in overlay.unmatched]))
    return paths


def categories_report(corpus, output_dir):
    """Write ranked subject category volumes."""
    rows = [(volume.rank, volume.category, volume.count,
             _number(volume.share))
            for volume in category_volume(corpus)]
    return [write_tsv(os.path.join(output_dir, "categories.tsv"),
                      ("Rank", "Category", "Documents", "Share"), rows)]


def crossrank_report(corpus_a, corpus_b, names, output_dir, top=None):
    """Write category rankings of two corpora side by side."""
    rows = [
        (row.category,
         _optional(row.rank_a), _optional(row.count_a), _number(row.share_a),
         _optional(row.rank_b), _optional(row.count_b), _number(row.share_b))
        for row in cross_rank(category_volume(corpus_a),
                              category_volume(corpus_b), top=top)
    ]
    name_a, name_b = names
    columns = ["Category"]
    for name in (name_a, name_b):
        columns += [f"{name} rank", f"{name} documents", f"{name} share"]
    return [write_tsv(os.path.join(output_dir, "crossrank.tsv"),
                      columns, rows)]


def _store_names(stores):
    names = [store.origin.value for store in stores]
    if names[0] == names[1]:
        return "a", "b"
    return tuple(names)


def run_report(report, stores, config, output_dir=None, lac_only=False,
               top=None):
    """Compute a report and write its files.

    :param report: :class:`Report` to run
    :param stores: list of one or two
        :class:`~biblioscope.store.CorpusStore`
    :param config: :class:`~biblioscope.config.RunConfig`
    :param output_dir: output directory, ``config.output_dir`` by default
    :param bool lac_only: report only LAC countries in COUNTRIES
    :param int top: rows of CROSSRANK, labelled nodes of OVERLAY
    :returns: list of written paths
    """
    report = Report(report)
    if report is Report.CROSSRANK and len(stores) < 2:
        raise InputError("crossrank report needs two stores")
    output_dir = output_dir or config.output_dir
    os.makedirs(output_dir, exist_ok=True)

    corpus = stores[0].load()
    logger.info("Running %s report on %d documents", report.value,
                len(corpus))

    if report is Report.STATS:
        return stats_report(corpus, output_dir)
    if report is Report.CATEGORIES:
        return categories_report(corpus, output_dir)
    if report is Report.PUBLISHERS:
        return publishers_report(corpus, config.rules(), output_dir)
    if report is Report.CROSSRANK:
        return crossrank_report(corpus, stores[1].load(),
                                _store_names(stores), output_dir, top=top)
    if report is Report.OVERLAY:
        return overlay_report(
            corpus, config.load_basemap(), output_dir, config.scaling,
            config.top_labels if top is None else top
        )

    region_map = config.region_map(config.lexicon())
    if report is Report.COUNTRIES:
        return countries_report(corpus, region_map, output_dir, lac_only)
    if report is Report.PAIRS:
        return pairs_report(corpus, region_map, output_dir,
                            config.multiplicity)
    return graph_report(corpus, region_map, output_dir)
