"""Co-authorship networks between countries and world regions."""
import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import networkx

from biblioscope.corpus import UNRESOLVED, Region
from biblioscope.utils import pajek_label

logger = logging.getLogger(__name__)

COUNTRY_NODE = "country"
REGION_NODE = "region"


def region_pair(region_a, region_b):
    """Return the canonical (sorted) key of an unordered region pair."""
    region_a, region_b = Region(region_a), Region(region_b)
    return tuple(sorted((region_a, region_b), key=lambda region: region.value))


@dataclass
class RegionPairTally:
    """Counts of unordered region pairs co-occurring in documents.

    ``unresolved`` counts addresses whose country could not be determined.
    """

    counts: Counter = field(default_factory=Counter)
    unresolved: int = 0

    def add(self, region_a, region_b, count=1):
        """Increment the count of a region pair."""
        self.counts[region_pair(region_a, region_b)] += count

    def __getitem__(self, pair):
        """Count of a pair given in any order."""
        return self.counts[region_pair(*pair)]

    def total(self):
        """Sum of all pair counts."""
        return sum(self.counts.values())

    def merge(self, other):
        """Add counts of another tally to this one."""
        self.counts.update(other.counts)
        self.unresolved += other.unresolved

    @staticmethod
    def label(pair):
        """Display label of a pair, e.g. ``"Europe-LAC"``."""
        return "-".join(region.label for region in pair)

    def ranked(self):
        """Return ``(rank, count, label)`` rows, largest count first.

        Ranks are dense, ties are ordered by label.
        """
        ordered = sorted(
            ((count, self.label(pair)) for pair, count in self.counts.items()
             if count > 0),
            key=lambda item: (-item[0], item[1])
        )
        rows = []
        rank = 0
        previous = None
        for count, label in ordered:
            if count != previous:
                rank += 1
                previous = count
            rows.append((rank, count, label))
        return rows


def document_country_set(doc):
    """Return resolved countries of a document and unresolved count.

    :param doc: :class:`~biblioscope.corpus.Document`
    :returns: ``(frozenset of countries, number of unresolved addresses)``
    """
    countries = frozenset(affiliation.country
                          for affiliation in doc.affiliations
                          if affiliation.country != UNRESOLVED)
    unresolved = sum(1 for affiliation in doc.affiliations
                     if affiliation.country == UNRESOLVED)
    return countries, unresolved


def count_region_pairs(corpus, region_map, multiplicity=False):
    """Tally region pairs of co-authoring countries.

    By default every unordered pair of distinct countries of a document is
    counted once. With ``multiplicity`` every pair of addresses in different
    countries is counted.

    :param corpus: sequence of documents
    :param region_map: :class:`~biblioscope.corpus.RegionMap`
    :param bool multiplicity: count address pairs instead of country pairs
    :returns: :class:`RegionPairTally`
    """
    tally = RegionPairTally()
    for doc in corpus:
        countries, unresolved = document_country_set(doc)
        tally.unresolved += unresolved
        if multiplicity:
            members = sorted(affiliation.country
                             for affiliation in doc.affiliations
                             if affiliation.country != UNRESOLVED)
        else:
            members = sorted(countries)
        for country_a, country_b in combinations(members, 2):
            if country_a == country_b:
                continue
            tally.add(region_map.entries[country_a],
                      region_map.entries[country_b])
    logger.debug("Counted %d region pairs, %d unresolved addresses",
                 tally.total(), tally.unresolved)
    return tally


class CollabGraph(networkx.Graph):
    """Undirected collaboration graph.

    LAC countries are individual nodes, all other countries are collapsed
    to their region. Node attribute ``weight`` is the number of documents
    the node takes part in and edge attribute ``weight`` the number of
    documents two nodes share.
    """

    def ordered_nodes(self):
        """Nodes in export order: countries, then regions, alphabetically."""
        return sorted(
            self.nodes,
            key=lambda node: (self.nodes[node]["kind"] != COUNTRY_NODE, node)
        )


def node_of(country, region_map):
    """Return the graph node a country is projected to."""
    region = region_map.entries[country]
    return country if region is Region.LAC else region.label


def build_collab_graph(corpus, region_map):
    """Build the country/region collaboration graph of a corpus.

    :param corpus: sequence of documents
    :param region_map: :class:`~biblioscope.corpus.RegionMap`
    :returns: :class:`CollabGraph`
    """
    graph = CollabGraph()
    for country in region_map.lac_countries():
        graph.add_node(country, kind=COUNTRY_NODE, weight=0)
    for region in Region:
        if region is not Region.LAC:
            graph.add_node(region.label, kind=REGION_NODE, weight=0)

    for doc in corpus:
        countries, _ = document_country_set(doc)
        nodes = sorted({node_of(country, region_map) for country in countries})
        for node in nodes:
            graph.nodes[node]["weight"] += 1
        for node_a, node_b in combinations(nodes, 2):
            if graph.has_edge(node_a, node_b):
                graph[node_a][node_b]["weight"] += 1
            else:
                graph.add_edge(node_a, node_b, weight=1)
    return graph


def export_pajek(graph):
    """Render a collaboration graph in Pajek ``.net`` format.

    Vertex sizes are node weights divided by the largest node weight.

    :param CollabGraph graph: graph to export
    :returns: Pajek network as text
    """
    nodes = graph.ordered_nodes()
    numbers = {node: number for number, node in enumerate(nodes, start=1)}
    largest = max((graph.nodes[node].get("weight", 0) for node in nodes),
                  default=0)

    lines = [f"*Vertices {len(nodes)}"]
    for node in nodes:
        weight = graph.nodes[node].get("weight", 0)
        size = weight / largest if largest else 0.0
        lines.append(f"{numbers[node]} {pajek_label(node)} {size:.4f}")

    lines.append("*Edges")
    edges = sorted(
        tuple(sorted((numbers[node_a], numbers[node_b]))) + (data["weight"],)
        for node_a, node_b, data in graph.edges(data=True)
    )
    lines.extend(f"{number_a} {number_b} {weight}"
                 for number_a, number_b, weight in edges)
    return "\n".join(lines) + "\n"
