"""Overlay of corpus subject categories on a science basemap."""
import enum
import logging
import math
import os
from collections.abc import Mapping
from dataclasses import dataclass

import lxml.etree

from biblioscope.errors import BasemapError, OverlayError
from biblioscope.utils import fold_text, pajek_label

logger = logging.getLogger(__name__)

BASEMAP_COLUMNS = ("LABEL", "X", "Y", "MACRO", "COLOR")

# Size of the largest node
REFERENCE_SIZE = 1.0

DEFAULT_TOP_LABELS = 20

SVG_NAMESPACE = "http://www.w3.org/2000/svg"
SVG_WIDTH = 1000
SVG_HEIGHT = 700
SVG_MARGIN = 40
SVG_LEGEND_WIDTH = 220
SVG_MAX_RADIUS = 30.0


class Scaling(str, enum.Enum):
    """How node size follows document count."""

    AREA = "area"
    RADIUS = "radius"


class ExportFormat(str, enum.Enum):
    """Overlay output formats."""

    PAJEK = "pajek"
    SVG = "svg"


@dataclass(frozen=True)
class BasemapNode:
    """Position and macro-discipline of one category on the basemap."""

    label: str
    x: float
    y: float
    macro: str
    color: str


class Basemap:
    """Categories of a science map in file order."""

    def __init__(self, nodes):
        """Initialize basemap.

        :param nodes: list of :class:`BasemapNode`
        """
        self.nodes = list(nodes)
        self._by_key = {}
        for node in self.nodes:
            key = fold_text(node.label)
            if key in self._by_key:
                raise BasemapError(f"duplicate category {node.label!r}")
            self._by_key[key] = node

    def __len__(self):
        """Number of categories."""
        return len(self.nodes)

    def lookup(self, label):
        """Find a node by label ignoring case and whitespace.

        :returns: :class:`BasemapNode` or ``None``
        """
        return self._by_key.get(fold_text(label))

    def bounds(self):
        """Return ``(min_x, min_y, max_x, max_y)`` of the map."""
        xs = [node.x for node in self.nodes]
        ys = [node.y for node in self.nodes]
        return min(xs), min(ys), max(xs), max(ys)

    def normalized(self, node):
        """Coordinates of a node rescaled to the unit square."""
        min_x, min_y, max_x, max_y = self.bounds()
        x = (node.x - min_x) / (max_x - min_x) if max_x > min_x else 0.5
        y = (node.y - min_y) / (max_y - min_y) if max_y > min_y else 0.5
        return x, y

    def to_tsv(self):
        """Render the basemap in the TSV format read by
        :func:`load_basemap`.
        """
        lines = ["\t".join(BASEMAP_COLUMNS)]
        lines.extend(
            f"{node.label}\t{node.x!r}\t{node.y!r}\t{node.macro}\t{node.color}"
            for node in self.nodes
        )
        return "\n".join(lines) + "\n"


def _parse_basemap_line(fields, line_number):
    if len(fields) != len(BASEMAP_COLUMNS):
        raise BasemapError(
            f"expected {len(BASEMAP_COLUMNS)} tab separated fields, "
            f"found {len(fields)}",
            line=line_number
        )
    label, x, y, macro, color = (field.strip() for field in fields)
    if not label:
        raise BasemapError("empty category label", line=line_number)
    if not macro:
        raise BasemapError(f"category {label!r} has no macro-discipline",
                           line=line_number)
    try:
        x, y = float(x), float(y)
    except ValueError:
        raise BasemapError(f"non-numeric coordinate of {label!r}",
                           line=line_number)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise BasemapError(f"coordinate of {label!r} is not finite",
                           line=line_number)
    return BasemapNode(label, x, y, macro, color)


def load_basemap(path):
    """Load a basemap TSV file.

    Columns are LABEL, X, Y, MACRO and COLOR. A header row and lines
    starting with ``#`` are skipped.

    :param path: path to the basemap file
    :returns: :class:`Basemap`
    """
    nodes = []
    lines = {}
    try:
        with open(path, encoding="utf-8") as open_file:
            for line_number, line in enumerate(open_file, start=1):
                line = line.rstrip("\r\n")
                if not line.strip() or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if not nodes and fields[0].strip().upper() == "LABEL":
                    continue
                node = _parse_basemap_line(fields, line_number)
                key = fold_text(node.label)
                if key in lines:
                    raise BasemapError(
                        f"duplicate category {node.label!r}, first defined "
                        f"on line {lines[key]}",
                        line=line_number
                    )
                lines[key] = line_number
                nodes.append(node)
    except OSError as exception:
        raise BasemapError(f"Can not read {path}: {exception.strerror}")
    if not nodes:
        raise BasemapError(f"basemap {path} has no categories")
    logger.debug("Loaded basemap of %d categories from %s", len(nodes), path)
    return Basemap(nodes)


@dataclass(frozen=True)
class Overlay:
    """Corpus category counts placed on a basemap.

    ``counts`` and ``sizes`` cover every basemap category in basemap order.
    ``unmatched`` lists corpus categories missing from the basemap and
    ``matched`` the corpus categories found on it, both as written in the
    corpus.
    """

    basemap: Basemap
    counts: dict
    sizes: dict
    unmatched: tuple
    matched: tuple
    scaling: Scaling

    def area(self, label):
        """Area of the node of a category."""
        return math.pi * self.sizes[label] ** 2

    def ranked(self):
        """Nonzero nodes ordered by count, largest first."""
        return sorted(
            (node for node in self.basemap.nodes if self.counts[node.label]),
            key=lambda node: (-self.counts[node.label], node.label)
        )


def _count_items(category_counts):
    if isinstance(category_counts, Mapping):
        return list(category_counts.items())
    return [(volume.category, volume.count) for volume in category_counts]


def project_overlay(category_counts, basemap, scaling=Scaling.AREA):
    """Size basemap nodes by corpus document counts.

    The largest count gets :data:`REFERENCE_SIZE`. With ``AREA`` scaling
    node area is proportional to count, with ``RADIUS`` scaling the radius
    is.

    :param category_counts: mapping category -> count or list of
        :class:`~biblioscope.indicators.CategoryVolume`
    :param Basemap basemap: basemap to project on
    :param scaling: :class:`Scaling`
    :returns: :class:`Overlay`
    """
    scaling = Scaling(scaling)
    counts = {node.label: 0 for node in basemap.nodes}
    unmatched = set()
    matched = set()
    for category, count in _count_items(category_counts):
        node = basemap.lookup(category)
        if node is None:
            unmatched.add(category)
            continue
        matched.add(category)
        counts[node.label] += count

    largest = max(counts.values(), default=0)
    if largest <= 0:
        raise OverlayError("No corpus category with documents matches the "
                           "basemap")
    for category in sorted(unmatched):
        logger.warning("Category %r is not on the basemap", category)

    sizes = {}
    for label, count in counts.items():
        ratio = count / largest
        if scaling is Scaling.AREA:
            ratio = math.sqrt(ratio)
        sizes[label] = REFERENCE_SIZE * ratio
    return Overlay(basemap, counts, sizes, tuple(sorted(unmatched)),
                   tuple(sorted(matched)), scaling)


def render_pajek(overlay):
    """Render an overlay as Pajek network and vector texts.

    :param Overlay overlay: overlay to render
    :returns: tuple ``(net, vec)``
    """
    nodes = overlay.basemap.nodes
    net = [f"*Vertices {len(nodes)}"]
    vec = [f"*Vertices {len(nodes)}"]
    for number, node in enumerate(nodes, start=1):
        x, y = overlay.basemap.normalized(node)
        net.append(f"{number} {pajek_label(node.label)} {x:.4f} {y:.4f}")
        vec.append(f"{overlay.sizes[node.label]:.6f}")
    net.append("*Edges")
    return "\n".join(net) + "\n", "\n".join(vec) + "\n"


def _svg(tag):
    return f"{{{SVG_NAMESPACE}}}{tag}"


def render_svg(overlay, top_labels=DEFAULT_TOP_LABELS):
    """Render an overlay as a standalone SVG document.

    Every nonzero node is drawn as a circle filled with the color of its
    macro-discipline. The ``top_labels`` largest nodes are labelled.

    :param Overlay overlay: overlay to render
    :param int top_labels: number of labelled nodes
    :returns: SVG document as bytes
    """
    root = lxml.etree.Element(
        _svg("svg"),
        nsmap={None: SVG_NAMESPACE},
        version="1.1",
        width=str(SVG_WIDTH),
        height=str(SVG_HEIGHT),
        viewBox=f"0 0 {SVG_WIDTH} {SVG_HEIGHT}"
    )
    lxml.etree.SubElement(root, _svg("rect"), width=str(SVG_WIDTH),
                          height=str(SVG_HEIGHT), fill="white")
    nodes_group = lxml.etree.SubElement(root, _svg("g"), id="nodes")
    labels_group = lxml.etree.SubElement(root, _svg("g"), id="labels")

    plot_width = SVG_WIDTH - SVG_LEGEND_WIDTH - 2 * SVG_MARGIN
    plot_height = SVG_HEIGHT - 2 * SVG_MARGIN
    ranked = overlay.ranked()
    labelled = {node.label for node in ranked[:max(top_labels, 0)]}

    for node in ranked:
        x, y = overlay.basemap.normalized(node)
        cx = SVG_MARGIN + x * plot_width
        # SVG y axis points down
        cy = SVG_MARGIN + (1.0 - y) * plot_height
        circle = lxml.etree.SubElement(
            nodes_group, _svg("circle"),
            cx=f"{cx:.2f}",
            cy=f"{cy:.2f}",
            r=f"{overlay.sizes[node.label] * SVG_MAX_RADIUS:.2f}",
            fill=node.color or "gray",
            stroke="black"
        )
        circle.set("fill-opacity", "0.7")
        circle.set("stroke-width", "0.5")
        title = lxml.etree.SubElement(circle, _svg("title"))
        title.text = f"{node.label}: {overlay.counts[node.label]}"
        if node.label in labelled:
            text = lxml.etree.SubElement(labels_group, _svg("text"),
                                         x=f"{cx:.2f}", y=f"{cy:.2f}")
            text.set("font-size", "10")
            text.set("text-anchor", "middle")
            text.text = node.label

    colors = {}
    for node in ranked:
        colors.setdefault(node.macro, node.color)
    legend = lxml.etree.SubElement(root, _svg("g"), id="legend")
    legend_x = SVG_WIDTH - SVG_LEGEND_WIDTH
    for index, macro in enumerate(sorted(colors)):
        y = SVG_MARGIN + index * 18
        lxml.etree.SubElement(legend, _svg("rect"), x=str(legend_x),
                              y=str(y), width="12", height="12",
                              fill=colors[macro] or "gray")
        text = lxml.etree.SubElement(legend, _svg("text"),
                                     x=str(legend_x + 18), y=str(y + 10))
        text.set("font-size", "11")
        text.text = macro

    return lxml.etree.tostring(root, pretty_print=True, xml_declaration=True,
                               encoding="UTF-8")


def export_overlay(overlay, export_format, output_dir, stem="overlay",
                   top_labels=DEFAULT_TOP_LABELS):
    """Write an overlay to files.

    ``PAJEK`` writes ``<stem>.net`` and ``<stem>.vec``, ``SVG`` writes
    ``<stem>.svg``.

    :param Overlay overlay: overlay to export
    :param export_format: :class:`ExportFormat`
    :param output_dir: directory of the output files
    :param str stem: base name of the output files
    :param int top_labels: number of labelled nodes in SVG
    :returns: list of written paths
    """
    export_format = ExportFormat(export_format)
    if export_format is ExportFormat.PAJEK:
        net, vec = render_pajek(overlay)
        outputs = [(f"{stem}.net", net.encode("utf-8")),
                   (f"{stem}.vec", vec.encode("utf-8"))]
    else:
        outputs = [(f"{stem}.svg", render_svg(overlay, top_labels))]

    paths = []
    for name, content in outputs:
        path = os.path.join(output_dir, name)
        with open(path, "wb") as open_file:
            open_file.write(content)
        paths.append(path)
    return paths
