"""Tests for `biblioscope.overlay` module."""
import math
import os
import random

import lxml.etree
import pytest

from biblioscope.errors import BasemapError, OverlayError
from biblioscope.indicators import category_volume
from biblioscope.overlay import (SVG_NAMESPACE, Basemap, BasemapNode,
                                 ExportFormat, Scaling, export_overlay,
                                 load_basemap, project_overlay, render_pajek,
                                 render_svg)
from tests.conftest import data_file, golden_file

SVG = {"svg": SVG_NAMESPACE}


def write_basemap(path, content):
    """Write basemap text to ``path`` and return the path."""
    with open(path, "w", encoding="utf-8") as file_:
        file_.write(content)
    return path


@pytest.fixture
def sample_basemap():
    """Basemap of the sample corpora."""
    return load_basemap(data_file('basemap_sample.tsv'))


def test_load_small_basemap(testpath):
    """Test loading of a three line basemap without header."""
    path = write_basemap(
        os.path.join(testpath, "basemap.tsv"),
        "Ecology\t1.5\t2\tEnviron\t#00ff00\n"
        "# comment\n"
        "Oncology\t-3\t0.25\tClinical Med\t#ff0000\n"
        "Zoology\t0\t0\tAgri Sci\t\n"
    )

    basemap = load_basemap(path)

    assert [node.label for node in basemap.nodes] \
        == ["Ecology", "Oncology", "Zoology"]
    assert basemap.nodes[1] \
        == BasemapNode("Oncology", -3.0, 0.25, "Clinical Med", "#ff0000")
    assert basemap.lookup("  ecology ") is basemap.nodes[0]
    assert basemap.lookup("Botany") is None
    assert basemap.bounds() == (-3.0, 0.0, 1.5, 2.0)


@pytest.mark.parametrize(
    ('content', 'line'),
    [
        ("LABEL\tX\tY\tMACRO\tCOLOR\nEcology\t1\t2\tEnv\t#0f0\n"
         "ECOLOGY\t3\t4\tEnv\t#0f0\n", 3),
        ("Ecology\t1\tnorth\tEnv\t#0f0\n", 1),
        ("Ecology\t1\t2\tEnv\t#0f0\nZoology\tnan\t2\tAgri\t#f00\n", 2),
        ("Ecology\t1\t2\tEnv\n", 1),
        ("Ecology\t1\t2\t\t#0f0\n", 1),
    ]
)
def test_invalid_basemap(testpath, content, line):
    """Test that basemap errors report the offending line."""
    path = write_basemap(os.path.join(testpath, "basemap.tsv"), content)

    with pytest.raises(BasemapError) as error:
        load_basemap(path)

    assert error.value.line == line
    assert f"line {line}:" in error.value.message


def test_empty_basemap(testpath):
    """Test that a basemap without categories is rejected."""
    path = write_basemap(os.path.join(testpath, "basemap.tsv"),
                         "LABEL\tX\tY\tMACRO\tCOLOR\n")

    with pytest.raises(BasemapError):
        load_basemap(path)


def test_full_size_basemap(testpath):
    """Test that a generated map of 224 categories loads unchanged."""
    rng = random.Random(224)
    nodes = [
        BasemapNode(f"Category {number}", rng.uniform(-100, 100),
                    rng.uniform(-100, 100), f"Macro {number % 18}",
                    f"#{number:06x}")
        for number in range(224)
    ]
    path = write_basemap(os.path.join(testpath, "basemap.tsv"),
                         Basemap(nodes).to_tsv())

    basemap = load_basemap(path)

    assert len(basemap) == 224
    assert basemap.nodes == nodes


def test_area_scaling():
    """Test that node area is proportional to count."""
    basemap = Basemap([BasemapNode("A", 0, 0, "M", ""),
                       BasemapNode("B", 1, 1, "M", "")])

    overlay = project_overlay({"A": 100, "B": 25}, basemap)

    assert overlay.sizes == {"A": 1.0, "B": 0.5}
    assert overlay.area("A") / overlay.area("B") == pytest.approx(4.0)


def test_radius_scaling():
    """Test that node radius is proportional to count."""
    basemap = Basemap([BasemapNode("A", 0, 0, "M", ""),
                       BasemapNode("B", 1, 1, "M", "")])

    overlay = project_overlay({"A": 100, "B": 25}, basemap, "radius")

    assert overlay.scaling is Scaling.RADIUS
    assert overlay.sizes == {"A": 1.0, "B": 0.25}


def test_unmatched_categories(sample_basemap, caplog):
    """Test that categories missing from the basemap are reported."""
    overlay = project_overlay({"Ecology": 3, "Engineering, Aerospace": 7},
                              sample_basemap)

    assert overlay.unmatched == ("Engineering, Aerospace",)
    assert overlay.matched == ("Ecology",)
    assert overlay.sizes["Ecology"] == 1.0
    assert "Engineering, Aerospace" in caplog.text


def test_matched_categories_keep_corpus_spelling(sample_basemap):
    """Test that matched categories are listed as written in the corpus."""
    overlay = project_overlay({"ECOLOGY": 3, "zoology": 1}, sample_basemap)

    assert overlay.matched == ("ECOLOGY", "zoology")
    assert overlay.counts["Ecology"] == 3
    assert overlay.unmatched == ()


def test_no_matching_category(sample_basemap):
    """Test that an overlay needs at least one counted category."""
    with pytest.raises(OverlayError):
        project_overlay({"Engineering, Aerospace": 7}, sample_basemap)
    with pytest.raises(OverlayError):
        project_overlay({"Ecology": 0}, sample_basemap)


@pytest.mark.parametrize('scaling', list(Scaling))
def test_scale_invariance(sample_basemap, scaling):
    """Test that multiplying all counts keeps node sizes."""
    rng = random.Random(17)
    labels = [node.label for node in sample_basemap.nodes]
    for _ in range(100):
        counts = {label: rng.randint(0, 50) for label in labels}
        counts[rng.choice(labels)] += 1
        factor = rng.randint(2, 1000)

        sizes = project_overlay(counts, sample_basemap, scaling).sizes
        scaled = project_overlay(
            {label: count * factor for label, count in counts.items()},
            sample_basemap, scaling
        ).sizes

        for label in labels:
            assert scaled[label] == pytest.approx(sizes[label], rel=1e-12)


def test_area_is_proportional_to_count(sample_basemap):
    """Test that area over count is the same for every nonzero node."""
    rng = random.Random(23)
    labels = [node.label for node in sample_basemap.nodes]
    for _ in range(100):
        counts = {label: rng.randint(1, 500) for label in labels}

        overlay = project_overlay(counts, sample_basemap)

        ratios = [overlay.area(label) / counts[label] for label in labels]
        assert max(ratios) == pytest.approx(min(ratios), rel=1e-9)
        assert max(overlay.sizes.values()) == 1.0


def test_sample_pajek(wos_corpus, sample_basemap):
    """Test Pajek network and vector of the WoS sample overlay."""
    overlay = project_overlay(category_volume(wos_corpus), sample_basemap)

    net, vec = render_pajek(overlay)

    assert net == golden_file('overlay.net')
    assert vec == golden_file('overlay.vec')


def test_pajek_quotes_in_labels():
    """Test that double quotes in category labels are not written."""
    basemap = Basemap([BasemapNode('Engineering "Other"', 0, 0, "M", ""),
                       BasemapNode("Ecology", 1, 1, "M", "")])

    net, _ = render_pajek(project_overlay({"Ecology": 2}, basemap))

    assert net.splitlines()[1:3] == [
        "1 \"Engineering 'Other'\" 0.0000 0.0000",
        '2 "Ecology" 1.0000 1.0000',
    ]


def test_svg(sample_basemap):
    """Test that only nonzero nodes are drawn."""
    overlay = project_overlay({"Ecology": 4, "Oncology": 1}, sample_basemap)

    svg = lxml.etree.fromstring(render_svg(overlay, top_labels=1))

    circles = svg.findall("svg:g[@id='nodes']/svg:circle", SVG)
    assert len(circles) == 2
    assert [circle.get("fill") for circle in circles] \
        == ["#2ca02c", "#9467bd"]
    assert circles[0].findtext("svg:title", namespaces=SVG) == "Ecology: 4"
    assert float(circles[0].get("r")) == 2 * float(circles[1].get("r"))
    assert [text.text for text
            in svg.findall("svg:g[@id='labels']/svg:text", SVG)] \
        == ["Ecology"]
    assert [text.text for text
            in svg.findall("svg:g[@id='legend']/svg:text", SVG)] \
        == ["Clinical Med", "Environ Sci & Tech"]


def test_export_overlay(testpath, sample_basemap):
    """Test written files and that zero nodes stay in the vector."""
    overlay = project_overlay({"Ecology": 4, "Zoology": 2}, sample_basemap)

    paths = export_overlay(overlay, ExportFormat.PAJEK, testpath)
    paths += export_overlay(overlay, "svg", testpath, stem="map")

    assert [os.path.basename(path) for path in paths] \
        == ["overlay.net", "overlay.vec", "map.svg"]
    with open(paths[1], encoding="utf-8") as file_:
        assert file_.read().splitlines()[1:] == [
            "1.000000", f"{math.sqrt(0.5):.6f}", "0.000000", "0.000000",
            "0.000000"
        ]
    with open(paths[2], "rb") as file_:
        svg = lxml.etree.parse(file_).getroot()
    assert len(svg.findall("svg:g[@id='nodes']/svg:circle", SVG)) == 2


def test_export_is_deterministic(testpath, sample_basemap):
    """Test that exporting twice gives identical bytes."""
    counts = {"Ecology": 4, "Zoology": 2, "Public Health": 9}
    outputs = []
    for run, items in enumerate((counts, dict(reversed(counts.items())))):
        directory = os.path.join(testpath, str(run))
        os.mkdir(directory)
        overlay = project_overlay(items, sample_basemap)
        contents = []
        for export_format in ExportFormat:
            for path in export_overlay(overlay, export_format, directory):
                with open(path, "rb") as file_:
                    contents.append(file_.read())
        outputs.append(contents)

    assert outputs[0] == outputs[1]
