"""Configure py.test default values and functionality."""
import logging
import os
import random
import shutil
import sys
import tempfile

from click.testing import CliRunner
import pytest

# Prefer modules from source directory rather than from site-python
PROJECT_ROOT_PATH = os.path.abspath(
    os.path.join(os.path.dirname(__file__), '..')
)
sys.path.insert(0, PROJECT_ROOT_PATH)

import biblioscope.__main__  # noqa: E402
from biblioscope.config import RunConfig  # noqa: E402
from biblioscope.corpus import (Affiliation, Authorship,  # noqa: E402
                                CorpusBuilder, Document, link_document)
from biblioscope.tagfile import Origin, parse_file  # noqa: E402

# Print debug messages to stdout
logging.basicConfig(level=logging.DEBUG)

DATA_PATH = os.path.join(PROJECT_ROOT_PATH, 'tests', 'data')
GOLDEN_PATH = os.path.join(DATA_PATH, 'golden')

# Files written by every report on the two-index fixture corpus
FIXTURE_OUTPUTS = [
    ('stats', ['stats.tsv']),
    ('countries', ['countries.tsv']),
    ('publishers', ['publishers.tsv']),
    ('pairs', ['pairs.tsv']),
    ('graph', ['collaboration.net']),
    ('overlay', ['overlay.net', 'overlay.vec', 'overlay.svg',
                 'overlay_unmatched.tsv']),
    ('categories', ['categories.tsv']),
    ('crossrank', ['crossrank.tsv']),
]


def data_file(name):
    """Return path of a test data file."""
    return os.path.join(DATA_PATH, name)


def golden_file(name):
    """Return contents of a golden output file."""
    with open(os.path.join(GOLDEN_PATH, name), encoding='utf-8') as file_:
        return file_.read()


def golden_bytes(name):
    """Return contents of a golden output file as bytes."""
    with open(os.path.join(GOLDEN_PATH, name), 'rb') as file_:
        return file_.read()


@pytest.fixture(scope="function")
def testpath(request):
    """Create and cleanup a temporary directory.

    :request: Pytest request fixture
    """
    temp_path = tempfile.mkdtemp()

    def fin():
        """Remove temporary path."""
        shutil.rmtree(temp_path)
    request.addfinalizer(fin)

    return temp_path


@pytest.fixture(scope="function")
def cli_invoke():
    """Create a wrapper for CliRunner.invoke."""

    def wrapper(args, **kwargs):
        """Invoke a biblioscope CLI command in an isolated environment."""
        runner = CliRunner()
        result = runner.invoke(biblioscope.__main__.cli,
                               args,
                               catch_exceptions=False,
                               **kwargs)
        return result

    return wrapper


@pytest.fixture(autouse=True)
def no_default_config(monkeypatch):
    """Ignore configuration files of the host running the tests."""
    monkeypatch.delenv('BIBLIOSCOPE_CONFIG', raising=False)
    monkeypatch.setattr('biblioscope.config.DEFAULT_CONFIG_FILES', [])


@pytest.fixture
def sample_config():
    """Run configuration using the small maps of the sample corpora."""
    return RunConfig(
        countries=data_file('countries_sample.map'),
        regions=data_file('regions_sample.map'),
        basemap=data_file('basemap_sample.tsv')
    )


@pytest.fixture
def lexicon(sample_config):
    """Country lexicon of the sample corpora."""
    return sample_config.lexicon()


@pytest.fixture
def region_map(sample_config, lexicon):
    """Region map of the sample corpora."""
    return sample_config.region_map(lexicon)


def build_corpus(path, lexicon):
    """Parse an export file and build its linked documents."""
    builder = CorpusBuilder(lexicon)
    builder.add_records(parse_file(path, 'wos').records)
    return builder.documents()


@pytest.fixture
def wos_corpus(lexicon):
    """Linked documents of the WoS sample file."""
    return build_corpus(data_file('wos_sample.txt'), lexicon)


SURNAMES = ["Silva", "Perez", "Gomez", "Rossi", "Smith", "Lopez", "Costa",
            "Muller", "Tanaka", "Ruiz", "Brown", "Lee", "Garcia", "Souza"]
ADDRESSES = [
    ("Univ Sao Paulo, Sao Paulo", "Brazil"),
    ("Univ Chile, Santiago", "Chile"),
    ("Univ Nacl Colombia, Bogota", "Colombia"),
    ("UNAM, Mexico City", "Mexico"),
    ("Univ Buenos Aires, Buenos Aires", "Argentina"),
    ("Univ Barcelona, Barcelona", "Spain"),
    ("CNRS, Paris", "France"),
    ("Max Planck Inst, Jena", "Germany"),
    ("Univ Toronto, Toronto, ON", "Canada"),
    ("Stanford Univ, Stanford, CA 94305", "USA"),
    ("Inst Unknown, Atlantis", "Atlantis"),
]
CATEGORIES = ["Ecology", "Zoology", "Biodiversity Conservation",
              "Public Health", "Oncology", "Engineering, Aerospace"]
PUBLISHERS = ["SPRINGER", "ELSEVIER SCIENCE INC", "UNIV SAO PAULO",
              "TAYLOR & FRANCIS LTD", "SOC CHILENA", "EDITORA ACME", ""]


def make_export_text(n_records, seed, prefix="WOS"):
    """Generate a field-tagged export file of random records.

    :param int n_records: number of records
    :param int seed: random seed
    :param str prefix: accession number prefix
    :returns: export file text
    """
    rng = random.Random(seed)
    lines = ["FN Clarivate Analytics Web of Science", "VR 1.0"]
    for number in range(1, n_records + 1):
        authors = [f"{surname}, {rng.choice('ABCDEFGH')}"
                   for surname in rng.sample(SURNAMES, rng.randint(1, 4))]
        lines.append("PT J")
        lines.append(f"AU {authors[0]}")
        lines.extend(f"   {author}" for author in authors[1:])
        lines.append(f"TI Generated record {number}")
        lines.append(f"SO JOURNAL {rng.randint(1, 12)}")
        addresses = []
        for author in authors:
            institution, country = rng.choice(ADDRESSES)
            addresses.append(f"[{author}] {institution}, {country}.")
        lines.append(f"C1 {addresses[0]}")
        lines.extend(f"   {address}" for address in addresses[1:])
        lines.append(f"NR {rng.randint(0, 60)}")
        lines.append(f"TC {rng.randint(0, 30)}")
        publisher = rng.choice(PUBLISHERS)
        if publisher:
            lines.append(f"PU {publisher}")
        categories = rng.sample(CATEGORIES, rng.randint(1, 3))
        lines.append("WC " + "; ".join(categories))
        lines.append(f"PY {rng.randint(2010, 2020)}")
        lines.append(f"UT {prefix}:{number:015d}")
        lines.append("ER")
        lines.append("")
    lines.append("EF")
    return "\n".join(lines) + "\n"


@pytest.fixture
def generated_export(testpath):
    """Write a 200 record export file and return its path."""
    path = os.path.join(testpath, 'generated.txt')
    with open(path, 'w', encoding='utf-8') as file_:
        file_.write(make_export_text(200, seed=2016))
    return path


def make_document(number, authors=1, countries=(), times_cited=0,
                  n_cited_refs=0, categories=(), source="JOURNAL",
                  links=None):
    """Create a linked document with synthetic authors and addresses.

    ``links`` gives for every address the index of the author named in its
    bracketed prefix, or ``None``.
    """
    keys = [f"author{number}-{position},a" for position in range(authors)]
    affiliations = []
    for index, country in enumerate(countries):
        linked = ()
        if links is not None and links[index] is not None:
            linked = (keys[links[index]],)
        affiliations.append(
            Affiliation(f"Address {number}-{index}, {country}", linked,
                        country)
        )
    doc = Document(
        doc_id=f"{number:016d}", origin=Origin.WOS, year=2016,
        title=f"Title {number}", source_name=source, publisher="",
        doc_type="Article",
        authors=tuple(Authorship(key, key, position + 1)
                      for position, key in enumerate(keys)),
        affiliations=tuple(affiliations), times_cited=times_cited,
        n_cited_refs=n_cited_refs, categories=tuple(categories),
        language="English"
    )
    return link_document(doc)
