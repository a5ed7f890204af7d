"""Tests for `biblioscope.store` module."""
import dataclasses
import json
import os
import time

import pytest

from biblioscope.errors import InputError, StoreIntegrityError
from biblioscope.store import TABLES, CorpusStore, ingest
from biblioscope.tagfile import Origin, Severity
from tests.conftest import build_corpus, data_file, make_export_text


def read_files(directory):
    """Return contents of every file of a directory keyed by name."""
    contents = {}
    for name in sorted(os.listdir(directory)):
        with open(os.path.join(directory, name), "rb") as file_:
            contents[name] = file_.read()
    return contents


def test_ingest_generated_export(testpath, generated_export, sample_config):
    """Test that every generated record ends up in the store."""
    store = ingest([generated_export], "wos", sample_config,
                   os.path.join(testpath, "store"))

    manifest = store.manifest()
    documents = store.load()

    assert store.origin is Origin.WOS
    assert manifest["format_version"] == 1
    assert manifest["counts"]["documents"] == len(documents) == 200
    assert manifest["counts"]["authorships"] \
        == sum(len(doc.authors) for doc in documents)
    assert manifest["counts"]["affiliations"] \
        == sum(len(doc.affiliations) for doc in documents)
    assert manifest["counts"]["categories"] \
        == sum(len(doc.categories) for doc in documents)
    assert sorted(manifest["inputs"]) == ["generated.txt"]
    assert sorted(manifest["config"]) \
        == ["basemap", "countries", "publisher_rules", "regions"]
    assert store.verify() == 200


def test_load_returns_built_documents(testpath, sample_config, lexicon):
    """Test that loading gives back the documents that were written."""
    path = data_file('wos_sample.txt')
    store = ingest([path], Origin.WOS, sample_config,
                   os.path.join(testpath, "store"))

    loaded = store.load()

    assert loaded == build_corpus(path, lexicon)
    assert loaded[0].source_location.file == "wos_sample.txt"


def test_ingest_twice_is_identical(testpath, generated_export,
                                   sample_config, monkeypatch):
    """Test that repeated ingests give byte-identical stores."""
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1500000000")
    first = ingest([generated_export], "wos", sample_config,
                   os.path.join(testpath, "first"))
    second = ingest([generated_export], "wos", sample_config,
                    os.path.join(testpath, "second"))

    assert read_files(first.path) == read_files(second.path)
    assert first.manifest()["ingested"] == "2017-07-14T02:40:00Z"


def test_ingest_with_workers(testpath, sample_config, monkeypatch):
    """Test that parser threads do not change the store."""
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    paths = [data_file('wos_sample.txt'), data_file('corrupted.txt')]
    threaded_config = dataclasses.replace(sample_config, workers=4)

    serial = ingest(paths, "wos", sample_config,
                    os.path.join(testpath, "serial"))
    threaded = ingest(paths, "wos", threaded_config,
                      os.path.join(testpath, "threaded"))

    assert read_files(serial.path) == read_files(threaded.path)


def test_ingest_large_export_in_time(testpath, sample_config):
    """Test that a 20000 record export is ingested in reasonable time."""
    path = os.path.join(testpath, "large.txt")
    with open(path, "w", encoding="utf-8") as file_:
        file_.write(make_export_text(20000, seed=7))

    start = time.perf_counter()
    store = ingest([path], "wos", sample_config,
                   os.path.join(testpath, "store"))
    elapsed = time.perf_counter() - start

    assert store.manifest()["counts"]["documents"] == 20000
    assert elapsed < 60


def test_ingest_corrupted_file(testpath, sample_config):
    """Test that parse errors are kept in the store."""
    store = ingest([data_file('corrupted.txt')], "wos", sample_config,
                   os.path.join(testpath, "store"))

    errors = [diagnostic for diagnostic in store.diagnostics()
              if diagnostic.severity is Severity.ERROR]
    assert store.manifest()["diagnostics"]["ERROR"] == len(errors) >= 1
    assert (errors[0].location.file, errors[0].location.line) \
        == ("corrupted.txt", 11)


def test_ingest_empty_file(testpath, sample_config):
    """Test that a file without records is rejected by name."""
    path = os.path.join(testpath, "empty.txt")
    with open(path, "w", encoding="utf-8") as file_:
        file_.write("FN Clarivate Analytics Web of Science\nVR 1.0\nEF\n")

    with pytest.raises(InputError) as error:
        ingest([data_file('wos_sample.txt'), path], "wos", sample_config,
               os.path.join(testpath, "store"))

    assert "empty.txt" in error.value.message
    assert not os.path.exists(os.path.join(testpath, "store"))


def test_ingest_without_files(testpath, sample_config):
    """Test that ingest needs input files."""
    with pytest.raises(InputError):
        ingest([], "wos", sample_config, os.path.join(testpath, "store"))


def test_ingest_missing_file(testpath, sample_config):
    """Test that an unreadable input file is an input error."""
    with pytest.raises(InputError):
        ingest([os.path.join(testpath, "missing.txt")], "wos",
               sample_config, os.path.join(testpath, "store"))


def test_not_a_store(testpath):
    """Test that a directory without manifest is not a store."""
    with pytest.raises(InputError):
        CorpusStore(testpath).load()


def test_verify_detects_removed_rows(testpath, sample_config):
    """Test that deleting table rows breaks manifest counts."""
    store = ingest([data_file('wos_sample.txt')], "wos", sample_config,
                   os.path.join(testpath, "store"))
    path = store.table_path("categories")
    with open(path, encoding="utf-8") as file_:
        lines = file_.readlines()
    with open(path, "w", encoding="utf-8") as file_:
        file_.writelines(lines[:-1])

    with pytest.raises(StoreIntegrityError) as error:
        store.verify()

    assert "categories" in error.value.message


def test_verify_detects_orphans(testpath, sample_config):
    """Test that rows of unknown documents are found."""
    store = ingest([data_file('wos_sample.txt')], "wos", sample_config,
                   os.path.join(testpath, "store"))
    with open(store.table_path("authorships"), "a",
              encoding="utf-8") as file_:
        file_.write("ffffffffffffffff\t1\tNobody, X\tnobody,x\t\t\n")
    with open(store.manifest_path, encoding="utf-8") as file_:
        manifest = json.load(file_)
    manifest["counts"]["authorships"] += 1
    with open(store.manifest_path, "w", encoding="utf-8") as file_:
        json.dump(manifest, file_)

    with pytest.raises(StoreIntegrityError) as error:
        store.verify()

    assert "unknown doc_id ffffffffffffffff" in error.value.message


def test_verify_detects_missing_table(testpath, sample_config):
    """Test that every table must exist."""
    store = ingest([data_file('wos_sample.txt')], "wos", sample_config,
                   os.path.join(testpath, "store"))
    os.remove(store.table_path("sources"))

    with pytest.raises(StoreIntegrityError):
        store.verify()


def test_table_headers(testpath, sample_config):
    """Test that every table starts with its header row."""
    store = ingest([data_file('scielo_sample.txt')], "scielo",
                   sample_config, os.path.join(testpath, "store"))

    for name, columns in TABLES.items():
        with open(store.table_path(name), encoding="utf-8") as file_:
            assert file_.readline() == "\t".join(columns) + "\n"
    assert store.origin is Origin.SCIELO
