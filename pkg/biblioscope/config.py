"""Run configuration and the map files it refers to."""
import configparser
import logging
import os
from dataclasses import dataclass, fields, replace
from typing import Optional

import click

from biblioscope.corpus import Lexicon, RegionMap
from biblioscope.errors import BasemapError, ConfigurationError
from biblioscope.overlay import DEFAULT_TOP_LABELS, Scaling, load_basemap
from biblioscope.publishers import DEFAULT_RULES_PATH, load_rules
from biblioscope.utils import sha256_file

logger = logging.getLogger(__name__)

CONFIG_SECTION = "biblioscope"
CONFIG_ENV = "BIBLIOSCOPE_CONFIG"

DEFAULT_CONFIG_FILES = [
    "/etc/biblioscope.cfg",
    f"{click.get_app_dir('biblioscope')}/biblioscope.cfg",
    "~/.biblioscope.cfg",
]

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
DEFAULT_COUNTRIES_PATH = os.path.join(DATA_DIR, "countries.map")
DEFAULT_REGIONS_PATH = os.path.join(DATA_DIR, "regions.map")

PATH_KEYS = ("countries", "regions", "publisher_rules", "basemap",
             "output_dir")


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by all commands.

    ``region_overrides`` is a tuple of ``(country, region)`` pairs applied on
    top of the region map.
    """

    countries: str = DEFAULT_COUNTRIES_PATH
    regions: str = DEFAULT_REGIONS_PATH
    publisher_rules: str = DEFAULT_RULES_PATH
    basemap: Optional[str] = None
    multiplicity: bool = False
    scaling: Scaling = Scaling.AREA
    output_dir: str = "."
    top_labels: int = DEFAULT_TOP_LABELS
    region_overrides: tuple = ()
    workers: int = 1
    verbose: bool = False

    def lexicon(self):
        """Load the country lexicon."""
        return Lexicon.load(self.countries)

    def region_map(self, lexicon=None):
        """Load the region map with overrides applied.

        When ``lexicon`` is given, every lexicon country must have a region.
        """
        region_map = RegionMap.load(self.regions)
        if self.region_overrides:
            region_map = region_map.with_overrides(dict(self.region_overrides))
        if lexicon is not None:
            region_map.validate(lexicon)
        return region_map

    def rules(self):
        """Load publisher classification rules."""
        return load_rules(self.publisher_rules)

    def load_basemap(self):
        """Load the configured basemap.

        :returns: :class:`~biblioscope.overlay.Basemap`
        """
        if not self.basemap:
            raise ConfigurationError("basemap is not configured")
        try:
            return load_basemap(self.basemap)
        except BasemapError as exception:
            raise ConfigurationError(exception.message, path=self.basemap)

    def validate(self):
        """Load and cross-check every map file the configuration names."""
        lexicon = self.lexicon()
        self.region_map(lexicon)
        self.rules()
        if self.basemap:
            self.load_basemap()
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")
        if self.top_labels < 0:
            raise ConfigurationError("top_labels must not be negative")

    def map_checksums(self):
        """SHA-256 checksums of the map files, keyed by setting name."""
        checksums = {}
        for name in ("countries", "regions", "publisher_rules", "basemap"):
            path = getattr(self, name)
            if path:
                checksums[name] = sha256_file(path)
        return checksums


def find_config_file(path=None):
    """Choose the configuration file to read.

    An explicitly given path wins, then :data:`CONFIG_ENV`, then the first
    existing file of :data:`DEFAULT_CONFIG_FILES`.

    :param path: configuration file given on command line
    :returns: path of the file or ``None``
    """
    for explicit in (path, os.environ.get(CONFIG_ENV)):
        if explicit:
            explicit = os.path.expanduser(explicit)
            if not os.path.isfile(explicit):
                raise ConfigurationError(
                    f"Configuration file {explicit} not found."
                )
            return explicit

    for file_ in DEFAULT_CONFIG_FILES:
        file_ = os.path.expanduser(str(file_))
        if os.path.isfile(file_):
            return file_
    return None


def _read_section(path):
    """Read the configuration section of a file.

    Files without any section header are read as bare ``key=value`` lines.
    """
    configuration = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as open_file:
            text = open_file.read()
    except OSError as exception:
        raise ConfigurationError(
            f"can not read file: {exception.strerror}", path=path
        )
    try:
        try:
            configuration.read_string(text, source=path)
        except configparser.MissingSectionHeaderError:
            configuration.read_string(f"[{CONFIG_SECTION}]\n{text}",
                                      source=path)
    except configparser.Error as exception:
        raise ConfigurationError(str(exception).replace("\n", " "),
                                 path=path)

    unknown = [name for name in configuration.sections()
               if name != CONFIG_SECTION]
    if unknown:
        raise ConfigurationError(f"unknown section [{unknown[0]}]", path=path)
    if not configuration.has_section(CONFIG_SECTION):
        return {}
    return dict(configuration[CONFIG_SECTION])


def parse_region_overrides(text):
    """Parse ``"Country:REGION, Country:REGION"`` into pairs."""
    overrides = []
    for item in text.split(","):
        if not item.strip():
            continue
        country, separator, region = item.rpartition(":")
        if not separator or not country.strip() or not region.strip():
            raise ConfigurationError(
                f"invalid region override {item.strip()!r}"
            )
        overrides.append((country.strip(), region.strip().upper()))
    return tuple(overrides)


def _convert(key, value):
    if key in ("multiplicity", "verbose"):
        if isinstance(value, bool):
            return value
        states = configparser.ConfigParser.BOOLEAN_STATES
        if str(value).lower() not in states:
            raise ConfigurationError(f"{key} must be a boolean, not {value!r}")
        return states[str(value).lower()]
    if key in ("top_labels", "workers"):
        try:
            return int(value)
        except ValueError:
            raise ConfigurationError(
                f"{key} must be an integer, not {value!r}"
            )
    if key == "scaling":
        try:
            return Scaling(str(value).lower())
        except ValueError:
            raise ConfigurationError(
                f"scaling must be 'area' or 'radius', not {value!r}"
            )
    if key == "region_overrides":
        if isinstance(value, tuple):
            return value
        return parse_region_overrides(value)
    return value


def load_run_config(path=None, **overrides):
    """Build the run configuration.

    Values of the configuration file override defaults, and ``overrides``
    that are not ``None`` override the file. Relative paths in the file are
    relative to the file's directory.

    :param path: configuration file given on command line
    :param overrides: settings given on command line
    :returns: :class:`RunConfig`
    """
    config_file = find_config_file(path)
    values = {}
    if config_file:
        logger.debug("Reading configuration from %s", config_file)
        base_dir = os.path.dirname(os.path.abspath(config_file))
        for key, value in _read_section(config_file).items():
            if key in PATH_KEYS and value:
                value = os.path.join(base_dir, os.path.expanduser(value))
            values[key] = value

    for key, value in overrides.items():
        if value is not None:
            values[key] = value

    known = {field_.name for field_ in fields(RunConfig)}
    for key in values:
        if key not in known:
            raise ConfigurationError(f"invalid parameter {key}",
                                     path=config_file)

    try:
        return replace(RunConfig(), **{key: _convert(key, value)
                                       for key, value in values.items()})
    except ConfigurationError as exception:
        raise ConfigurationError(exception.message, path=config_file)
