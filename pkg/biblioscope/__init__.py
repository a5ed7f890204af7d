"""Expose public interface from submodules."""
from .collaboration import (CollabGraph, RegionPairTally,  # noqa: F401
                            build_collab_graph, count_region_pairs,
                            document_country_set, export_pajek)
from .config import RunConfig, load_run_config  # noqa: F401
from .corpus import (UNRESOLVED, Affiliation, Authorship,  # noqa: F401
                     CorpusBuilder, Document, Lexicon, Region, RegionMap,
                     build_document, extract_country, link_authors_addresses,
                     normalize_author, region_of)
from .errors import (BasemapError, BiblioscopeError,  # noqa: F401
                     ConfigurationError, IndicatorError, InputError,
                     OverlayError, RecordRejectedError, StoreIntegrityError)
from .indicators import (Attribute, AttributeSummary,  # noqa: F401
                         CategoryVolume, CountryProduction, CrossRankRow,
                         category_volume, country_production, cross_rank,
                         summarize_attribute, summarize_corpus)
from .overlay import (Basemap, ExportFormat, Overlay,  # noqa: F401
                      Scaling, export_overlay, load_basemap, project_overlay)
from .publishers import (UNCLASSIFIED, PublisherClass,  # noqa: F401
                         PublisherProfile, RootRule, classify_publisher,
                         load_rules, publisher_profile)
from .reports import Report, run_report  # noqa: F401
from .store import CorpusStore, ingest  # noqa: F401
from .tagfile import (Location, Origin, ParseDiagnostic,  # noqa: F401
                      ParseResult, Severity, TaggedRecord, field_values,
                      parse_file, parse_files, parse_stream, serialize_record)
