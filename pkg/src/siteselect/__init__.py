"""siteselect: hierarchical geo-referenced location factors over time, with
lookup/search/comparison queries, checklist scoring, choropleth views, an
HTTP service and a CLI.
"""

from .hierarchy import AggregatedValue, aggregate_value, children, level_members, parent, path_to_root
from .ingest import load_bundle
from .model import (
    AdminLevel,
    DatasetSnapshot,
    FactorDefinition,
    FactorValue,
    Site,
    TimePoint,
    build_snapshot,
    validate_snapshot,
)
from .query import (
    ChecklistCriterion,
    ChecklistTable,
    Predicate,
    WhereQuery,
    checklist_score,
    compare_sites,
    lookup_what,
    search_when,
    search_where,
)
from .synth import generate_synthetic
from .views import build_choropleth, build_insights, build_series_view, child_statistics, classify, data_table

__version__ = "0.1.0"

__all__ = [
    "AdminLevel",
    "AggregatedValue",
    "ChecklistCriterion",
    "ChecklistTable",
    "DatasetSnapshot",
    "FactorDefinition",
    "FactorValue",
    "Predicate",
    "Site",
    "TimePoint",
    "WhereQuery",
    "aggregate_value",
    "build_choropleth",
    "build_insights",
    "build_series_view",
    "build_snapshot",
    "checklist_score",
    "child_statistics",
    "children",
    "classify",
    "compare_sites",
    "data_table",
    "generate_synthetic",
    "level_members",
    "load_bundle",
    "lookup_what",
    "parent",
    "path_to_root",
    "search_when",
    "search_where",
    "validate_snapshot",
    "__version__",
]
