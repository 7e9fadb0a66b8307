"""Exception types shared by the engine, service and CLI layers.

Every engine failure maps to exactly one machine-readable code so the
HTTP layer can translate it without guessing.
"""

from __future__ import annotations


class SiteSelectError(Exception):
    """Base class; `code` is the stable machine-readable identifier."""

    code = "internal_error"


class UnknownSiteError(SiteSelectError):
    code = "unknown_site"

    def __init__(self, site_id: str):
        super().__init__(f"unknown site: {site_id!r}")
        self.site_id = site_id


class UnknownFactorError(SiteSelectError):
    code = "unknown_factor"

    def __init__(self, factor_id: str):
        super().__init__(f"unknown factor: {factor_id!r}")
        self.factor_id = factor_id


class UnknownLevelError(SiteSelectError):
    code = "unknown_level"

    def __init__(self, level: object):
        super().__init__(f"unknown level: {level!r}")
        self.level = level


class BadPredicateError(SiteSelectError):
    code = "bad_predicate"


class BadQueryError(SiteSelectError):
    """Structurally invalid query parameters (bad time, bad k, inverted range...)."""

    code = "bad_query"


class ChildlessParentError(SiteSelectError):
    code = "childless_parent"

    def __init__(self, site_id: str):
        super().__init__(f"site {site_id!r} has no children to map")
        self.site_id = site_id


class BundleError(SiteSelectError):
    """Bundle could not be loaded: I/O, parse or validation failure.

    `issues` carries the aggregated validation findings when the data
    parsed but did not validate.
    """

    code = "invalid_bundle"

    def __init__(self, message: str, issues: list | None = None):
        super().__init__(message)
        self.issues = issues or []

    def __str__(self) -> str:
        base = super().__str__()
        if not self.issues:
            return base
        shown = "; ".join(i.message for i in self.issues[:5])
        more = f"; +{len(self.issues) - 5} more" if len(self.issues) > 5 else ""
        return f"{base}: {shown}{more}"
