"""Batch audit toolkit for affiliate links in video descriptions.

Takes recorded crawl logs (redirect chains, storage activity, page hooks),
labels each outbound link as affiliate or not, grades how clearly the
surrounding description discloses the relationship, and rolls both up into
prevalence and compliance statistics with uncertainty estimates.
"""

SCHEMA_VERSION = 1
__version__ = "0.1.0"

__all__ = ["SCHEMA_VERSION", "__version__"]
