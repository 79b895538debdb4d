"""URL normalization and parsing helpers shared across the toolkit.

Everything downstream (pattern matching, graph node keys, link dedup) assumes
URLs went through normalize_url once at ingest, so the rules live in one place:
lowercase the scheme and host, drop a default port, keep the query string in
its original order.
"""

from __future__ import annotations

import re
from urllib.parse import urlsplit

DEFAULT_PORTS = {"http": 80, "https": 443}

# Scheme-prefixed URLs inside free text. Trailing sentence punctuation is
# stripped afterwards, not here, so the pattern stays simple.
_URL_RE = re.compile(r"https?://[^\s<>\"]+", re.IGNORECASE)

# Characters that are almost always sentence punctuation when they end a URL
# found in prose.
_TRAILING_JUNK = ".,;:!?'\")]}"


class UrlError(ValueError):
    """Raised when a string cannot be treated as an absolute http(s) URL."""


def normalize_url(url: str) -> str:
    """Return the canonical form of an absolute http(s) URL.

    Lowercases scheme and host, removes an explicit default port, and leaves
    path, query (order included), and fragment untouched.
    """
    parts = urlsplit(url)
    scheme = parts.scheme.lower()
    if scheme not in ("http", "https"):
        raise UrlError(f"not an absolute http(s) URL: {url!r}")
    if not parts.hostname:
        raise UrlError(f"URL has no host: {url!r}")
    host = parts.hostname.lower()
    netloc = host
    if parts.port is not None and parts.port != DEFAULT_PORTS[scheme]:
        netloc = f"{host}:{parts.port}"
    if parts.username is not None:
        cred = parts.username
        if parts.password is not None:
            cred += f":{parts.password}"
        netloc = f"{cred}@{netloc}"
    out = f"{scheme}://{netloc}{parts.path}"
    if parts.query:
        out += f"?{parts.query}"
    if parts.fragment:
        out += f"#{parts.fragment}"
    return out


def url_origin(url: str) -> str:
    """scheme://host[:port] with the same normalization as normalize_url."""
    parts = urlsplit(url)
    scheme = parts.scheme.lower()
    if scheme not in ("http", "https") or not parts.hostname:
        raise UrlError(f"cannot take origin of {url!r}")
    host = parts.hostname.lower()
    if parts.port is not None and parts.port != DEFAULT_PORTS[scheme]:
        return f"{scheme}://{host}:{parts.port}"
    return f"{scheme}://{host}"


def is_valid_origin(text: str) -> bool:
    """True iff text is exactly a normalized origin (no path/query/fragment)."""
    try:
        return url_origin(text) == text
    except UrlError:
        return False


def url_host(url: str) -> str:
    parts = urlsplit(url)
    if not parts.hostname:
        raise UrlError(f"URL has no host: {url!r}")
    return parts.hostname.lower()


def landing_domain(url: str) -> str:
    """Host with a leading "www." removed; the unit for split-by-domain."""
    host = url_host(url)
    return host[4:] if host.startswith("www.") else host


def url_path(url: str) -> str:
    return urlsplit(url).path


def parse_query(url: str) -> list[tuple[str, str]]:
    """Ordered (key, value) pairs of the query string.

    Duplicates and blank values are preserved; a bare key yields ("key", "").
    Does not unquote: the crawl log records parameters as transmitted.
    """
    query = urlsplit(url).query
    if not query:
        return []
    pairs = []
    for chunk in query.split("&"):
        if not chunk:
            continue
        key, _, value = chunk.partition("=")
        pairs.append((key, value))
    return pairs


def find_urls(text: str) -> list[tuple[str, int]]:
    """Every absolute http(s) URL in text with its character offset.

    Left to right, duplicates preserved. Trailing sentence punctuation is
    trimmed; unbalanced closing parens are trimmed too ("(see https://a.com)").
    Bare domains without a scheme are not URLs here.
    """
    found = []
    for m in _URL_RE.finditer(text):
        raw = m.group(0)
        while raw and raw[-1] in _TRAILING_JUNK:
            if raw[-1] == ")" and raw.count("(") >= raw.count(")"):
                break
            raw = raw[:-1]
        if raw:
            found.append((raw, m.start()))
    return found
