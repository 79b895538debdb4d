"""Plain-HTTP navigation driver: one redirect hop at a time, fully recorded.

The driver follows HTTP 301/302/303/307/308 responses and ``<meta
http-equiv="refresh">`` tags in 2xx HTML bodies, recording every hop and
every Set-Cookie header along the way. It deliberately does not auto-follow
redirects inside urllib — each hop must be observed so the emitted chain is
exact. Without a browser there is no DOM or JS instrumentation, so traces
never contain JsNavigation hops, dom_hooks, or js_calls; a browser-backed
driver can replace :func:`trace` wherever a ``driver`` callable is accepted.
"""

from __future__ import annotations

import socket
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from html.parser import HTMLParser
from http.cookies import CookieError, SimpleCookie
from urllib.parse import urljoin, urlsplit

from . import __version__

REDIRECT_CODES = (301, 302, 303, 307, 308)

DEFAULT_PORTS = {"http": 80, "https": 443}

# How much of an HTML body to scan for a meta-refresh tag. Real tags sit in
# <head>; reading more than this only slows the crawl down.
BODY_SCAN_LIMIT = 65536

USER_AGENT = f"affcrawl/{__version__}"


class TraceFailure(Exception):
    """Navigation did not complete; the URL gets an error-log line, no record."""


def origin_of(url: str) -> str:
    """scheme://host[:port], lowercased, default port dropped."""
    parts = urlsplit(url)
    scheme = parts.scheme.lower()
    host = (parts.hostname or "").lower()
    if parts.port is not None and parts.port != DEFAULT_PORTS.get(scheme):
        return f"{scheme}://{host}:{parts.port}"
    return f"{scheme}://{host}"


def query_pairs(url: str) -> list[tuple[str, str]]:
    """Ordered (key, value) pairs of the query string, as transmitted.

    No unquoting, duplicates preserved, a bare key yields ("key", ""),
    empty chunks from "a=1&&b=2" are skipped.
    """
    query = urlsplit(url).query
    pairs = []
    for chunk in query.split("&"):
        if not chunk:
            continue
        key, _, value = chunk.partition("=")
        pairs.append((key, value))
    return pairs


def _chain_key(url: str) -> str:
    """URL identity used for loop detection: case-normalized origin + rest."""
    parts = urlsplit(url)
    rest = parts.path
    if parts.query:
        rest += f"?{parts.query}"
    return origin_of(url) + rest


class _MetaRefreshParser(HTMLParser):
    """Extracts the first <meta http-equiv="refresh" content="N; url=..."> target."""

    def __init__(self):
        super().__init__()
        self.target: str | None = None

    def handle_starttag(self, tag, attrs):
        if tag != "meta" or self.target is not None:
            return
        attr_map = {k.lower(): (v or "") for k, v in attrs}
        if attr_map.get("http-equiv", "").lower() != "refresh":
            return
        for part in attr_map.get("content", "").split(";"):
            part = part.strip()
            if part.lower().startswith("url="):
                self.target = part[4:].strip().strip("'\"")
                return


def meta_refresh_target(body: str) -> str | None:
    """The (possibly relative) URL of the first meta-refresh tag, if any.

    A refresh without a url= clause reloads the same page; that is not a
    hop, so it returns None.
    """
    parser = _MetaRefreshParser()
    try:
        parser.feed(body)
    except Exception:
        return None
    return parser.target or None


@dataclass(frozen=True)
class RedirectHop:
    sequence_index: int
    source_url: str
    target_url: str
    status_class: str
    query_params: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class CookieWrite:
    actor_origin: str
    storage_key: str
    storage_value: str


@dataclass
class TraceResult:
    """Everything observed while navigating one clicked URL to its landing."""

    original_url: str
    landing_url: str
    redirects: list[RedirectHop] = field(default_factory=list)
    storage_events: list[CookieWrite] = field(default_factory=list)

    @property
    def chain_length(self) -> int:
        """Number of URLs in the chain (original plus one per hop)."""
        return 1 + len(self.redirects)


class _NoRedirect(urllib.request.HTTPRedirectHandler):
    def redirect_request(self, req, fp, code, msg, headers, newurl):
        return None


_OPENER = urllib.request.build_opener(_NoRedirect)


def _fetch(url: str, timeout: float, user_agent: str):
    """GET one URL without following redirects.

    Returns (status_code, headers, body_text_or_None). The body is read —
    capped and tolerantly decoded — only for 2xx HTML, where a meta-refresh
    tag could hide; 3xx bodies are irrelevant and 4xx/5xx pages terminate
    the chain as-is.
    """
    request = urllib.request.Request(url, headers={"User-Agent": user_agent})
    try:
        with _OPENER.open(request, timeout=timeout) as response:
            status = response.status
            headers = response.headers
            body = None
            if 200 <= status < 300 and "html" in (headers.get("Content-Type") or "").lower():
                body = response.read(BODY_SCAN_LIMIT).decode("utf-8", errors="replace")
            return status, headers, body
    except urllib.error.HTTPError as exc:
        # Non-2xx with a real HTTP response: redirect hops land here because
        # the opener refuses to follow them.
        return exc.code, exc.headers, None
    except (socket.timeout, TimeoutError):
        raise TraceFailure(f"timed out after {timeout}s") from None
    except urllib.error.URLError as exc:
        if isinstance(exc.reason, (socket.timeout, TimeoutError)):
            raise TraceFailure(f"timed out after {timeout}s") from None
        raise TraceFailure(f"navigation error: {exc.reason}") from None
    except OSError as exc:
        raise TraceFailure(f"navigation error: {exc}") from None


def _cookies_from(headers) -> list[tuple[str, str]]:
    pairs = []
    for header in headers.get_all("Set-Cookie") or ():
        jar = SimpleCookie()
        try:
            jar.load(header)
        except CookieError:
            continue
        for name, morsel in jar.items():
            pairs.append((name, morsel.value))
    return pairs


def trace(
    url: str,
    timeout: float = 30.0,
    max_chain_hops: int = 10,
    user_agent: str = USER_AGENT,
) -> TraceResult:
    """Navigate one URL, recording each redirect hop and cookie write.

    Raises TraceFailure on timeout, connection errors, a chain longer than
    max_chain_hops, or a chain that revisits a URL (the crawl-log schema
    requires a simple path, and a revisit means a redirect loop anyway).
    """
    result = TraceResult(original_url=url, landing_url=url)
    current = url
    visited = {_chain_key(url)}
    while True:
        status, headers, body = _fetch(current, timeout, user_agent)
        for name, value in _cookies_from(headers):
            result.storage_events.append(CookieWrite(origin_of(current), name, value))

        if status in REDIRECT_CODES and headers.get("Location"):
            target = urljoin(current, headers["Location"])
            status_class = "HttpRedirect"
        elif body is not None and (refresh := meta_refresh_target(body)) is not None:
            target = urljoin(current, refresh)
            status_class = "MetaRefresh"
        else:
            result.landing_url = current
            return result

        if len(result.redirects) >= max_chain_hops:
            raise TraceFailure(f"chain exceeded {max_chain_hops} hops")
        if _chain_key(target) in visited:
            raise TraceFailure(f"redirect loop: chain revisits {target}")
        visited.add(_chain_key(target))
        result.redirects.append(RedirectHop(
            sequence_index=len(result.redirects),
            source_url=current,
            target_url=target,
            status_class=status_class,
            query_params=tuple(query_pairs(target)),
        ))
        current = target
