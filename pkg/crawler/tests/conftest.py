"""Local HTTP server with redirect chains, cookies, and meta refreshes.

Everything the crawler needs to be tested offline: a 2-hop 302 chain that
sets cookies along the way, a meta-refresh page, relative Location headers,
redirect loops, a slow endpoint for timeout tests, and a hit counter so
tests can prove each URL was fetched exactly once.
"""

from __future__ import annotations

import threading
import time
from collections import Counter
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import urlsplit

import pytest

_LANDING_BODY = b"<html><head><title>landing</title></head><body>done</body></html>"


@dataclass
class ServerState:
    base_url: str = ""
    hits: Counter = field(default_factory=Counter)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def count(self, path: str) -> int:
        with self.lock:
            return self.hits[path]


def _make_handler(state: ServerState):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _ok(self, body: bytes, content_type="text/html; charset=utf-8", status=200,
                cookies=()):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            for cookie in cookies:
                self.send_header("Set-Cookie", cookie)
            self.end_headers()
            self.wfile.write(body)

        def _redirect(self, location: str | None, status=302, cookies=()):
            self.send_response(status)
            if location is not None:
                self.send_header("Location", location)
            for cookie in cookies:
                self.send_header("Set-Cookie", cookie)
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            path = urlsplit(self.path).path
            with state.lock:
                state.hits[path] += 1

            if path == "/chain/start":
                self._redirect("/chain/mid?tag=NETX-ab12cd34ef",
                               cookies=("aff_session=NETX-ab12cd34ef; Path=/; HttpOnly",))
            elif path == "/chain/mid":
                self._redirect("/chain/land?ref=chan-77&src=",
                               cookies=("click_id=zz93k20x; Max-Age=604800",))
            elif path == "/chain/land":
                self._ok(_LANDING_BODY)
            elif path == "/plain":
                self._ok(_LANDING_BODY)
            elif path == "/once":
                self._ok(_LANDING_BODY)
            elif path == "/meta":
                body = (b'<html><head><meta http-equiv="refresh" '
                        b'content="0; url=/chain/land?via=meta"></head><body></body></html>')
                self._ok(body)
            elif path == "/meta-quoted":
                body = (b"<html><head><META HTTP-EQUIV='Refresh' "
                        b"CONTENT='1; URL=\"/chain/land?via=quoted\"'></head></html>")
                self._ok(body)
            elif path == "/rel":
                self._redirect("rel-land?x=1", status=301)
            elif path == "/rel-land":
                self._ok(_LANDING_BODY)
            elif path == "/loop/a":
                self._redirect("/loop/b")
            elif path == "/loop/b":
                self._redirect("/loop/a")
            elif path == "/self":
                self._redirect("/self")
            elif path == "/long":
                # /long?n=K redirects to /long?n=K-1 until n reaches 0.
                query = urlsplit(self.path).query
                n = int(query.split("=")[1]) if query else 3
                if n <= 0:
                    self._ok(_LANDING_BODY)
                else:
                    self._redirect(f"/long?n={n - 1}")
            elif path == "/slow":
                time.sleep(3)
                self._ok(_LANDING_BODY)
            elif path == "/nolocation":
                self._redirect(None)
            elif path == "/cookie-multi":
                self._ok(_LANDING_BODY,
                         cookies=("first=alpha; Path=/", "second=beta; Secure"))
            elif path == "/notfound":
                self._ok(b"<html><body>missing</body></html>", status=404)
            else:
                self._ok(b"<html><body>default</body></html>")

    return Handler


@pytest.fixture(scope="session")
def server():
    state = ServerState()
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), _make_handler(state))
    httpd.daemon_threads = True
    state.base_url = f"http://127.0.0.1:{httpd.server_port}"
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield state
    httpd.shutdown()
    thread.join(timeout=5)
