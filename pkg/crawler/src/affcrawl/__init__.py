"""Link crawler emitting schema-version-1 crawl-log lines.

This package talks to the audit toolkit only through the crawl-log file
format (JSON lines, ``schema_version`` 1) and the ``affaudit ingest``
command line; it imports nothing from it. The bundled driver speaks plain
HTTP via urllib — it follows HTTP 3xx and meta-refresh redirects and records
Set-Cookie writes — and the driver interface is a plain callable, so an
instrumented-browser driver can be swapped in without touching the runner.
"""

SCHEMA_VERSION = 1

__version__ = "0.1.0"
