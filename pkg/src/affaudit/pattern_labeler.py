"""Phase-1 URL labeling against a user-extensible pattern registry.

A registry is a data file of rules. Each rule targets Affiliate or
NonAffiliate and matches on any combination of host pattern (anchored),
path pattern (searched), and required query keys. Affiliate rules are
always evaluated before NonAffiliate rules; within one target, file order
decides; first match wins. URLs matching nothing stay Unknown and are
handed to the graph classifier downstream.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .crawl_model import Corpus
from .urltools import UrlError, parse_query, url_host, url_path


class RuleTarget(str, Enum):
    Affiliate = "Affiliate"
    NonAffiliate = "NonAffiliate"


class Phase1Label(str, Enum):
    KnownAffiliate = "KnownAffiliate"
    KnownNonAffiliate = "KnownNonAffiliate"
    Unknown = "Unknown"


@dataclass(frozen=True, slots=True)
class PatternRule:
    rule_id: str
    target: RuleTarget
    host_pattern: str | None = None
    path_pattern: str | None = None
    query_keys: frozenset[str] | None = None
    notes: str = ""

    def __post_init__(self):
        if self.host_pattern is None and self.path_pattern is None and not self.query_keys:
            raise RegistryError(f"rule {self.rule_id!r}: needs host_pattern, path_pattern, or query_keys")


class RegistryError(ValueError):
    pass


class _CompiledRule:
    __slots__ = ("rule", "host_re", "path_re")

    def __init__(self, rule: PatternRule):
        self.rule = rule
        try:
            self.host_re = re.compile(rule.host_pattern) if rule.host_pattern else None
            self.path_re = re.compile(rule.path_pattern) if rule.path_pattern else None
        except re.error as exc:
            raise RegistryError(f"rule {rule.rule_id!r}: bad pattern: {exc}") from None

    def matches(self, host: str, path: str, query_keys: set[str]) -> bool:
        if self.host_re is not None and self.host_re.fullmatch(host) is None:
            return False
        if self.path_re is not None and self.path_re.search(path) is None:
            return False
        if self.rule.query_keys and not self.rule.query_keys.issubset(query_keys):
            return False
        return True


class Registry:
    """Compiled rules in evaluation order: Affiliate first, then NonAffiliate."""

    def __init__(self, rules: list[PatternRule]):
        seen = set()
        for rule in rules:
            if rule.rule_id in seen:
                raise RegistryError(f"duplicate rule_id {rule.rule_id!r}")
            seen.add(rule.rule_id)
        self.rules = tuple(rules)
        affiliate = [_CompiledRule(r) for r in rules if r.target is RuleTarget.Affiliate]
        non_affiliate = [_CompiledRule(r) for r in rules if r.target is RuleTarget.NonAffiliate]
        self._ordered = affiliate + non_affiliate

    def __len__(self) -> int:
        return len(self.rules)


def _rule_from_dict(obj: dict) -> PatternRule:
    try:
        rule_id = obj["rule_id"]
        target = RuleTarget(obj["target"])
    except (KeyError, ValueError) as exc:
        raise RegistryError(f"bad rule entry {obj.get('rule_id', '<missing id>')!r}: {exc}") from None
    keys = obj.get("query_keys")
    return PatternRule(
        rule_id=rule_id,
        target=target,
        host_pattern=obj.get("host_pattern"),
        path_pattern=obj.get("path_pattern"),
        query_keys=frozenset(keys) if keys else None,
        notes=obj.get("notes", ""),
    )


def load_registry(path: str | Path) -> Registry:
    """Load and compile a registry file; errors name the offending rule."""
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        return Registry([])
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegistryError(f"registry is not valid JSON: {exc.msg}") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("rules"), list):
        raise RegistryError('registry must be an object with a "rules" list')
    return Registry([_rule_from_dict(r) for r in obj["rules"]])


def default_registry() -> Registry:
    """The bundled registry: Amazon affiliate shapes + social profile hosts."""
    ref = resources.files("affaudit.data").joinpath("default_registry.json")
    with resources.as_file(ref) as path:
        return load_registry(path)


def label_url(url: str, registry: Registry) -> Phase1Label:
    label, _, _ = explain_url(url, registry)
    return label


def explain_url(url: str, registry: Registry) -> tuple[Phase1Label, str | None, str | None]:
    """Label plus the matching rule_id, or a diagnostic when unparseable."""
    try:
        host = url_host(url)
        path = url_path(url)
        keys = {k for k, _ in parse_query(url)}
    except (UrlError, ValueError) as exc:
        return Phase1Label.Unknown, None, str(exc)
    for compiled in registry._ordered:
        if compiled.matches(host, path, keys):
            if compiled.rule.target is RuleTarget.Affiliate:
                return Phase1Label.KnownAffiliate, compiled.rule.rule_id, None
            return Phase1Label.KnownNonAffiliate, compiled.rule.rule_id, None
    return Phase1Label.Unknown, None, None


def label_corpus(corpus: Corpus, registry: Registry) -> tuple[dict[str, Phase1Label], float]:
    """Per-link phase-1 labels keyed by link_id, plus the coverage ratio.

    Coverage is the fraction of links labeled non-Unknown; 0.0 on an empty
    corpus.
    """
    labels = {r.link_id: label_url(r.original_url, registry) for r in corpus.records}
    if not labels:
        return labels, 0.0
    covered = sum(1 for v in labels.values() if v is not Phase1Label.Unknown)
    return labels, covered / len(labels)
