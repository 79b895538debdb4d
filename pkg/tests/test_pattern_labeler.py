"""Pattern-registry labeling: rule loading, precedence, matching semantics,
and corpus coverage."""

from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from affaudit.pattern_labeler import (
    PatternRule,
    Phase1Label,
    Registry,
    RegistryError,
    RuleTarget,
    default_registry,
    explain_url,
    label_corpus,
    label_url,
    load_registry,
)
from conftest import chain_record, make_corpus


def registry_of(*rules: PatternRule) -> Registry:
    return Registry(list(rules))


def aff(rule_id, **kw) -> PatternRule:
    return PatternRule(rule_id=rule_id, target=RuleTarget.Affiliate, **kw)


def non(rule_id, **kw) -> PatternRule:
    return PatternRule(rule_id=rule_id, target=RuleTarget.NonAffiliate, **kw)


class TestRegistryLoading:
    def test_default_registry_has_at_least_eight_rules(self):
        assert len(default_registry()) >= 8

    def test_empty_file_gives_empty_registry(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("", encoding="utf-8")
        registry = load_registry(path)
        assert len(registry) == 0
        assert label_url("https://anything.example.com/x?tag=t-20", registry) is Phase1Label.Unknown

    def test_duplicate_rule_id_error_names_the_id(self):
        with pytest.raises(RegistryError, match="dup-rule"):
            registry_of(aff("dup-rule", host_pattern="a\\.com"),
                        non("dup-rule", host_pattern="b\\.com"))

    def test_rule_needs_at_least_one_matcher(self):
        with pytest.raises(RegistryError, match="bare"):
            PatternRule(rule_id="bare", target=RuleTarget.Affiliate)

    def test_bad_regex_error_names_the_rule(self):
        with pytest.raises(RegistryError, match="broken"):
            registry_of(aff("broken", host_pattern="["))

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope", encoding="utf-8")
        with pytest.raises(RegistryError, match="not valid JSON"):
            load_registry(path)

    def test_rules_list_required(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"rules": "nope"}), encoding="utf-8")
        with pytest.raises(RegistryError):
            load_registry(path)

    def test_load_round_trip(self, tmp_path):
        path = tmp_path / "reg.json"
        path.write_text(json.dumps({"rules": [
            {"rule_id": "r1", "target": "Affiliate", "host_pattern": "x\\.com",
             "query_keys": ["tag"]},
        ]}), encoding="utf-8")
        registry = load_registry(path)
        assert registry.rules[0].query_keys == frozenset({"tag"})


class TestDefaultRegistryLabels:
    def test_amazon_tag_url_is_known_affiliate(self):
        url = "https://www.amazon.com/dp/B08XYZ?tag=mychannel-20"
        assert label_url(url, default_registry()) is Phase1Label.KnownAffiliate

    def test_instagram_profile_is_known_non_affiliate(self):
        url = "https://www.instagram.com/somecreator"
        assert label_url(url, default_registry()) is Phase1Label.KnownNonAffiliate

    def test_shortener_stays_unknown(self):
        url = "https://bit.ly/3xYzAbc"
        assert label_url(url, default_registry()) is Phase1Label.Unknown

    def test_explain_reports_matching_rule(self):
        label, rule_id, diag = explain_url(
            "https://www.amazon.com/dp/B08XYZ?tag=mychannel-20", default_registry()
        )
        assert label is Phase1Label.KnownAffiliate
        assert rule_id is not None
        assert diag is None

    def test_explain_on_unparseable_url(self):
        label, rule_id, diag = explain_url("not a url", default_registry())
        assert label is Phase1Label.Unknown
        assert rule_id is None
        assert diag


class TestMatchingSemantics:
    def test_host_pattern_is_anchored(self):
        registry = registry_of(aff("r", host_pattern="amazon\\.com"))
        assert label_url("https://amazon.com/dp/B0", registry) is Phase1Label.KnownAffiliate
        assert label_url("https://notamazon.com/dp/B0", registry) is Phase1Label.Unknown
        assert label_url("https://amazon.com.evil.net/dp/B0", registry) is Phase1Label.Unknown

    def test_path_pattern_is_searched(self):
        registry = registry_of(aff("r", host_pattern=".*", path_pattern="/ref="))
        assert label_url("https://a.com/product/ref=sr_1", registry) is Phase1Label.KnownAffiliate
        assert label_url("https://a.com/product", registry) is Phase1Label.Unknown

    def test_query_keys_subset_required(self):
        registry = registry_of(aff("r", query_keys=frozenset({"tag", "camp"})))
        assert label_url("https://a.com/?tag=1&camp=2&x=3", registry) is Phase1Label.KnownAffiliate
        assert label_url("https://a.com/?tag=1", registry) is Phase1Label.Unknown

    def test_affiliate_rules_evaluated_before_non_affiliate(self):
        registry = registry_of(
            non("block-everything", host_pattern=".*"),
            aff("amazon", host_pattern="amazon\\.com", query_keys=frozenset({"tag"})),
        )
        assert label_url("https://amazon.com/dp?tag=x-20", registry) is Phase1Label.KnownAffiliate
        assert label_url("https://other.com/x", registry) is Phase1Label.KnownNonAffiliate

    def test_file_order_decides_within_target(self):
        registry = registry_of(
            aff("first", host_pattern="a\\.com"),
            aff("second", host_pattern="a\\.com"),
        )
        _, rule_id, _ = explain_url("https://a.com/x", registry)
        assert rule_id == "first"

    @given(st.text(alphabet="abcdefghij.", min_size=1, max_size=20))
    def test_adding_non_affiliate_rules_never_flips_known_affiliate(self, host_fragment):
        base = registry_of(aff("amazon", host_pattern="amazon\\.com", query_keys=frozenset({"tag"})))
        url = "https://amazon.com/dp/B0?tag=ch-20"
        assert label_url(url, base) is Phase1Label.KnownAffiliate
        try:
            widened = registry_of(
                aff("amazon", host_pattern="amazon\\.com", query_keys=frozenset({"tag"})),
                non("extra", host_pattern=".*" + host_fragment.replace(".", "\\.") + ".*"),
            )
        except RegistryError:
            return
        assert label_url(url, widened) is Phase1Label.KnownAffiliate


class TestCorpusLabeling:
    def test_coverage_fraction(self):
        registry = registry_of(aff("r", host_pattern="hit\\.com"))
        records = []
        for i in range(29):
            records.append(chain_record([f"https://hit.com/{i}"], link_id=f"hit{i}"))
        for i in range(71):
            records.append(chain_record([f"https://miss{i}.com/x"], link_id=f"miss{i}"))
        labels, coverage = label_corpus(make_corpus(records), registry)
        assert len(labels) == 100
        assert coverage == pytest.approx(0.29)

    def test_all_social_corpus_is_fully_covered(self):
        registry = default_registry()
        urls = [
            "https://www.instagram.com/creator",
            "https://twitter.com/creator",
            "https://www.facebook.com/creator",
            "https://www.tiktok.com/@creator",
            "https://www.youtube.com/@creator",
        ]
        records = [chain_record([u], link_id=f"l{i}") for i, u in enumerate(urls)]
        labels, coverage = label_corpus(make_corpus(records), registry)
        assert coverage == 1.0
        assert set(labels.values()) == {Phase1Label.KnownNonAffiliate}

    def test_empty_corpus_coverage_zero(self):
        labels, coverage = label_corpus(make_corpus([]), default_registry())
        assert labels == {}
        assert coverage == 0.0

    def test_batch_equals_pointwise(self):
        registry = default_registry()
        records = [
            chain_record(["https://www.amazon.com/dp/B1?tag=c-20"], link_id="a"),
            chain_record(["https://bit.ly/abc", "https://shop.example.com/p"], link_id="b"),
            chain_record(["https://www.instagram.com/c"], link_id="c"),
        ]
        labels, _ = label_corpus(make_corpus(records), registry)
        for record in records:
            assert labels[record.link_id] is label_url(record.original_url, registry)

    def test_labels_use_original_url_not_landing(self):
        registry = default_registry()
        record = chain_record(
            ["https://bit.ly/abc", "https://www.amazon.com/dp/B1?tag=c-20"],
            link_id="shortened",
        )
        labels, _ = label_corpus(make_corpus([record]), registry)
        assert labels["shortened"] is Phase1Label.Unknown
