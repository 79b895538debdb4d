"""Synthetic-corpus generator: truth consistency, determinism, allocation."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affaudit.compliance import ComplianceStatus, map_status
from affaudit.crawl_model import ingest_corpus
from affaudit.fixtures import (
    STATUS_ROWS,
    GeneratorSpec,
    generate_corpus,
    largest_remainder,
    two_group_scenario,
    validate_record_truth,
    write_generated,
)


class TestLargestRemainder:
    def test_exact_proportions_pass_through(self):
        assert largest_remainder([1.0, 1.0, 2.0], 4) == [1, 1, 2]

    def test_shortfall_goes_to_largest_fraction(self):
        # 10 * [0.55, 0.45] = [5.5, 4.5]; the .5 tie breaks on index order.
        assert largest_remainder([0.55, 0.45], 10) == [6, 4]

    def test_equal_fractions_break_ties_by_index(self):
        assert largest_remainder([1.0, 1.0, 1.0], 4) == [2, 1, 1]

    def test_zero_total(self):
        assert largest_remainder([3.0, 1.0], 0) == [0, 0]

    def test_nonpositive_weight_sum_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            largest_remainder([0.0, 0.0], 5)

    @given(
        weights=st.lists(st.floats(min_value=0.0, max_value=100.0), min_size=1, max_size=8),
        total=st.integers(min_value=0, max_value=500),
    )
    def test_sums_exactly_and_stays_within_one_of_ideal(self, weights, total):
        if sum(weights) <= 0:
            with pytest.raises(ValueError):
                largest_remainder(weights, total)
            return
        counts = largest_remainder(weights, total)
        assert sum(counts) == total
        for w, c in zip(weights, counts):
            ideal = w / sum(weights) * total
            assert math.floor(ideal) <= c <= math.floor(ideal) + 1


class TestGeneratorSpecValidation:
    def test_rate_out_of_range(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            GeneratorSpec(affiliate_video_rate=1.5)

    def test_wrong_status_weight_count(self):
        with pytest.raises(ValueError, match="entries"):
            GeneratorSpec(status_weights=(1.0, 2.0))

    def test_negative_status_weight(self):
        with pytest.raises(ValueError, match="non-negative"):
            GeneratorSpec(status_weights=(1.0,) * (len(STATUS_ROWS) - 1) + (-1.0,))


class TestGeneratedTruth:
    def test_zero_affiliate_rate_yields_no_affiliate_truth(self):
        generated = generate_corpus(GeneratorSpec(seed=3, n_videos=40, affiliate_video_rate=0.0))
        assert not any(generated.link_truth.values())
        assert generated.truth_records == []
        assert all(v["affiliate_link_count"] == 0 for v in generated.video_truth.values())
        assert all(v["status"] == "NC" for v in generated.video_truth.values())

    def test_full_affiliate_rate_marks_every_video(self):
        generated = generate_corpus(GeneratorSpec(seed=3, n_videos=30, affiliate_video_rate=1.0))
        assert all(v["affiliate_link_count"] >= 1 for v in generated.video_truth.values())
        assert len(generated.truth_records) == 30

    def test_every_record_and_video_is_covered(self):
        generated = generate_corpus(GeneratorSpec(seed=5, n_videos=50))
        record_ids = {r.link_id for r in generated.corpus.records}
        assert set(generated.link_truth) == record_ids
        assert set(generated.video_truth) == set(generated.corpus.videos)
        assert all(r.video_id in generated.corpus.videos for r in generated.corpus.records)

    def test_video_truth_counts_match_link_truth(self):
        generated = generate_corpus(GeneratorSpec(seed=9, n_videos=60))
        by_video: dict[str, list[bool]] = {v: [] for v in generated.corpus.videos}
        for record in generated.corpus.records:
            by_video[record.video_id].append(generated.link_truth[record.link_id])
        for video_id, flags in by_video.items():
            truth = generated.video_truth[video_id]
            assert truth["affiliate_link_count"] == sum(flags)
            assert truth["total_link_count"] == len(flags)

    def test_independent_evidence_check_agrees_with_truth_labels(self):
        generated = generate_corpus(GeneratorSpec(seed=7, n_videos=120))
        for record in generated.corpus.records:
            assert validate_record_truth(record) == generated.link_truth[record.link_id], record.link_id

    def test_status_shares_follow_weight_allocation(self):
        spec = GeneratorSpec(seed=11, n_videos=400, affiliate_video_rate=0.55)
        generated = generate_corpus(spec)
        n_affiliate = largest_remainder([0.55, 0.45], 400)[0]
        row_counts = largest_remainder(list(spec.status_weights), n_affiliate)
        expected: dict[str, int] = {"CC": 0, "PC": 0, "NC": 400 - n_affiliate}
        for (compensation, relationship, _), count in zip(STATUS_ROWS, row_counts):
            expected[map_status(compensation, relationship).value] += count
        observed: dict[str, int] = {"CC": 0, "PC": 0, "NC": 0}
        for truth in generated.video_truth.values():
            observed[truth["status"]] += 1
        assert observed == expected

    def test_truth_records_mirror_video_truth(self):
        generated = generate_corpus(GeneratorSpec(seed=2, n_videos=80))
        by_id = {r.video_id: r for r in generated.truth_records}
        for video_id, truth in generated.video_truth.items():
            if truth["affiliate_link_count"] == 0:
                assert video_id not in by_id
                continue
            record = by_id[video_id]
            assert record.status.value == truth["status"]
            assert record.affiliate_link_count == truth["affiliate_link_count"]
            assert record.total_link_count == truth["total_link_count"]


class TestWrittenCorpus:
    def test_output_passes_strict_ingest_with_no_violations(self, tmp_path):
        generated = generate_corpus(GeneratorSpec(seed=4, n_videos=60))
        corpus_path, truth_path = write_generated(generated, tmp_path / "bundle")
        corpus, violations = ingest_corpus(corpus_path, strict=True)
        assert violations == []
        assert len(corpus.records) == len(generated.corpus.records)
        assert len(corpus.videos) == 60
        assert truth_path.is_file()

    def test_round_trip_preserves_descriptions_and_chains(self, tmp_path):
        generated = generate_corpus(GeneratorSpec(seed=4, n_videos=20))
        corpus_path, _ = write_generated(generated, tmp_path)
        corpus, _ = ingest_corpus(corpus_path, strict=True)
        assert corpus.videos == generated.corpus.videos
        assert corpus.records == generated.corpus.records

    def test_same_seed_writes_identical_bytes(self, tmp_path):
        spec = GeneratorSpec(seed=21, n_videos=40)
        paths = []
        for name in ("one", "two"):
            corpus_path, truth_path = write_generated(generate_corpus(spec), tmp_path / name)
            paths.append((corpus_path.read_bytes(), truth_path.read_bytes()))
        assert paths[0] == paths[1]

    def test_different_seeds_differ(self, tmp_path):
        first, _ = write_generated(generate_corpus(GeneratorSpec(seed=1, n_videos=30)), tmp_path / "a")
        second, _ = write_generated(generate_corpus(GeneratorSpec(seed=2, n_videos=30)), tmp_path / "b")
        assert first.read_bytes() != second.read_bytes()


class TestTwoGroupScenario:
    def test_group_construction(self):
        group_a, group_b = two_group_scenario(200, 0.6, 0.4, metric="CC", seed=5)
        assert len(group_a) == len(group_b) == 200
        assert all(r.guidance is True for r in group_a)
        assert all(r.guidance is False for r in group_b)

    def test_hit_rates_approach_targets(self):
        group_a, group_b = two_group_scenario(4000, 0.70, 0.30, metric="CC", seed=5)
        share_a = sum(r.status is ComplianceStatus.CC for r in group_a) / len(group_a)
        share_b = sum(r.status is ComplianceStatus.CC for r in group_b) / len(group_b)
        assert share_a == pytest.approx(0.70, abs=0.03)
        assert share_b == pytest.approx(0.30, abs=0.03)

    def test_non_target_metric_stays_off(self):
        group_a, _ = two_group_scenario(300, 0.5, 0.5, metric="NC", seed=1)
        # Misses land on a fully-compliant row, never on the target status.
        for record in group_a:
            assert record.status in (ComplianceStatus.NC, ComplianceStatus.CC)

    def test_deterministic_per_seed(self):
        first = two_group_scenario(50, 0.5, 0.5, seed=9)
        second = two_group_scenario(50, 0.5, 0.5, seed=9)
        assert first == second

    def test_unknown_metric_rejected(self):
        with pytest.raises(ValueError):
            two_group_scenario(10, 0.5, 0.5, metric="XX")
