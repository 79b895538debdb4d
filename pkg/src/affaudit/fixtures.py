"""Synthetic corpus generation: the desk-scale ground-truth factory.

Affiliate links are generated to satisfy two structural criteria: they carry
a creator-specific identifier token in their decorations, and that token also
flows through client storage (a cookie written by a chain origin reappears in
a later decoration). Non-affiliate links get short chains, generic low-entropy
parameters, and no identifier flow. An independent validator
(validate_record_truth) re-checks both criteria on the built interaction
graph, so generator bugs cannot silently relabel the corpus.

Disclosure scripts are drawn per video from the seven (compensation,
relationship) rows so the truth file's status shares match the requested
weights exactly (largest-remainder allocation).
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .compliance import (
    CompensationStatus,
    ComplianceStatus,
    RelationshipStatus,
    VideoComplianceRecord,
    make_record,
    map_status,
)
from .crawl_model import (
    CATEGORIES,
    Corpus,
    CrawlRecord,
    OriginLocation,
    RedirectEvent,
    SourceTag,
    StatusClass,
    StorageAction,
    StorageEvent,
    VideoMeta,
    write_corpus,
)
from .interaction_graph import EdgeKind, NodeKind, build_graph

# Status rows as (compensation, relationship, weight percent). Rows whose
# relationship is Explicit stand for "Explicit or Grouped"; generators
# alternate between the two variants since both map to the same status.
STATUS_ROWS = (
    (CompensationStatus.Clear, RelationshipStatus.Explicit, 12.20),
    (CompensationStatus.Clear, RelationshipStatus.MixedGroup, 9.31),
    (CompensationStatus.Ambiguous, RelationshipStatus.Explicit, 2.95),
    (CompensationStatus.Ambiguous, RelationshipStatus.MixedGroup, 6.35),
    (CompensationStatus.Absent, RelationshipStatus.Explicit, 12.32),
    (CompensationStatus.Absent, RelationshipStatus.MixedGroup, 2.68),
    (CompensationStatus.Absent, RelationshipStatus.Absent, 54.19),
)

IDENTIFIER_KEYS = frozenset({"tag", "aff_id", "affid", "ref_id", "click_id", "partner_id", "aff_token"})

_SYLLABLES = (
    "shop", "deal", "gear", "tech", "glow", "nest", "peak", "byte", "cart",
    "trend", "vibe", "loop", "zen", "bolt", "drift", "spark", "forge",
    "bloom", "haven", "prime",
)
_TLDS = ("com", "net", "io", "store", "shop")

_SOCIAL_URLS = (
    "https://www.instagram.com/{h}",
    "https://twitter.com/{h}",
    "https://www.facebook.com/{h}",
    "https://www.tiktok.com/@{h}",
    "https://www.youtube.com/@{h}",
    "https://www.snapchat.com/add/{h}",
)

_FILLER = (
    "Thanks for watching!",
    "New videos every Tuesday.",
    "Drop a like and subscribe for more.",
    "Full build guide on the blog.",
    "Comment your favorite part below.",
    "See you in the next one.",
    "Timestamps are in the pinned comment.",
)


def largest_remainder(weights: list[float], total: int) -> list[int]:
    """Integer allocation of total proportional to weights, sums exactly."""
    weight_sum = sum(weights)
    if weight_sum <= 0:
        raise ValueError("weights must sum to a positive value")
    raw = [w / weight_sum * total for w in weights]
    counts = [int(x) for x in raw]
    shortfall = total - sum(counts)
    order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - counts[i]), i))
    for i in order[:shortfall]:
        counts[i] += 1
    return counts


@dataclass(frozen=True, slots=True)
class GeneratorSpec:
    seed: int = 7
    n_videos: int = 600
    affiliate_video_rate: float = 0.55
    status_weights: tuple[float, ...] = tuple(row[2] for row in STATUS_ROWS)
    amazon_share: float = 0.30
    n_merchant_domains: int = 60
    n_plain_domains: int = 50
    n_shortener_domains: int = 10
    n_tracker_domains: int = 12

    def __post_init__(self):
        if not 0.0 <= self.affiliate_video_rate <= 1.0:
            raise ValueError("affiliate_video_rate must be within [0, 1]")
        if len(self.status_weights) != len(STATUS_ROWS):
            raise ValueError(f"status_weights needs {len(STATUS_ROWS)} entries")
        if any(w < 0 for w in self.status_weights) or sum(self.status_weights) <= 0:
            raise ValueError("status_weights must be non-negative and sum > 0")


@dataclass
class GeneratedCorpus:
    corpus: Corpus
    link_truth: dict[str, bool]
    video_truth: dict[str, dict]
    truth_records: list[VideoComplianceRecord] = field(default_factory=list)


def _token(rng: np.random.Generator, length: int = 10) -> str:
    alphabet = string.ascii_lowercase + string.digits
    return "".join(alphabet[int(i)] for i in rng.integers(0, len(alphabet), length))


def _domains(rng: np.random.Generator, count: int, suffix: str = "") -> list[str]:
    out = []
    seen = set()
    while len(out) < count:
        name = (
            _SYLLABLES[int(rng.integers(0, len(_SYLLABLES)))]
            + _SYLLABLES[int(rng.integers(0, len(_SYLLABLES)))]
            + str(int(rng.integers(10, 99)))
        )
        domain = f"{name}{suffix}.{_TLDS[int(rng.integers(0, len(_TLDS)))]}"
        if domain not in seen:
            seen.add(domain)
            out.append(domain)
    return out


class _LinkFactory:
    """Builds crawl records for one corpus; owns the domain pools."""

    def __init__(self, rng: np.random.Generator, spec: GeneratorSpec):
        self.rng = rng
        self.merchants = _domains(rng, spec.n_merchant_domains)
        self.plain = _domains(rng, spec.n_plain_domains, suffix="blog")
        self.shorteners = [f"go.{d}" for d in _domains(rng, spec.n_shortener_domains)]
        self.trackers = [f"track.{d}" for d in _domains(rng, spec.n_tracker_domains)]
        self.amazon_share = spec.amazon_share

    def _pick(self, pool: list[str]) -> str:
        return pool[int(self.rng.integers(0, len(pool)))]

    def _noise_events(self):
        dom_hooks = []
        js_calls = []
        if self.rng.random() < 0.5:
            dom_hooks.append(("a", "outbound-link"))
        if self.rng.random() < 0.4:
            js_calls.append("document.cookie")
        if self.rng.random() < 0.2:
            js_calls.append("navigator.sendBeacon")
        return tuple(dom_hooks), tuple(js_calls)

    def affiliate(self, link_id: str, video_id: str, handle: str) -> CrawlRecord:
        rng = self.rng
        roll = rng.random()
        if roll < self.amazon_share:
            return self._amazon(link_id, video_id, handle)
        if roll < self.amazon_share + 0.5:
            return self._shortener_tracker(link_id, video_id)
        return self._tracker_direct(link_id, video_id)

    def _amazon(self, link_id: str, video_id: str, handle: str) -> CrawlRecord:
        rng = self.rng
        tag = f"{handle}-20"
        asin = "b0" + _token(rng, 8)
        original = f"https://www.amazon.com/dp/{asin}?tag={tag}"
        landing = f"https://www.amazon.com/dp/{asin}/ref=nosim?tag={tag}&psc=1"
        final_params = (("tag", tag), ("psc", "1"))
        if rng.random() < 0.4:
            gp = f"https://www.amazon.com/gp/redirect.html?_encoding=utf8&tag={tag}"
            redirects = (
                RedirectEvent(0, original, gp, StatusClass.HttpRedirect,
                              (("_encoding", "utf8"),)),
                RedirectEvent(1, gp, landing, StatusClass.HttpRedirect, final_params),
            )
        else:
            redirects = (
                RedirectEvent(0, original, landing, StatusClass.HttpRedirect, final_params),
            )
        storage = [
            StorageEvent("https://www.amazon.com", "aff-session", tag, StorageAction.Write),
        ]
        if rng.random() < 0.5:
            storage.append(StorageEvent("https://www.amazon.com", "session-id",
                                        _token(rng, 12), StorageAction.Write))
        if rng.random() < 0.3:
            storage.append(StorageEvent("https://www.amazon.com", "ubid-main",
                                        _token(rng, 10), StorageAction.Write))
        hooks, calls = self._noise_events()
        return CrawlRecord(link_id, video_id, OriginLocation.Description, original,
                           redirects, tuple(storage), hooks, calls, landing)

    def _shortener_tracker(self, link_id: str, video_id: str) -> CrawlRecord:
        rng = self.rng
        token = _token(rng, 10)
        shortener = self._pick(self.shorteners)
        tracker = self._pick(self.trackers)
        merchant = self._pick(self.merchants)
        offer = int(rng.integers(1000, 9999))
        slug = _token(rng, 6)
        product = _token(rng, 6)
        original = f"https://{shortener}/{slug}"
        mid = f"https://{tracker}/click?offer={offer}&aff_id={token}"
        landing = f"https://{merchant}/product/{product}?ref_id={token}&utm_source=yt"
        redirects = (
            RedirectEvent(0, original, mid, StatusClass.HttpRedirect,
                          (("offer", str(offer)), ("aff_id", token))),
            RedirectEvent(1, mid, landing, StatusClass.HttpRedirect,
                          (("ref_id", token), ("utm_source", "yt"))),
        )
        storage = [
            StorageEvent(f"https://{tracker}", "click_ref", token, StorageAction.Write),
        ]
        if rng.random() < 0.5:
            storage.append(StorageEvent(f"https://{merchant}", "_ga",
                                        "ga1." + _token(rng, 6), StorageAction.Write))
        hooks, calls = self._noise_events()
        return CrawlRecord(link_id, video_id, OriginLocation.Description, original,
                           redirects, tuple(storage), hooks, calls, landing)

    def _tracker_direct(self, link_id: str, video_id: str) -> CrawlRecord:
        """Network deep link straight to the merchant, 1 hop.

        Mostly well-known network hosts (these hit the pattern registry, as
        they would in the field); the rest are long-tail tracker domains the
        registry has never heard of.
        """
        rng = self.rng
        token = _token(rng, 10)
        merchant = self._pick(self.merchants)
        networks = (
            ("https://www.shareasale.com/r.cfm?b={o}&u={t}&m=77",
             "https://www.shareasale.com/u.cfm?d={s}", "sscid", "sas_click"),
            ("https://www.awin1.com/cread.php?awinmid={o}&awinaffid={t}",
             "https://www.awin1.com/awclick.php?r={s}", "awc", "awc"),
            ("https://click.linksynergy.com/deeplink?id={t}&mid={o}",
             "https://click.linksynergy.com/fs-bin/click?id={s}", "ransid", "rmsid"),
        )
        intra = None
        if rng.random() < 0.65:
            template, intra_template, param_key, cookie_key = networks[int(rng.integers(0, len(networks)))]
            original = template.format(o=int(rng.integers(1000, 9999)), t=token)
            if rng.random() < 0.5:
                intra = intra_template.format(s=_token(rng, 6))
        else:
            tracker = self._pick(self.trackers)
            original = f"https://{tracker}/l/{_token(rng, 6)}?aff_id={token}"
            param_key, cookie_key = "click_id", "partner_sid"
        tracker_origin = "https://" + original.split("/")[2]
        slug = _token(rng, 6)
        entry_params = [(param_key, token)]
        if rng.random() < 0.35:
            entry_params.append(("utm_campaign", self._pick(["spring", "launch", "deals"])))
        entry_query = "&".join(f"{k}={v}" for k, v in entry_params)
        redirects = []
        hop_src = original
        if intra is not None:
            intra_param = tuple(tuple(p.split("=", 1)) for p in intra.split("?", 1)[1].split("&"))
            redirects.append(RedirectEvent(len(redirects), hop_src, intra,
                                           StatusClass.HttpRedirect, intra_param))
            hop_src = intra
        if rng.random() < 0.35:
            www = f"https://www.{merchant}/item/{slug}?{entry_query}"
            redirects.append(RedirectEvent(len(redirects), hop_src, www,
                                           StatusClass.HttpRedirect, tuple(entry_params)))
            hop_src = www
            landing = f"https://{merchant}/item/{slug}?{entry_query}"
            redirects.append(RedirectEvent(len(redirects), hop_src, landing,
                                           StatusClass.HttpRedirect, ()))
        else:
            landing = f"https://{merchant}/item/{slug}?{entry_query}"
            redirects.append(RedirectEvent(len(redirects), hop_src, landing,
                                           StatusClass.HttpRedirect, tuple(entry_params)))
        storage = [
            StorageEvent(tracker_origin, cookie_key, token, StorageAction.Write),
            StorageEvent(f"https://{merchant}", cookie_key, token, StorageAction.Read),
        ]
        if rng.random() < 0.5:
            storage.append(StorageEvent(f"https://{merchant}", "_ga",
                                        "ga1." + _token(rng, 6), StorageAction.Write))
        hooks, calls = self._noise_events()
        return CrawlRecord(link_id, video_id, OriginLocation.Description, original,
                           redirects=tuple(redirects), storage_events=tuple(storage),
                           dom_hooks=hooks, js_calls=calls, landing_url=landing)

    def _wrapped_social(self, link_id: str, video_id: str, handle: str) -> CrawlRecord:
        """Platform link-shim redirect: real chain, benign params, no id flow."""
        rng = self.rng
        kind = int(rng.integers(0, 3))
        if kind == 0:
            original = (f"https://l.facebook.com/l.php?u=https%3a%2f%2fwww.facebook.com"
                        f"%2f{handle}&h={_token(rng, 8)}")
            landing = f"https://www.facebook.com/{handle}?locale=en_us&ref=shim"
            params = (("locale", "en_us"), ("ref", "shim"))
            origin, cookie = "https://www.facebook.com", "csrftoken"
        elif kind == 1:
            original = f"https://l.instagram.com/?u=https%3a%2f%2fwww.instagram.com%2f{handle}&e={_token(rng, 8)}"
            landing = f"https://www.instagram.com/{handle}?hl=en"
            params = (("hl", "en"),)
            origin, cookie = "https://www.instagram.com", "csrftoken"
        else:
            target = f"https://{self._pick(self.plain)}/post/{_token(rng, 6)}"
            original = (f"https://www.youtube.com/redirect?event=video_description"
                        f"&redir_token={_token(rng, 12)}&q={target}")
            landing = f"{target}?utm_source=youtube&feature=share"
            params = (("utm_source", "youtube"), ("feature", "share"))
            origin, cookie = "https://www.youtube.com", "consent"
        redirects = (RedirectEvent(0, original, landing, StatusClass.HttpRedirect, params),)
        storage = []
        if rng.random() < 0.7:
            storage.append(StorageEvent(origin, cookie, _token(rng, 10), StorageAction.Write))
        if rng.random() < 0.4:
            storage.append(StorageEvent(origin, "datr", _token(rng, 8), StorageAction.Write))
        hooks, calls = self._noise_events()
        return CrawlRecord(link_id, video_id, OriginLocation.Description, original,
                           redirects, tuple(storage), hooks, calls, landing)

    def non_affiliate(self, link_id: str, video_id: str, handle: str) -> CrawlRecord:
        rng = self.rng
        roll = rng.random()
        if roll < 0.3:
            if rng.random() < 0.5:
                return self._wrapped_social(link_id, video_id, handle)
            url = _SOCIAL_URLS[int(rng.integers(0, len(_SOCIAL_URLS)))].format(h=handle)
            hooks, calls = self._noise_events()
            return CrawlRecord(link_id, video_id, OriginLocation.Description, url,
                               (), (), hooks, calls, url)
        if roll < 0.7:
            url = f"https://{self._pick(self.plain)}/article/{_token(rng, 6)}?utm_source=youtube&lang=en"
            storage = ()
            if rng.random() < 0.3:
                origin = "https://" + url.split("/")[2]
                storage = (StorageEvent(origin, "consent", "true", StorageAction.Write),)
            hooks, calls = self._noise_events()
            return CrawlRecord(link_id, video_id, OriginLocation.Description, url,
                               (), storage, hooks, calls, url)
        first = self._pick(self.plain)
        second = self._pick(self.plain)
        slug = _token(rng, 6)
        original = f"https://{first}/r/{slug}"
        landing = f"https://{second}/page?v=2&utm_medium=social"
        redirects = (
            RedirectEvent(0, original, landing, StatusClass.HttpRedirect,
                          (("v", "2"), ("utm_medium", "social"))),
        )
        hooks, calls = self._noise_events()
        return CrawlRecord(link_id, video_id, OriginLocation.Description, original,
                           redirects, (), hooks, calls, landing)


def _script_lines(
    row: tuple[CompensationStatus, RelationshipStatus],
    affiliate_urls: list[str],
    other_urls: list[str],
    rng: np.random.Generator,
) -> list[str]:
    """Description lines realizing one status row's disclosure layout."""
    compensation, relationship = row
    filler = _FILLER[int(rng.integers(0, len(_FILLER)))]
    lines = [filler, ""]

    def socials_block():
        if not other_urls:
            return []
        return ["", "My socials and extras:", *other_urls]

    if compensation is CompensationStatus.Absent and relationship is RelationshipStatus.Absent:
        lines.append("Gear and pages mentioned:")
        lines.extend(affiliate_urls)
        lines.extend(socials_block())
        return lines

    if relationship is RelationshipStatus.MixedGroup:
        opener = {
            CompensationStatus.Clear: "I earn a small commission on some of the links below.",
            CompensationStatus.Ambiguous: "Using some of the links below helps the channel.",
            CompensationStatus.Absent: "Some of the links below are affiliate links.",
        }[compensation]
        mixed = list(affiliate_urls) + list(other_urls)
        order = rng.permutation(len(mixed))
        lines.append(opener)
        lines.extend(mixed[i] for i in order)
        return lines

    grouped = relationship is RelationshipStatus.Grouped or (
        relationship is RelationshipStatus.Explicit and len(affiliate_urls) > 1
    )
    if grouped:
        opener = {
            CompensationStatus.Clear: "I get compensated when you make purchases through the following links:",
            CompensationStatus.Ambiguous: "Support the channel by shopping through the links below:",
            CompensationStatus.Absent: "These are affiliate links:",
        }[compensation]
        lines.append(opener)
        lines.extend(affiliate_urls)
    else:
        opener = {
            CompensationStatus.Clear: "I earn a commission if you buy through this link:",
            CompensationStatus.Ambiguous: "Shopping through this link supports the channel:",
            CompensationStatus.Absent: "Affiliate link:",
        }[compensation]
        lines.append(opener)
        lines.append(affiliate_urls[0])
        lines.extend(affiliate_urls[1:])
    lines.extend(socials_block())
    return lines


def generate_corpus(spec: GeneratorSpec) -> GeneratedCorpus:
    """Deterministic corpus + truth labels for one GeneratorSpec."""
    rng = np.random.default_rng(spec.seed)
    factory = _LinkFactory(rng, spec)

    n_affiliate = largest_remainder([spec.affiliate_video_rate, 1 - spec.affiliate_video_rate],
                                    spec.n_videos)[0]
    row_counts = largest_remainder(list(spec.status_weights), n_affiliate)
    row_assignment: list[int | None] = []
    for row_index, count in enumerate(row_counts):
        row_assignment.extend([row_index] * count)
    row_assignment.extend([None] * (spec.n_videos - n_affiliate))
    order = rng.permutation(len(row_assignment))
    row_assignment = [row_assignment[i] for i in order]

    n_channels = max(1, int(spec.n_videos * 0.7))
    corpus = Corpus()
    link_truth: dict[str, bool] = {}
    video_truth: dict[str, dict] = {}
    truth_records: list[VideoComplianceRecord] = []
    explicit_toggle = 0

    for vi, row_index in enumerate(row_assignment):
        video_id = f"v{vi:05d}"
        channel_idx = int(rng.integers(0, n_channels))
        channel_id = f"ch{channel_idx:05d}"
        handle = f"{_SYLLABLES[channel_idx % len(_SYLLABLES)]}{channel_idx:03d}"
        category = CATEGORIES[int(rng.integers(0, len(CATEGORIES)))]
        subscriber_count = int(10 ** rng.uniform(3, 7))
        source_tag = list(SourceTag)[int(rng.integers(0, 4))]
        upload_date = date(2015, 1, 1) + timedelta(days=int(rng.integers(0, 3652)))

        records: list[CrawlRecord] = []
        if row_index is None:
            n_links = int(rng.integers(1, 5))
            for j in range(n_links):
                records.append(factory.non_affiliate(f"{video_id}-L{j}", video_id, handle))
            for r in records:
                link_truth[r.link_id] = False
            description = "\n".join([
                _FILLER[int(rng.integers(0, len(_FILLER)))],
                "",
                "Links:",
                *[r.original_url for r in records],
            ])
            compensation, relationship = CompensationStatus.Absent, RelationshipStatus.Absent
            affiliate_count = 0
        else:
            compensation, relationship, _ = STATUS_ROWS[row_index]
            if relationship is RelationshipStatus.Explicit:
                relationship = (RelationshipStatus.Explicit, RelationshipStatus.Grouped)[explicit_toggle % 2]
                explicit_toggle += 1
            if relationship is RelationshipStatus.Explicit:
                affiliate_count = 1
            elif relationship is RelationshipStatus.Grouped:
                affiliate_count = int(rng.integers(2, 5))
            else:
                affiliate_count = int(rng.integers(1, 4))
            other_count = int(rng.integers(1, 4)) if relationship is RelationshipStatus.MixedGroup \
                else int(rng.integers(0, 3))
            j = 0
            affiliate_records = []
            for _ in range(affiliate_count):
                affiliate_records.append(factory.affiliate(f"{video_id}-L{j}", video_id, handle))
                j += 1
            other_records = []
            for _ in range(other_count):
                other_records.append(factory.non_affiliate(f"{video_id}-L{j}", video_id, handle))
                j += 1
            records = affiliate_records + other_records
            for r in affiliate_records:
                link_truth[r.link_id] = True
            for r in other_records:
                link_truth[r.link_id] = False
            description = "\n".join(_script_lines(
                (compensation, relationship),
                [r.original_url for r in affiliate_records],
                [r.original_url for r in other_records],
                rng,
            ))

        status = map_status(compensation, relationship)
        video_truth[video_id] = {
            "compensation": compensation.value,
            "relationship": relationship.value,
            "status": status.value,
            "affiliate_link_count": affiliate_count,
            "total_link_count": len(records),
        }
        if affiliate_count:
            partner = "amazon" if any(
                "amazon." in r.original_url for r in records if link_truth[r.link_id]
            ) else "network"
            truth_records.append(make_record(
                video_id=video_id,
                channel_id=channel_id,
                affiliate_link_count=affiliate_count,
                total_link_count=len(records),
                compensation=compensation,
                relationship=relationship,
                category=category,
                subscriber_count=subscriber_count,
                source_tag=source_tag,
                upload_date=upload_date,
                partner=partner,
            ))

        corpus.videos[video_id] = VideoMeta(
            video_id=video_id,
            channel_id=channel_id,
            upload_date=upload_date,
            category=category,
            subscriber_count=subscriber_count,
            source_tag=source_tag,
            description_text=description,
            language_tag="en",
        )
        corpus.records.extend(records)

    return GeneratedCorpus(corpus, link_truth, video_truth, truth_records)


def write_generated(generated: GeneratedCorpus, out_dir: str | Path) -> tuple[Path, Path]:
    """corpus.jsonl in out_dir; truth labels under out_dir/truth/ by convention."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus_path = out / "corpus.jsonl"
    write_corpus(generated.corpus, corpus_path)
    truth_dir = out / "truth"
    truth_dir.mkdir(exist_ok=True)
    truth_path = truth_dir / "labels.json"
    truth_path.write_text(json.dumps({
        "links": generated.link_truth,
        "videos": generated.video_truth,
    }, sort_keys=True, indent=1), encoding="utf-8")
    return corpus_path, truth_path


def validate_record_truth(record: CrawlRecord) -> bool:
    """Affiliate evidence check, independent of the generator's sampling path.

    True iff the built interaction graph shows an identifier flow from
    storage into a decoration, or a decoration under a known identifier key
    carries a token of at least 6 characters.
    """
    graph = build_graph(record)
    kind_of = {n.node_id: n.kind for n in graph.nodes}
    for edge in graph.edges:
        if edge.kind is EdgeKind.Access and kind_of[edge.src] is NodeKind.Storage \
                and kind_of[edge.dst] is NodeKind.Decoration:
            return True
    for event in record.redirects:
        for key, value in event.query_params:
            if key in IDENTIFIER_KEYS and len(value) >= 6:
                return True
    return False


def table2_fixture(n_videos: int = 10_000, seed: int = 11) -> list[VideoComplianceRecord]:
    """Affiliate-video records whose status rows hit the weights exactly."""
    rng = np.random.default_rng(seed)
    counts = largest_remainder([row[2] for row in STATUS_ROWS], n_videos)
    records = []
    vi = 0
    explicit_toggle = 0
    for (compensation, relationship, _), count in zip(STATUS_ROWS, counts):
        for _ in range(count):
            rel = relationship
            if relationship is RelationshipStatus.Explicit:
                rel = (RelationshipStatus.Explicit, RelationshipStatus.Grouped)[explicit_toggle % 2]
                explicit_toggle += 1
            affiliate_links = int(rng.integers(1, 6))
            records.append(make_record(
                video_id=f"t2v{vi:05d}",
                channel_id=f"t2ch{int(rng.integers(0, max(1, n_videos // 2))):05d}",
                affiliate_link_count=affiliate_links,
                total_link_count=affiliate_links + int(rng.integers(0, 5)),
                compensation=compensation,
                relationship=rel,
                category=CATEGORIES[int(rng.integers(0, len(CATEGORIES)))],
                subscriber_count=int(10 ** rng.uniform(3, 7)),
                source_tag=list(SourceTag)[int(rng.integers(0, 4))],
                upload_date=date(2015, 1, 1) + timedelta(days=int(rng.integers(0, 3652))),
            ))
            vi += 1
    return records


def two_group_scenario(
    n_per_group: int,
    p_a: float,
    p_b: float,
    metric: str = "CC",
    seed: int = 0,
) -> tuple[list[VideoComplianceRecord], list[VideoComplianceRecord]]:
    """Two Bernoulli populations over a status metric, for coverage checks.

    Group members hit the target status with probability p_a (resp. p_b);
    the true effect is 100 * (p_a - p_b) percentage points.
    """
    rng = np.random.default_rng(seed)
    target = ComplianceStatus(metric)
    row_for = {
        ComplianceStatus.CC: (CompensationStatus.Clear, RelationshipStatus.Grouped),
        ComplianceStatus.PC: (CompensationStatus.Ambiguous, RelationshipStatus.Grouped),
        ComplianceStatus.NC: (CompensationStatus.Absent, RelationshipStatus.Absent),
    }
    off_row = {
        ComplianceStatus.CC: (CompensationStatus.Ambiguous, RelationshipStatus.Grouped),
        ComplianceStatus.PC: (CompensationStatus.Clear, RelationshipStatus.Grouped),
        ComplianceStatus.NC: (CompensationStatus.Clear, RelationshipStatus.Grouped),
    }

    def build(group: str, p: float, guidance: bool):
        hits = rng.random(n_per_group) < p
        out = []
        for i, hit in enumerate(hits):
            compensation, relationship = row_for[target] if hit else off_row[target]
            out.append(make_record(
                video_id=f"{group}{i:05d}",
                channel_id=f"{group}ch{i:05d}",
                affiliate_link_count=1,
                total_link_count=2,
                compensation=compensation,
                relationship=relationship,
                category="Howto & Style",
                subscriber_count=50_000,
                source_tag=SourceTag.Random,
                upload_date=date(2019, 6, 1),
                guidance=guidance,
            ))
        return out

    return build("a", p_a, True), build("b", p_b, False)
