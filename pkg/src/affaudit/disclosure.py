"""Sentence segmentation, disclosure detection, and clarity labeling.

Detection is pluggable: the rule-based reference classifier (lexicon data
file), the keyword baseline (marker data file), or an external command
speaking a line protocol (one sentence in per line, one label out per line).
Clarity labels always come from the rule lexicons, whatever detected the
segment, so swapping detectors never changes the label vocabulary.

Compensation: Clear needs a monetary predicate plus a first-person or
channel beneficiary; Ambiguous is support-style language without monetary
linkage; None is a bare technical statement ("This is an affiliate link.").

Relationship: scoping is by line geometry. A disclosure scopes the links on
its own lines, else the link block on the immediately following lines, else
the immediately preceding block, else every link in the description.
Quantifier phrasings ("some of the links below") always scope the whole
description and read as MixedGroup.
"""

from __future__ import annotations

import json
import re
import shlex
import subprocess
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from importlib import resources

from .urltools import find_urls


class Compensation(str, Enum):
    Clear = "Clear"
    Ambiguous = "Ambiguous"
    NONE = "None"


class Relationship(str, Enum):
    Explicit = "Explicit"
    Grouped = "Grouped"
    MixedGroup = "MixedGroup"


@dataclass(frozen=True, slots=True)
class SentenceSegment:
    text: str
    char_span: tuple[int, int]
    index: int


@dataclass(frozen=True, slots=True)
class DisclosureSegment:
    sentence_indexes: tuple[int, ...]
    text: str
    compensation: Compensation
    relationship: Relationship
    classifier_id: str
    char_span: tuple[int, int]
    relationship_vacuous: bool = False


@dataclass(frozen=True, slots=True)
class AnnotationPair:
    item_id: str
    label_a: str
    label_b: str


_SENTENCE_END = ".!?"
_WS = " \t\r\n"


def segment_sentences(description: str) -> list[SentenceSegment]:
    """Split on sentence-final punctuation before whitespace and on newlines.

    URLs are atomic (a dot inside a URL never ends a sentence). Spans index
    into the original text and exclude surrounding whitespace, so slicing the
    description by a span reproduces the segment text exactly.
    """
    url_spans = [(off, off + len(u)) for u, off in find_urls(description)]

    def inside_url(i: int) -> bool:
        return any(s <= i < e for s, e in url_spans)

    cuts = {0, len(description)}
    k = 0
    while k < len(description):
        ch = description[k]
        if ch == "\n":
            cuts.add(k)
            cuts.add(k + 1)
            k += 1
            continue
        if ch in _SENTENCE_END and not inside_url(k):
            j = k
            while j < len(description) and description[j] in _SENTENCE_END and not inside_url(j):
                j += 1
            if j >= len(description) or description[j] in _WS:
                cuts.add(j)
            k = j
            continue
        k += 1

    positions = sorted(cuts)
    segments = []
    for a, b in zip(positions, positions[1:]):
        start, end = a, b
        while start < end and description[start] in _WS:
            start += 1
        while end > start and description[end - 1] in _WS:
            end -= 1
        if start < end:
            segments.append(SentenceSegment(description[start:end], (start, end), len(segments)))
    return segments


def _load_data_text(name: str) -> str:
    return resources.files("affaudit.data").joinpath(name).read_text(encoding="utf-8")


class _Lexicon:
    _cached = None

    def __init__(self, obj: dict):
        def bank(key):
            return [re.compile(p, re.IGNORECASE) for p in obj[key]]

        self.negation_guards = bank("negation_guards")
        self.promo_guards = bank("promo_guards")
        self.third_party_guards = bank("third_party_guards")
        self.clear_patterns = bank("clear_patterns")
        self.beneficiary_patterns = bank("beneficiary_patterns")
        self.ambiguous_patterns = bank("ambiguous_patterns")
        self.statement_patterns = bank("statement_patterns")
        self.whole_scope_patterns = bank("whole_scope_patterns")

    @classmethod
    def load(cls) -> "_Lexicon":
        if cls._cached is None:
            cls._cached = cls(json.loads(_load_data_text("rule_lexicon.json")))
        return cls._cached


def _any(patterns, text: str) -> bool:
    return any(p.search(text) for p in patterns)


class RuleBasedClassifier:
    """Reference disclosure detector driven by the bundled lexicon."""

    classifier_id = "rules"

    def __init__(self):
        self._lex = _Lexicon.load()

    def classify(self, sentences: list[str]) -> list[bool]:
        return [self._one(s) for s in sentences]

    def _one(self, sentence: str) -> bool:
        lex = self._lex
        if _any(lex.negation_guards, sentence) or _any(lex.promo_guards, sentence) \
                or _any(lex.third_party_guards, sentence):
            return False
        if _any(lex.clear_patterns, sentence) and _any(lex.beneficiary_patterns, sentence):
            return True
        if _any(lex.ambiguous_patterns, sentence):
            return True
        return _any(lex.statement_patterns, sentence)


class KeywordBaseline:
    """Marker-list detector: true iff any marker substring appears."""

    classifier_id = "keywords"

    def __init__(self):
        self.markers = [
            line.strip().lower()
            for line in _load_data_text("keyword_markers.txt").splitlines()
            if line.strip() and not line.startswith("#!")
        ]

    def classify(self, sentences: list[str]) -> list[bool]:
        return [self._one(s) for s in sentences]

    def _one(self, sentence: str) -> bool:
        low = sentence.lower()
        return any(marker in low for marker in self.markers)


class ExternalClassifierError(RuntimeError):
    pass


class ExternalClassifier:
    """Adapter for an external model process.

    Sends one sentence per line on stdin and expects one label per line on
    stdout, same order. Accepted labels: 1/0, true/false, yes/no,
    disclosure/non-disclosure (case-insensitive).
    """

    _TRUE = {"1", "true", "yes", "disclosure"}
    _FALSE = {"0", "false", "no", "non-disclosure", "nondisclosure"}

    def __init__(self, command: str):
        self.command = command
        self.classifier_id = f"external:{command}"

    def classify(self, sentences: list[str]) -> list[bool]:
        payload = "".join(s.replace("\n", " ") + "\n" for s in sentences)
        try:
            proc = subprocess.run(
                shlex.split(self.command), input=payload, text=True,
                capture_output=True, check=True,
            )
        except (OSError, subprocess.CalledProcessError) as exc:
            raise ExternalClassifierError(f"external classifier failed: {exc}") from exc
        lines = proc.stdout.splitlines()
        if len(lines) != len(sentences):
            raise ExternalClassifierError(
                f"external classifier returned {len(lines)} labels for {len(sentences)} sentences"
            )
        out = []
        for i, line in enumerate(lines):
            token = line.strip().lower()
            if token in self._TRUE:
                out.append(True)
            elif token in self._FALSE:
                out.append(False)
            else:
                raise ExternalClassifierError(f"unrecognized label on line {i + 1}: {line!r}")
        return out


def get_classifier(spec: str):
    """Resolve "rules", "keywords", or "external:<command>"."""
    if spec == "rules":
        return RuleBasedClassifier()
    if spec == "keywords":
        return KeywordBaseline()
    if spec.startswith("external:"):
        command = spec.split(":", 1)[1]
        if not command:
            raise ValueError("external classifier needs a command: external:<cmd>")
        return ExternalClassifier(command)
    raise ValueError(f"unknown classifier {spec!r}")


def keyword_baseline(sentence: str) -> bool:
    return KeywordBaseline()._one(sentence)


def label_compensation(segment_text: str) -> Compensation:
    lex = _Lexicon.load()
    if _any(lex.clear_patterns, segment_text) and _any(lex.beneficiary_patterns, segment_text):
        return Compensation.Clear
    if _any(lex.ambiguous_patterns, segment_text):
        return Compensation.Ambiguous
    return Compensation.NONE


def _line_starts(text: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def label_relationship(
    segment_span: tuple[int, int],
    links: list[tuple[str, int, bool]],
    text: str,
) -> tuple[Relationship, bool]:
    """Relationship clarity for one disclosure segment.

    links are (url, char_offset, is_affiliate) for every link in the same
    description. Returns (label, vacuous): vacuous is set when the
    description has no affiliate links at all, in which case the label
    defaults to Explicit and callers should not count it.
    """
    if not any(aff for _, _, aff in links):
        return Relationship.Explicit, True

    lex = _Lexicon.load()
    seg_text = text[segment_span[0]:segment_span[1]]
    if _any(lex.whole_scope_patterns, seg_text):
        return Relationship.MixedGroup, False

    starts = _line_starts(text)

    def line_no(pos: int) -> int:
        return bisect_right(starts, pos) - 1

    first_line = line_no(segment_span[0])
    last_line = line_no(max(segment_span[0], segment_span[1] - 1))

    link_lines: dict[int, list[bool]] = {}
    for _, offset, affiliate in links:
        link_lines.setdefault(line_no(offset), []).append(affiliate)

    def block_from(start_line: int, step: int) -> list[bool]:
        flags: list[bool] = []
        line = start_line
        while line in link_lines:
            flags.extend(link_lines[line])
            line += step
        return flags

    scoped: list[bool] = []
    for line in range(first_line, last_line + 1):
        scoped.extend(link_lines.get(line, []))
    if not scoped:
        scoped = block_from(last_line + 1, +1)
    if not scoped:
        scoped = block_from(first_line - 1, -1)
    if not scoped or not any(scoped):
        scoped = [aff for _, _, aff in links]

    n_affiliate = sum(1 for aff in scoped if aff)
    n_other = len(scoped) - n_affiliate
    if n_affiliate == 1 and n_other == 0:
        return Relationship.Explicit, False
    if n_affiliate >= 2 and n_other == 0:
        return Relationship.Grouped, False
    return Relationship.MixedGroup, False


def detect_disclosures(
    segments: list[SentenceSegment],
    classifier,
    *,
    links: list[tuple[str, int, bool]] = (),
    text: str = "",
) -> list[DisclosureSegment]:
    """Binary per-sentence detection, then merge and label.

    Maximal runs of consecutive disclosure sentences merge into one segment.
    text is the full description; it is required for relationship geometry
    whenever links are supplied.
    """
    if links and not text:
        raise ValueError("relationship labeling needs the full description text")
    if not segments:
        return []
    decisions = classifier.classify([s.text for s in segments])
    out: list[DisclosureSegment] = []
    run: list[SentenceSegment] = []

    def flush():
        if not run:
            return
        seg_text = " ".join(s.text for s in run)
        span = (run[0].char_span[0], run[-1].char_span[1])
        relationship, vacuous = label_relationship(span, list(links), text)
        out.append(DisclosureSegment(
            sentence_indexes=tuple(s.index for s in run),
            text=seg_text,
            compensation=label_compensation(seg_text),
            relationship=relationship,
            classifier_id=getattr(classifier, "classifier_id", "unknown"),
            char_span=span,
            relationship_vacuous=vacuous,
        ))
        run.clear()

    for segment, is_disclosure in zip(segments, decisions):
        if is_disclosure:
            if run and segment.index != run[-1].index + 1:
                flush()
            run.append(segment)
        else:
            flush()
    flush()
    return out


_COMP_RANK = {Compensation.Clear: 0, Compensation.Ambiguous: 1, Compensation.NONE: 2}
_REL_RANK = {Relationship.Explicit: 0, Relationship.Grouped: 0, Relationship.MixedGroup: 1}


def aggregate_video_labels(
    segments: list[DisclosureSegment],
) -> tuple[Compensation, Relationship] | None:
    """Most-compliant label per dimension across a video's segments.

    Clear > Ambiguous > None; Explicit and Grouped rank together above
    MixedGroup. Segments whose relationship was vacuous still contribute
    their compensation label. Returns None when there are no segments.
    """
    if not segments:
        return None
    compensation = min((s.compensation for s in segments), key=_COMP_RANK.__getitem__)
    real = [s.relationship for s in segments if not s.relationship_vacuous]
    if real:
        relationship = min(real, key=lambda r: (_REL_RANK[r], r.value))
    else:
        relationship = Relationship.Explicit
    return compensation, relationship


def cohens_kappa(pairs: list[AnnotationPair]) -> float:
    """Chance-corrected agreement between two raters over a shared label set."""
    if not pairs:
        raise ValueError("cohens_kappa needs at least one pair")
    n = len(pairs)
    observed = sum(1 for p in pairs if p.label_a == p.label_b) / n
    count_a = Counter(p.label_a for p in pairs)
    count_b = Counter(p.label_b for p in pairs)
    expected = sum(
        (count_a[label] / n) * (count_b[label] / n)
        for label in set(count_a) | set(count_b)
    )
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)
