"""Per-video compliance status and the seven prevalence/compliance metrics.

Status mapping (total over the enum product):
  (Clear, Explicit) (Clear, Grouped)                      -> CC
  (Clear, MixedGroup) (Ambiguous, Explicit|Grouped|Mixed) -> PC
  any combination with Absent on either dimension         -> NC

Metrics over a group of video records:
  AV     percent of videos with at least one affiliate link
  AC     percent of channels with at least one affiliate video
  NALPV  mean affiliate links per affiliate video
  FLAL   mean percent of a video's links that are affiliate, affiliate videos
  CC/PC/NC  status shares among affiliate videos, in percent
Groups without affiliate videos report the last five as absent, not zero.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, fields
from datetime import date
from enum import Enum
from pathlib import Path

from .crawl_model import SourceTag
from .disclosure import Compensation, Relationship

PERIOD_BOUNDARY = date(2018, 1, 1)


class CompensationStatus(str, Enum):
    Clear = "Clear"
    Ambiguous = "Ambiguous"
    Absent = "Absent"


class RelationshipStatus(str, Enum):
    Explicit = "Explicit"
    Grouped = "Grouped"
    MixedGroup = "MixedGroup"
    Absent = "Absent"


class ComplianceStatus(str, Enum):
    CC = "CC"
    PC = "PC"
    NC = "NC"


class ChannelTier(str, Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"


class Period(str, Enum):
    Pre2018 = "Pre2018"
    Post2018 = "Post2018"


def channel_tier(subscriber_count: int) -> ChannelTier:
    """T1 below 100K, T2 from 100K below 1M, T3 from 1M up."""
    if subscriber_count < 100_000:
        return ChannelTier.T1
    if subscriber_count < 1_000_000:
        return ChannelTier.T2
    return ChannelTier.T3


def period_of(upload_date: date) -> Period:
    return Period.Pre2018 if upload_date < PERIOD_BOUNDARY else Period.Post2018


def compensation_status(label: Compensation | None) -> CompensationStatus:
    """Disclosure-level compensation label to status; no disclosure -> Absent."""
    if label is None or label is Compensation.NONE:
        return CompensationStatus.Absent
    return CompensationStatus(label.value)


def relationship_status(label: Relationship | None) -> RelationshipStatus:
    if label is None:
        return RelationshipStatus.Absent
    return RelationshipStatus(label.value)


def map_status(compensation: CompensationStatus, relationship: RelationshipStatus) -> ComplianceStatus:
    if compensation is CompensationStatus.Absent or relationship is RelationshipStatus.Absent:
        return ComplianceStatus.NC
    if compensation is CompensationStatus.Clear:
        if relationship is RelationshipStatus.MixedGroup:
            return ComplianceStatus.PC
        return ComplianceStatus.CC
    return ComplianceStatus.PC


@dataclass(frozen=True, slots=True)
class VideoComplianceRecord:
    video_id: str
    channel_id: str
    is_affiliate_video: bool
    affiliate_link_count: int
    total_link_count: int
    compensation: CompensationStatus
    relationship: RelationshipStatus
    status: ComplianceStatus
    category: str
    channel_tier: ChannelTier
    source_tag: SourceTag
    period: Period
    guidance: bool = False
    partner: str = ""

    def __post_init__(self):
        if self.affiliate_link_count > self.total_link_count:
            raise ValueError("affiliate_link_count exceeds total_link_count")
        if self.is_affiliate_video != (self.affiliate_link_count >= 1):
            raise ValueError("is_affiliate_video inconsistent with affiliate_link_count")
        if self.status is not map_status(self.compensation, self.relationship):
            raise ValueError("status is not map_status(compensation, relationship)")


def make_record(
    *,
    video_id: str,
    channel_id: str,
    affiliate_link_count: int,
    total_link_count: int,
    compensation: CompensationStatus,
    relationship: RelationshipStatus,
    category: str,
    subscriber_count: int,
    source_tag: SourceTag,
    upload_date: date,
    guidance: bool = False,
    partner: str = "",
) -> VideoComplianceRecord:
    """Build a record with the derived fields (status, tier, period) filled in."""
    return VideoComplianceRecord(
        video_id=video_id,
        channel_id=channel_id,
        is_affiliate_video=affiliate_link_count >= 1,
        affiliate_link_count=affiliate_link_count,
        total_link_count=total_link_count,
        compensation=compensation,
        relationship=relationship,
        status=map_status(compensation, relationship),
        category=category,
        channel_tier=channel_tier(subscriber_count),
        source_tag=source_tag,
        period=period_of(upload_date),
        guidance=guidance,
        partner=partner,
    )


def record_to_dict(record: VideoComplianceRecord) -> dict:
    return {
        "video_id": record.video_id,
        "channel_id": record.channel_id,
        "is_affiliate_video": record.is_affiliate_video,
        "affiliate_link_count": record.affiliate_link_count,
        "total_link_count": record.total_link_count,
        "compensation": record.compensation.value,
        "relationship": record.relationship.value,
        "status": record.status.value,
        "category": record.category,
        "channel_tier": record.channel_tier.value,
        "source_tag": record.source_tag.value,
        "period": record.period.value,
        "guidance": record.guidance,
        "partner": record.partner,
    }


def record_from_dict(data: dict) -> VideoComplianceRecord:
    return VideoComplianceRecord(
        video_id=data["video_id"],
        channel_id=data["channel_id"],
        is_affiliate_video=data["is_affiliate_video"],
        affiliate_link_count=data["affiliate_link_count"],
        total_link_count=data["total_link_count"],
        compensation=CompensationStatus(data["compensation"]),
        relationship=RelationshipStatus(data["relationship"]),
        status=ComplianceStatus(data["status"]),
        category=data["category"],
        channel_tier=ChannelTier(data["channel_tier"]),
        source_tag=SourceTag(data["source_tag"]),
        period=Period(data["period"]),
        guidance=data.get("guidance", False),
        partner=data.get("partner", ""),
    )


def write_records(records: list[VideoComplianceRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_dict(record), sort_keys=True) + "\n")


def read_records(path: str | Path) -> list[VideoComplianceRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_dict(json.loads(line)))
    return records


GROUPABLE_FIELDS = ("category", "channel_tier", "source_tag", "period", "guidance", "partner")


@dataclass(frozen=True, slots=True)
class MetricReport:
    group_fields: tuple[str, ...]
    group_key: tuple
    n_videos: int
    n_channels: int
    av: float
    ac: float
    nalpv: float | None
    flal: float | None
    cc: float | None
    pc: float | None
    nc: float | None


def _field_value(record: VideoComplianceRecord, name: str):
    value = getattr(record, name)
    return value.value if isinstance(value, Enum) else value


def compute_metrics(
    records: list[VideoComplianceRecord],
    group_by: list[str] | tuple[str, ...] = (),
) -> list[MetricReport]:
    if not records:
        raise ValueError("no records to aggregate")
    record_fields = {f.name for f in fields(VideoComplianceRecord)}
    for name in group_by:
        if name not in record_fields:
            raise ValueError(f"unknown group_by field {name!r}")

    groups: dict[tuple, list[VideoComplianceRecord]] = {}
    for record in records:
        key = tuple(_field_value(record, name) for name in group_by)
        groups.setdefault(key, []).append(record)

    reports = []
    for key in sorted(groups, key=lambda k: tuple(str(x) for x in k)):
        members = groups[key]
        n_videos = len(members)
        channels = {m.channel_id for m in members}
        affiliate = [m for m in members if m.is_affiliate_video]
        affiliate_channels = {m.channel_id for m in affiliate}
        av = 100.0 * len(affiliate) / n_videos
        ac = 100.0 * len(affiliate_channels) / len(channels)
        if affiliate:
            nalpv = sum(m.affiliate_link_count for m in affiliate) / len(affiliate)
            flal = 100.0 * sum(
                m.affiliate_link_count / m.total_link_count for m in affiliate
            ) / len(affiliate)
            cc = 100.0 * sum(1 for m in affiliate if m.status is ComplianceStatus.CC) / len(affiliate)
            pc = 100.0 * sum(1 for m in affiliate if m.status is ComplianceStatus.PC) / len(affiliate)
            nc = 100.0 * sum(1 for m in affiliate if m.status is ComplianceStatus.NC) / len(affiliate)
        else:
            nalpv = flal = cc = pc = nc = None
        reports.append(MetricReport(
            group_fields=tuple(group_by),
            group_key=key,
            n_videos=n_videos,
            n_channels=len(channels),
            av=av,
            ac=ac,
            nalpv=nalpv,
            flal=flal,
            cc=cc,
            pc=pc,
            nc=nc,
        ))
    return reports


_METRIC_COLUMNS = ("n_videos", "n_channels", "av", "ac", "nalpv", "flal", "cc", "pc", "nc")


def reports_to_csv(reports: list[MetricReport]) -> str:
    """CSV text; group columns first, metric columns after, absent as empty."""
    buf = io.StringIO()
    group_fields = reports[0].group_fields if reports else ()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*group_fields, *_METRIC_COLUMNS])
    for report in reports:
        row = [*report.group_key]
        for col in _METRIC_COLUMNS:
            value = getattr(report, col)
            if value is None:
                row.append("")
            elif isinstance(value, float):
                row.append(f"{value:.6f}")
            else:
                row.append(value)
        writer.writerow(row)
    return buf.getvalue()


def write_reports_csv(reports: list[MetricReport], path: str | Path) -> None:
    Path(path).write_text(reports_to_csv(reports), encoding="utf-8")


def reports_to_table(reports: list[MetricReport]) -> str:
    """Fixed-width text rendering of reports_to_csv content."""
    lines = reports_to_csv(reports).strip().splitlines()
    rows = [line.split(",") for line in lines]
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    out = []
    for row in rows:
        out.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(out) + "\n"
