"""Sale-event ingestion: parsing, validation, and ETH to USD conversion.

Raw rows (CSV or JSON) are validated record by record into immutable
``SaleEvent`` values. Bad rows never abort a run; they are returned as
``RejectReport`` entries with a row number and reason. Prices are kept as
exact ``Decimal`` values so that re-exported logs are byte-identical to
their source; conversion to binary floats happens only inside the numeric
analysis modules.

Canonical input field names: ``seller``, ``buyer``, ``creator``,
``price_eth``, ``price_usd``, ``timestamp`` (ISO-8601 or integer Unix
seconds) and optional ``artwork_id``. Differently named source columns are
remapped through a ``field_map`` of source name to canonical name.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from datetime import date, datetime, timezone
from decimal import Decimal, InvalidOperation
from typing import BinaryIO, Iterable, Iterator, Mapping

PRIMARY = "primary"
SECONDARY = "secondary"

CANONICAL_FIELDS = (
    "seller",
    "buyer",
    "creator",
    "price_eth",
    "price_usd",
    "timestamp",
    "artwork_id",
)

EVENT_CSV_HEADER = CANONICAL_FIELDS


class MissingRateError(ValueError):
    """Raised when a conversion needs exchange rates for dates not in the table."""

    def __init__(self, missing_dates: Iterable[date]):
        self.missing_dates = tuple(sorted(set(missing_dates)))
        days = ", ".join(d.isoformat() for d in self.missing_dates)
        super().__init__(f"missing exchange rate for dates: {days}")


class _Reject(Exception):
    """Internal: per-record validation failure with a stable reason string."""


@dataclass(frozen=True)
class RejectReport:
    """One rejected input record: 1-based record number plus the reason."""

    row: int
    reason: str


@dataclass(frozen=True)
class SaleEvent:
    """One validated market transaction.

    ``creator_id`` is the original artist of the sold token, which differs
    from ``seller_id`` on secondary-market resales. ``price_usd`` is None
    until currency conversion runs for ETH-only records.
    """

    seller_id: str
    buyer_id: str
    creator_id: str
    price_eth: Decimal | None
    price_usd: Decimal | None
    timestamp: datetime
    artwork_id: str | None = None

    def __post_init__(self) -> None:
        if self.buyer_id == self.seller_id:
            raise ValueError("self-sale: buyer equals seller")
        if self.price_eth is None and self.price_usd is None:
            raise ValueError("event carries neither an ETH nor a USD price")
        for label, price in (("price_eth", self.price_eth), ("price_usd", self.price_usd)):
            if price is not None and price < 0:
                raise ValueError(f"{label} must be non-negative")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")

    @property
    def market(self) -> str:
        """``primary`` when the artist sells their own creation, else ``secondary``."""
        return PRIMARY if self.seller_id == self.creator_id else SECONDARY

    @property
    def needs_conversion(self) -> bool:
        return self.price_usd is None

    @property
    def utc_date(self) -> date:
        return self.timestamp.astimezone(timezone.utc).date()


@dataclass(frozen=True)
class RateTable:
    """ETH-USD exchange rates keyed by UTC calendar date (USD per ETH)."""

    rates: Mapping[date, Decimal]

    def __post_init__(self) -> None:
        for day, rate in self.rates.items():
            if rate <= 0:
                raise ValueError(f"non-positive exchange rate for {day.isoformat()}")

    def get(self, day: date) -> Decimal | None:
        return self.rates.get(day)

    @classmethod
    def from_csv(cls, stream: BinaryIO | bytes) -> "RateTable":
        """Load a two-column ``date,usd_per_eth`` CSV with ISO dates."""
        text = _decode(stream)
        reader = csv.reader(io.StringIO(text, newline=""))
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["date", "usd_per_eth"]:
            raise ValueError("rate table must start with a 'date,usd_per_eth' header row")
        rates: dict[date, Decimal] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                day = date.fromisoformat(row[0].strip())
                rate = Decimal(row[1].strip())
            except (ValueError, IndexError, InvalidOperation) as exc:
                raise ValueError(f"rate table line {lineno}: {exc}") from None
            if day in rates:
                raise ValueError(f"rate table line {lineno}: duplicate date {day.isoformat()}")
            rates[day] = rate
        return cls(rates)


@dataclass(frozen=True)
class EventLog:
    """Validated sale events sorted ascending by timestamp, plus source metadata."""

    events: tuple[SaleEvent, ...]
    source: str = ""
    total_records: int = 0
    rejected_count: int = 0

    def __post_init__(self) -> None:
        if self.accepted_count + self.rejected_count != self.total_records:
            raise ValueError("accepted + rejected must equal total input records")
        for earlier, later in zip(self.events, self.events[1:]):
            if later.timestamp < earlier.timestamp:
                raise ValueError("events must be sorted by non-decreasing timestamp")

    @property
    def accepted_count(self) -> int:
        return len(self.events)

    @property
    def needs_conversion_count(self) -> int:
        return sum(1 for e in self.events if e.needs_conversion)

    @property
    def zero_price_count(self) -> int:
        return sum(
            1
            for e in self.events
            if (e.price_usd is not None and e.price_usd == 0)
            or (e.price_usd is None and e.price_eth == 0)
        )

    @classmethod
    def from_events(cls, events: Iterable[SaleEvent], source: str = "") -> "EventLog":
        """Build a log from in-memory events (sorted here; counts set to match)."""
        ordered = tuple(sorted(events, key=lambda e: e.timestamp))
        return cls(events=ordered, source=source, total_records=len(ordered))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_events(
    stream: BinaryIO | bytes,
    fmt: str = "csv",
    field_map: Mapping[str, str] | None = None,
    source: str | None = None,
) -> tuple[EventLog, list[RejectReport]]:
    """Parse raw sale records into a validated, timestamp-sorted event log.

    Args:
        stream: UTF-8 bytes or a binary file object.
        fmt: ``csv`` (RFC-4180, header row required) or ``json`` (array of
            objects, or one object per line).
        field_map: optional source-column to canonical-field renames; a
            mapped source column wins over a same-named canonical column.
        source: label recorded in the log metadata (defaults to the stream
            name when available).

    Returns:
        The event log and the list of per-record rejections. Record numbers
        are 1-based over the input records (header excluded for CSV).
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unsupported input format: {fmt}")
    if source is None:
        source = getattr(stream, "name", "") or ""
        source = str(source)
    text = _decode(stream)
    records = _iter_csv(text) if fmt == "csv" else _iter_json(text)

    remap = dict(field_map or {})
    for dst in remap.values():
        if dst not in CANONICAL_FIELDS:
            raise ValueError(f"field map target {dst!r} is not a canonical field")
    events: list[SaleEvent] = []
    rejects: list[RejectReport] = []
    total = 0
    for row_num, record in records:
        total += 1
        try:
            events.append(_build_event(_canonicalize(record, remap)))
        except _Reject as exc:
            rejects.append(RejectReport(row=row_num, reason=str(exc)))
    events.sort(key=lambda e: e.timestamp)  # stable: input order breaks timestamp ties
    log = EventLog(
        events=tuple(events),
        source=source,
        total_records=total,
        rejected_count=len(rejects),
    )
    return log, rejects


def convert_currency(log: EventLog, rates: RateTable) -> EventLog:
    """Fill USD prices for ETH-only events using the rate of the UTC sale date.

    Already-priced events pass through untouched, so the operation is
    idempotent. Raises ``MissingRateError`` listing every uncovered date.
    """
    needed = {e.utc_date for e in log.events if e.needs_conversion}
    missing = {day for day in needed if rates.get(day) is None}
    if missing:
        raise MissingRateError(missing)
    converted = tuple(
        replace(e, price_usd=e.price_eth * rates.get(e.utc_date)) if e.needs_conversion else e
        for e in log.events
    )
    return replace(log, events=converted)


def write_events_csv(log: EventLog, stream) -> None:
    """Write the canonical event CSV (re-parsable by ``parse_events``)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(EVENT_CSV_HEADER)
    for e in log.events:
        writer.writerow(
            [
                e.seller_id,
                e.buyer_id,
                e.creator_id,
                "" if e.price_eth is None else str(e.price_eth),
                "" if e.price_usd is None else str(e.price_usd),
                e.timestamp.astimezone(timezone.utc).isoformat(),
                e.artwork_id or "",
            ]
        )


# ---------------------------------------------------------------------------
# Record validation
# ---------------------------------------------------------------------------


def _decode(stream: BinaryIO | bytes) -> str:
    data = stream if isinstance(stream, (bytes, bytearray)) else stream.read()
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ValueError(f"input is not valid UTF-8: {exc}") from None


def _iter_csv(text: str) -> Iterator[tuple[int, Mapping[str, object]]]:
    reader = csv.DictReader(io.StringIO(text, newline=""))
    if reader.fieldnames is None:
        raise ValueError("CSV input has no header row")
    for row_num, record in enumerate(reader, start=1):
        yield row_num, record


def _iter_json(text: str) -> Iterator[tuple[int, Mapping[str, object]]]:
    stripped = text.lstrip()
    if not stripped:
        raise ValueError("JSON input is empty")
    if stripped.startswith("["):
        try:
            payload = json.loads(text, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON input: {exc}") from None
        if not isinstance(payload, list):
            raise ValueError("JSON input must be an array of objects")
        items: Iterable[tuple[int, object]] = enumerate(payload, start=1)
    else:
        items = _iter_ndjson(text)
    for row_num, obj in items:
        if not isinstance(obj, dict):
            yield row_num, {"__bad__": obj}
            continue
        yield row_num, obj


def _iter_ndjson(text: str) -> Iterator[tuple[int, object]]:
    row_num = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        row_num += 1
        try:
            yield row_num, json.loads(line, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON on record {row_num}: {exc}") from None


def _canonicalize(record: Mapping[str, object], remap: Mapping[str, str]) -> dict[str, object]:
    out: dict[str, object] = {}
    for key, value in record.items():
        if key in CANONICAL_FIELDS and key not in remap:
            out.setdefault(key, value)
    for src, dst in remap.items():
        if src in record:
            out[dst] = record[src]
    return out


def _build_event(rec: Mapping[str, object]) -> SaleEvent:
    if "__bad__" in rec:
        raise _Reject("record is not an object")
    seller = _require_id(rec, "seller")
    buyer = _require_id(rec, "buyer")
    creator = _require_id(rec, "creator")
    if buyer == seller:
        raise _Reject("self-sale")
    price_eth = _parse_price(rec.get("price_eth"), "price_eth")
    price_usd = _parse_price(rec.get("price_usd"), "price_usd")
    if price_eth is None and price_usd is None:
        raise _Reject("missing price")
    timestamp = _parse_timestamp(rec.get("timestamp"))
    artwork = rec.get("artwork_id")
    artwork_id = str(artwork).strip() if artwork is not None and str(artwork).strip() else None
    return SaleEvent(
        seller_id=seller,
        buyer_id=buyer,
        creator_id=creator,
        price_eth=price_eth,
        price_usd=price_usd,
        timestamp=timestamp,
        artwork_id=artwork_id,
    )


def _require_id(rec: Mapping[str, object], name: str) -> str:
    value = rec.get(name)
    text = str(value).strip() if value is not None else ""
    if not text:
        raise _Reject(f"missing field: {name}")
    return text


def _parse_price(value: object, label: str) -> Decimal | None:
    if value is None:
        return None
    if isinstance(value, Decimal):
        price = value
    elif isinstance(value, int):
        price = Decimal(value)
    elif isinstance(value, float):
        # JSON floats are intercepted by parse_float=Decimal; this path only
        # sees caller-built records, where repr round-trips the intent.
        price = Decimal(repr(value))
    else:
        text = str(value).strip()
        if not text:
            return None
        try:
            price = Decimal(text)
        except InvalidOperation:
            raise _Reject(f"bad price: {label}={text!r}") from None
    if not price.is_finite():
        raise _Reject(f"bad price: {label} is not finite")
    if price < 0:
        raise _Reject("negative price")
    return price


def _parse_timestamp(value: object) -> datetime:
    if value is None or (isinstance(value, str) and not value.strip()):
        raise _Reject("missing field: timestamp")
    try:
        dt = _coerce_timestamp(value)
    except (ValueError, OverflowError, OSError):
        raise _Reject(f"bad timestamp: {value!r}") from None
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def _coerce_timestamp(value: object) -> datetime:
    if isinstance(value, bool):
        raise ValueError("boolean timestamp")
    if isinstance(value, int):
        return datetime.fromtimestamp(value, tz=timezone.utc)
    if isinstance(value, Decimal):
        if value != value.to_integral_value():
            raise ValueError("fractional epoch timestamp")
        return datetime.fromtimestamp(int(value), tz=timezone.utc)
    text = str(value).strip()
    try:
        return datetime.fromtimestamp(int(text), tz=timezone.utc)
    except ValueError:
        pass
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt
