"""Taxi trip-log ingestion: pickups, available drivers, and per-window
instances with two historical scenarios and the realized one."""

from __future__ import annotations

import calendar
import csv
import math
import time
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import EmptyWindow, InsufficientDrivers, ParseError
from ..model import MetricInstance, ScenarioSet

DAY = 86400
EARTH_RADIUS_M = 6371008.8
# (center lon, center lat, half width lon, half width lat): downtown Shenzhen
DEFAULT_BBOX = (114.075, 22.54, 0.075, 0.03)
REQUIRED_COLUMNS = ("taxi_id", "time", "lon", "lat", "speed", "direction", "occupied")
# how far before a range we keep records so a 0->1 flip at its start is visible
FLIP_MARGIN = 600


@dataclass(frozen=True)
class TripRecord:
    taxi_id: str
    timestamp: int
    lon: float
    lat: float
    occupied: int
    line: int = 0


@dataclass(frozen=True)
class WindowSpec:
    t0: int
    scenario_day_offsets: tuple[int, ...] = (7, 14)
    stage_seconds: int = 60
    driver_lookback: int = 300
    driver_multiplier: float = 2.5

    def __post_init__(self):
        if self.driver_multiplier <= 1:
            raise ValueError("driver_multiplier must exceed 1")
        if len(self.scenario_day_offsets) < 1:
            raise ValueError("need at least one scenario day offset")

    @property
    def first_stage(self) -> tuple[int, int]:
        return self.t0, self.t0 + self.stage_seconds

    @property
    def second_stage(self) -> tuple[int, int]:
        return self.t0 + self.stage_seconds, self.t0 + 2 * self.stage_seconds

    def label(self) -> str:
        return time.strftime("%Y-%m-%d %H:%M", time.gmtime(self.t0))

    def ranges(self) -> list[tuple[int, int]]:
        """Time ranges whose records matter for this window."""
        a, b = self.second_stage
        out = [(self.t0 - self.driver_lookback - FLIP_MARGIN, b)]
        for off in self.scenario_day_offsets:
            out.append((a - off * DAY - FLIP_MARGIN, b - off * DAY))
        return out


@dataclass(frozen=True)
class TripWindow:
    """Instance for one window; ``realized`` lists the R2 indices of the
    riders that actually appeared (kept out of the explicit scenarios)."""

    instance: MetricInstance
    realized: tuple[int, ...]
    label: str


def parse_time(text: str) -> int:
    return calendar.timegm(time.strptime(text.strip(), "%Y-%m-%d %H:%M:%S"))


def in_bbox(lon: float, lat: float, bbox=DEFAULT_BBOX) -> bool:
    lon0, lat0, dlon, dlat = bbox
    return abs(lon - lon0) <= dlon and abs(lat - lat0) <= dlat


def read_trip_records(path, ranges: Sequence[tuple[int, int]] | None = None) -> list[TripRecord]:
    """Parse a trip CSV, keeping records whose time falls in any ``ranges``
    (half-open). Speed and direction are validated as numbers and dropped."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, "empty file") from None
        header = [h.strip().lower() for h in header]
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ParseError(1, f"missing columns {missing}")
        col = {c: header.index(c) for c in REQUIRED_COLUMNS}
        for row in reader:
            line = reader.line_num
            if not row or all(not x.strip() for x in row):
                continue
            if len(row) < len(header):
                raise ParseError(line, f"expected {len(header)} fields, got {len(row)}")
            try:
                ts = parse_time(row[col["time"]])
            except ValueError:
                raise ParseError(line, f"bad time {row[col['time']]!r}") from None
            if ranges is not None and not any(a <= ts < b for a, b in ranges):
                continue
            try:
                lon = float(row[col["lon"]])
                lat = float(row[col["lat"]])
                float(row[col["speed"]])
                float(row[col["direction"]])
            except ValueError:
                raise ParseError(line, "non-numeric coordinate, speed or direction") from None
            occ = row[col["occupied"]].strip()
            if occ not in ("0", "1"):
                raise ParseError(line, f"occupied must be 0 or 1, got {occ!r}")
            out.append(TripRecord(row[col["taxi_id"]].strip(), ts, lon, lat, int(occ), line))
    return out


def _by_taxi(records: Iterable[TripRecord]) -> dict[str, list[TripRecord]]:
    groups = defaultdict(list)
    for r in records:
        groups[r.taxi_id].append(r)
    for recs in groups.values():
        recs.sort(key=lambda r: (r.timestamp, r.line))
    return groups


def extract_pickups(records: Iterable[TripRecord], bbox=DEFAULT_BBOX) -> list[TripRecord]:
    """Records where a taxi's occupied flag flips from 0 to 1, in the box,
    sorted by (time, taxi). The previous record must be at most
    FLIP_MARGIN seconds older, so gaps in the log do not fake a pickup."""
    out = []
    for recs in _by_taxi(records).values():
        for prev, cur in zip(recs, recs[1:]):
            if (prev.occupied == 0 and cur.occupied == 1
                    and cur.timestamp - prev.timestamp <= FLIP_MARGIN
                    and in_bbox(cur.lon, cur.lat, bbox)):
                out.append(cur)
    out.sort(key=lambda r: (r.timestamp, r.taxi_id, r.line))
    return out


def available_taxis(records: Iterable[TripRecord], t0: int, lookback: int = 300,
                    bbox=DEFAULT_BBOX) -> list[TripRecord]:
    """Taxis with records in [t0-lookback, t0], none of them occupied; each
    is placed at its most recent record at or before t0. Sorted by taxi id."""
    out = []
    for taxi, recs in sorted(_by_taxi(records).items()):
        recent = [r for r in recs if t0 - lookback <= r.timestamp <= t0]
        if not recent or any(r.occupied for r in recent):
            continue
        last = recent[-1]
        if in_bbox(last.lon, last.lat, bbox):
            out.append(last)
    return out


def haversine_matrix(lon, lat) -> np.ndarray:
    """Great-circle distances in meters between all pairs of points."""
    lon = np.radians(np.asarray(lon, dtype=np.float64))
    lat = np.radians(np.asarray(lat, dtype=np.float64))
    dlat = lat[:, None] - lat[None, :]
    dlon = lon[:, None] - lon[None, :]
    a = np.sin(dlat / 2) ** 2 + np.cos(lat)[:, None] * np.cos(lat)[None, :] * np.sin(dlon / 2) ** 2
    d = 2 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return d


def build_window(records: Sequence[TripRecord], window: WindowSpec, bbox=DEFAULT_BBOX,
                 seed: int = 0) -> TripWindow:
    pickups = extract_pickups(records, bbox)

    def between(a, b):
        return [p for p in pickups if a <= p.timestamp < b]

    r1 = between(*window.first_stage)
    a, b = window.second_stage
    realized = between(a, b)
    hist = [between(a - off * DAY, b - off * DAY) for off in window.scenario_day_offsets]
    label = window.label()
    if not r1:
        raise EmptyWindow(f"{label}: no first-stage pickups")
    if not realized:
        raise EmptyWindow(f"{label}: no realized second-stage pickups")
    for off, h in zip(window.scenario_day_offsets, hist):
        if not h:
            raise EmptyWindow(f"{label}: no pickups {off} days earlier")
    taxis = available_taxis(records, window.t0, window.driver_lookback, bbox)
    need = math.ceil(window.driver_multiplier * len(r1))
    if len(taxis) < need:
        raise InsufficientDrivers(f"{label}: {len(taxis)} available taxis, need {need}")
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    pick = np.sort(rng.choice(len(taxis), size=need, replace=False))
    drivers = [taxis[i] for i in pick]

    r2, scen, labels = [], [], []
    for tag, group in [(f"S{i + 1}", h) for i, h in enumerate(hist)] + [("S*", realized)]:
        idx = []
        for p in group:
            idx.append(len(r2))
            r2.append(p)
            labels.append(f"{tag}:{p.taxi_id}@{p.timestamp}")
        scen.append(idx)
    pts = r1 + r2 + drivers
    dist = haversine_matrix([p.lon for p in pts], [p.lat for p in pts])
    inst = MetricInstance(len(r1), labels, len(drivers), dist, ScenarioSet.of(scen[:-1]))
    return TripWindow(inst, tuple(scen[-1]), label)


def ingest_trips_csv(path, window: WindowSpec, bbox=DEFAULT_BBOX, seed: int = 0) -> TripWindow:
    records = read_trip_records(path, window.ranges())
    return build_window(records, window, bbox, seed)
