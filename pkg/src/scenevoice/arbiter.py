"""Announcement policy: zoning, proximity, debouncing, and prioritization.

Raw detections arrive every frame; speaking each one would bury the user
in repetition. The arbiter turns per-frame detections and recognized text
into a short, prioritized stream: hazards always get through first, a
(label, zone) pair is announced at most once per debounce window, and
ordinary objects are capped per frame.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from scenevoice.detection.geometry import Box
from scenevoice.detection.labels import LabelTable, default_label_table
from scenevoice.detection.postprocess import Detection
from scenevoice.errors import InvalidParameterError
from scenevoice.ocr.recognize import TextBlock

ZONES = ("left", "center", "right")
PROXIMITIES = ("near", "mid", "far")

_PROXIMITY_RANK = {"near": 0, "mid": 1, "far": 2}
_KIND_RANK = {"hazard": 0, "object": 1, "text": 2}


@dataclass(frozen=True)
class AnnouncementEvent:
    """One thing worth saying: what, where, how urgent, and when."""

    kind: str  # "hazard" | "object" | "text"
    label: str
    zone: str
    proximity: str
    confidence: float
    frame_index: int
    timestamp: float


@dataclass(frozen=True)
class ArbiterConfig:
    """Policy knobs.

    debounce_window -- seconds before the same (label, zone) may repeat
    max_per_frame   -- non-hazard announcements allowed per frame
    near_ratio      -- box-area/frame-area at or above this is "near"
    mid_ratio       -- ... at or above this (but below near) is "mid"
    max_pending     -- staged announcements kept before the oldest
                       non-hazard is dropped
    """

    debounce_window: float = 3.0
    max_per_frame: int = 2
    near_ratio: float = 0.25
    mid_ratio: float = 0.05
    max_pending: int = 16

    def __post_init__(self) -> None:
        if self.debounce_window <= 0:
            raise InvalidParameterError("debounce_window must be positive")
        if not self.near_ratio > self.mid_ratio:
            raise InvalidParameterError("proximity thresholds must be descending")
        if self.max_per_frame < 0 or self.max_pending < 1:
            raise InvalidParameterError("caps must be non-negative (pending >= 1)")


@dataclass
class ArbiterState:
    """Mutable policy memory owned by a single consumer thread."""

    last_announced: dict[tuple[str, str], float] = field(default_factory=dict)
    pending: deque[AnnouncementEvent] = field(default_factory=deque)

    def stage(self, event: AnnouncementEvent, max_pending: int) -> None:
        """Queue an event for speaking, evicting the oldest non-hazard on overflow."""
        if len(self.pending) >= max_pending:
            for i, queued in enumerate(self.pending):
                if queued.kind != "hazard":
                    del self.pending[i]
                    break
            else:
                if event.kind != "hazard":
                    return  # all staged events are hazards; drop the newcomer
        self.pending.append(event)

    def drain_pending(self) -> list[AnnouncementEvent]:
        events = list(self.pending)
        self.pending.clear()
        return events


def zone_of(box: Box, frame_w: int) -> str:
    """Left / center / right from the box center against frame thirds."""
    cx = box.center_x
    if cx < frame_w / 3:
        return "left"
    if cx <= 2 * frame_w / 3:
        return "center"
    return "right"


def proximity_of(
    box: Box, frame_w: int, frame_h: int, config: ArbiterConfig | None = None
) -> str:
    """Near / mid / far from the box-area share of the frame."""
    cfg = config or ArbiterConfig()
    ratio = box.area / (frame_w * frame_h)
    if ratio >= cfg.near_ratio:
        return "near"
    if ratio >= cfg.mid_ratio:
        return "mid"
    return "far"


def arbitrate(
    detections: list[Detection],
    texts: list[TextBlock],
    state: ArbiterState,
    config: ArbiterConfig | None = None,
    labels: LabelTable | None = None,
    clock: float = 0.0,
    frame_index: int = 0,
    frame_w: int = 1,
    frame_h: int = 1,
) -> list[AnnouncementEvent]:
    """Select what to announce for one frame.

    Detections become hazard/object events, placed by zone and proximity.
    A (label, zone) already announced within the debounce window is
    suppressed. Survivors are ordered hazards-first, then nearer, then
    higher confidence, then label; non-hazards beyond max_per_frame are
    dropped (hazards never count against the cap). Text blocks pass
    through last, un-debounced and uncapped. Emitted events refresh the
    debounce memory and are also staged on state.pending.
    """
    cfg = config or ArbiterConfig()
    table = labels if labels is not None else default_label_table()

    # Expire debounce entries that can no longer suppress anything.
    expired = [k for k, t in state.last_announced.items() if clock - t >= cfg.debounce_window]
    for key in expired:
        del state.last_announced[key]

    candidates: list[AnnouncementEvent] = []
    for det in detections:
        zone = zone_of(det.box, frame_w)
        last = state.last_announced.get((det.class_name, zone))
        if last is not None and clock - last < cfg.debounce_window:
            continue
        candidates.append(
            AnnouncementEvent(
                kind="hazard" if table.is_hazard(det.class_name) else "object",
                label=det.class_name,
                zone=zone,
                proximity=proximity_of(det.box, frame_w, frame_h, cfg),
                confidence=det.confidence,
                frame_index=frame_index,
                timestamp=clock,
            )
        )

    candidates.sort(
        key=lambda e: (
            _KIND_RANK[e.kind],
            _PROXIMITY_RANK[e.proximity],
            -e.confidence,
            e.label,
        )
    )

    emitted: list[AnnouncementEvent] = []
    normals = 0
    seen_keys: set[tuple[str, str]] = set()
    for event in candidates:
        key = (event.label, event.zone)
        if key in seen_keys:
            continue  # duplicates within one frame collapse to the first
        if event.kind != "hazard":
            if normals >= cfg.max_per_frame:
                continue
            normals += 1
        seen_keys.add(key)
        emitted.append(event)
        state.last_announced[key] = clock

    for block in texts:
        if not block.text:
            continue
        emitted.append(
            AnnouncementEvent(
                kind="text",
                label=block.text,
                zone="center",
                proximity="near",
                confidence=block.confidence,
                frame_index=frame_index,
                timestamp=clock,
            )
        )

    for event in emitted:
        state.stage(event, cfg.max_pending)
    return emitted


def phrase(event: AnnouncementEvent) -> str:
    """Deterministic utterance text for an announcement."""
    if event.kind == "hazard":
        return f"caution: {event.label} ahead, {event.zone}, {event.proximity}"
    if event.kind == "object":
        return f"{event.label}, {event.zone}"
    return f"reading: {event.label}"
