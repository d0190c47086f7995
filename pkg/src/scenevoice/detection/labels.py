"""Class-name table: the 80 common object classes plus walkway hazards.

The default table appends five hazard classes to the standard 80-class
object list. Hazard labels preempt normal announcements downstream, so the
flag lives here with the names. A custom table can be loaded from a JSON
file: a list whose entries are either a plain name (hazard false) or an
object {"name": ..., "hazard": true|false}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from scenevoice.errors import ConfigurationError

COCO_CLASSES: tuple[str, ...] = (
    "person", "bicycle", "car", "motorcycle", "airplane", "bus", "train",
    "truck", "boat", "traffic light", "fire hydrant", "stop sign",
    "parking meter", "bench", "bird", "cat", "dog", "horse", "sheep", "cow",
    "elephant", "bear", "zebra", "giraffe", "backpack", "umbrella",
    "handbag", "tie", "suitcase", "frisbee", "skis", "snowboard",
    "sports ball", "kite", "baseball bat", "baseball glove", "skateboard",
    "surfboard", "tennis racket", "bottle", "wine glass", "cup", "fork",
    "knife", "spoon", "bowl", "banana", "apple", "sandwich", "orange",
    "broccoli", "carrot", "hot dog", "pizza", "donut", "cake", "chair",
    "couch", "potted plant", "bed", "dining table", "toilet", "tv",
    "laptop", "mouse", "remote", "keyboard", "cell phone", "microwave",
    "oven", "toaster", "sink", "refrigerator", "book", "clock", "vase",
    "scissors", "teddy bear", "hair drier", "toothbrush",
)

# Walkway dangers a navigation aid must call out; none of these are in the
# standard 80-class list, so they extend it with hazard=True.
HAZARD_CLASSES: tuple[str, ...] = ("stairs", "hole", "sewage water", "garbage", "ladder")


@dataclass(frozen=True)
class LabelTable:
    """Ordered class names and the subset flagged as hazards."""

    names: tuple[str, ...]
    hazards: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ConfigurationError("label table contains duplicate class names")
        unknown = self.hazards - set(self.names)
        if unknown:
            raise ConfigurationError(f"hazard flags for unknown classes: {sorted(unknown)}")

    def __len__(self) -> int:
        return len(self.names)

    def name_of(self, class_id: int) -> str:
        """Class name for an id; ids beyond the table get a synthetic name."""
        if 0 <= class_id < len(self.names):
            return self.names[class_id]
        return f"class {class_id}"

    def class_id(self, name: str) -> int:
        """Index of a class name; raises ConfigurationError when absent."""
        try:
            return self.names.index(name)
        except ValueError:
            raise ConfigurationError(f"unknown class name {name!r}") from None

    def is_hazard(self, name: str) -> bool:
        return name in self.hazards


def default_label_table() -> LabelTable:
    """The 80 common classes plus the hazard extension block."""
    return LabelTable(
        names=COCO_CLASSES + HAZARD_CLASSES,
        hazards=frozenset(HAZARD_CLASSES),
    )


def parse_label_table(text: str) -> LabelTable:
    """Build a LabelTable from its JSON description (see module docstring)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"label file is not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise ConfigurationError("label file must contain a JSON list")
    names: list[str] = []
    hazards: set[str] = set()
    for entry in doc:
        if isinstance(entry, str):
            names.append(entry)
        elif isinstance(entry, dict) and isinstance(entry.get("name"), str):
            name = entry["name"]
            names.append(name)
            if entry.get("hazard", False):
                hazards.add(name)
        else:
            raise ConfigurationError(
                f"label entries must be names or {{'name', 'hazard'}} objects, got {entry!r}"
            )
    return LabelTable(names=tuple(names), hazards=frozenset(hazards))


def load_label_table(path: str) -> LabelTable:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_label_table(fh.read())
    except OSError as exc:
        raise ConfigurationError(f"cannot read label file {path!r}: {exc}") from exc
