"""Object-detection geometry, post-processing, labels, and backends."""

from __future__ import annotations

from scenevoice.detection.backends import (
    DetectorBackend,
    ExternalProcessDetector,
    ScriptedDetector,
    load_script,
    parse_script,
    scripted_from_records,
)
from scenevoice.detection.geometry import (
    Box,
    LetterboxTransform,
    iou,
    letterbox_transform,
    map_from_source,
    map_to_source,
)
from scenevoice.detection.labels import (
    COCO_CLASSES,
    HAZARD_CLASSES,
    LabelTable,
    default_label_table,
    load_label_table,
)
from scenevoice.detection.postprocess import (
    DEFAULT_CONF_THRESHOLD,
    DEFAULT_IOU_THRESHOLD,
    CandidateRow,
    Detection,
    decode_candidates,
    nms,
)

__all__ = [
    "Box",
    "CandidateRow",
    "COCO_CLASSES",
    "DEFAULT_CONF_THRESHOLD",
    "DEFAULT_IOU_THRESHOLD",
    "Detection",
    "DetectorBackend",
    "ExternalProcessDetector",
    "HAZARD_CLASSES",
    "LabelTable",
    "LetterboxTransform",
    "ScriptedDetector",
    "decode_candidates",
    "default_label_table",
    "iou",
    "letterbox_transform",
    "load_label_table",
    "load_script",
    "map_from_source",
    "map_to_source",
    "nms",
    "parse_script",
    "scripted_from_records",
]
