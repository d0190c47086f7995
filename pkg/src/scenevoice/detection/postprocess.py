"""Candidate decoding and greedy non-maximum suppression.

Both operations are deterministic: every tie-break is total, so identical
inputs give identical outputs regardless of platform or dict order.
"""

from __future__ import annotations

from dataclasses import dataclass

from scenevoice.detection.geometry import Box, iou
from scenevoice.detection.labels import LabelTable, default_label_table
from scenevoice.errors import InvalidInputError

DEFAULT_CONF_THRESHOLD = 0.25
DEFAULT_IOU_THRESHOLD = 0.45


@dataclass(frozen=True)
class CandidateRow:
    """One raw network output row: a centered box plus per-class scores."""

    cx: float
    cy: float
    w: float
    h: float
    objectness: float
    class_scores: tuple[float, ...]


@dataclass(frozen=True)
class Detection:
    """A decoded, named detection in frame coordinates."""

    box: Box
    class_id: int
    class_name: str
    confidence: float


def decode_candidates(
    rows: list[CandidateRow],
    conf_threshold: float = DEFAULT_CONF_THRESHOLD,
    labels: LabelTable | None = None,
) -> list[Detection]:
    """Turn raw candidate rows into thresholded detections.

    A row's confidence is objectness times its best class score, the class
    is the argmax (smallest index on ties), and the centered extent becomes
    a corner box. Rows whose confidence falls below conf_threshold are
    dropped; surviving rows keep their input order.
    """
    table = labels if labels is not None else default_label_table()
    out: list[Detection] = []
    for row in rows:
        scores = row.class_scores
        if not scores:
            raise InvalidInputError("candidate row has no class scores")
        best_id = 0
        best_score = scores[0]
        for i in range(1, len(scores)):
            if scores[i] > best_score:
                best_id = i
                best_score = scores[i]
        confidence = row.objectness * best_score
        if confidence < conf_threshold:
            continue
        out.append(
            Detection(
                box=Box(
                    x1=row.cx - row.w / 2.0,
                    y1=row.cy - row.h / 2.0,
                    x2=row.cx + row.w / 2.0,
                    y2=row.cy + row.h / 2.0,
                ),
                class_id=best_id,
                class_name=table.name_of(best_id),
                confidence=confidence,
            )
        )
    return out


def nms(
    dets: list[Detection],
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
    class_agnostic: bool = False,
) -> list[Detection]:
    """Greedy suppression of overlapping detections.

    Candidates are visited by descending confidence (ties: lower class id,
    then lower x1, then lower y1) and kept only when their overlap with
    every already-kept detection of the same class (any class when
    class_agnostic) stays at or below iou_threshold. The kept order is the
    visiting order, so the result is a subsequence of the sorted input.
    """
    order = sorted(
        dets, key=lambda d: (-d.confidence, d.class_id, d.box.x1, d.box.y1)
    )
    kept: list[Detection] = []
    for cand in order:
        suppressed = False
        for winner in kept:
            if not class_agnostic and winner.class_id != cand.class_id:
                continue
            if iou(winner.box, cand.box) > iou_threshold:
                suppressed = True
                break
        if not suppressed:
            kept.append(cand)
    return kept
