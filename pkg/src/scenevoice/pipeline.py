"""Frame sourcing, the real-time loop, operating modes, and metrics.

Frames flow through three stages: source -> inference (detector or OCR)
-> arbitration/speech. Staging between source and inference is bounded
(default 2 frames) with a drop-oldest policy, so under load the pipeline
always works on the freshest scene instead of falling behind.

Time is the source's simulated clock: frame i arrives at i * period. The
inference stage advances a virtual "busy until" cursor by each frame's
inference cost (a scripted backend's declared delay, otherwise measured
wall time), and frames that arrive while the stage is busy pile into the
bounded staging queue exactly as they would against a live camera. Because
every drop decision depends only on timestamps and costs - never on thread
scheduling - the threaded pipeline reproduces the single-threaded
reference order byte for byte.
"""

from __future__ import annotations

import logging
import os
import queue
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from scenevoice.arbiter import ArbiterConfig, ArbiterState, arbitrate, phrase
from scenevoice.detection.backends import DetectorBackend
from scenevoice.detection.labels import LabelTable, default_label_table
from scenevoice.errors import ConfigurationError, InvalidInputError, InvalidParameterError
from scenevoice.metrics import Metrics, metrics_report  # re-exported for callers
from scenevoice.ocr.font import GlyphFont, builtin_font
from scenevoice.ocr.recognize import OcrConfig, recognize_text
from scenevoice.raster import Raster, read_pnm
from scenevoice.speech import NullSink, SpeechSink, Utterance

__all__ = [
    "Frame",
    "FrameSource",
    "Metrics",
    "PipelineConfig",
    "metrics_report",
    "run_detection_mode",
    "run_pipeline",
    "run_reader_mode",
]

log = logging.getLogger("scenevoice.pipeline")

DEFAULT_QUEUE_CAPACITY = 2
DEFAULT_FRAME_PERIOD_S = 0.5

_SOURCE_EXTENSIONS = (".pgm", ".ppm")


@dataclass(frozen=True)
class Frame:
    """One sourced image with its arrival stamp on the pipeline clock."""

    index: int
    timestamp: float
    raster: Raster
    capture_ms: float = 0.0


class FrameSource:
    """Ordered frames with a simulated clock: timestamp = index * period."""

    def __init__(
        self,
        loaders: list[Callable[[], Raster]],
        period_s: float = DEFAULT_FRAME_PERIOD_S,
        name: str = "frames",
    ) -> None:
        if period_s < 0:
            raise InvalidParameterError("frame period must be >= 0")
        self._loaders = loaders
        self.period_s = period_s
        self.name = name

    def __len__(self) -> int:
        return len(self._loaders)

    def __iter__(self) -> Iterator[Frame]:
        for index, load in enumerate(self._loaders):
            t0 = time.perf_counter()
            raster = load()
            capture_ms = (time.perf_counter() - t0) * 1000.0
            yield Frame(
                index=index,
                timestamp=index * self.period_s,
                raster=raster,
                capture_ms=capture_ms,
            )

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_image(cls, path: str, period_s: float = DEFAULT_FRAME_PERIOD_S) -> "FrameSource":
        """A single-frame source backed by one PGM/PPM file."""
        return cls([lambda: read_pnm(path)], period_s, name=path)

    @classmethod
    def from_paths(
        cls, paths: Iterable[str], period_s: float = DEFAULT_FRAME_PERIOD_S
    ) -> "FrameSource":
        """An ordered file-list source; frames keep the given order."""
        loaders = [(lambda p=p: read_pnm(p)) for p in paths]
        return cls(loaders, period_s, name="file list")

    @classmethod
    def from_dir(cls, directory: str, period_s: float = DEFAULT_FRAME_PERIOD_S) -> "FrameSource":
        """All PGM/PPM files in a directory, in filename order."""
        try:
            entries = sorted(os.listdir(directory))
        except OSError as exc:
            raise InvalidInputError(f"cannot list frame directory {directory!r}: {exc}") from exc
        paths = [
            os.path.join(directory, e)
            for e in entries
            if e.lower().endswith(_SOURCE_EXTENSIONS)
        ]
        return cls.from_paths(paths, period_s)

    @classmethod
    def synthetic(
        cls,
        count: int,
        width: int = 640,
        height: int = 480,
        period_s: float = 0.0,
    ) -> "FrameSource":
        """Flat gray frames generated on the fly; content-free by design."""
        loaders = [
            (lambda i=i: Raster.gray(width, height, fill=(40 + i) % 256))
            for i in range(count)
        ]
        return cls(loaders, period_s, name=f"synthetic x{count}")


@dataclass
class PipelineConfig:
    """Everything a run needs besides the frame source."""

    mode: str = "detect"  # "detect" | "read"
    detector: DetectorBackend | None = None
    ocr: OcrConfig = field(default_factory=OcrConfig)
    arbiter: ArbiterConfig = field(default_factory=ArbiterConfig)
    labels: LabelTable = field(default_factory=default_label_table)
    sink: SpeechSink | None = None
    font: GlyphFont | None = None
    queue_capacity: int = DEFAULT_QUEUE_CAPACITY
    model_size: int = 640
    threaded: bool = True

    def __post_init__(self) -> None:
        if self.mode not in ("detect", "read"):
            raise ConfigurationError(f"mode must be 'detect' or 'read', got {self.mode!r}")
        if self.queue_capacity < 1:
            raise ConfigurationError("queue capacity must be >= 1")


# -- the inference stage ----------------------------------------------------


class _StagingQueue:
    """Bounded frame staging with drop-oldest (freshest-frame) overflow."""

    def __init__(self, capacity: int) -> None:
        self.capacity = capacity
        self.items: deque[Frame] = deque()
        self.dropped = 0
        self.last_index = -1

    def push(self, frame: Frame) -> None:
        if len(self.items) >= self.capacity:
            self.items.popleft()
            self.dropped += 1
        self.items.append(frame)
        self.last_index = frame.index


@dataclass(frozen=True)
class _Dispatch:
    """One frame's trip through the inference stage."""

    frame: Frame
    payload: object  # list[Detection] or list[TextBlock]
    infer_cost_s: float  # virtual cost that advanced the pipeline clock
    dispatch_lag: int  # newest staged index minus this frame's index, at pop
    completed_at: float  # pipeline clock when inference finished


_DONE = object()


def _dispatch_frames(
    frames: Iterator[Frame],
    capacity: int,
    run_inference: Callable[[Frame], tuple[object, float]],
    stop: threading.Event | None,
) -> Iterator[object]:
    """Yield _Dispatch records, then the total drop count.

    Implements the virtual clock described in the module docstring: the
    stage is busy until sim_t; frames with timestamps strictly before
    sim_t are staged (bounded, drop-oldest) and the oldest staged frame is
    processed next. When nothing has arrived, the clock jumps forward to
    the next frame. The final yielded value (after all _Dispatch records)
    is the integer number of frames dropped.
    """
    stage = _StagingQueue(capacity)
    sim_t = 0.0
    lookahead: Frame | object | None = None
    while True:
        if stop is not None and stop.is_set():
            # Graceful drain: everything staged, in hand, or still queued
            # upstream is discarded (the source stops yielding on its own).
            stage.dropped += len(stage.items)
            stage.items.clear()
            if lookahead is not None and lookahead is not _DONE:
                stage.dropped += 1
            for _ in frames:
                stage.dropped += 1
            break
        # Stage everything that has already arrived (strictly before now).
        while True:
            if lookahead is None:
                lookahead = next(frames, _DONE)
            if lookahead is _DONE or lookahead.timestamp >= sim_t:
                break
            stage.push(lookahead)
            lookahead = None
        if not stage.items:
            if lookahead is _DONE:
                break
            # Idle: jump the clock to the next arrival.
            sim_t = max(sim_t, lookahead.timestamp)
            stage.push(lookahead)
            lookahead = None
        frame = stage.items.popleft()
        lag = stage.last_index - frame.index
        payload, cost_s = run_inference(frame)
        sim_t += cost_s
        yield _Dispatch(
            frame=frame,
            payload=payload,
            infer_cost_s=cost_s,
            dispatch_lag=lag,
            completed_at=sim_t,
        )
    yield stage.dropped


# -- mode-specific inference ------------------------------------------------


def _detect_inference(cfg: PipelineConfig) -> Callable[[Frame], tuple[object, float]]:
    detector = cfg.detector
    if detector is None:
        raise ConfigurationError("detection mode requires a detector backend")

    def run(frame: Frame) -> tuple[object, float]:
        t0 = time.perf_counter()
        detections = detector.detect(frame.raster)
        real_s = time.perf_counter() - t0
        declared = detector.simulated_delay_s
        return detections, (declared if declared is not None else real_s)

    return run


def _reader_inference(cfg: PipelineConfig) -> Callable[[Frame], tuple[object, float]]:
    font = cfg.font if cfg.font is not None else builtin_font()

    def run(frame: Frame) -> tuple[object, float]:
        t0 = time.perf_counter()
        blocks = recognize_text(frame.raster, cfg.ocr, font=font)
        return blocks, time.perf_counter() - t0

    return run


# -- the consumer stage -------------------------------------------------------


def _consume(
    dispatch: _Dispatch,
    cfg: PipelineConfig,
    state: ArbiterState,
    sink: SpeechSink,
    metrics: Metrics,
) -> None:
    frame = dispatch.frame
    if cfg.mode == "detect":
        detections, texts = dispatch.payload, []
    else:
        detections, texts = [], dispatch.payload

    t0 = time.perf_counter()
    arbitrate(
        detections,
        texts,
        state,
        config=cfg.arbiter,
        labels=cfg.labels,
        clock=frame.timestamp,
        frame_index=frame.index,
        frame_w=frame.raster.width,
        frame_h=frame.raster.height,
    )
    events = state.drain_pending()
    arbitrate_ms = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    try:
        for event in events:
            sink.enqueue(
                Utterance(
                    text=phrase(event),
                    priority="hazard" if event.kind == "hazard" else "normal",
                    created_at=event.timestamp,
                )
            )
        sink.drain()
    except Exception:  # speech failures must not stop navigation
        log.exception("speech sink failed; continuing")
    speak_ms = (time.perf_counter() - t0) * 1000.0

    metrics.frames_processed += 1
    metrics.record("capture", frame.capture_ms)
    metrics.record("inference", dispatch.infer_cost_s * 1000.0)
    metrics.record("arbitrate", arbitrate_ms)
    metrics.record("speak", speak_ms)
    metrics.record("overhead", frame.capture_ms + arbitrate_ms + speak_ms)
    metrics.record("end_to_end", (dispatch.completed_at - frame.timestamp) * 1000.0 + arbitrate_ms + speak_ms)


# -- runners ------------------------------------------------------------------


def _counting(source: Iterable[Frame], metrics: Metrics, stop: threading.Event | None) -> Iterator[Frame]:
    for frame in source:
        metrics.frames_sourced += 1
        yield frame
        if stop is not None and stop.is_set():
            return


def _run_single_threaded(
    cfg: PipelineConfig,
    source: Iterable[Frame],
    run_inference: Callable[[Frame], tuple[object, float]],
    sink: SpeechSink,
    stop: threading.Event | None,
) -> Metrics:
    metrics = Metrics()
    state = ArbiterState()
    frames = _counting(source, metrics, stop)
    for item in _dispatch_frames(frames, cfg.queue_capacity, run_inference, stop):
        if isinstance(item, _Dispatch):
            _consume(item, cfg, state, sink, metrics)
        else:
            metrics.frames_dropped = item
    return metrics


def _run_threaded(
    cfg: PipelineConfig,
    source: Iterable[Frame],
    run_inference: Callable[[Frame], tuple[object, float]],
    sink: SpeechSink,
    stop: threading.Event | None,
) -> Metrics:
    metrics = Metrics()
    state = ArbiterState()
    frame_q: queue.Queue = queue.Queue(maxsize=256)
    result_q: queue.Queue = queue.Queue(maxsize=8)

    def pump_source() -> None:
        try:
            for frame in _counting(source, metrics, stop):
                frame_q.put(frame)
        except BaseException as exc:  # propagate source failures to the worker
            frame_q.put(("error", exc))
            return
        frame_q.put(("done", None))

    def pump_inference() -> None:
        def pulled() -> Iterator[Frame]:
            while True:
                item = frame_q.get()
                if isinstance(item, tuple):
                    kind, payload = item
                    if kind == "error":
                        raise payload
                    return
                yield item

        try:
            for item in _dispatch_frames(pulled(), cfg.queue_capacity, run_inference, stop):
                if isinstance(item, _Dispatch):
                    result_q.put(item)
                else:
                    result_q.put(("done", item))
        except BaseException as exc:
            result_q.put(("error", exc))

    threads = [
        threading.Thread(target=pump_source, name="frame-source", daemon=True),
        threading.Thread(target=pump_inference, name="inference", daemon=True),
    ]
    for t in threads:
        t.start()
    try:
        while True:
            item = result_q.get()
            if isinstance(item, tuple):
                kind, payload = item
                if kind == "error":
                    raise payload
                metrics.frames_dropped = payload
                break
            _consume(item, cfg, state, sink, metrics)
    finally:
        # Unblock producer threads if the consumer bailed early; on the
        # normal path both queues are already empty and this is a no-op.
        for q in (frame_q, result_q):
            while True:
                try:
                    q.get_nowait()
                except queue.Empty:
                    break
        for t in threads:
            t.join(timeout=5.0)
    return metrics


def run_pipeline(
    cfg: PipelineConfig,
    source: Iterable[Frame],
    stop: threading.Event | None = None,
) -> Metrics:
    """Run a full pass in the configured mode and return its metrics."""
    sink = cfg.sink if cfg.sink is not None else NullSink()
    if cfg.mode == "detect":
        run_inference = _detect_inference(cfg)
    else:
        run_inference = _reader_inference(cfg)
    runner = _run_threaded if cfg.threaded else _run_single_threaded
    return runner(cfg, source, run_inference, sink, stop)


def run_detection_mode(
    cfg: PipelineConfig,
    source: Iterable[Frame],
    stop: threading.Event | None = None,
) -> Metrics:
    """Detect -> arbitrate -> phrase -> speak for every sourced frame."""
    if cfg.mode != "detect":
        raise ConfigurationError("run_detection_mode requires mode='detect'")
    return run_pipeline(cfg, source, stop)


def run_reader_mode(
    cfg: PipelineConfig,
    source: Iterable[Frame],
    stop: threading.Event | None = None,
) -> Metrics:
    """Recognize text on every sourced frame and speak each block."""
    if cfg.mode != "read":
        raise ConfigurationError("run_reader_mode requires mode='read'")
    return run_pipeline(cfg, source, stop)
