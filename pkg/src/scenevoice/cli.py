"""Command-line interface: detect, read, run, and bench.

Every subcommand accepts the same flag set; settings resolve with a total
precedence order of built-in default < --config JSON file < explicit flag.
The config file is a single JSON object whose keys are the flag names with
underscores (for example {"conf_threshold": 0.4}).

Exit codes: 0 success, 2 input/configuration error, 3 backend/engine error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from scenevoice.arbiter import ArbiterConfig, ArbiterState, arbitrate, phrase
from scenevoice.detection.backends import (
    ExternalProcessDetector,
    ScriptedDetector,
    load_script,
)
from scenevoice.detection.labels import LabelTable, default_label_table, load_label_table
from scenevoice.errors import (
    BackendUnavailableError,
    ConfigurationError,
    EngineUnavailableError,
    SceneVoiceError,
)
from scenevoice.metrics import metrics_report
from scenevoice.ocr.recognize import OcrConfig, recognize_text
from scenevoice.pipeline import FrameSource, PipelineConfig, run_pipeline
from scenevoice.raster import read_pnm
from scenevoice.speech import (
    ExternalEngineSink,
    NullSink,
    SpeechSink,
    TranscriptSink,
    Utterance,
)

_DEFAULTS: dict[str, object] = {
    "mode": "detect",
    "image": None,
    "source_dir": None,
    "frame_period_ms": 500,
    "backend": "scripted",
    "backend_cmd": None,
    "script": None,
    "conf_threshold": 0.25,
    "iou_threshold": 0.45,
    "denoise": False,
    "ocr_adaptive": False,
    "speak": False,
    "sink_cmd": None,
    "transcript": None,
    "metrics": None,
    "labels": None,
}


def _add_flags(parser: argparse.ArgumentParser) -> None:
    # Defaults are None sentinels so the config file can sit between the
    # built-in defaults and explicitly passed flags.
    parser.add_argument("--mode", choices=("detect", "read"), default=None)
    parser.add_argument("--image", metavar="PATH", default=None)
    parser.add_argument("--source-dir", metavar="PATH", default=None)
    parser.add_argument("--frame-period-ms", metavar="N", type=int, default=None)
    parser.add_argument("--config", metavar="PATH", default=None)
    parser.add_argument("--backend", choices=("scripted", "external"), default=None)
    parser.add_argument("--backend-cmd", metavar="TEMPLATE", default=None)
    parser.add_argument("--script", metavar="PATH", default=None)
    parser.add_argument("--conf-threshold", metavar="F", type=float, default=None)
    parser.add_argument("--iou-threshold", metavar="F", type=float, default=None)
    parser.add_argument("--denoise", action="store_const", const=True, default=None)
    parser.add_argument("--ocr-adaptive", action="store_const", const=True, default=None)
    parser.add_argument("--speak", action="store_const", const=True, default=None)
    parser.add_argument("--sink-cmd", metavar="TEMPLATE", default=None)
    parser.add_argument("--transcript", metavar="PATH", default=None)
    parser.add_argument("--metrics", metavar="PATH", default=None)
    parser.add_argument("--labels", metavar="PATH", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenevoice",
        description="Turn frames into spoken scene announcements or read printed text.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("detect", "detect objects in one image and print announcements"),
        ("read", "recognize printed text in one image"),
        ("run", "run the full pipeline over an image sequence"),
        ("bench", "measure per-frame pipeline overhead over a corpus"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_flags(p)
    return parser


def _load_config_file(path: str) -> dict[str, object]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError("config file must contain a JSON object")
    settings: dict[str, object] = {}
    for key, value in doc.items():
        norm = key.replace("-", "_")
        if norm not in _DEFAULTS:
            raise ConfigurationError(f"unknown config key {key!r}")
        settings[norm] = value
    return settings


def resolve_settings(args: argparse.Namespace) -> dict[str, object]:
    """Total precedence: built-in default < config file < explicit flag."""
    settings = dict(_DEFAULTS)
    if args.config is not None:
        settings.update(_load_config_file(args.config))
    for key in _DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            settings[key] = flag_value
    return settings


# -- shared builders ----------------------------------------------------------


def _build_labels(settings: dict[str, object]) -> LabelTable:
    path = settings["labels"]
    return load_label_table(str(path)) if path else default_label_table()


def _build_detector(settings: dict[str, object], labels: LabelTable):
    if settings["backend"] == "external":
        template = settings["backend_cmd"]
        if not template:
            raise ConfigurationError("--backend external requires --backend-cmd")
        return ExternalProcessDetector(str(template), labels=labels)
    script = (
        load_script(str(settings["script"]), labels) if settings["script"] else {}
    )
    return ScriptedDetector(script)


class _FanoutSink:
    """Duck-typed sink that forwards to several sinks with identical policy."""

    def __init__(self, sinks: list[SpeechSink]) -> None:
        self._sinks = sinks

    def enqueue(self, utterance: Utterance) -> bool:
        return all([sink.enqueue(utterance) for sink in self._sinks])

    def drain(self) -> int:
        return max(sink.drain() for sink in self._sinks)

    def close(self) -> None:
        for sink in self._sinks:
            sink.close()


def _build_sink(settings: dict[str, object]):
    sinks: list[SpeechSink] = []
    if settings["transcript"]:
        sinks.append(TranscriptSink(str(settings["transcript"])))
    if settings["sink_cmd"]:
        sinks.append(ExternalEngineSink(str(settings["sink_cmd"])))
    if not sinks:
        return NullSink()
    if len(sinks) == 1:
        return sinks[0]
    return _FanoutSink(sinks)


def _warn_ignored_ocr_flags(settings: dict[str, object]) -> None:
    ignored = [
        flag
        for flag, key in (("--denoise", "denoise"), ("--ocr-adaptive", "ocr_adaptive"))
        if settings[key]
    ]
    if ignored:
        print(
            f"warning: {', '.join(ignored)} ignored in detect mode",
            file=sys.stderr,
        )


def _ocr_config(settings: dict[str, object]) -> OcrConfig:
    return OcrConfig(
        denoise=bool(settings["denoise"]),
        adaptive=bool(settings["ocr_adaptive"]),
    )


def _require_image(settings: dict[str, object], command: str) -> str:
    image = settings["image"]
    if not image:
        raise ConfigurationError(f"{command} requires --image")
    return str(image)


# -- subcommands ---------------------------------------------------------------


def cmd_detect(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    _warn_ignored_ocr_flags(settings)
    raster = read_pnm(_require_image(settings, "detect"))
    labels = _build_labels(settings)
    detector = _build_detector(settings, labels)
    try:
        detections = detector.detect(raster)
    finally:
        detector.close()
    for det in detections:
        record = {
            "x1": det.box.x1,
            "y1": det.box.y1,
            "x2": det.box.x2,
            "y2": det.box.y2,
            "class_id": det.class_id,
            "confidence": det.confidence,
        }
        print(json.dumps(record))
    events = arbitrate(
        detections,
        [],
        ArbiterState(),
        config=ArbiterConfig(),
        labels=labels,
        clock=0.0,
        frame_index=0,
        frame_w=raster.width,
        frame_h=raster.height,
    )
    for event in events:
        print(phrase(event))
    return 0


def cmd_read(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    raster = read_pnm(_require_image(settings, "read"))
    blocks = recognize_text(raster, _ocr_config(settings))
    for block in blocks:
        print(block.text)
    if settings["speak"]:
        if not (settings["transcript"] or settings["sink_cmd"]):
            raise ConfigurationError("--speak requires --transcript or --sink-cmd")
        sink = _build_sink(settings)
        for block in blocks:
            sink.enqueue(Utterance(text=f"reading: {block.text}", priority="normal"))
        sink.drain()
        sink.close()
    return 0


def _build_source(settings: dict[str, object], default_period_ms: int) -> FrameSource:
    period_ms = settings["frame_period_ms"]
    if period_ms is None:
        period_ms = default_period_ms
    period_s = int(period_ms) / 1000.0
    if settings["source_dir"]:
        return FrameSource.from_dir(str(settings["source_dir"]), period_s)
    if settings["image"]:
        return FrameSource.from_image(str(settings["image"]), period_s)
    raise ConfigurationError("a frame source is required: --image or --source-dir")


def _run_common(settings: dict[str, object]) -> tuple[PipelineConfig, object]:
    mode = str(settings["mode"])
    labels = _build_labels(settings)
    sink = _build_sink(settings)
    cfg_kwargs = dict(
        mode=mode,
        labels=labels,
        sink=sink,
        ocr=_ocr_config(settings),
    )
    if mode == "detect":
        _warn_ignored_ocr_flags(settings)
        cfg_kwargs["ocr"] = OcrConfig()
        cfg_kwargs["detector"] = _build_detector(settings, labels)
    cfg = PipelineConfig(**cfg_kwargs)
    return cfg, sink


def cmd_run(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    source = _build_source(settings, default_period_ms=500)
    cfg, sink = _run_common(settings)
    try:
        metrics = run_pipeline(cfg, source)
    finally:
        if cfg.detector is not None:
            cfg.detector.close()
        sink.close()
    if settings["metrics"]:
        with open(str(settings["metrics"]), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(metrics_report(metrics))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    if not settings["source_dir"]:
        raise ConfigurationError("bench requires --source-dir")
    # Bench wants throughput: frames arrive back to back unless told otherwise.
    source = _build_source(settings, default_period_ms=0)
    cfg, sink = _run_common(settings)
    try:
        metrics = run_pipeline(cfg, source)
    finally:
        if cfg.detector is not None:
            cfg.detector.close()
        sink.close()
    report = metrics_report(metrics)
    sys.stdout.write(report)
    if settings["metrics"]:
        with open(str(settings["metrics"]), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report)
    return 0


_COMMANDS = {
    "detect": cmd_detect,
    "read": cmd_read,
    "run": cmd_run,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (BackendUnavailableError, EngineUnavailableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SceneVoiceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
