"""Detector backends: a scripted stub and an external-process adapter.

The neural network itself is out of scope; inference runs behind a small
interface. ScriptedDetector replays pre-recorded detections per frame and
is the deterministic test backend. ExternalProcessDetector adapts any
program that speaks the newline-delimited JSON protocol:

    request:  {"id": <int>, "image": "<path>", "model_size": <int>}
    response: {"id": <int>, "detections": [{"x1":..,"y1":..,"x2":..,"y2":..,
               "class_id":..,"confidence":..}, ...]}

One request line per frame, the response must echo the id, coordinates are
source-frame pixels.
"""

from __future__ import annotations

import json
import os
import queue
import shlex
import subprocess
import tempfile
import threading
from typing import Iterable, Protocol

from scenevoice.detection.geometry import Box
from scenevoice.detection.labels import LabelTable, default_label_table
from scenevoice.detection.postprocess import Detection
from scenevoice.errors import BackendUnavailableError, ConfigurationError
from scenevoice.raster import Raster, write_pnm

DEFAULT_TIMEOUT_MS = 2000


class DetectorBackend(Protocol):
    """A stateful detector session used by one pipeline worker at a time."""

    #: Seconds of inference time the backend stands in for; None means the
    #: real wall-clock duration of detect() is the cost. Lets tests model a
    #: slow detector without sleeping.
    simulated_delay_s: float | None

    def detect(self, frame: Raster) -> list[Detection]: ...

    def close(self) -> None: ...


def _detection_from_record(record: dict, labels: LabelTable) -> Detection:
    try:
        box = Box(
            x1=float(record["x1"]),
            y1=float(record["y1"]),
            x2=float(record["x2"]),
            y2=float(record["y2"]),
        )
        class_id = int(record["class_id"])
        confidence = float(record["confidence"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BackendUnavailableError(f"malformed detection record: {record!r}") from exc
    return Detection(
        box=box,
        class_id=class_id,
        class_name=labels.name_of(class_id),
        confidence=confidence,
    )


def parse_script(text: str, labels: LabelTable | None = None) -> dict[int, list[Detection]]:
    """Parse a scripted-detector script: JSON frame-index -> record array."""
    table = labels if labels is not None else default_label_table()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"detector script is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError("detector script must be a JSON object")
    script: dict[int, list[Detection]] = {}
    for key, records in doc.items():
        try:
            index = int(key)
        except ValueError:
            raise ConfigurationError(f"frame index {key!r} is not an integer") from None
        if not isinstance(records, list):
            raise ConfigurationError(f"frame {key}: expected a list of records")
        try:
            script[index] = [_detection_from_record(r, table) for r in records]
        except BackendUnavailableError as exc:
            raise ConfigurationError(str(exc)) from exc
    return script


def load_script(path: str, labels: LabelTable | None = None) -> dict[int, list[Detection]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_script(fh.read(), labels)
    except OSError as exc:
        raise ConfigurationError(f"cannot read detector script {path!r}: {exc}") from exc


class ScriptedDetector:
    """Replays scripted detections keyed by the running frame count.

    The n-th detect() call (counting from 0) returns the script entry for
    frame n, or nothing when that frame is not scripted. delay_s is the
    simulated per-frame inference time; the call itself never sleeps.
    """

    def __init__(
        self,
        script: dict[int, list[Detection]] | None = None,
        delay_s: float = 0.0,
    ) -> None:
        self._script = dict(script) if script else {}
        self._next_index = 0
        self.simulated_delay_s = delay_s
        self.calls = 0

    def detect(self, frame: Raster) -> list[Detection]:
        index = self._next_index
        self._next_index += 1
        self.calls += 1
        return list(self._script.get(index, ()))

    def close(self) -> None:
        pass


class ExternalProcessDetector:
    """Adapter around a long-running child process speaking the line protocol.

    The child is spawned on first use and fed one request line per frame;
    frames are handed over as temporary PGM/PPM files. A missing, late, or
    malformed response raises BackendUnavailableError and poisons the
    session (the stream can no longer be trusted to be in sync).
    """

    def __init__(
        self,
        command_template: str,
        model_size: int = 640,
        timeout_ms: int = DEFAULT_TIMEOUT_MS,
        labels: LabelTable | None = None,
    ) -> None:
        argv = shlex.split(command_template)
        if not argv:
            raise ConfigurationError("detector command template is empty")
        self._argv = argv
        self._model_size = model_size
        self._timeout_s = timeout_ms / 1000.0
        self._labels = labels if labels is not None else default_label_table()
        self.simulated_delay_s: float | None = None
        self._proc: subprocess.Popen | None = None
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._reader: threading.Thread | None = None
        self._tmpdir: tempfile.TemporaryDirectory | None = None
        self._next_id = 0
        self._dead = False

    # -- lifecycle --------------------------------------------------------

    def _ensure_started(self) -> None:
        if self._dead:
            raise BackendUnavailableError("detector session is closed or failed")
        if self._proc is not None:
            return
        try:
            self._proc = subprocess.Popen(
                self._argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
            )
        except OSError as exc:
            self._dead = True
            raise BackendUnavailableError(
                f"cannot spawn detector {self._argv[0]!r}: {exc}"
            ) from exc
        self._tmpdir = tempfile.TemporaryDirectory(prefix="scenevoice-frames-")
        self._reader = threading.Thread(
            target=self._pump_stdout, name="detector-stdout", daemon=True
        )
        self._reader.start()

    def _pump_stdout(self) -> None:
        assert self._proc is not None and self._proc.stdout is not None
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF sentinel

    def _fail(self, message: str) -> BackendUnavailableError:
        self._dead = True
        if self._proc is not None and self._proc.poll() is None:
            self._proc.kill()
        return BackendUnavailableError(message)

    def close(self) -> None:
        self._dead = True
        if self._proc is not None:
            if self._proc.stdin is not None:
                try:
                    self._proc.stdin.close()
                except OSError:
                    pass
            try:
                self._proc.wait(timeout=1.0)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
            self._proc = None
        if self._tmpdir is not None:
            self._tmpdir.cleanup()
            self._tmpdir = None

    # -- inference --------------------------------------------------------

    def detect(self, frame: Raster) -> list[Detection]:
        self._ensure_started()
        assert self._proc is not None and self._tmpdir is not None
        request_id = self._next_id
        self._next_id += 1
        suffix = ".ppm" if frame.channels == 3 else ".pgm"
        image_path = os.path.join(self._tmpdir.name, f"frame-{request_id}{suffix}")
        write_pnm(image_path, frame)
        request = json.dumps(
            {"id": request_id, "image": image_path, "model_size": self._model_size}
        )
        try:
            assert self._proc.stdin is not None
            self._proc.stdin.write(request + "\n")
            self._proc.stdin.flush()
        except (OSError, ValueError) as exc:
            raise self._fail(f"detector process rejected a request: {exc}") from exc
        try:
            line = self._lines.get(timeout=self._timeout_s)
        except queue.Empty:
            raise self._fail(
                f"detector did not answer within {self._timeout_s * 1000:.0f} ms"
            ) from None
        finally:
            try:
                os.unlink(image_path)
            except OSError:
                pass
        if line is None:
            raise self._fail("detector process exited mid-session")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise self._fail(f"detector reply is not valid JSON: {line!r}") from exc
        if not isinstance(reply, dict) or reply.get("id") != request_id:
            raise self._fail(
                f"detector reply id mismatch: sent {request_id}, got {reply!r}"
            )
        records = reply.get("detections")
        if not isinstance(records, list):
            raise self._fail(f"detector reply lacks a detections list: {line!r}")
        try:
            return [_detection_from_record(r, self._labels) for r in records]
        except BackendUnavailableError:
            self._dead = True
            raise


def scripted_from_records(
    records_by_frame: dict[int, Iterable[dict]],
    labels: LabelTable | None = None,
    delay_s: float = 0.0,
) -> ScriptedDetector:
    """Build a ScriptedDetector straight from protocol-format records."""
    table = labels if labels is not None else default_label_table()
    script = {
        index: [_detection_from_record(dict(r), table) for r in records]
        for index, records in records_by_frame.items()
    }
    return ScriptedDetector(script, delay_s=delay_s)
