"""Speech output: a prioritized utterance queue behind pluggable sinks.

Announcements are queued and spoken in a strict priority order: hazard
utterances jump ahead of anything normal still waiting, and their arrival
evicts normal utterances that have grown stale. TranscriptSink writes
spoken lines to a file (the deterministic test surface); ExternalEngineSink
hands each utterance to an external text-to-speech command, one process at
a time, dropping utterances rather than ever stalling navigation.
"""

from __future__ import annotations

import logging
import shlex
import subprocess
from collections import deque
from dataclasses import dataclass

from scenevoice.errors import ConfigurationError, InvalidInputError, SinkClosedError

log = logging.getLogger("scenevoice.speech")

# Queued normal utterances older than this are discarded when a hazard
# arrives: stale object news is worse than silence.
STALE_AFTER_S = 5.0

DEFAULT_MAX_QUEUE = 32

DEFAULT_ENGINE_TIMEOUT_S = 10.0

PRIORITIES = ("hazard", "normal")


@dataclass(frozen=True)
class Utterance:
    """One thing to say, stamped with the clock that produced it."""

    text: str
    priority: str = "normal"
    created_at: float = 0.0

    def __post_init__(self) -> None:
        if not self.text:
            raise InvalidInputError("utterance text must be non-empty")
        if self.priority not in PRIORITIES:
            raise InvalidInputError(f"priority must be one of {PRIORITIES}")


class SpeechSink:
    """Base sink: ordering and bounding policy; subclasses do the speaking.

    enqueue() stages an utterance, drain() speaks everything staged, in
    order, through the subclass hook. Normal utterances are FIFO and
    bounded; hazards insert ahead of all queued normals (FIFO among
    themselves), never count against the bound, and evict queued normals
    older than STALE_AFTER_S relative to the hazard's own timestamp.
    """

    def __init__(self, max_queue: int = DEFAULT_MAX_QUEUE) -> None:
        if max_queue < 1:
            raise ConfigurationError("max_queue must be >= 1")
        self._max_queue = max_queue
        self._queue: deque[Utterance] = deque()
        self._closed = False

    # -- queue policy -----------------------------------------------------

    def enqueue(self, utterance: Utterance) -> bool:
        """Stage an utterance; False means a normal one was rejected as overflow."""
        if self._closed:
            raise SinkClosedError("sink is closed")
        if utterance.priority == "hazard":
            survivors = deque(
                u
                for u in self._queue
                if u.priority == "hazard"
                or utterance.created_at - u.created_at <= STALE_AFTER_S
            )
            position = 0
            for queued in survivors:
                if queued.priority != "hazard":
                    break
                position += 1
            survivors.insert(position, utterance)
            self._queue = survivors
            return True
        if len(self._queue) >= self._max_queue:
            return False
        self._queue.append(utterance)
        return True

    def drain(self) -> int:
        """Speak every queued utterance now; returns how many were spoken."""
        if self._closed:
            raise SinkClosedError("sink is closed")
        spoken = 0
        while self._queue:
            self._speak(self._queue.popleft())
            spoken += 1
        return spoken

    def close(self) -> None:
        """Speak anything still queued, then refuse further traffic."""
        if self._closed:
            return
        self.drain()
        self._closed = True
        self._on_close()

    @property
    def queued(self) -> int:
        return len(self._queue)

    # -- subclass hooks -----------------------------------------------------

    def _speak(self, utterance: Utterance) -> None:
        raise NotImplementedError

    def _on_close(self) -> None:
        pass


class NullSink(SpeechSink):
    """Counts utterances and discards them; useful for benchmarks."""

    def __init__(self, max_queue: int = DEFAULT_MAX_QUEUE) -> None:
        super().__init__(max_queue)
        self.spoken: int = 0

    def _speak(self, utterance: Utterance) -> None:
        self.spoken += 1


class TranscriptSink(SpeechSink):
    """Appends one tab-separated line per spoken utterance to a file.

    Line format: "<seconds with 3 decimals>\\t<priority>\\t<text>\\n", where
    the time is the utterance's own timestamp. The file is created (and
    truncated) immediately so an empty run still leaves an empty transcript,
    and every line is flushed as it is written.
    """

    def __init__(self, path: str, max_queue: int = DEFAULT_MAX_QUEUE) -> None:
        super().__init__(max_queue)
        self._fh = open(path, "w", encoding="utf-8", newline="\n")

    def _speak(self, utterance: Utterance) -> None:
        self._fh.write(format_transcript_line(utterance))
        self._fh.flush()

    def _on_close(self) -> None:
        self._fh.close()


def format_transcript_line(utterance: Utterance) -> str:
    return f"{utterance.created_at:.3f}\t{utterance.priority}\t{utterance.text}\n"


class ExternalEngineSink(SpeechSink):
    """Speaks by running an external command once per utterance.

    The command template must contain "{text}"; it is split into argv
    tokens (never run through a shell) and the placeholder is substituted
    as one argument. Processes are strictly serialized: the next utterance
    starts only after the previous process exits. A process that cannot be
    spawned, exits nonzero, or outlives the timeout is logged and its
    utterance dropped; speech must never take the pipeline down.
    """

    def __init__(
        self,
        command_template: str,
        timeout_s: float = DEFAULT_ENGINE_TIMEOUT_S,
        max_queue: int = DEFAULT_MAX_QUEUE,
    ) -> None:
        super().__init__(max_queue)
        if "{text}" not in command_template:
            raise ConfigurationError("speech command template must contain {text}")
        self._argv_template = shlex.split(command_template)
        self._timeout_s = timeout_s

    def _speak(self, utterance: Utterance) -> None:
        argv = [tok.replace("{text}", utterance.text) for tok in self._argv_template]
        try:
            proc = subprocess.run(
                argv,
                stdout=subprocess.DEVNULL,
                stderr=subprocess.DEVNULL,
                timeout=self._timeout_s,
            )
        except subprocess.TimeoutExpired:
            log.warning("speech engine timed out after %.1fs; dropped %r",
                        self._timeout_s, utterance.text)
            return
        except OSError as exc:
            log.warning("speech engine failed to spawn (%s); dropped %r", exc, utterance.text)
            return
        if proc.returncode != 0:
            log.warning("speech engine exited with %d; dropped %r",
                        proc.returncode, utterance.text)
