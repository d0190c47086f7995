"""Latency accounting and the byte-stable run report.

Percentiles use linear midpoint interpolation: for n sorted samples the
p-th percentile sits at rank h = p/100 * n - 0.5, interpolating linearly
between the two neighboring samples and clamping at the ends. This exact
rule is stated so independently written tooling can reproduce report
values bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from scenevoice.errors import InvalidParameterError

# Report rows, in emission order. "inference" is the detector or OCR stage;
# "overhead" is per-frame pipeline work excluding that stage; "end_to_end"
# spans frame arrival to announcement hand-off on the pipeline clock.
STAGES = ("capture", "inference", "arbitrate", "speak", "overhead", "end_to_end")


def percentile(samples: list[float], p: float) -> float:
    """Midpoint-interpolated percentile of an unsorted sample list."""
    if not samples:
        raise InvalidParameterError("percentile of an empty sample list")
    if not 0.0 <= p <= 100.0:
        raise InvalidParameterError(f"percentile must be in [0, 100], got {p}")
    ordered = sorted(samples)
    n = len(ordered)
    h = (p / 100.0) * n - 0.5
    if h <= 0.0:
        return ordered[0]
    if h >= n - 1:
        return ordered[-1]
    lo = int(h)
    frac = h - lo
    return ordered[lo] * (1.0 - frac) + ordered[lo + 1] * frac


@dataclass
class Metrics:
    """Counters and per-stage latency samples (milliseconds) for one run."""

    frames_sourced: int = 0
    frames_processed: int = 0
    frames_dropped: int = 0
    stages: dict[str, list[float]] = field(
        default_factory=lambda: {name: [] for name in STAGES}
    )

    def record(self, stage: str, value_ms: float) -> None:
        self.stages[stage].append(value_ms)

    @property
    def conserved(self) -> bool:
        """True when every sourced frame is accounted for exactly once."""
        return self.frames_sourced == self.frames_processed + self.frames_dropped


def _stage_row(name: str, samples: list[float]) -> str:
    if not samples:
        return f"stage {name} count=0 p50=- p95=- max=-"
    return (
        f"stage {name} count={len(samples)}"
        f" p50={percentile(samples, 50):.3f}"
        f" p95={percentile(samples, 95):.3f}"
        f" max={max(samples):.3f}"
    )


def metrics_report(m: Metrics) -> str:
    """Render a run's metrics with a fixed field order, stable for diffing."""
    lines = [
        f"frames_sourced {m.frames_sourced}",
        f"frames_processed {m.frames_processed}",
        f"frames_dropped {m.frames_dropped}",
    ]
    for name in STAGES:
        lines.append(_stage_row(name, m.stages.get(name, [])))
    return "\n".join(lines) + "\n"
