"""Robot face expression parameters and frame emission.

Each dialogue event maps to a (valence, arousal, dominance,
realIntention) tuple; clients drive a rendered face from these four
scalars.  The shipped table carries the published tuples for smile,
faint_smile (identical to smile as published) and surprise, and can be
overridden from a JSON config file.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import LoadError

logger = logging.getLogger(__name__)

_COMPONENTS = ("valence", "arousal", "dominance", "realIntention")


@dataclass(frozen=True)
class ExpressionParams:
    """Four affect scalars, each in [-1, 1]."""

    valence: float
    arousal: float
    dominance: float
    realIntention: float

    def __post_init__(self):
        for name in _COMPONENTS:
            value = getattr(self, name)
            if not -1.0 <= value <= 1.0:
                raise LoadError(f"expression component {name}={value!r} outside [-1, 1]")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.valence, self.arousal, self.dominance, self.realIntention)


NEUTRAL = ExpressionParams(0.0, 0.0, 0.0, 0.0)

DEFAULT_TABLE_VALUES = {
    "neutral": NEUTRAL,
    "smile": ExpressionParams(0.3, 0.2, 0.1, 0.0),
    "faint_smile": ExpressionParams(0.3, 0.2, 0.1, 0.0),
    "surprise": ExpressionParams(0.1, 0.2, -0.8, 0.0),
}

_REQUIRED_EVENTS = ("neutral", "smile", "faint_smile", "surprise")


class ExpressionTable:
    """Immutable event-id -> ExpressionParams map."""

    def __init__(self, values: dict[str, ExpressionParams] | None = None):
        table = dict(DEFAULT_TABLE_VALUES)
        table.update(values or {})
        missing = [e for e in _REQUIRED_EVENTS if e not in table]
        if missing:
            raise LoadError(f"expression table missing required events: {missing}")
        self._table = table

    def __contains__(self, event: str) -> bool:
        return event in self._table

    def events(self) -> tuple[str, ...]:
        return tuple(self._table)

    def params_for(self, event: str) -> ExpressionParams:
        """Stored tuple for the event; unknown events fall back to neutral."""
        params = self._table.get(event)
        if params is None:
            logger.warning("unknown expression event %r, using neutral", event)
            return self._table["neutral"]
        return params


def params_for(table: ExpressionTable, event: str) -> ExpressionParams:
    return table.params_for(event)


def load_expression_table(path: str | Path) -> ExpressionTable:
    """Load event -> four-float map from JSON, overlaid on the defaults."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise LoadError(f"{path}: expected an object mapping event ids to parameters")
    values = {}
    for event, params in raw.items():
        if isinstance(params, dict):
            try:
                values[event] = ExpressionParams(**{k: float(params[k]) for k in _COMPONENTS})
            except KeyError as exc:
                raise LoadError(f"{path}: event {event}: missing component {exc}") from None
        elif isinstance(params, (list, tuple)) and len(params) == 4:
            values[event] = ExpressionParams(*(float(x) for x in params))
        else:
            raise LoadError(f"{path}: event {event}: expected four components")
    return ExpressionTable(values)


@dataclass(frozen=True)
class ExpressionFrame:
    t: float
    event: str
    params: ExpressionParams

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "event": self.event,
            "valence": self.params.valence,
            "arousal": self.params.arousal,
            "dominance": self.params.dominance,
            "realIntention": self.params.realIntention,
        }


def frame_stream(
    table: ExpressionTable,
    events: list[tuple[float, str]],
    close_at: float | None = None,
) -> list[ExpressionFrame]:
    """One frame per time-ordered (t, event) pair; the last frame holds
    between events.  When ``close_at`` is given the stream ends with a
    neutral frame at that time.
    """
    frames = [ExpressionFrame(t=t, event=event, params=table.params_for(event))
              for t, event in events]
    for earlier, later in zip(frames, frames[1:]):
        if later.t < earlier.t:
            raise LoadError("expression events must be time-ordered")
    if close_at is not None:
        if frames and close_at < frames[-1].t:
            raise LoadError("close time precedes the last event")
        frames.append(ExpressionFrame(t=close_at, event="neutral",
                                      params=table.params_for("neutral")))
    return frames
