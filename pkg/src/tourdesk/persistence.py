"""Append-only session logs.

One JSONL file per session under the configured log directory.  Every
record is a single JSON object on its own line, flushed and fsynced
before the write returns, so a killed process loses at most the line it
was writing.  Readers ignore a torn trailing line.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .attractions import AttractionDataset
from .dialogue import DialogueState, QuestionnaireRecord, Session, Turn


class SessionLog:
    def __init__(self, log_dir: str | Path):
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, session_id: str) -> Path:
        return self.log_dir / f"{session_id}.jsonl"

    def _append(self, session_id: str, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False)
        with self.path_for(session_id).open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def log_session_start(self, session: Session) -> None:
        self._append(session.id, {
            "type": "session_start",
            "session_id": session.id,
            "t": session.created_at,
            "spot_a_id": session.spot_a.id,
            "spot_b_id": session.spot_b.id,
            "recommended_id": session.recommended_id,
            "deadline": session.deadline,
            "greeting": session.greeting,
            "state": session.state.value,
        })

    def log_turn(self, session: Session, turn: Turn) -> None:
        record = {"type": "turn", "session_id": session.id, **turn.to_json()}
        if turn.speaker == "robot":
            record["session"] = session.snapshot()
        self._append(session.id, record)

    def log_questionnaire(self, record: QuestionnaireRecord) -> None:
        self._append(record.session_id, {"type": "questionnaire", **record.to_json()})

    def log_close(self, session: Session) -> None:
        self._append(session.id, {
            "type": "session_close",
            "session_id": session.id,
            "state": session.state.value,
        })

    def read_records(self, session_id: str) -> list[dict]:
        """All fully-written records; a torn trailing line is dropped."""
        path = self.path_for(session_id)
        if not path.exists():
            return []
        records: list[dict] = []
        with path.open("r", encoding="utf-8") as fh:
            for line in fh:
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError:
                    break
        return records

    def session_ids(self) -> list[str]:
        return sorted(p.stem for p in self.log_dir.glob("*.jsonl"))

    def recover_session(self, session_id: str, attractions: AttractionDataset) -> Session | None:
        """Rebuild a session from its log; None when the log is unusable."""
        records = self.read_records(session_id)
        if not records or records[0].get("type") != "session_start":
            return None
        head = records[0]
        spot_a = attractions.get(head["spot_a_id"])
        spot_b = attractions.get(head["spot_b_id"])
        if spot_a is None or spot_b is None:
            return None
        session = Session(
            id=head["session_id"],
            spot_a=spot_a,
            spot_b=spot_b,
            recommended_id=head["recommended_id"],
            deadline=head["deadline"],
            created_at=head["t"],
            greeting=head.get("greeting", ""),
            state=DialogueState(head.get("state", "AskName")),
        )
        for record in records[1:]:
            kind = record.get("type")
            if kind == "turn":
                session.transcript.append(Turn.from_json(record))
                snapshot = record.get("session")
                if snapshot:
                    session.restore(snapshot)
            elif kind == "session_close":
                session.state = DialogueState(record["state"])
        return session
