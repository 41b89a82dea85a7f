"""Append-only encounter persistence: newline-delimited JSON journal plus a
content-addressed blob directory for raw audio.

One EncounterRecord per journal line; records are immutable once written.
The single journal writer is serialized with a lock; each append is flushed
and fsynced before the caller sees success, so a crash never leaves a
half-written record visible (a torn trailing line is skipped on load).
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional


@dataclass(frozen=True)
class EncounterRecord:
    id: str
    created_at: str  # ISO-8601 UTC
    inputs: dict  # raw payload references (symptoms, wav digest, transcript, ...)
    signals: dict  # ModalitySignals as dict
    fusion: dict  # FusionResult as dict
    report: str
    config_digest: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "created_at": self.created_at,
            "inputs": self.inputs,
            "signals": self.signals,
            "fusion": self.fusion,
            "report": self.report,
            "config_digest": self.config_digest,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EncounterRecord":
        return cls(
            id=d["id"],
            created_at=d["created_at"],
            inputs=d["inputs"],
            signals=d["signals"],
            fusion=d["fusion"],
            report=d["report"],
            config_digest=d["config_digest"],
        )


def new_encounter_id() -> str:
    return uuid.uuid4().hex


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def config_digest(config_dict: dict) -> str:
    canonical = json.dumps(config_dict, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class EncounterStore:
    """Journal-backed append-only store; many readers, one serialized writer."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.journal_path = self.data_dir / "encounters.ndjson"
        self.blob_dir = self.data_dir / "blobs"
        self.blob_dir.mkdir(exist_ok=True)
        self._lock = threading.Lock()
        self._records: dict[str, EncounterRecord] = {}
        self._order: list[str] = []
        self._load()

    def _load(self) -> None:
        if not self.journal_path.exists():
            return
        with open(self.journal_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    record = EncounterRecord.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError):
                    continue  # torn trailing line from a crash
                self._records[record.id] = record
                self._order.append(record.id)

    def append(self, record: EncounterRecord) -> None:
        if record.id in self._records:
            raise ValueError(f"encounter {record.id} already persisted")
        line = json.dumps(record.to_dict(), separators=(",", ":"))
        with self._lock:
            with open(self.journal_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._records[record.id] = record
            self._order.append(record.id)

    def get(self, encounter_id: str) -> Optional[EncounterRecord]:
        return self._records.get(encounter_id)

    def list_ids(self) -> list[str]:
        return list(self._order)

    def list_records(self) -> list[EncounterRecord]:
        return [self._records[i] for i in self._order]

    def store_blob(self, data: bytes) -> str:
        """Store raw bytes by content digest; returns the digest."""
        digest = hashlib.sha256(data).hexdigest()
        path = self.blob_dir / digest
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(data)
            tmp.replace(path)
        return digest

    def read_blob(self, digest: str) -> Optional[bytes]:
        path = self.blob_dir / digest
        return path.read_bytes() if path.exists() else None
