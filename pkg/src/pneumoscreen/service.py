"""HTTP service exposing the screening pipelines over JSON.

All domain computation is pure; the only shared mutable state is the
append-only encounter journal (serialized writer) and an in-memory draft
table used to accumulate modality signals before fusion finalizes an
encounter.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from pneumoscreen import fusion as fusion_mod
from pneumoscreen import gbdt
from pneumoscreen.audio import ingest_wav, preprocess
from pneumoscreen.audio.features import feature_vector
from pneumoscreen.errors import (
    CorruptHeader,
    InvalidConfig,
    InvalidResponse,
    NoSignals,
    OutOfRange,
    TooShort,
    UnsupportedFormat,
)
from pneumoscreen.imaging import ingest_image_signal
from pneumoscreen.store import (
    EncounterRecord,
    EncounterStore,
    config_digest,
    new_encounter_id,
    utc_now,
)
from pneumoscreen.textsignal import KeywordVocabulary, analyze_transcript
from pneumoscreen.triage import SymptomResponse, evaluate_triage


def _error(status: int, reason: str, detail: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": reason, "detail": detail}
    )


async def _read_json(request: Request):
    body = await request.body()
    try:
        return json.loads(body)
    except json.JSONDecodeError as exc:
        raise ValueError(str(exc)) from exc


def create_app(
    data_dir: str | Path,
    model_path: Optional[str | Path] = None,
    config: Optional[fusion_mod.FusionConfig] = None,
    static_dir: Optional[str | Path] = None,
) -> FastAPI:
    store = EncounterStore(data_dir)
    cfg = config or fusion_mod.FusionConfig.default()
    cfg_digest = config_digest(cfg.to_dict())
    vocab = KeywordVocabulary.default()
    model = None
    if model_path is not None:
        model = gbdt.load_model(Path(model_path).read_bytes())

    drafts: dict[str, dict] = {}
    finalized: set[str] = set()
    draft_lock = threading.Lock()

    app = FastAPI(title="pneumoscreen", version="0.1.0")

    def _draft_update(encounter_id: str, field: str, value, extra: dict) -> None:
        with draft_lock:
            draft = drafts.setdefault(encounter_id, {"signals": {}, "inputs": {}})
            draft["signals"][field] = value
            draft["inputs"].update(extra)

    @app.post("/triage")
    async def triage(request: Request, encounter: Optional[str] = None):
        try:
            payload = await _read_json(request)
        except ValueError as exc:
            return _error(400, "malformed_json", str(exc))
        try:
            response = SymptomResponse.from_dict(payload)
        except InvalidResponse as exc:
            return _error(422, "invalid_response", str(exc))
        result = evaluate_triage(response)
        if encounter is not None:
            _draft_update(
                encounter, "sym", result.normalized, {"symptoms": payload}
            )
            with draft_lock:
                drafts[encounter]["signals"]["urgent"] = (
                    result.band.name == "URGENT"
                )
                drafts[encounter]["inputs"]["triage_result"] = result.to_dict()
        return result.to_dict()

    @app.post("/cough")
    async def cough(file: UploadFile, encounter: Optional[str] = None):
        if model is None:
            return _error(503, "no_model_configured",
                          "set PF_MODEL or pass --model to serve")
        data = await file.read()
        try:
            waveform = ingest_wav(data)
            segments = preprocess(waveform)
        except (UnsupportedFormat, CorruptHeader, TooShort) as exc:
            return _error(422, type(exc).__name__, str(exc))
        vectors = [feature_vector(seg) for seg in segments]
        result = gbdt.score_recording(model, vectors)
        digest = store.store_blob(data)
        if encounter is not None:
            _draft_update(
                encounter,
                "cgh",
                result.recording_level,
                {"wav_digest": digest, "cough_score": result.to_dict()},
            )
        return result.to_dict()

    @app.post("/transcript")
    async def transcript(request: Request, encounter: Optional[str] = None):
        try:
            payload = await _read_json(request)
        except ValueError as exc:
            return _error(400, "malformed_json", str(exc))
        text = payload.get("text", "")
        signal = analyze_transcript(text, vocab)
        if encounter is not None:
            _draft_update(
                encounter,
                "sp",
                signal.score,
                {"transcript": text, "speech_signal": signal.to_dict()},
            )
        return signal.to_dict()

    @app.post("/image-signal")
    async def image_signal(request: Request, encounter: Optional[str] = None):
        try:
            payload = await _read_json(request)
        except ValueError as exc:
            return _error(400, "malformed_json", str(exc))
        try:
            signal = ingest_image_signal(payload)
        except OutOfRange as exc:
            return _error(422, "out_of_range", str(exc))
        if encounter is not None:
            _draft_update(
                encounter, "img", signal.probability,
                {"image_signal": signal.to_dict()},
            )
        return signal.to_dict()

    @app.post("/fuse")
    async def fuse_endpoint(request: Request):
        try:
            payload = await _read_json(request)
        except ValueError as exc:
            return _error(400, "malformed_json", str(exc))
        encounter_id = payload.get("encounter")
        signal_dict = dict(payload.get("signals", {}))
        inputs: dict = {}
        if encounter_id is not None:
            with draft_lock:
                if encounter_id in finalized or store.get(encounter_id):
                    return _error(
                        409, "encounter_finalized",
                        f"encounter {encounter_id} is immutable",
                    )
                draft = drafts.get(encounter_id, {"signals": {}, "inputs": {}})
                merged = dict(draft["signals"])
                merged.update(signal_dict)
                signal_dict = merged
                inputs = dict(draft["inputs"])
        try:
            signals = fusion_mod.ModalitySignals.from_dict(signal_dict)
            result = fusion_mod.fuse(signals, cfg)
        except (NoSignals, InvalidConfig) as exc:
            return _error(422, type(exc).__name__, str(exc))
        if payload.get("sweep"):
            rows = fusion_mod.sweep_configs(signals)
            return {"sweep": [r.to_dict() for r in rows]}
        report = fusion_mod.render_report(result)
        record_id = encounter_id or new_encounter_id()
        record = EncounterRecord(
            id=record_id,
            created_at=utc_now(),
            inputs=inputs,
            signals=signals.to_dict(),
            fusion=result.to_dict(),
            report=report,
            config_digest=cfg_digest,
        )
        with draft_lock:
            if record_id in finalized or store.get(record_id):
                return _error(409, "encounter_finalized",
                              f"encounter {record_id} is immutable")
            store.append(record)
            finalized.add(record_id)
            drafts.pop(record_id, None)
        return record.to_dict()

    @app.get("/encounters")
    async def list_encounters():
        return {"encounters": [r.to_dict() for r in store.list_records()]}

    @app.get("/encounters/{encounter_id}")
    async def get_encounter(encounter_id: str):
        record = store.get(encounter_id)
        if record is None:
            return _error(404, "not_found", encounter_id)
        return record.to_dict()

    @app.get("/config")
    async def get_config():
        return {
            "fusion": cfg.to_dict(),
            "config_digest": cfg_digest,
            "model_loaded": model is not None,
            "presets": [c.to_dict() for c in fusion_mod.preset_configs()],
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True))

    return app
