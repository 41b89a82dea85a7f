"""Command-line interface for the screening engine."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from pneumoscreen import fusion as fusion_mod
from pneumoscreen import gbdt
from pneumoscreen import metrics as metrics_mod
from pneumoscreen.audio import ingest_wav, preprocess
from pneumoscreen.audio.features import FEATURE_NAMES, feature_vector, features_to_csv
from pneumoscreen.errors import PneumoScreenError
from pneumoscreen.imaging import DomainLabel, perturb, read_image, write_pgm
from pneumoscreen.store import (
    EncounterRecord,
    EncounterStore,
    config_digest,
    new_encounter_id,
    utc_now,
)
from pneumoscreen.textsignal import KeywordVocabulary, analyze_transcript
from pneumoscreen.triage import SymptomResponse, evaluate_triage


def _load_config(path: str | None) -> fusion_mod.FusionConfig:
    if path is None:
        path = os.environ.get("PF_CONFIG")
    if path is None:
        return fusion_mod.FusionConfig.default()
    return fusion_mod.FusionConfig.from_dict(json.loads(Path(path).read_text()))


@click.group()
def main() -> None:
    """Offline multimodal pneumonia-screening toolkit."""


@main.command("extract-features")
@click.argument("wav_path", type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--json", "as_json", is_flag=True, help="write JSON instead of CSV")
def extract_features_cmd(wav_path: str, out_path: str, as_json: bool) -> None:
    """Extract per-segment acoustic feature vectors from a WAV file."""
    try:
        waveform = ingest_wav(Path(wav_path).read_bytes())
        vectors = [feature_vector(seg) for seg in preprocess(waveform)]
    except PneumoScreenError as exc:
        raise click.ClickException(str(exc))
    if as_json:
        payload = {
            "feature_names": list(FEATURE_NAMES),
            "segments": [list(v.values) for v in vectors],
        }
        Path(out_path).write_text(json.dumps(payload, indent=2))
    else:
        Path(out_path).write_text(features_to_csv(vectors))
    click.echo(f"wrote {len(vectors)} segment(s) to {out_path}")


@main.command("score")
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--features", "features_path", type=click.Path(exists=True), required=True)
@click.option("--threshold", type=float, default=0.5, show_default=True)
def score_cmd(model_path: str, features_path: str, threshold: float) -> None:
    """Score feature-vector CSV rows with a tree-ensemble model."""
    import numpy as np

    try:
        model = gbdt.load_model(Path(model_path).read_bytes())
    except PneumoScreenError as exc:
        raise click.ClickException(str(exc))
    lines = Path(features_path).read_text().strip().splitlines()
    vectors = [
        np.array([float(x) for x in line.split(",")]) for line in lines[1:]
    ]
    result = gbdt.score_recording(model, vectors)
    out = result.to_dict()
    out["label"] = int(result.recording_level >= threshold)
    click.echo(json.dumps(out, indent=2))


@main.command("text-score")
@click.option("--transcript", "transcript_path", type=click.Path(exists=True), required=True)
@click.option("--vocab", "vocab_path", type=click.Path(exists=True))
def text_score_cmd(transcript_path: str, vocab_path: str | None) -> None:
    """Compute the speech-derived concern signal from a transcript file."""
    vocab = (
        KeywordVocabulary.from_json(Path(vocab_path).read_text())
        if vocab_path
        else KeywordVocabulary.default()
    )
    signal = analyze_transcript(Path(transcript_path).read_text(), vocab)
    click.echo(json.dumps(signal.to_dict(), indent=2))


@main.command("perturb")
@click.option("--in", "in_path", type=click.Path(exists=True), required=True)
@click.option("--domain", type=click.Choice(["clean", "blur", "noise", "contrast"]), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--contrast-factor", type=float, default=None)
def perturb_cmd(in_path, domain, seed, out_path, contrast_factor) -> None:
    """Apply a synthetic domain perturbation to a grayscale image."""
    try:
        img = read_image(Path(in_path).read_bytes())
        result = perturb(
            img, DomainLabel[domain.upper()], seed=seed,
            contrast_factor=contrast_factor,
        )
    except PneumoScreenError as exc:
        raise click.ClickException(str(exc))
    Path(out_path).write_bytes(write_pgm(result))
    click.echo(f"wrote {out_path}")


@main.command("metrics")
@click.option("--in", "in_path", type=click.Path(exists=True), required=True)
@click.option("--bins", type=int, default=15, show_default=True)
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def metrics_cmd(in_path: str, bins: int, threshold: float, as_json: bool) -> None:
    """Compute classification metrics from a prediction CSV."""
    try:
        records = metrics_mod.read_records_csv(Path(in_path).read_text())
        rep = metrics_mod.report(records, bins=bins, threshold=threshold)
    except (PneumoScreenError, ValueError) as exc:
        raise click.ClickException(str(exc))
    click.echo(metrics_mod.to_json(rep) if as_json else metrics_mod.render_text(rep))


@main.command("fuse")
@click.option("--signals", "signals_path", type=click.Path(exists=True), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--sweep", is_flag=True, help="evaluate all preset weight configurations")
@click.option("--report", "with_report", is_flag=True, help="print the narrative report")
def fuse_cmd(signals_path, config_path, sweep, with_report) -> None:
    """Fuse modality signals from a JSON file into a score and band."""
    try:
        signals = fusion_mod.ModalitySignals.from_dict(
            json.loads(Path(signals_path).read_text())
        )
        cfg = _load_config(config_path)
        if sweep:
            rows = fusion_mod.sweep_configs(signals)
            for row in rows:
                click.echo(
                    f"{row.config_name:<22} S={row.score:.4f}  {row.band.name}"
                )
            return
        result = fusion_mod.fuse(signals, cfg)
    except PneumoScreenError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(result.to_dict(), indent=2))
    if with_report:
        click.echo(fusion_mod.render_report(result))


@main.command("encounter")
@click.option("--symptoms", "symptoms_path", type=click.Path(exists=True))
@click.option("--wav", "wav_path", type=click.Path(exists=True))
@click.option("--transcript", "transcript_path", type=click.Path(exists=True))
@click.option("--image-signal", "image_signal_path", type=click.Path(exists=True))
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--data-dir", type=click.Path(), required=True)
def encounter_cmd(
    symptoms_path, wav_path, transcript_path, image_signal_path,
    model_path, config_path, data_dir,
) -> None:
    """Run a full screening encounter and persist it to the journal."""
    from pneumoscreen.imaging import ingest_image_signal

    cfg = _load_config(config_path)
    store = EncounterStore(data_dir)
    inputs: dict = {}
    triage_result = cough_result = speech_result = image_result = None
    try:
        if symptoms_path:
            payload = json.loads(Path(symptoms_path).read_text())
            triage_result = evaluate_triage(SymptomResponse.from_dict(payload))
            inputs["symptoms"] = payload
            inputs["triage_result"] = triage_result.to_dict()
        if wav_path:
            if not model_path:
                model_path = os.environ.get("PF_MODEL")
            if not model_path:
                raise click.ClickException("--wav requires --model (or PF_MODEL)")
            model = gbdt.load_model(Path(model_path).read_bytes())
            wav_bytes = Path(wav_path).read_bytes()
            segments = preprocess(ingest_wav(wav_bytes))
            vectors = [feature_vector(seg) for seg in segments]
            cough_result = gbdt.score_recording(model, vectors)
            inputs["wav_digest"] = store.store_blob(wav_bytes)
            inputs["cough_score"] = cough_result.to_dict()
        if transcript_path:
            text = Path(transcript_path).read_text()
            speech_result = analyze_transcript(text)
            inputs["transcript"] = text
            inputs["speech_signal"] = speech_result.to_dict()
        if image_signal_path:
            image_result = ingest_image_signal(
                json.loads(Path(image_signal_path).read_text())
            )
            inputs["image_signal"] = image_result.to_dict()
        signals = fusion_mod.ModalitySignals(
            img=image_result.probability if image_result else None,
            sym=triage_result.normalized if triage_result else None,
            cgh=cough_result.recording_level if cough_result else None,
            sp=speech_result.score if speech_result else None,
            urgent=bool(triage_result and triage_result.urgent_rules_fired),
        )
        result = fusion_mod.fuse(signals, cfg)
    except PneumoScreenError as exc:
        raise click.ClickException(str(exc))
    report = fusion_mod.render_report(
        result, triage=triage_result, cough=cough_result,
        speech=speech_result, image=image_result,
    )
    record = EncounterRecord(
        id=new_encounter_id(),
        created_at=utc_now(),
        inputs=inputs,
        signals=signals.to_dict(),
        fusion=result.to_dict(),
        report=report,
        config_digest=config_digest(cfg.to_dict()),
    )
    store.append(record)
    click.echo(json.dumps(record.to_dict(), indent=2))
    click.echo(report, err=False)


@main.command("serve")
@click.option("--bind", default=None, help="host:port (default 127.0.0.1:8080)")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--data-dir", type=click.Path())
@click.option("--static-dir", type=click.Path(exists=True), help="serve a UI bundle at /")
def serve_cmd(bind, config_path, model_path, data_dir, static_dir) -> None:
    """Run the HTTP API (offline, single-operator deployment)."""
    import uvicorn

    from pneumoscreen.service import create_app

    bind = bind or os.environ.get("PF_BIND", "127.0.0.1:8080")
    data_dir = data_dir or os.environ.get("PF_DATA_DIR", "./pneumoscreen-data")
    model_path = model_path or os.environ.get("PF_MODEL")
    host, _, port = bind.partition(":")
    app = create_app(
        data_dir=data_dir,
        model_path=model_path,
        config=_load_config(config_path),
        static_dir=static_dir,
    )
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080))


if __name__ == "__main__":
    sys.exit(main())
