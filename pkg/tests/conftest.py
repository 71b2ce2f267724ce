import json
from pathlib import Path

import numpy as np
import pytest

from emoforge.audio_io import AudioClip, encode_wav


def make_tone(freq: float, sample_rate: int = 22050, duration: float = 0.5,
              amplitude: float = 1.0, phase: float = 0.0) -> AudioClip:
    t = np.arange(int(round(sample_rate * duration))) / sample_rate
    samples = amplitude * np.sin(2 * np.pi * freq * t + phase)
    return AudioClip(samples=samples, sample_rate=sample_rate, source_id=f"tone{freq:g}")


def write_manifest(tmp_path: Path, rows: list[dict], sample_rate: int = 8000) -> Path:
    """Write a manifest plus a tiny wav per row; rows need text/label and may
    set 'samples' (defaults to a short ramp) and 'split'."""
    wav_dir = tmp_path / "wavs"
    wav_dir.mkdir(exist_ok=True)
    manifest = tmp_path / "manifest.jsonl"
    with manifest.open("w", encoding="utf-8") as fh:
        for i, row in enumerate(rows):
            name = f"clip_{i:03d}.wav"
            samples = row.get("samples")
            if samples is None:
                samples = 0.2 * np.sin(np.linspace(0, 40, 1600))
            encode_wav(wav_dir / name, samples, sample_rate)
            entry = {"audio": f"wavs/{name}", "text": row["text"], "label": row["label"]}
            if "split" in row:
                entry["split"] = row["split"]
            fh.write(json.dumps(entry) + "\n")
    return manifest


@pytest.fixture(scope="session")
def synth_corpus(tmp_path_factory):
    """Small shared synthetic corpus for pipeline and CLI tests."""
    from emoforge.synth import generate_corpus

    root = tmp_path_factory.mktemp("corpus")
    manifest = generate_corpus(root, seed=11, n_per_class=12)
    return manifest
