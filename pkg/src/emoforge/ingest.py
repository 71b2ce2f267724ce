"""Manifest-driven dataset assembly.

A corpus is described by a JSONL manifest (one object per line) with fields
``audio`` (path, resolved relative to the manifest), ``text``, ``label`` and
optional ``split`` ("train" or "test"). Raw labels are mapped onto the six
emotion classes: "excited" folds into Happy, "others" and "frustration" are
dropped, and four-class mode additionally drops Fear and Surprise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from .audio_io import AudioClip, decode_wav
from .errors import (
    DegenerateClassError,
    ManifestError,
    ParameterError,
    SplitError,
    UnknownLabelError,
)


class EmotionLabel(Enum):
    ANGRY = "angry"
    HAPPY = "happy"
    SAD = "sad"
    FEAR = "fear"
    SURPRISE = "surprise"
    NEUTRAL = "neutral"


SIX_CLASSES = (
    EmotionLabel.ANGRY,
    EmotionLabel.HAPPY,
    EmotionLabel.SAD,
    EmotionLabel.FEAR,
    EmotionLabel.SURPRISE,
    EmotionLabel.NEUTRAL,
)
FOUR_CLASSES = (
    EmotionLabel.ANGRY,
    EmotionLabel.HAPPY,
    EmotionLabel.SAD,
    EmotionLabel.NEUTRAL,
)

# Full label alphabet a manifest may use. "excited" merges into happy;
# "others" and "frustration" carry no usable class and are dropped.
LABEL_ALPHABET = frozenset(
    {"angry", "happy", "excited", "sad", "fear", "surprise", "neutral", "others", "frustration"}
)

_DROPPED = {"others", "frustration"}
_MERGED = {"excited": EmotionLabel.HAPPY}


def classes_for_mode(class_mode: str) -> tuple[EmotionLabel, ...]:
    if class_mode == "six":
        return SIX_CLASSES
    if class_mode == "four":
        return FOUR_CLASSES
    raise ParameterError(f"class_mode must be 'six' or 'four', got {class_mode!r}")


def map_label(raw_label: str, class_mode: str = "six") -> Optional[EmotionLabel]:
    """Map a raw manifest label to an EmotionLabel, or None when dropped."""
    admissible = classes_for_mode(class_mode)
    key = raw_label.strip().lower()
    if key not in LABEL_ALPHABET:
        raise UnknownLabelError(f"label {raw_label!r} outside the declared alphabet")
    if key in _DROPPED:
        return None
    label = _MERGED.get(key, None)
    if label is None:
        label = EmotionLabel(key)
    if label not in admissible:
        return None
    return label


@dataclass(frozen=True)
class ManifestEntry:
    audio_path: Path
    transcript: str
    raw_label: str
    split_hint: Optional[str] = None


@dataclass(frozen=True)
class Example:
    """One labeled example: raw (clip, transcript) or an extracted vector."""

    label: EmotionLabel
    audio: Optional[AudioClip] = None
    transcript: Optional[str] = None
    features: Optional[np.ndarray] = None
    source_id: str = ""


@dataclass
class Dataset:
    examples: list[Example]
    class_mode: str = "six"
    seed: int = 0

    def __post_init__(self):
        admissible = set(classes_for_mode(self.class_mode))
        for ex in self.examples:
            if ex.label not in admissible:
                raise ParameterError(
                    f"label {ex.label} not admissible in {self.class_mode}-class mode"
                )

    def __len__(self) -> int:
        return len(self.examples)

    @property
    def classes(self) -> tuple[EmotionLabel, ...]:
        return classes_for_mode(self.class_mode)

    def class_counts(self) -> dict[EmotionLabel, int]:
        return class_histogram(self)

    def labels(self) -> list[EmotionLabel]:
        return [ex.label for ex in self.examples]


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    """Parse a JSONL manifest; audio paths must resolve at load time."""
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    entries: list[ManifestEntry] = []
    base = path.parent
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            for key in ("audio", "text", "label"):
                if key not in obj:
                    raise ManifestError(f"{path}:{lineno}: missing field {key!r}")
            audio_path = Path(obj["audio"])
            if not audio_path.is_absolute():
                audio_path = base / audio_path
            if not audio_path.is_file():
                raise ManifestError(f"{path}:{lineno}: audio file not found: {audio_path}")
            split_hint = obj.get("split")
            if split_hint is not None and split_hint not in ("train", "test"):
                raise ManifestError(f"{path}:{lineno}: split must be 'train' or 'test'")
            entries.append(
                ManifestEntry(
                    audio_path=audio_path,
                    transcript=str(obj["text"]),
                    raw_label=str(obj["label"]),
                    split_hint=split_hint,
                )
            )
    return entries


def build_dataset(
    entries: list[ManifestEntry],
    class_mode: str = "six",
    seed: int = 0,
    decode_audio: bool = True,
) -> Dataset:
    """Decode entries into a Dataset, dropping entries whose label maps to None."""
    examples = []
    for entry in entries:
        label = map_label(entry.raw_label, class_mode)
        if label is None:
            continue
        clip = decode_wav(entry.audio_path) if decode_audio else None
        examples.append(
            Example(
                label=label,
                audio=clip,
                transcript=entry.transcript,
                source_id=entry.audio_path.stem,
            )
        )
    return Dataset(examples=examples, class_mode=class_mode, seed=seed)


def class_histogram(dataset: Dataset) -> dict[EmotionLabel, int]:
    """Per-class example counts over every admissible class (zeros included)."""
    counts = {label: 0 for label in dataset.classes}
    for ex in dataset.examples:
        counts[ex.label] += 1
    return counts


def split(
    dataset: Dataset, train_fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Seeded shuffle followed by a prefix split.

    Train size is round(train_fraction * N). Partitions are disjoint and
    exhaustive; an empty partition raises SplitError. Upsampling, when used,
    belongs after this step and on the train side only.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ParameterError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(dataset)
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(round(train_fraction * n))
    if n_train == 0 or n_train == n:
        raise SplitError(
            f"fraction {train_fraction} on {n} examples leaves an empty partition"
        )
    train = [dataset.examples[i] for i in order[:n_train]]
    test = [dataset.examples[i] for i in order[n_train:]]
    return (
        Dataset(train, class_mode=dataset.class_mode, seed=seed),
        Dataset(test, class_mode=dataset.class_mode, seed=seed),
    )


def split_by_hint(dataset_entries: list[ManifestEntry]) -> tuple[list[ManifestEntry], list[ManifestEntry]]:
    """Partition manifest entries by their split hints.

    Hints are all-or-nothing: mixing hinted and unhinted entries is ambiguous
    and rejected.
    """
    hinted = [e for e in dataset_entries if e.split_hint is not None]
    if not hinted:
        raise ManifestError("no split hints present in manifest")
    if len(hinted) != len(dataset_entries):
        raise ManifestError("manifest mixes hinted and unhinted entries")
    train = [e for e in dataset_entries if e.split_hint == "train"]
    test = [e for e in dataset_entries if e.split_hint == "test"]
    if not train or not test:
        raise SplitError("split hints leave an empty partition")
    return train, test


def upsample(
    dataset: Dataset,
    seed: int,
    rho: float = 0.5,
    expected_classes: Optional[tuple[EmotionLabel, ...]] = None,
) -> Dataset:
    """Grow minority classes by seeded duplication.

    Each class is brought up to at least ceil(rho * max class count) by
    sampling its own examples uniformly with replacement. Original examples
    are all kept, in their original order, with duplicates appended grouped
    by class in canonical class order. ``expected_classes`` (defaults to the
    classes observed) must each have at least one example.
    """
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"rho must be in [0, 1], got {rho}")
    if len(dataset) == 0:
        raise DegenerateClassError("cannot upsample an empty dataset")

    counts = class_histogram(dataset)
    present = [label for label in dataset.classes if counts[label] > 0]
    required = expected_classes if expected_classes is not None else tuple(present)
    for label in required:
        if counts[label] == 0:
            raise DegenerateClassError(f"class {label.value} has no examples")

    max_count = max(counts[label] for label in present)
    target = math.ceil(rho * max_count)
    rng = np.random.default_rng(seed)

    by_class: dict[EmotionLabel, list[int]] = {label: [] for label in present}
    for i, ex in enumerate(dataset.examples):
        by_class[ex.label].append(i)

    extra: list[Example] = []
    for label in dataset.classes:
        if label not in by_class:
            continue
        deficit = target - counts[label]
        if deficit <= 0:
            continue
        pool = by_class[label]
        picks = rng.integers(0, len(pool), size=deficit)
        extra.extend(dataset.examples[pool[p]] for p in picks)

    return Dataset(
        examples=list(dataset.examples) + extra,
        class_mode=dataset.class_mode,
        seed=seed,
    )
