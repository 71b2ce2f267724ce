import struct

import numpy as np
import pytest

from emoforge.audio_io import decode_wav, encode_wav
from emoforge.errors import AudioFormatError, EmptyAudioError, UnsupportedAudioError


def _raw_wav(fmt_code, channels, sample_rate, bits, payload):
    block = channels * (bits // 8)
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(payload), b"WAVE",
        b"fmt ", 16, fmt_code, channels, sample_rate, sample_rate * block, block, bits,
        b"data", len(payload),
    )
    return header + payload


def test_16bit_constant_scaling(tmp_path):
    path = tmp_path / "const.wav"
    payload = struct.pack("<100h", *([16384] * 100))
    path.write_bytes(_raw_wav(1, 1, 8000, 16, payload))
    clip = decode_wav(path)
    assert clip.sample_rate == 8000
    assert np.allclose(clip.samples, 0.5, atol=2**-15)


def test_stereo_downmix_cancels(tmp_path):
    path = tmp_path / "stereo.wav"
    frames = []
    for _ in range(50):
        frames += [16384, -16384]  # +0.5 left, -0.5 right
    payload = struct.pack(f"<{len(frames)}h", *frames)
    path.write_bytes(_raw_wav(1, 2, 8000, 16, payload))
    clip = decode_wav(path)
    assert len(clip) == 50
    assert np.all(clip.samples == 0.0)


def test_full_scale_sine_roundtrip(tmp_path):
    sr = 44100
    t = np.arange(sr // 2) / sr
    source = np.sin(2 * np.pi * 440.0 * t)
    path = tmp_path / "sine.wav"
    encode_wav(path, source, sr, bits=16)
    clip = decode_wav(path)
    assert clip.sample_rate == sr
    assert np.max(np.abs(clip.samples - source)) <= 1.0 / 32768
    assert 0.99 <= np.max(np.abs(clip.samples)) <= 1.0


@pytest.mark.parametrize(
    "bits,float_format,step",
    [(8, False, 1 / 128), (16, False, 1 / 32768), (24, False, 2**-23), (32, True, 2**-23)],
)
def test_roundtrip_within_one_step(tmp_path, bits, float_format, step):
    rng = np.random.default_rng(bits)
    source = rng.uniform(-1, 1, size=333)
    path = tmp_path / f"rt{bits}.wav"
    encode_wav(path, source, 16000, bits=bits, float_format=float_format)
    clip = decode_wav(path)
    assert len(clip) == source.size
    assert np.max(np.abs(clip.samples - source)) <= step


def test_not_riff_is_format_error(tmp_path):
    path = tmp_path / "bogus.wav"
    path.write_bytes(b"OggS" + b"\x00" * 64)
    with pytest.raises(AudioFormatError):
        decode_wav(path)


def test_truncated_chunk_is_format_error(tmp_path):
    path = tmp_path / "trunc.wav"
    good = _raw_wav(1, 1, 8000, 16, struct.pack("<10h", *range(10)))
    path.write_bytes(good[:-12])
    with pytest.raises(AudioFormatError):
        decode_wav(path)


def test_unsupported_encoding(tmp_path):
    path = tmp_path / "i32.wav"
    path.write_bytes(_raw_wav(1, 1, 8000, 32, b"\x00" * 32))  # 32-bit int PCM
    with pytest.raises(UnsupportedAudioError):
        decode_wav(path)
    path.write_bytes(_raw_wav(1, 4, 8000, 16, b"\x00" * 32))  # 4 channels
    with pytest.raises(UnsupportedAudioError):
        decode_wav(path)


def test_empty_data_chunk(tmp_path):
    path = tmp_path / "empty.wav"
    path.write_bytes(_raw_wav(1, 1, 8000, 16, b""))
    with pytest.raises(EmptyAudioError):
        decode_wav(path)


def test_float_wav_is_clipped(tmp_path):
    path = tmp_path / "hot.wav"
    payload = np.array([1.5, -2.0, 0.25], dtype="<f4").tobytes()
    path.write_bytes(_raw_wav(3, 1, 8000, 32, payload))
    clip = decode_wav(path)
    assert np.array_equal(clip.samples, [1.0, -1.0, 0.25])
