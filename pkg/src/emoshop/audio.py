"""Audio clip container and WAV input/output.

Clips are mono float arrays in [-1, 1]. WAV files may be 16-bit PCM or
32-bit float, mono or stereo (stereo is downmixed by averaging); anything
at or above 8 kHz is accepted and resampled to 16 kHz by linear
interpolation before feature extraction.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

TARGET_RATE = 16000
MIN_RATE = 8000


class AudioError(Exception):
    pass


class EmptyClip(AudioError):
    pass


class UnreadableAudio(AudioError):
    pass


class SampleRateMismatch(AudioError):
    pass


@dataclass(frozen=True)
class AudioClip:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise EmptyClip("clip must be a non-empty mono sample array")
        if not np.all(np.isfinite(samples)):
            raise AudioError("clip contains non-finite samples")
        if self.sample_rate < MIN_RATE:
            raise AudioError(f"sample rate must be >= {MIN_RATE}, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


def resample(clip: AudioClip, rate: int = TARGET_RATE) -> AudioClip:
    """Linear-interpolation resampling; identity when rates already match."""
    if clip.sample_rate == rate:
        return clip
    n_out = max(1, int(round(len(clip.samples) * rate / clip.sample_rate)))
    src_t = np.arange(len(clip.samples)) / clip.sample_rate
    dst_t = np.arange(n_out) / rate
    samples = np.interp(dst_t, src_t, clip.samples)
    return AudioClip(samples=samples, sample_rate=rate)


def read_wav(source: str | bytes) -> AudioClip:
    """Read a WAV file (path or raw bytes) into a mono clip."""
    try:
        if isinstance(source, bytes):
            rate, data = wavfile.read(io.BytesIO(source))
        else:
            rate, data = wavfile.read(source)
    except Exception as exc:
        raise UnreadableAudio(str(exc)) from exc
    data = np.asarray(data)
    if data.ndim == 2:
        data = data.mean(axis=1)
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        samples = data.astype(np.float64) / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise UnreadableAudio(f"unsupported WAV sample format: {data.dtype}")
    samples = np.clip(samples, -1.0, 1.0)
    if samples.size == 0:
        raise UnreadableAudio("WAV file contains no samples")
    if rate < MIN_RATE:
        raise UnreadableAudio(f"sample rate {rate} below minimum {MIN_RATE}")
    return AudioClip(samples=samples, sample_rate=int(rate))


def write_wav_bytes(clip: AudioClip) -> bytes:
    """Serialize a clip as 16-bit PCM mono WAV bytes."""
    pcm = np.clip(clip.samples, -1.0, 1.0)
    pcm = (pcm * 32767.0).astype(np.int16)
    buf = io.BytesIO()
    wavfile.write(buf, clip.sample_rate, pcm)
    return buf.getvalue()


def write_wav(clip: AudioClip, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(write_wav_bytes(clip))
