"""Audio preprocessing and acoustic feature extraction.

Preprocessing does per-frame spectral subtraction (noise magnitude estimated
from a supplied profile or from the quietest frames) followed by peak
normalization. Features combine MFCC statistics with prosodic descriptors:
pitch, energy, pause ratio and a speaking-rate proxy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from emoshop.audio import AudioClip, SampleRateMismatch

# RMS below this gate counts a frame as a pause / unvoiced.
ENERGY_GATE = 0.01
LOG_FLOOR = 1e-30


class ClipTooShort(ValueError):
    pass


@dataclass(frozen=True)
class FeatureConfig:
    frame_ms: float = 25.0
    hop_ms: float = 10.0
    n_mels: int = 26
    n_mfcc: int = 13
    preemphasis: float = 0.97
    pitch_min_hz: float = 50.0
    pitch_max_hz: float = 500.0


DEFAULT_CONFIG = FeatureConfig()


@dataclass(frozen=True)
class FeatureVector:
    mfcc_mean: np.ndarray
    mfcc_std: np.ndarray
    pitch_mean: float
    pitch_std: float
    energy_mean: float
    energy_std: float
    pause_ratio: float
    speaking_rate_proxy: float

    def as_array(self) -> np.ndarray:
        return np.concatenate(
            [
                self.mfcc_mean,
                self.mfcc_std,
                [
                    self.pitch_mean,
                    self.pitch_std,
                    self.energy_mean,
                    self.energy_std,
                    self.pause_ratio,
                    self.speaking_rate_proxy,
                ],
            ]
        )

    @property
    def dimension(self) -> int:
        return len(self.mfcc_mean) + len(self.mfcc_std) + 6


def _frame_signal(samples: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    n_frames = 1 + (len(samples) - frame_len) // hop
    idx = np.arange(frame_len)[None, :] + hop * np.arange(n_frames)[:, None]
    return samples[idx]


def preprocess(clip: AudioClip, noise_profile: AudioClip | None = None) -> AudioClip:
    """Spectral subtraction plus peak normalization to 0.9.

    The noise magnitude spectrum is the mean over the profile's frames, or
    over the quietest 10% of the clip's own frames when no profile is given.
    Output length equals input length; an all-zero clip passes through.
    """
    if noise_profile is not None and noise_profile.sample_rate != clip.sample_rate:
        raise SampleRateMismatch(
            f"noise profile rate {noise_profile.sample_rate} != clip rate {clip.sample_rate}"
        )
    sr = clip.sample_rate
    frame_len = int(round(sr * 0.025))
    frame_len += frame_len % 2  # even length for 50% overlap reconstruction
    hop = frame_len // 2
    samples = clip.samples
    if len(samples) < frame_len:
        padded = np.pad(samples, (0, frame_len - len(samples)))
    else:
        padded = samples
    # pad so overlap-add covers the tail
    n_frames = int(np.ceil((len(padded) - frame_len) / hop)) + 1
    total = (n_frames - 1) * hop + frame_len
    padded = np.pad(padded, (0, total - len(padded)))
    window = np.hanning(frame_len + 1)[:-1]  # periodic Hann: 50% OLA sums to 1

    frames = _frame_signal(padded, frame_len, hop) * window
    spectra = np.fft.rfft(frames, axis=1)
    magnitude = np.abs(spectra)

    if noise_profile is not None:
        noise_samples = noise_profile.samples
        if len(noise_samples) < frame_len:
            noise_samples = np.pad(noise_samples, (0, frame_len - len(noise_samples)))
        noise_frames = _frame_signal(noise_samples, frame_len, hop) * window
        noise_mag = np.abs(np.fft.rfft(noise_frames, axis=1)).mean(axis=0)
    else:
        frame_energy = np.sqrt((frames**2).mean(axis=1))
        n_quiet = max(1, int(np.ceil(0.1 * len(frames))))
        quiet = np.argsort(frame_energy)[:n_quiet]
        noise_mag = magnitude[quiet].mean(axis=0)

    cleaned_mag = np.maximum(magnitude - noise_mag[None, :], 0.0)
    phase = np.angle(spectra)
    cleaned = np.fft.irfft(cleaned_mag * np.exp(1j * phase), n=frame_len, axis=1)

    out = np.zeros(total)
    for i in range(n_frames):
        out[i * hop : i * hop + frame_len] += cleaned[i]
    out = out[: len(samples)]

    peak = np.abs(out).max()
    if peak > 0:
        out = out * (0.9 / peak)
    return AudioClip(samples=out, sample_rate=sr)


def _mel_filterbank(n_mels: int, n_fft: int, sr: int) -> np.ndarray:
    def hz_to_mel(hz):
        return 2595.0 * np.log10(1.0 + hz / 700.0)

    def mel_to_hz(mel):
        return 700.0 * (10.0 ** (mel / 2595.0) - 1.0)

    mel_points = np.linspace(hz_to_mel(0.0), hz_to_mel(sr / 2.0), n_mels + 2)
    hz_points = mel_to_hz(mel_points)
    bins = np.floor((n_fft + 1) * hz_points / sr).astype(int)
    fbank = np.zeros((n_mels, n_fft // 2 + 1))
    for m in range(1, n_mels + 1):
        left, center, right = bins[m - 1], bins[m], bins[m + 1]
        for k in range(left, center):
            if center > left:
                fbank[m - 1, k] = (k - left) / (center - left)
        for k in range(center, right):
            if right > center:
                fbank[m - 1, k] = (right - k) / (right - center)
    return fbank


def _frame_pitch(frame: np.ndarray, sr: int, config: FeatureConfig) -> float:
    """Autocorrelation pitch with parabolic peak interpolation."""
    lag_min = max(2, int(np.floor(sr / config.pitch_max_hz)))
    lag_max = min(len(frame) - 1, int(np.ceil(sr / config.pitch_min_hz)))
    if lag_max <= lag_min:
        return 0.0
    centered = frame - frame.mean()
    ac = np.correlate(centered, centered, mode="full")[len(centered) - 1 :]
    if ac[0] <= 0:
        return 0.0
    window = ac[lag_min : lag_max + 1]
    best = int(np.argmax(window)) + lag_min
    lag = float(best)
    if lag_min < best < lag_max:
        y0, y1, y2 = ac[best - 1], ac[best], ac[best + 1]
        denom = y0 - 2 * y1 + y2
        if denom != 0:
            lag += 0.5 * (y0 - y2) / denom
    return sr / lag


def extract_features(clip: AudioClip, config: FeatureConfig = DEFAULT_CONFIG) -> FeatureVector:
    """Deterministic MFCC + prosody feature vector for one clip."""
    sr = clip.sample_rate
    frame_len = int(round(sr * config.frame_ms / 1000.0))
    hop = int(round(sr * config.hop_ms / 1000.0))
    if len(clip.samples) < frame_len + 2 * hop:
        raise ClipTooShort(
            f"need at least 3 frames ({frame_len + 2 * hop} samples), got {len(clip.samples)}"
        )
    raw_frames = _frame_signal(clip.samples, frame_len, hop)
    n_frames = len(raw_frames)

    # MFCC: pre-emphasis -> Hamming -> |FFT| -> mel(26) -> log -> DCT, keep 0..12
    emphasized = np.concatenate(
        [raw_frames[:, :1], raw_frames[:, 1:] - config.preemphasis * raw_frames[:, :-1]],
        axis=1,
    )
    windowed = emphasized * np.hamming(frame_len)
    power = np.abs(np.fft.rfft(windowed, axis=1)) ** 2
    fbank = _mel_filterbank(config.n_mels, frame_len, sr)
    mel_energy = power @ fbank.T
    log_mel = np.log(np.maximum(mel_energy, LOG_FLOOR))
    mfcc = dct(log_mel, type=2, norm="ortho", axis=1)[:, : config.n_mfcc]

    rms = np.sqrt((raw_frames**2).mean(axis=1))
    voiced = rms >= ENERGY_GATE
    pause_ratio = float(np.mean(~voiced))

    pitches = [
        _frame_pitch(raw_frames[i], sr, config) for i in range(n_frames) if voiced[i]
    ]
    pitches = [p for p in pitches if p > 0]
    if pitches:
        pitch_mean = float(np.mean(pitches))
        pitch_std = float(np.std(pitches))
    else:
        pitch_mean = pitch_std = 0.0  # convention: no voiced frames

    transitions = int(np.sum(voiced[1:] != voiced[:-1]))
    framed_duration = (n_frames - 1) * hop / sr + frame_len / sr
    speaking_rate = transitions / framed_duration

    return FeatureVector(
        mfcc_mean=mfcc.mean(axis=0),
        mfcc_std=mfcc.std(axis=0),
        pitch_mean=pitch_mean,
        pitch_std=pitch_std,
        energy_mean=float(rms.mean()),
        energy_std=float(rms.std()),
        pause_ratio=pause_ratio,
        speaking_rate_proxy=float(speaking_rate),
    )
