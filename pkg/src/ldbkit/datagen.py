"""Synthetic benchmark datasets with reproducible substreams.

Two families are provided: length-1024 scattering-sum waveforms (sums of
n chirp-like cosine terms with random ranges and angles, n in {3,4,5})
and length-32 three-class triangular waveforms with additive Gaussian
noise.  Every signal is drawn from its own PRNG substream keyed by
(seed, example, realization, class, split, signal index), so datasets are
bit-reproducible and generation order is irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, make_dataset
from .errors import InvalidClass, InvalidN

R_RANGE = 1.0e4
K_WAVE = 100.0
EX12_LENGTH = 1024
EX3_LENGTH = 32

_EXAMPLE_IDS = {"ex1": 1, "ex2": 2, "ex3": 3}
_EXAMPLE_CLASSES = {"ex1": (3, 4), "ex2": (4, 5), "ex3": (1, 2, 3)}

TRAIN_SPLIT = 0
TEST_SPLIT = 1


@dataclass(frozen=True)
class RngSpec:
    """Root seed for a whole study; hands out per-signal generators."""

    seed: int

    def signal_rng(self, example: int, realization: int, class_id: int,
                   split: int, index: int) -> np.random.Generator:
        ss = np.random.SeedSequence(
            entropy=(self.seed, example, realization, class_id, split, index))
        return np.random.Generator(np.random.PCG64(ss))


def _sample_angles(length: int, offset: float) -> np.ndarray:
    # fixed grid, 2*pi/1600 per step
    return offset + 2.0 * np.pi * np.arange(length) / 1600.0


def ex12_signal(n: int, rng, theta_s: np.ndarray) -> np.ndarray:
    """One unnormalized scattering-sum waveform with n terms.

    rng only needs a numpy-style ``uniform(low, high, size=None)``; tests
    may pass degenerate stubs.
    """
    r = np.asarray(rng.uniform(1.0, 10.0, n), dtype=np.float64)
    lows = 2.0 * np.pi * np.arange(1, n + 1) / n
    theta = np.asarray(rng.uniform(lows, lows + np.pi / 4.0), dtype=np.float64)
    phase = K_WAVE * r * r / (2.0 * R_RANGE)
    args = phase[None, :] - K_WAVE * r[None, :] * np.cos(theta_s[:, None]
                                                         - theta[None, :])
    return np.cos(args).sum(axis=1) / n


def gen_ex12(n: int, count: int, rng, offset: float = 0.0) -> Dataset:
    """Scattering-sum class with n terms; labels carry n itself.

    A single rng drives all ``count`` signals in order; for per-signal
    substreams call with count=1 per stream (gen_experiment does).
    """
    if n not in (3, 4, 5):
        raise InvalidN(f"term count must be 3, 4 or 5, got {n}")
    theta_s = _sample_angles(EX12_LENGTH, offset)
    signals = np.empty((count, EX12_LENGTH), dtype=np.float64)
    for i in range(count):
        s = ex12_signal(n, rng, theta_s)
        signals[i] = s / np.linalg.norm(s)
    return make_dataset(signals, np.full(count, n, dtype=np.int64))


def triangle_bump(shift: int) -> np.ndarray:
    """Length-32 triangle max(6 - |i - 7 - shift|, 0) on 1-based samples."""
    i = np.arange(1, EX3_LENGTH + 1, dtype=np.float64)
    return np.maximum(6.0 - np.abs(i - 7.0 - shift), 0.0)


def ex3_signal(class_id: int, rng) -> np.ndarray:
    """One unnormalized triangular-mix waveform.

    rng needs ``uniform(low, high)`` and ``standard_normal(size)``.
    """
    h1, h2, h3 = triangle_bump(0), triangle_bump(8), triangle_bump(4)
    u = float(rng.uniform(0.0, 1.0))
    eps = np.asarray(rng.standard_normal(EX3_LENGTH), dtype=np.float64)
    if class_id == 1:
        return u * h1 + (1.0 - u) * h2 + eps
    if class_id == 2:
        return u * h1 + (1.0 - u) * h3 + eps
    if class_id == 3:
        return u * h2 + (1.0 - u) * h3 + eps
    raise InvalidClass(f"class id must be 1, 2 or 3, got {class_id}")


def gen_ex3(class_id: int, count: int, rng) -> Dataset:
    """Triangular-mix class; labels carry the class id."""
    if class_id not in (1, 2, 3):
        raise InvalidClass(f"class id must be 1, 2 or 3, got {class_id}")
    signals = np.empty((count, EX3_LENGTH), dtype=np.float64)
    for i in range(count):
        s = ex3_signal(class_id, rng)
        signals[i] = s / np.linalg.norm(s)
    return make_dataset(signals, np.full(count, class_id, dtype=np.int64))


def gen_experiment(example: str, realization: int, rng_spec: RngSpec,
                   train_per_class: int = 100, test_per_class: int = 1000,
                   offset: float = 0.0) -> tuple[Dataset, Dataset]:
    """(train, test) datasets for one realization of one example.

    Classes are labeled 1..n in the example's canonical order (ex1: 3-term
    vs 4-term; ex2: 4-term vs 5-term; ex3: classes 1, 2, 3).
    """
    if example not in _EXAMPLE_IDS:
        raise InvalidClass(f"unknown example {example!r}")
    ex_id = _EXAMPLE_IDS[example]
    natural = _EXAMPLE_CLASSES[example]
    theta_s = _sample_angles(EX12_LENGTH, offset)
    splits = []
    for split, per_class in ((TRAIN_SPLIT, train_per_class),
                             (TEST_SPLIT, test_per_class)):
        length = EX3_LENGTH if example == "ex3" else EX12_LENGTH
        signals = np.empty((per_class * len(natural), length), dtype=np.float64)
        labels = np.empty(per_class * len(natural), dtype=np.int64)
        row = 0
        for ci, nat in enumerate(natural):
            for idx in range(per_class):
                rng = rng_spec.signal_rng(ex_id, realization, nat, split, idx)
                if example == "ex3":
                    s = ex3_signal(nat, rng)
                else:
                    s = ex12_signal(nat, rng, theta_s)
                signals[row] = s / np.linalg.norm(s)
                labels[row] = ci + 1
                row += 1
        splits.append(make_dataset(signals, labels))
    return splits[0], splits[1]
