"""Batch-means estimates with integrated autocorrelation times."""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, sqrt

import numpy as np


class InsufficientSamples(ValueError):
    """Too few samples to form the requested number of batches."""


@dataclass
class Estimate:
    mean: complex
    stderr: float
    n_samples: int
    batch_size: int
    tau_int: float = 0.5

    @property
    def real(self) -> float:
        return float(np.real(self.mean))

    def z(self, target: complex = 0.0) -> float:
        diff = abs(self.mean - target)
        if self.stderr == 0:
            return 0.0 if diff == 0 else float("inf")
        return float(diff / self.stderr)

    def to_dict(self) -> dict:
        m = complex(self.mean)
        return {"mean": m.real, "mean_imag": m.imag, "stderr": self.stderr,
                "n_samples": self.n_samples, "batch_size": self.batch_size, "tau_int": self.tau_int}


def integrated_autocorr_time(x: np.ndarray, c: float = 5.0) -> float:
    """tau_int = 1/2 + sum_t rho(t), summed up to the first window W >= c tau(W)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 2:
        return 0.5
    y = x - x.mean()
    var = y @ y / n
    if var == 0:
        return 0.5
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(y, size)
    acf = np.fft.irfft(f * np.conj(f), size)[:n] / (n * var)
    tau = 0.5
    for w in range(1, n):
        tau += acf[w]
        if w >= c * tau:
            break
    return max(float(tau), 0.5)


def batch_means(x: np.ndarray, factor: float = 20.0, min_batches: int = 10) -> Estimate:
    """Mean of a (possibly complex) chain with a batch-means standard error.

    The batch length is at least ``factor`` times the integrated autocorrelation time.
    """
    x = np.asarray(x)
    n = len(x)
    if n < min_batches:
        raise InsufficientSamples(f"{n} samples cannot form {min_batches} batches")
    tau = integrated_autocorr_time(x.real)
    if np.iscomplexobj(x):
        tau = max(tau, integrated_autocorr_time(x.imag))
    size = max(1, ceil(factor * tau))
    nb = n // size
    if nb < min_batches:
        raise InsufficientSamples(
            f"{n} samples with tau_int={tau:.1f} give {nb} batches of length {size}; need {min_batches}")
    b = x[: nb * size].reshape(nb, size).mean(axis=1)
    if np.iscomplexobj(b):
        var = b.real.var(ddof=1) + b.imag.var(ddof=1)
    else:
        var = b.var(ddof=1)
    mean = x.mean()
    return Estimate(mean if np.iscomplexobj(x) else float(mean), sqrt(var / nb), n, size, tau)


def merge_estimates(ests: list) -> Estimate:
    """Inverse-variance weighted combination of independent estimates."""
    if not ests:
        raise ValueError("nothing to merge")
    if len(ests) == 1:
        return ests[0]
    if any(e.stderr == 0 for e in ests):
        exact = [e for e in ests if e.stderr == 0]
        return Estimate(exact[0].mean, 0.0, sum(e.n_samples for e in ests), exact[0].batch_size, exact[0].tau_int)
    w = np.array([1.0 / e.stderr ** 2 for e in ests])
    mean = sum(wi * e.mean for wi, e in zip(w, ests)) / w.sum()
    return Estimate(mean, float(1 / sqrt(w.sum())), sum(e.n_samples for e in ests),
                    max(e.batch_size for e in ests), max(e.tau_int for e in ests))
