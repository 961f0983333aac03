"""Fourier helpers for periodic samples on the uniform grid xi_i = 2*pi*i/N."""

import numpy as np


def grid(n):
    return 2.0 * np.pi * np.arange(n) / n


def derivative(samples, order=1, axis=-1):
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[axis]
    k = np.fft.rfftfreq(n, d=1.0 / n)
    if n % 2 == 0 and order % 2 == 1:
        k = k.copy()
        k[-1] = 0.0
    shape = [1] * samples.ndim
    shape[axis] = k.size
    mult = ((1j * k) ** order).reshape(shape)
    return np.fft.irfft(np.fft.rfft(samples, axis=axis) * mult, n=n, axis=axis)


def antiderivative(samples, axis=-1):
    """Zero-mean periodic antiderivative; the mean of ``samples`` is discarded."""
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[axis]
    k = np.fft.rfftfreq(n, d=1.0 / n)
    inv = np.zeros(k.size, dtype=complex)
    inv[1:] = 1.0 / (1j * k[1:])
    if n % 2 == 0:
        inv[-1] = 0.0
    shape = [1] * samples.ndim
    shape[axis] = k.size
    return np.fft.irfft(np.fft.rfft(samples, axis=axis) * inv.reshape(shape), n=n, axis=axis)


def lowpass(samples, kmax, axis=-1):
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[axis]
    spec = np.fft.rfft(samples, axis=axis)
    k = np.fft.rfftfreq(n, d=1.0 / n)
    shape = [1] * samples.ndim
    shape[axis] = k.size
    return np.fft.irfft(spec * (k <= kmax).reshape(shape), n=n, axis=axis)


def band_energy_fraction(samples, kmax, axis=-1):
    """Fraction of non-mean spectral energy carried by modes with |k| > kmax."""
    spec = np.fft.rfft(np.asarray(samples, dtype=float), axis=axis)
    n = np.asarray(samples).shape[axis]
    k = np.fft.rfftfreq(n, d=1.0 / n)
    power = np.abs(np.moveaxis(spec, axis, -1)) ** 2
    power = power.reshape(-1, k.size).sum(axis=0)
    total = power[1:].sum()
    if total == 0.0:
        return 0.0
    return float(power[k > kmax].sum() / total)
