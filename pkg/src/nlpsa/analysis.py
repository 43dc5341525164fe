"""Frequency transfer function evaluation, SNR gain and harmonic rejection."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .design import CoefficientSet, DesignSpec, uniform_steps
from .errors import InvalidRange, UsageError, ZeroCoefficients

#: magnitude at or below which |H| counts as a spectral zero
TAU_ZERO = 1e-8

FULLY_REJECTED = "fully-rejected"
PARTIALLY_REJECTED = "partially-rejected"
PASSED = "passed"


def _ftf(values, theta, omegas):
    # one row per frequency, reduced along the contiguous step axis, so a
    # sample's value never depends on which chunk it was computed in
    omegas = np.asarray(omegas, dtype=float)
    terms = values * np.exp(-1j * np.multiply.outer(omegas, theta))
    return terms.sum(axis=-1)


def evaluate_ftf(coeffs, omega):
    """``H(omega) = sum_n c_n exp(-1j * theta_n * omega)``.

    `omega` may be a scalar (returns complex) or an array.
    """
    h = _ftf(coeffs.values, coeffs.steps.values, omega)
    return complex(h) if np.ndim(h) == 0 else h


@dataclass(frozen=True)
class SpectrumSamples:
    omegas: np.ndarray
    values: np.ndarray
    magnitudes: np.ndarray

    def local_minima(self, threshold=TAU_ZERO):
        """Frequencies where |H| is a local minimum below `threshold`.

        Endpoints count when they are below their single neighbour.
        """
        m = self.magnitudes
        left = np.r_[np.inf, m[:-1]]
        right = np.r_[m[1:], np.inf]
        hit = (m <= left) & (m <= right) & (m < threshold)
        return self.omegas[hit]


def sample_spectrum(coeffs, omega_min, omega_max, count, workers=1):
    """Sample H on an inclusive uniform grid of `count` frequencies."""
    if not (np.isfinite(omega_min) and np.isfinite(omega_max)) or not omega_min < omega_max:
        raise InvalidRange(f"need omega_min < omega_max, got [{omega_min}, {omega_max}]")
    if count < 2:
        raise InvalidRange(f"need at least 2 samples, got {count}")
    omegas = np.linspace(omega_min, omega_max, int(count))
    theta = coeffs.steps.values
    if workers > 1:
        chunks = np.array_split(omegas, workers)
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda w: _ftf(coeffs.values, theta, w), chunks))
        values = np.concatenate(parts)
    else:
        values = _ftf(coeffs.values, theta, omegas)
    return SpectrumSamples(omegas, values, np.abs(values))


def snr_gain(coeffs, pass_omega=1.0):
    """Noise gain ``|H(pass)|^2 / sum |c_n|^2`` under white Gaussian noise.

    Bounded above by N (Cauchy-Schwarz); equality only for evenly spaced
    steps with the least-squares weights.
    """
    energy = float(np.sum(np.abs(coeffs.values) ** 2))
    if not energy > 0:
        raise ZeroCoefficients("all coefficients are zero")
    return abs(evaluate_ftf(coeffs, pass_omega)) ** 2 / energy


@dataclass(frozen=True)
class HarmonicRejection:
    order: int
    h_pos: float
    h_neg: float
    status: str


@dataclass(frozen=True)
class RejectionReport:
    background: float
    harmonics: tuple

    def __getitem__(self, k):
        for h in self.harmonics:
            if h.order == k:
                return h
        raise KeyError(k)

    def status(self, k):
        return self[k].status

    def fully_rejected(self):
        return [h.order for h in self.harmonics if h.status == FULLY_REJECTED]


def _classify(h_pos, h_neg, tau=TAU_ZERO):
    zeros = int(h_pos <= tau) + int(h_neg <= tau)
    return (PASSED, PARTIALLY_REJECTED, FULLY_REJECTED)[zeros]


def harmonic_rejection_report(coeffs, k_max):
    """Classify harmonics 1..k_max by the FTF magnitude at +k and -k.

    A real harmonic ``cos(k(phi + theta))`` leaks through both ``H(k)`` and
    ``H(-k)``, so it is only fully rejected when both vanish.
    """
    if k_max < 1:
        raise UsageError(f"k_max must be >= 1, got {k_max}")
    ks = np.arange(1, k_max + 1)
    pos = np.abs(evaluate_ftf(coeffs, ks))
    neg = np.abs(evaluate_ftf(coeffs, -ks))
    rows = tuple(
        HarmonicRejection(int(k), float(p), float(n), _classify(p, n))
        for k, p, n in zip(ks, pos, neg)
    )
    return RejectionReport(abs(evaluate_ftf(coeffs, 0.0)), rows)


def linear_lspsa(n):
    """Uniform n-step least-squares PSA, normalized so ``H(1) = 1``."""
    steps = uniform_steps(n)
    c = np.exp(1j * steps.values) / n
    zeros = [1 + d for d in range(-(n // 2), n - n // 2) if d != 0]
    return CoefficientSet(c, steps, DesignSpec.from_zeros(zeros, 1.0), condition_estimate=1.0)
