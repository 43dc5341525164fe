"""Per-pixel demodulation, phase error statistics and Monte-Carlo SNR gain."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng
from .analysis import evaluate_ftf
from .errors import BadParams, BadTrialCount, DimensionMismatch, FrameCountMismatch, StepMismatch
from .sim import PhaseMap

#: validity threshold relative to the largest frame magnitude
TAU_AMP = 1e-12

# real-sample signal power b^2/2 against analytic-signal power b^2/4
_ANALYTIC_SIGNAL_FACTOR = 2.0


@dataclass(frozen=True, eq=False)
class DemodResult:
    phase: PhaseMap
    amplitude: np.ndarray
    valid: np.ndarray


@dataclass(frozen=True)
class PhaseErrorStats:
    rms: float
    max_abs: float
    piston_removed: bool

    def to_dict(self):
        return {"rms": self.rms, "max_abs": self.max_abs, "piston_removed": self.piston_removed}


def wrap(phase):
    """Wrap to (-pi, pi]."""
    w = np.angle(np.exp(1j * np.asarray(phase, float)))
    return np.where(w == -np.pi, np.pi, w)


def _combine(conj_c, frames):
    z = np.zeros(frames.shape[1:], dtype=complex)
    for cn, frame in zip(conj_c, frames):
        z += cn * frame
    return z


def demodulate(stack, coeffs, workers=1):
    """Apply ``z = sum_n conj(c_n) I_n`` to every pixel of `stack`.

    Returns wrapped phase ``arg z``, amplitude ``|z|`` and a validity mask.

    Raises
    ------
    FrameCountMismatch
        The stack and the design have different lengths.
    StepMismatch
        Some step differs by more than 1e-9 rad between stack and design.
    """
    if len(stack) != len(coeffs):
        raise FrameCountMismatch(f"stack has {len(stack)} frames, design has {len(coeffs)} coefficients")
    if not stack.steps.matches(coeffs.steps):
        raise StepMismatch(
            f"stack steps {list(stack.steps)} do not match design steps {list(coeffs.steps)}"
        )
    conj_c = np.conj(coeffs.values)
    frames = stack.frames
    if workers > 1:
        rows = np.array_split(np.arange(frames.shape[1]), workers)
        rows = [r for r in rows if len(r)]
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda r: _combine(conj_c, frames[:, r[0]:r[-1] + 1]), rows))
        z = np.concatenate(parts, axis=0)
    else:
        z = _combine(conj_c, frames)
    amp = np.abs(z)
    valid = amp >= TAU_AMP * np.max(np.abs(frames))
    phase = np.where(valid, wrap(np.angle(z)), 0.0)
    return DemodResult(PhaseMap(phase), amp, valid)


def phase_error(estimate, truth, remove_piston=False):
    """Circular difference statistics between two phase maps."""
    est = estimate.values if isinstance(estimate, PhaseMap) else np.asarray(estimate, float)
    tru = truth.values if isinstance(truth, PhaseMap) else np.asarray(truth, float)
    if est.shape != tru.shape:
        raise DimensionMismatch(f"estimate {est.shape} vs truth {tru.shape}")
    d = np.exp(1j * (est - tru))
    delta = np.angle(d)
    if remove_piston:
        delta = np.angle(d * np.exp(-1j * np.angle(d.sum())))
    delta = np.abs(delta)
    return PhaseErrorStats(float(np.sqrt(np.mean(delta ** 2))), float(delta.max()), bool(remove_piston))


def mc_snr_gain(coeffs, sigma, trials, seed, b=2.0):
    """Monte-Carlo estimate of the SNR gain of `coeffs` at its pass frequency.

    Each trial is a scalar fringe ``b cos(phi + theta_n)`` with random phi
    plus white noise of std `sigma`. Input SNR is ``(b^2/2) / sigma^2``;
    output SNR is the analytic signal power ``|H(pass) b/2|^2`` over the
    mean squared deviation of ``z`` from its noiseless value. The ratio is
    scaled by 2 so that the uniform least-squares PSA yields N.
    """
    if not sigma > 0:
        raise BadParams(f"sigma must be positive, got {sigma}")
    if trials < 1000:
        raise BadTrialCount(f"need at least 1000 trials, got {trials}")
    theta = coeffs.steps.values
    n = len(theta)
    t = np.arange(int(trials))
    phi = 2 * np.pi * rng.uniform(seed, rng.PHASE, t)
    noise = rng.normal(seed, rng.NOISE, t[:, None], np.arange(n)[None, :])
    clean = b * np.cos(phi[:, None] + theta[None, :])
    conj_c = np.conj(coeffs.values)
    z_noisy = (clean + sigma * noise) @ conj_c
    z_clean = clean @ conj_c
    noise_power = np.mean(np.abs(z_noisy - z_clean) ** 2)
    h = evaluate_ftf(coeffs, coeffs.spec.pass_omega)
    signal_power = abs(h * b / 2) ** 2
    snr_in = (b * b / 2) / sigma ** 2
    return _ANALYTIC_SIGNAL_FACTOR * (signal_power / noise_power) / snr_in
