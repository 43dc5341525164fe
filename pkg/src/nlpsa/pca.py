"""PCA demodulation baseline for phase-stepped stacks with unknown steps.

The mean-removed frames are decomposed through their N x N covariance;
the two leading principal images act as a quadrature pair. The recovered
phase is only defined up to a global sign and a constant offset.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .demod import phase_error, wrap
from .errors import DegenerateStack, UsageError
from .linalg import jacobi_eigh
from .sim import PhaseMap

#: second eigenvalue below this fraction of the first means no quadrature pair
DEGENERATE_RATIO = 1e-12


@dataclass(frozen=True, eq=False)
class PcaResult:
    phase: PhaseMap
    eigenvalues: tuple
    eigenvectors: np.ndarray
    covariance: np.ndarray

    @property
    def conjugate_phase(self):
        """The sign-flipped candidate ``arg(u - iv)``."""
        return PhaseMap(wrap(-self.phase.values))


def covariance(frames):
    """Frame covariance of mean-removed frames, one pairwise sum per entry."""
    n = frames.shape[0]
    x = frames.reshape(n, -1)
    cov = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            cov[i, j] = cov[j, i] = np.sum(x[i] * x[j])
    return cov


def pca_demodulate(stack):
    """Estimate the wrapped phase of `stack` from its top two principal components.

    Raises
    ------
    DegenerateStack
        The frames span fewer than two directions after mean removal.
    """
    frames = stack.frames
    if frames.shape[0] < 3:
        raise UsageError("PCA needs at least 3 frames")
    centered = frames - frames.mean(axis=0)
    cov = covariance(centered)
    w, v = jacobi_eigh(cov)
    if not w[0] > 0 or w[1] < DEGENERATE_RATIO * w[0]:
        raise DegenerateStack(
            f"second eigenvalue {w[1]:.3g} vs first {w[0]:.3g}: no quadrature pair"
        )
    u = np.tensordot(v[:, 0], centered, axes=1)
    q = np.tensordot(v[:, 1], centered, axes=1)
    phase = wrap(np.arctan2(q, u))
    return PcaResult(PhaseMap(phase), (float(w[0]), float(max(w[1], 0.0))), v, cov)


def aligned_error(result, truth):
    """Error stats after choosing the sign candidate closest to `truth`.

    Piston is always removed. Returns ``(stats, sign)`` with sign +1 for
    ``arg(u + iv)`` and -1 for the conjugate candidate.
    """
    plus = phase_error(result.phase, truth, remove_piston=True)
    minus = phase_error(result.conjugate_phase, truth, remove_piston=True)
    if minus.rms < plus.rms:
        return minus, -1
    return plus, 1


def aligned_phase(result, truth):
    """Sign- and piston-aligned PCA phase, for export next to the truth."""
    stats, sign = aligned_error(result, truth)
    est = sign * result.phase.values
    t = truth.values if isinstance(truth, PhaseMap) else np.asarray(truth)
    piston = np.angle(np.sum(np.exp(1j * (est - t))))
    return PhaseMap(wrap(est - piston)), stats
