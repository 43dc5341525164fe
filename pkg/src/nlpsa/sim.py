"""Synthetic phase maps and nonuniformly phase-stepped fringe stacks."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import rng
from .design import PhaseSteps
from .errors import BadParams, DimensionMismatch, FrameCountMismatch

SCENES = ("quadratic", "gaussians", "constant")


@dataclass(frozen=True, eq=False)
class PhaseMap:
    """Row-major grid of phase values in radians, shape (height, width)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or min(v.shape) < 1:
            raise DimensionMismatch(f"phase map must be a non-empty 2-D grid, got {v.shape}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def height(self):
        return self.values.shape[0]

    @property
    def width(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class FringeProfile:
    """Background, harmonic amplitudes ``(k, b_k)`` and noise provenance."""

    background: float = 0.0
    harmonics: tuple = ((1, 1.0),)
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        hs = tuple((int(k), float(b)) for k, b in self.harmonics)
        orders = [k for k, _ in hs]
        if any(k < 1 for k in orders):
            raise BadParams(f"harmonic orders must be >= 1, got {orders}")
        if len(set(orders)) != len(orders):
            raise BadParams(f"harmonic orders must be distinct, got {orders}")
        if self.noise_sigma < 0:
            raise BadParams("noise_sigma must be >= 0")
        object.__setattr__(self, "harmonics", tuple(sorted(hs)))
        object.__setattr__(self, "background", float(self.background))
        object.__setattr__(self, "noise_sigma", float(self.noise_sigma))
        object.__setattr__(self, "seed", int(self.seed))

    @classmethod
    def with_default_background(cls, harmonics, **kw):
        hs = tuple(harmonics)
        return cls(background=0.5 * sum(b for _, b in hs), harmonics=hs, **kw)

    def to_dict(self):
        return {
            "background": self.background,
            "harmonics": [[k, b] for k, b in self.harmonics],
            "noise_sigma": self.noise_sigma,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["background"], tuple(tuple(h) for h in d["harmonics"]),
                   d.get("noise_sigma", 0.0), d.get("seed", 0))


@dataclass(frozen=True, eq=False)
class FringeStack:
    steps: PhaseSteps
    frames: np.ndarray  # (N, height, width)
    profile: FringeProfile = field(default_factory=FringeProfile)
    truth: PhaseMap | None = None

    def __post_init__(self):
        f = np.array(self.frames, dtype=float)
        if f.ndim != 3:
            raise DimensionMismatch(f"frames must be (N, height, width), got {f.shape}")
        if f.shape[0] != len(self.steps):
            raise FrameCountMismatch(f"{f.shape[0]} frames for {len(self.steps)} steps")
        if self.truth is not None and self.truth.shape != f.shape[1:]:
            raise DimensionMismatch(f"truth {self.truth.shape} vs frames {f.shape[1:]}")
        f.flags.writeable = False
        object.__setattr__(self, "frames", f)

    def __len__(self):
        return self.frames.shape[0]

    @property
    def shape(self):
        return self.frames.shape[1:]


def synth_phase_map(kind, params, width, height):
    """Build a ground-truth phase map.

    ``constant``: every pixel ``params[0]``.
    ``quadratic``: ``params[0] * r^2`` with r^2 normalized to peak 1 at the
    corners, so values span roughly ``[0, params[0]]``.
    ``gaussians``: sum of bumps, ``params`` a flat list of
    ``(amplitude, cx, cy, width)`` groups on the unit square.
    """
    if width < 1 or height < 1:
        raise BadParams(f"dimensions must be >= 1, got {width}x{height}")
    p = np.asarray(params, dtype=float).reshape(-1)
    if not np.all(np.isfinite(p)):
        raise BadParams("parameters must be finite")
    x = np.linspace(0.0, 1.0, width) if width > 1 else np.full(1, 0.5)
    y = np.linspace(0.0, 1.0, height) if height > 1 else np.full(1, 0.5)
    xx, yy = np.meshgrid(x, y)
    if kind == "constant":
        if len(p) != 1:
            raise BadParams("constant scene takes one parameter")
        return PhaseMap(np.full((height, width), p[0]))
    if kind == "quadratic":
        if len(p) != 1:
            raise BadParams("quadratic scene takes one parameter (peak phase)")
        r2 = (2 * xx - 1) ** 2 + (2 * yy - 1) ** 2
        peak = r2.max()
        return PhaseMap(p[0] * (r2 / peak if peak > 0 else r2))
    if kind == "gaussians":
        if len(p) == 0 or len(p) % 4:
            raise BadParams("gaussians take groups of (amplitude, cx, cy, width)")
        phi = np.zeros((height, width))
        for amp, cx, cy, w in p.reshape(-1, 4):
            if not w > 0:
                raise BadParams("gaussian width must be positive")
            phi += amp * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * w * w))
        return PhaseMap(phi)
    raise BadParams(f"unknown scene kind {kind!r}; expected one of {SCENES}")


def fringe_samples(phi, theta, profile):
    """``a + sum_k b_k cos(k (phi + theta))`` broadcast over phi and theta."""
    arg = np.add.outer(np.asarray(theta, float), np.asarray(phi, float))
    out = np.full(arg.shape, profile.background)
    for k, b in profile.harmonics:
        out += b * np.cos(k * arg)
    return out


def simulate_stack(truth, steps, profile):
    """Noiseless frames ``I_n = a + sum_k b_k cos(k (phi + theta_n))``."""
    if not isinstance(steps, PhaseSteps):
        steps = PhaseSteps(steps)
    frames = fringe_samples(truth.values, steps.values, replace(profile, noise_sigma=0.0))
    return FringeStack(steps, frames, replace(profile, noise_sigma=0.0), truth)


def awgn(seed, shape, frame_slice=None):
    """Counter-keyed standard normal noise of shape (N, H, W)."""
    n, h, w = shape
    frames = np.arange(n) if frame_slice is None else np.arange(n)[frame_slice]
    pix = np.arange(h * w)
    z = rng.normal(seed, rng.NOISE, frames[:, None], pix[None, :])
    return z.reshape(len(frames), h, w)


def add_awgn(stack, sigma, seed, workers=1):
    """Return a copy of `stack` with white Gaussian noise of std `sigma`.

    The draw for frame n, flat pixel p depends only on ``(seed, n, p)``.
    """
    if not sigma >= 0:
        raise BadParams(f"sigma must be >= 0, got {sigma}")
    profile = replace(stack.profile, noise_sigma=float(sigma), seed=int(seed))
    if sigma == 0:
        return replace(stack, profile=profile)
    n = len(stack)
    if workers > 1:
        bounds = np.linspace(0, n, min(workers, n) + 1).astype(int)
        slices = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda s: awgn(seed, stack.frames.shape, s), slices))
        noise = np.concatenate(parts)
    else:
        noise = awgn(seed, stack.frames.shape)
    return replace(stack, frames=stack.frames + sigma * noise, profile=profile)
