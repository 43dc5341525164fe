"""On-disk formats: design JSON, spectrum CSV, grid CSV and stack directories.

Floats are written with 17 significant digits so every value round-trips.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .design import CoefficientSet, DesignSpec, PhaseSteps
from .sim import FringeProfile, FringeStack, PhaseMap

FMT = "%.17g"
MANIFEST = "manifest.json"


def _g(x):
    # repr-free fixed formatting keeps files byte-identical across runs
    return float(FMT % x)


def write_json(path, obj):
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def design_to_dict(coeffs):
    return {
        "steps": [_g(t) for t in coeffs.steps.values],
        "constraints": [
            {"omega": _g(w), "re": _g(g.real), "im": _g(g.imag)}
            for w, g in coeffs.spec.constraints
        ],
        "coefficients": [{"re": _g(c.real), "im": _g(c.imag)} for c in coeffs.values],
        "condition": _g(coeffs.condition_estimate),
    }


def design_from_dict(d):
    steps = PhaseSteps(d["steps"])
    spec = DesignSpec(tuple((c["omega"], complex(c["re"], c["im"])) for c in d["constraints"]))
    values = [complex(c["re"], c["im"]) for c in d["coefficients"]]
    return CoefficientSet(values, steps, spec, float(d.get("condition", float("nan"))))


def save_design(path, coeffs):
    write_json(path, design_to_dict(coeffs))


def load_design(path):
    return design_from_dict(read_json(path))


def save_spectrum(path, samples):
    rows = np.column_stack(
        [samples.omegas, samples.values.real, samples.values.imag, samples.magnitudes]
    )
    np.savetxt(path, rows, fmt=FMT, delimiter=",", header="omega,re,im,mag", comments="")


def load_spectrum(path):
    """Returns columns ``(omega, re, im, mag)`` as a (count, 4) array."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def save_grid(path, grid):
    np.savetxt(path, np.asarray(grid, dtype=float), fmt=FMT, delimiter=",")


def load_grid(path):
    return np.loadtxt(path, delimiter=",", ndmin=2)


def save_stack(directory, stack):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    names = [f"frame_{n:03d}.csv" for n in range(len(stack))]
    for name, frame in zip(names, stack.frames):
        save_grid(d / name, frame)
    truth = None
    if stack.truth is not None:
        truth = "truth.csv"
        save_grid(d / truth, stack.truth.values)
    height, width = stack.shape
    write_json(d / MANIFEST, {
        "steps": [_g(t) for t in stack.steps.values],
        "width": width,
        "height": height,
        "profile": stack.profile.to_dict(),
        "frames": names,
        "truth": truth,
    })


def load_stack(directory):
    d = Path(directory)
    m = read_json(d / MANIFEST)
    frames = np.stack([load_grid(d / name) for name in m["frames"]])
    if frames.shape[1:] != (m["height"], m["width"]):
        raise ValueError(f"frame shape {frames.shape[1:]} disagrees with manifest")
    truth = PhaseMap(load_grid(d / m["truth"])) if m.get("truth") else None
    return FringeStack(PhaseSteps(m["steps"]), frames, FringeProfile.from_dict(m["profile"]), truth)
