"""Coefficient design for nonuniformly stepped phase-shifting algorithms.

A PSA with coefficients ``c_n`` on known steps ``theta_n`` has the
frequency transfer function ``H(w) = sum_n c_n exp(-1j * theta_n * w)``.
Fixing ``H`` at N distinct frequencies gives an N x N complex system whose
solution is the demodulation formula.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    IllConditionedWarning,
    InvalidDesign,
    InvalidSteps,
    SingularDesign,
)

#: residual bound on every solved constraint
TAU_RES = 1e-10
#: hard limit on the 1-norm condition estimate
KAPPA_MAX = 1e12
#: condition estimate above which a warning is issued
KAPPA_WARN = 1e8
#: two steps closer than this (radians) count as duplicates
TAU_DUP = 1e-9

MIN_STEPS = 3


def _frozen(values, dtype):
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PhaseSteps:
    """Known phase shifts ``theta_n`` in radians (frequency normalized to 1)."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, float))
        if len(self.values) < MIN_STEPS:
            raise InvalidSteps(f"need at least {MIN_STEPS} phase steps, got {len(self.values)}")
        if not np.all(np.isfinite(self.values)):
            raise InvalidSteps("phase steps must be finite")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values.tolist())

    def __eq__(self, other):
        if not isinstance(other, PhaseSteps):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def matches(self, other, tol=1e-9):
        """True if both step sets have equal length and agree within `tol`."""
        return len(self) == len(other) and bool(
            np.all(np.abs(self.values - other.values) <= tol)
        )

    def duplicates(self, periodic=True, tol=TAU_DUP):
        """Index pairs of steps that coincide, optionally modulo 2*pi."""
        out = []
        v = self.values
        for i in range(len(v)):
            for j in range(i + 1, len(v)):
                d = abs(v[i] - v[j])
                if periodic:
                    d = math.remainder(d, 2 * math.pi)
                if abs(d) <= tol:
                    out.append((i, j))
        return out


@dataclass(frozen=True, eq=False)
class DesignSpec:
    """Prescribed FTF values: one unit pass frequency, zeroes elsewhere."""

    constraints: tuple

    def __post_init__(self):
        cons = tuple((float(w), complex(g)) for w, g in self.constraints)
        object.__setattr__(self, "constraints", cons)
        omegas = [w for w, _ in cons]
        if not all(math.isfinite(w) for w in omegas):
            raise InvalidDesign("constraint frequencies must be finite")
        if len(set(omegas)) != len(omegas):
            raise InvalidDesign(f"constraint frequencies must be distinct: {omegas}")
        units = [w for w, g in cons if g == 1]
        others = [g for _, g in cons if g != 1]
        if len(units) != 1 or any(g != 0 for g in others):
            raise InvalidDesign("need exactly one target equal to 1, all others 0")

    @classmethod
    def from_zeros(cls, zeros, pass_omega=1.0):
        cons = [(w, 0.0) for w in zeros] + [(pass_omega, 1.0)]
        cons.sort(key=lambda wg: wg[0])
        return cls(tuple(cons))

    def __len__(self):
        return len(self.constraints)

    def __eq__(self, other):
        if not isinstance(other, DesignSpec):
            return NotImplemented
        return self.constraints == other.constraints

    @property
    def omegas(self):
        return np.array([w for w, _ in self.constraints])

    @property
    def targets(self):
        return np.array([g for _, g in self.constraints], dtype=complex)

    @property
    def pass_omega(self):
        return next(w for w, g in self.constraints if g == 1)

    @property
    def zeros(self):
        return [w for w, g in self.constraints if g == 0]


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    """Complex demodulation weights ``c_n`` and the design they satisfy."""

    values: np.ndarray
    steps: PhaseSteps
    spec: DesignSpec
    condition_estimate: float = field(default=float("nan"))

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, complex))
        if len(self.values) != len(self.steps):
            raise DimensionMismatch(
                f"{len(self.values)} coefficients for {len(self.steps)} steps"
            )

    def __len__(self):
        return len(self.values)

    def residual(self):
        """Max over constraints of ``|H(w_k) - g_k|``."""
        m = design_matrix(self.steps, self.spec.omegas)
        return float(np.max(np.abs(m @ self.values - self.spec.targets)))


def design_matrix(steps, omegas):
    """``M[k, n] = exp(-1j * theta_n * omega_k)``; row k is constraint k."""
    theta = steps.values if isinstance(steps, PhaseSteps) else np.asarray(steps, float)
    return np.exp(-1j * np.multiply.outer(np.asarray(omegas, float), theta))


def solve_coefficients(steps, spec):
    """Solve for the coefficients whose FTF meets every constraint in `spec`.

    Parameters
    ----------
    steps : PhaseSteps
    spec : DesignSpec
        Must hold exactly ``len(steps)`` constraints.

    Returns
    -------
    CoefficientSet

    Raises
    ------
    DimensionMismatch
        Constraint count differs from step count.
    SingularDesign
        Duplicate steps, a rank-deficient matrix, or a condition estimate
        above ``KAPPA_MAX``.
    """
    if len(spec) != len(steps):
        raise DimensionMismatch(
            f"{len(spec)} constraints for {len(steps)} steps; the system must be square"
        )
    # steps 2*pi apart give identical columns only when every frequency is an integer
    periodic = all(float(w).is_integer() for w in spec.omegas)
    dups = steps.duplicates(periodic=periodic)
    if dups:
        i, j = dups[0]
        raise SingularDesign(
            f"phase steps {i} and {j} coincide ({float(steps.values[i])!r}, {float(steps.values[j])!r})"
        )
    m = design_matrix(steps, spec.omegas)
    c, cond = linalg.solve(m, spec.targets)
    if not np.isfinite(cond) or cond > KAPPA_MAX:
        raise SingularDesign(f"design matrix condition estimate {cond:.3g} exceeds {KAPPA_MAX:.0e}")
    if cond > KAPPA_WARN:
        warnings.warn(f"design matrix condition estimate {cond:.3g}", IllConditionedWarning,
                      stacklevel=2)
    out = CoefficientSet(c, steps, spec, cond)
    res = out.residual()
    if not res <= TAU_RES:
        raise SingularDesign(f"constraint residual {res:.3g} above {TAU_RES:.0e}")
    return out


def default_zero_set(n):
    """Unit response at w=1 and n-1 zeroes clustered around it.

    The quadrature zeroes at -1 (conjugate term) and 0 (background) are
    always present; the rest are the integers nearest to 1, ties going to
    the negative side. n=3 gives {-1, 0}, n=7 gives {-2, -1, 0, 2, 3, 4}.
    """
    if n < MIN_STEPS:
        raise InvalidDesign(f"need at least {MIN_STEPS} constraints, got {n}")
    zeros = [-1, 0]
    for d in sorted((d for d in range(-n, n + 1) if d != 0), key=lambda d: (abs(d), d)):
        if len(zeros) == n - 1:
            break
        if 1 + d not in zeros:
            zeros.append(1 + d)
    return DesignSpec.from_zeros(zeros, 1.0)


def uniform_steps(n):
    """Evenly spaced steps ``2*pi*k/n``, k = 0..n-1."""
    if n < MIN_STEPS:
        raise InvalidSteps(f"need at least {MIN_STEPS} phase steps, got {n}")
    return PhaseSteps(2 * np.pi * np.arange(n) / n)


def design(steps, zeros=None, pass_omega=1.0):
    """Convenience wrapper: solve on `steps` with explicit or default zeroes."""
    if not isinstance(steps, PhaseSteps):
        steps = PhaseSteps(steps)
    if zeros is None:
        if pass_omega != 1.0:
            raise InvalidDesign("default zero sets assume a pass frequency of 1")
        spec = default_zero_set(len(steps))
    else:
        spec = DesignSpec.from_zeros(zeros, pass_omega)
    return solve_coefficients(steps, spec)
