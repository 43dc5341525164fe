import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import PAPER_COEFFS_SOLVED, PAPER_STEPS, PAPER_ZEROS, random_steps
from nlpsa import (
    DesignSpec,
    PhaseSteps,
    default_zero_set,
    design,
    evaluate_ftf,
    solve_coefficients,
    uniform_steps,
)
from nlpsa.errors import DimensionMismatch, InvalidDesign, InvalidSteps, SingularDesign


def test_paper_design_matches_independent_solve(paper_design):
    np.testing.assert_allclose(paper_design.values, PAPER_COEFFS_SOLVED, atol=1e-11)
    assert paper_design.residual() < 1e-10
    assert 1 < paper_design.condition_estimate < 1e8


def test_first_sample_lowest_weight(paper_design):
    mags = np.abs(paper_design.values)
    assert np.argmin(mags) == 0


def test_three_uniform_steps_are_roots_of_unity():
    steps = PhaseSteps([0, 2 * np.pi / 3, 4 * np.pi / 3])
    c = solve_coefficients(steps, DesignSpec.from_zeros([-1, 0]))
    np.testing.assert_allclose(c.values, np.exp(1j * steps.values) / 3, atol=1e-12)


def test_repeated_step_is_singular():
    with pytest.raises(SingularDesign):
        design([0, 1.0, 1.0])


def test_steps_2pi_apart_are_singular_for_integer_frequencies():
    with pytest.raises(SingularDesign):
        design([0, 1.0, 2 * np.pi])
    # non-integer frequencies separate the two columns
    c = solve_coefficients(PhaseSteps([0, 1.0, 2 * np.pi]), DesignSpec.from_zeros([-0.5, 0.25]))
    assert c.residual() < 1e-10


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_coefficients(PhaseSteps([0, 1, 2, 3]), default_zero_set(3))


@pytest.mark.parametrize("bad", [[0, 1], [0, np.nan, 2], [0, np.inf, 1]])
def test_invalid_steps(bad):
    with pytest.raises(InvalidSteps):
        PhaseSteps(bad)


def test_design_spec_invariants():
    with pytest.raises(InvalidDesign):
        DesignSpec(((0, 0), (1, 1), (1, 0)))
    with pytest.raises(InvalidDesign):
        DesignSpec(((0, 0), (2, 0), (3, 0)))
    with pytest.raises(InvalidDesign):
        DesignSpec(((0, 0.5), (1, 1), (2, 0)))
    spec = DesignSpec.from_zeros([3, -1, 0], pass_omega=1)
    assert spec.pass_omega == 1
    assert spec.zeros == [-1, 0, 3]


@pytest.mark.parametrize("n,zeros", [
    (3, [-1, 0]),
    (4, [-1, 0, 2]),
    (5, [-1, 0, 2, 3]),
    (7, [-2, -1, 0, 2, 3, 4]),
    (8, [-3, -2, -1, 0, 2, 3, 4]),
])
def test_default_zero_set(n, zeros):
    spec = default_zero_set(n)
    assert spec.zeros == zeros
    assert spec.pass_omega == 1
    assert len(spec) == n


def test_default_zero_set_minimum():
    with pytest.raises(InvalidDesign):
        default_zero_set(2)


def test_uniform_steps():
    np.testing.assert_allclose(uniform_steps(4).values, [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    np.testing.assert_allclose(uniform_steps(7).values, 2 * np.pi * np.arange(7) / 7)
    with pytest.raises(InvalidSteps):
        uniform_steps(2)


@pytest.mark.parametrize("n", range(3, 13))
def test_reduces_to_least_squares_on_uniform_steps(n):
    steps = uniform_steps(n)
    c = solve_coefficients(steps, default_zero_set(n))
    np.testing.assert_allclose(c.values, np.exp(1j * steps.values) / n, atol=1e-10)


def test_random_designs_meet_constraints():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        n = int(rng.integers(3, 10))
        c = design(random_steps(rng, n))
        h = evaluate_ftf(c, c.spec.omegas)
        assert np.max(np.abs(h - c.spec.targets)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(3, 9), data=st.data())
def test_joint_permutation_invariance(seed, n, data):
    theta = random_steps(np.random.default_rng(seed), n)
    perm = np.array(data.draw(st.permutations(range(n))))
    c = design(theta)
    cp = design(theta[perm])
    np.testing.assert_allclose(cp.values, c.values[perm], atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), shift=st.floats(-10, 10))
def test_phase_origin_shift_resolves(seed, shift):
    theta = random_steps(np.random.default_rng(seed), 7)
    c = design(theta + shift)
    assert c.residual() < 1e-10
    # each coefficient picks up exp(i*shift) for the unit constraint at w=1
    c0 = design(theta)
    np.testing.assert_allclose(c.values, c0.values * np.exp(1j * shift), atol=1e-9)


def test_immutable(paper_design):
    with pytest.raises(ValueError):
        paper_design.values[0] = 0


def test_paper_zero_set_is_default_for_seven(paper_design):
    assert paper_design.spec == default_zero_set(7)
    assert paper_design.spec.zeros == list(PAPER_ZEROS)
    assert list(paper_design.steps) == list(PAPER_STEPS)
