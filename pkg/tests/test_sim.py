import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from conftest import PAPER_STEPS
from nlpsa import FringeProfile, PhaseMap, PhaseSteps, add_awgn, simulate_stack, synth_phase_map
from nlpsa import rng
from nlpsa.errors import BadParams, FrameCountMismatch
from nlpsa.sim import FringeStack


def single(phi, theta, profile):
    return simulate_stack(PhaseMap([[phi]]), PhaseSteps([theta, theta + 1, theta + 2]), profile).frames[0, 0, 0]


def test_constant_scene():
    m = synth_phase_map("constant", [0.7], 4, 4)
    assert m.shape == (4, 4)
    assert np.all(m.values == 0.7)


def test_quadratic_scene_range():
    m = synth_phase_map("quadratic", [3 * np.pi], 64, 64)
    assert m.values.min() == pytest.approx(0, abs=0.01)
    assert m.values.max() == pytest.approx(3 * np.pi)


def test_gaussian_scene():
    assert np.all(synth_phase_map("gaussians", [0, 0.5, 0.5, 0.1], 8, 8).values == 0)
    m = synth_phase_map("gaussians", [2.0, 0.0, 0.0, 0.2, 1.0, 1.0, 1.0, 0.3], 9, 9)
    assert m.values[0, 0] == pytest.approx(2.0 + math.exp(-2 / 0.18))


@pytest.mark.parametrize("kind,params", [
    ("constant", []), ("quadratic", [1, 2]), ("gaussians", [1, 2, 3]),
    ("gaussians", [1, 0.5, 0.5, 0]), ("spiral", [1]),
])
def test_bad_params(kind, params):
    with pytest.raises(BadParams):
        synth_phase_map(kind, params, 4, 4)


def test_bad_dimensions():
    with pytest.raises(BadParams):
        synth_phase_map("constant", [0], 0, 4)


def test_pixel_values():
    assert single(0.0, 0.0, FringeProfile(1.0, ((1, 1.0),))) == 2.0
    assert single(0.0, np.pi / 2, FringeProfile(0.0, ((1, 1.0),))) == pytest.approx(0, abs=1e-16)
    assert single(0.0, np.pi, FringeProfile(0.0, ((1, 1.0),))) == -1.0
    v = single(0.7, 1.81, FringeProfile(0.5, ((1, 1.0), (2, 0.3))))
    assert v == pytest.approx(0.5 + math.cos(2.51) + 0.3 * math.cos(5.02), abs=1e-15)


def test_two_term_model_exact():
    truth = synth_phase_map("quadratic", [3 * np.pi], 16, 16)
    s = simulate_stack(truth, PAPER_STEPS, FringeProfile(0.4, ((1, 0.9),)))
    ref = 0.4 + 0.9 * np.cos(truth.values[None] + np.array(PAPER_STEPS)[:, None, None])
    assert np.max(np.abs(s.frames - ref)) <= 1e-15


def test_profile_validation():
    with pytest.raises(BadParams):
        FringeProfile(0, ((1, 1.0), (1, 0.5)))
    with pytest.raises(BadParams):
        FringeProfile(0, ((0, 1.0),))
    with pytest.raises(BadParams):
        FringeProfile(0, ((1, 1.0),), noise_sigma=-1)
    assert FringeProfile.with_default_background([(1, 1.0), (2, 0.3)]).background == pytest.approx(0.65)


def test_stack_frame_count():
    with pytest.raises(FrameCountMismatch):
        FringeStack(PhaseSteps([0, 1, 2]), np.zeros((4, 2, 2)))


@pytest.fixture(scope="module")
def stack128():
    truth = synth_phase_map("quadratic", [3 * np.pi], 128, 128)
    return simulate_stack(truth, PAPER_STEPS, FringeProfile(0.5, ((1, 1.0),)))


def test_awgn_zero_sigma_identity(stack128):
    out = add_awgn(stack128, 0.0, 5)
    assert out.frames.tobytes() == stack128.frames.tobytes()


def test_awgn_statistics(stack128):
    noisy = add_awgn(stack128, 0.1, 1234)
    noise = noisy.frames - stack128.frames
    bound = 4 * 0.1 / 128
    for frame in noise:
        assert abs(frame.mean()) < bound
        assert frame.std() == pytest.approx(0.1, rel=0.02)
    assert noisy.profile.noise_sigma == 0.1 and noisy.profile.seed == 1234


def test_awgn_determinism(stack128):
    a = add_awgn(stack128, 0.1, 9)
    b = add_awgn(stack128, 0.1, 9)
    c = add_awgn(stack128, 0.1, 10)
    assert a.frames.tobytes() == b.frames.tobytes()
    assert np.mean(a.frames != c.frames) > 0.99


def test_awgn_threads_bitwise(stack128):
    a = add_awgn(stack128, 0.1, 9, workers=1)
    b = add_awgn(stack128, 0.1, 9, workers=4)
    assert a.frames.tobytes() == b.frames.tobytes()


def test_noise_is_keyed_by_index_only():
    # a single pixel drawn alone equals the same pixel drawn inside a block
    block = rng.normal(42, rng.NOISE, np.arange(3)[:, None], np.arange(100)[None, :])
    assert rng.normal(42, rng.NOISE, 2, 57) == block[2, 57]
    with ThreadPoolExecutor(4) as pool:
        rows = list(pool.map(lambda i: rng.normal(42, rng.NOISE, i, np.arange(100)), range(3)))
    assert np.stack(rows).tobytes() == block.tobytes()


def test_normal_moments():
    z = rng.normal(1, rng.NOISE, 0, np.arange(200_000))
    assert abs(z.mean()) < 0.01
    assert z.std() == pytest.approx(1, abs=0.01)
    # fourth moment of a standard normal is 3
    assert np.mean(z ** 4) == pytest.approx(3, abs=0.1)
