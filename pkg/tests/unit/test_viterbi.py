"""Tests for Viterbi decoding and the SST pipeline."""

import itertools

import numpy as np
import pytest

from innoviterbi.core.channel import ChannelConfig, SoftFrame, hard_decision, transmit
from innoviterbi.core.convcode import ConvCode, HardFrame, encode, load_code
from innoviterbi.core.exceptions import FrameError, ShapeError
from innoviterbi.core.gf2poly import PolyMatrix
from innoviterbi.core.viterbi import ViterbiEngine, correlation, sst_decode, sst_main_input, trellis_for, viterbi


def _noisy_frame(code, ebn0_db, info_blocks, seed):
    rng = np.random.default_rng(seed)
    info = rng.integers(0, 2, size=(info_blocks, code.k0), dtype=np.uint8)
    cfg = ChannelConfig.from_ebn0(ebn0_db, code.rate)
    return info, transmit(cfg, encode(code, info), rng=rng)


def test_noiseless_decoding(c1, unit_channel, rng):
    """Test that a clean codeword is decoded exactly with full metric."""
    info = rng.integers(0, 2, size=(30, 1), dtype=np.uint8)
    soft = transmit(unit_channel, encode(c1, info), noise=False)
    result = viterbi(c1, soft)
    assert np.array_equal(result.info_hat, info)
    assert result.metric == pytest.approx(2 * 32)
    assert result.sections == 32
    assert result.complexity_units == 32
    assert result.path_states[0] == 0
    assert result.path_states[-1] == 0


def test_viterbi_is_maximum_likelihood(c1):
    """Test 256 noisy frames against brute force over all 256 terminated C1 codewords of 10 blocks."""
    codebook = [
        (info, encode(c1, info))
        for info in (np.array(bits, dtype=np.uint8).reshape(-1, 1) for bits in itertools.product([0, 1], repeat=8))
    ]
    for seed in range(256):
        _, soft = _noisy_frame(c1, 1.0, 8, seed)
        best_metric, best_info = max(
            ((correlation(codeword, soft), info) for info, codeword in codebook), key=lambda pair: pair[0]
        )
        result = viterbi(c1, soft)
        assert result.metric == pytest.approx(best_metric)
        assert np.array_equal(result.info_hat, best_info)


@pytest.mark.parametrize(
    "name,mode", [("C1", "general"), ("C1", "qli"), ("C2", "general"), ("C2", "qli"), ("C4", "general")]
)
def test_sst_matches_viterbi(name, mode):
    """Test that SST decoding reaches the Viterbi decision and metric."""
    code = load_code(name)
    for seed in range(4):
        _, soft = _noisy_frame(code, 2.0, 40, seed)
        reference = viterbi(code, soft)
        result = sst_decode(code, soft, mode)
        assert result.metric == pytest.approx(reference.metric)
        assert np.array_equal(result.info_hat, reference.info_hat)
        assert result.main_info is not None
        assert result.main_hard is not None


def test_sst_main_input_is_remapped(c1):
    """Test that the main decoder sees |z| signed by z^h + vG."""
    _, soft = _noisy_frame(c1, 3.0, 20, 7)
    v, main_hard, r = sst_main_input(c1, soft, "general")
    assert np.array_equal(np.abs(r.blocks), np.abs(soft.blocks))
    assert hard_decision(r) == main_hard
    assert main_hard == hard_decision(soft) ^ HardFrame(c1.G.filter(v))
    assert not v[-c1.nu :].any()


def test_sst_main_decoder_sees_mostly_zeros(c1):
    """Test that the main decoder input is sparse at high SNR."""
    _, soft = _noisy_frame(c1, 8.0, 300, 3)
    result = sst_decode(c1, soft, "qli")
    assert result.main_hard is not None
    assert np.count_nonzero(result.main_hard.blocks) < 0.1 * result.main_hard.blocks.size
    histogram = result.state_histogram(4)
    assert histogram[0] == max(histogram)
    assert result.survivor_stats[0] == histogram[0]


def test_windowed_traceback_longer_than_frame(c1):
    """Test that a window longer than the frame changes nothing."""
    _, soft = _noisy_frame(c1, 1.0, 30, 5)
    full = viterbi(c1, soft)
    windowed = viterbi(c1, soft, traceback_depth=soft.length + 5)
    assert np.array_equal(windowed.info_hat, full.info_hat)
    assert np.array_equal(windowed.path_states, full.path_states)


def test_windowed_traceback_noiseless(c2, rng):
    """Test a short window on a clean frame."""
    info = rng.integers(0, 2, size=(50, 1), dtype=np.uint8)
    soft = transmit(ChannelConfig(es_n0=0.5), encode(c2, info), noise=False)
    assert np.array_equal(viterbi(c2, soft, traceback_depth=2 * c2.nu + 1).info_hat, info)


def test_unterminated_frame(c1, unit_channel, rng):
    """Test decoding without the zero tail."""
    info = rng.integers(0, 2, size=(20, 1), dtype=np.uint8)
    soft = transmit(unit_channel, encode(c1, info, terminate=False), noise=False)
    result = viterbi(c1, soft, terminated=False)
    assert np.array_equal(result.info_hat, info)
    assert np.array_equal(sst_decode(c1, soft, "general", terminated=False).info_hat, info)


def test_rate_two_thirds_code(unit_channel, rng):
    """Test a two-input code through Viterbi and the general SST pipeline."""
    code = ConvCode.from_generators(PolyMatrix.from_strings([["11", "01", "11"], ["01", "1", "1"]]))
    assert (code.k0, code.n0, code.nu) == (2, 3, 1)
    info = rng.integers(0, 2, size=(25, 2), dtype=np.uint8)
    soft = transmit(unit_channel, encode(code, info), noise=False)
    assert np.array_equal(viterbi(code, soft).info_hat, info)
    assert np.array_equal(sst_decode(code, soft, "general").info_hat, info)


def test_pins_hold_state_zero(c1, unit_channel):
    """Test that pinned sections keep the path in state 0."""
    info = np.array([[1], [1], [1], [1], [0], [0]], dtype=np.uint8)
    soft = transmit(unit_channel, encode(c1, info), noise=False)
    inputs, states = ViterbiEngine(trellis_for(c1)).run(soft.blocks, pins=[(2, 4)])
    assert states[2:5].tolist() == [0, 0, 0]
    assert inputs[2:4].tolist() == [0, 0]


def test_frame_checks(c1):
    """Test frame shape and length validation."""
    with pytest.raises(FrameError):
        viterbi(c1, SoftFrame(np.ones((1, 2))))
    with pytest.raises(ShapeError):
        viterbi(c1, SoftFrame(np.ones((5, 3))))
    with pytest.raises(ShapeError):
        correlation(HardFrame.from_strings(["00"]), SoftFrame(np.ones((2, 2))))


def test_unknown_sst_mode(c1):
    """Test that an unknown pre-decoder mode is rejected."""
    with pytest.raises(ValueError):
        sst_decode(c1, SoftFrame(np.ones((5, 2))), "smooth")
