"""Tests for the BPSK/AWGN channel, hard decisions and quantization."""

import math

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from innoviterbi.core.channel import (
    ChannelConfig,
    SoftFrame,
    channel_epsilon,
    hard_decision,
    q_function,
    quantize,
    receive,
    remap_soft,
    transmit,
)
from innoviterbi.core.convcode import HardFrame
from innoviterbi.core.exceptions import ShapeError, ValidationError


def test_from_ebn0_amplitude():
    """Test c = sqrt(2 R Eb/N0) for the tabulated operating points."""
    assert ChannelConfig.from_ebn0(0.0, 0.5).c == pytest.approx(1.0)
    assert ChannelConfig.from_ebn0(4.0, 0.5).c == pytest.approx(1.585, abs=5e-4)
    assert ChannelConfig.from_ebn0(10.0, 0.5).c == pytest.approx(3.162, abs=5e-4)


def test_epsilon():
    """Test the hard-decision crossover probability."""
    assert channel_epsilon(ChannelConfig.from_ebn0(0.0, 0.5)) == pytest.approx(0.1587, abs=5e-5)
    assert channel_epsilon(ChannelConfig.from_ebn0(4.0, 0.5)) == pytest.approx(0.0565, abs=5e-5)
    assert float(q_function(0.0)) == pytest.approx(0.5)


def test_invalid_snr():
    """Test that non-positive or infinite SNR is rejected."""
    with pytest.raises(PydanticValidationError):
        ChannelConfig(es_n0=0.0)
    with pytest.raises(PydanticValidationError):
        ChannelConfig(es_n0=math.inf)


def test_noiseless_transmission(unit_channel):
    """Test the bit-to-sign mapping."""
    soft = transmit(unit_channel, HardFrame.from_strings(["01", "10"]), noise=False)
    assert soft.blocks.tolist() == [[1.0, -1.0], [-1.0, 1.0]]
    assert hard_decision(soft).to_strings() == ["01", "10"]


def test_hard_decision_zero_is_bit_zero():
    """Test that z = 0 decides bit 0."""
    assert hard_decision(SoftFrame(np.array([[0.0, -0.0, -1e-9]]))).to_strings() == ["001"]


def test_seeded_noise_is_reproducible():
    """Test that the same seed gives the same noise."""
    cfg = ChannelConfig.from_ebn0(3.0, 0.5, seed=11)
    codeword = HardFrame(np.zeros((50, 2), dtype=np.uint8))
    first = transmit(cfg, codeword)
    second = transmit(cfg, codeword)
    assert np.array_equal(first.blocks, second.blocks)
    other = transmit(cfg, codeword, rng=cfg.rng((1,)))
    assert not np.array_equal(first.blocks, other.blocks)


def test_noise_statistics(rng):
    """Test unit-variance noise around the signal amplitude."""
    cfg = ChannelConfig.from_ebn0(2.0, 0.5)
    soft = transmit(cfg, HardFrame(np.zeros((20000, 2), dtype=np.uint8)), rng=rng)
    noise = soft.blocks - cfg.c
    assert abs(noise.mean()) < 0.03
    assert noise.std() == pytest.approx(1.0, abs=0.03)
    flips = np.count_nonzero(hard_decision(soft).blocks) / soft.blocks.size
    assert flips == pytest.approx(channel_epsilon(cfg), abs=0.01)


def test_remap_soft_keeps_magnitudes():
    """Test sign remapping to a target hard sequence."""
    soft = SoftFrame(np.array([[0.5, -2.0], [-1.5, 3.0]]))
    remapped = remap_soft(soft, HardFrame.from_strings(["11", "00"]))
    assert remapped.blocks.tolist() == [[-0.5, -2.0], [1.5, 3.0]]
    with pytest.raises(ShapeError):
        remap_soft(soft, HardFrame.from_strings(["11"]))


def test_quantizer_levels():
    """Test the 8-level midrise quantizer with saturation."""
    cfg = ChannelConfig(es_n0=0.5, quantizer={"levels": 8, "step": 1.0})
    soft = SoftFrame(np.array([[0.2, 1.2, 2.7, 9.0], [-0.2, -1.2, -2.7, -9.0]]))
    out = quantize(soft, cfg)
    assert out.blocks.tolist() == [[0.5, 1.5, 2.5, 3.5], [-0.5, -1.5, -2.5, -3.5]]


def test_quantizer_saturates_at_outer_midpoint():
    """Test that a large input lands on 3.5 steps, the outer cell midpoint."""
    cfg = ChannelConfig(es_n0=0.5, quantizer={"levels": 8, "step": 0.5})
    out = quantize(SoftFrame(np.array([[10.0, 0.1], [-10.0, -0.1]])), cfg)
    assert out.blocks.tolist() == [[1.75, 0.25], [-1.75, -0.25]]


def test_quantizer_default_step():
    """Test the default step of half the amplitude."""
    cfg = ChannelConfig.from_ebn0(0.0, 0.5, quantize_levels=8)
    out = quantize(SoftFrame(np.array([[0.1, 0.6]])), cfg)
    assert out.blocks.tolist() == [[0.25, 0.75]]


def test_quantizer_disabled(unit_channel):
    """Test quantize without a quantizer configuration."""
    with pytest.raises(ValidationError):
        quantize(SoftFrame(np.array([[1.0]])), unit_channel)


def test_receive_quantizes_when_configured():
    """Test that receive applies the configured quantizer."""
    cfg = ChannelConfig.from_ebn0(2.0, 0.5, seed=3, quantize_levels=8)
    soft = receive(cfg, HardFrame(np.zeros((100, 2), dtype=np.uint8)))
    step = cfg.c / 2
    assert set(np.round(np.abs(soft.blocks) / step - 0.5, 9).ravel()) <= {0.0, 1.0, 2.0, 3.0}


def test_soft_frame_validation():
    """Test rejected soft frames and CSV rows."""
    with pytest.raises(ValidationError):
        SoftFrame(np.array([[np.nan, 1.0]]))
    with pytest.raises(ShapeError):
        SoftFrame(np.zeros((2, 2, 2)))
    assert SoftFrame(np.array([[1.0, -2.0]])).to_rows() == [(0, 0, 1.0), (0, 1, -2.0)]
