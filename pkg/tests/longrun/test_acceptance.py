"""Monte Carlo acceptance runs against the published C1 simulation figures."""

import numpy as np
import pytest

from innoviterbi.core.channel import ChannelConfig, transmit
from innoviterbi.core.config import ExperimentConfig
from innoviterbi.core.convcode import encode, load_code
from innoviterbi.core.degeneration import degenerate_decode
from innoviterbi.core.models import GvaConfig
from innoviterbi.core.simulation import SweepSettings, run_sweep
from innoviterbi.core.tables import build_table
from innoviterbi.core.viterbi import viterbi

pytestmark = pytest.mark.longrun

L0 = [10, 15, 20, 25, 30]
# Zero-strings of length >= l0 in 10^5 blocks of C1.
ZERO_STRING_COUNTS = {
    8.0: [1006, 953, 907, 851, 792],
    9.0: [427, 425, 415, 407, 395],
    10.0: [148, 148, 145, 145, 144],
}
MEAN_LENGTHS_8DB = [95.4, 100.1, 104.3, 109.7, 115.8]
# Q_c / M for l0 = 20, 25, 30 with probes started one section outside each string.
COMPLEXITY = {
    6.0: [1.11, 1.02, 0.97],
    8.0: [0.45, 0.44, 0.43],
    9.0: [0.18, 0.18, 0.18],
    10.0: [0.06, 0.06, 0.04],
}


@pytest.fixture(scope="module")
def experiment() -> ExperimentConfig:
    return ExperimentConfig(sim_blocks=100_000, seed=2024, threads=4, quantize_levels=0, start_offset=1)


def test_zero_string_counts(experiment):
    """Test zero-string counts within sampling noise of the published counts."""
    doc = build_table(7, experiment, snrs=list(ZERO_STRING_COUNTS), l0s=L0)
    for row in doc.rows:
        counts = [int(cell) for cell in row[1:]]
        expected = ZERO_STRING_COUNTS[float(row[0])]
        for got, ref in zip(counts, expected, strict=True):
            assert abs(got - ref) <= 0.25 * ref, (row[0], counts, expected)
        assert counts == sorted(counts, reverse=True)


def test_zero_string_lengths(experiment):
    """Test that zero-strings get longer as the SNR rises."""
    doc = build_table(8, experiment, snrs=[6.0, 8.0, 10.0], l0s=L0)
    means = {float(row[0]): [float(cell) for cell in row[1:]] for row in doc.rows}
    assert means[8.0] == pytest.approx(MEAN_LENGTHS_8DB, rel=0.1)
    for l0_index in range(len(L0)):
        assert means[6.0][l0_index] < means[8.0][l0_index] < means[10.0][l0_index]


def test_normalized_complexity(experiment):
    """Test Q_c / M against the published table, its crossing below 1 and its 10 dB floor."""
    snrs = [5.0, 6.0, 7.0, 8.0, 9.0, 10.0]
    doc = build_table(9, experiment, snrs=snrs, l0s=[20, 25, 30])
    ratios = {float(row[0]): [float(cell) for cell in row[1:]] for row in doc.rows}
    for snr, expected in COMPLEXITY.items():
        assert ratios[snr] == pytest.approx(expected, abs=0.2), snr
    for column in range(3):
        series = [ratios[snr][column] for snr in snrs]
        assert series == sorted(series, reverse=True)
        assert ratios[5.0][column] >= 1.0
        assert ratios[7.0][column] < 1.0
        assert ratios[10.0][column] <= 0.10


def test_degenerate_output_matches_viterbi(c1):
    """Test that frames whose degenerations all succeed decode to the Viterbi codeword."""
    cfg = ChannelConfig.from_ebn0(8.0, c1.rate)
    checked = 0
    for seed in range(200):
        rng = np.random.default_rng(seed)
        info = rng.integers(0, 2, size=(200, 1), dtype=np.uint8)
        soft = transmit(cfg, encode(c1, info), rng=rng)
        result, report = degenerate_decode(c1, soft, l0=20, start_offset=1)
        if report.outcomes and report.all_succeeded:
            checked += 1
            assert result.codeword_hat == viterbi(c1, soft).codeword_hat
    assert checked > 0


@pytest.mark.parametrize("name", ["C1", "C2"])
def test_sst_is_maximum_likelihood(name):
    """Test that both SST pipelines reach the Viterbi metric on every frame."""
    code = load_code(name)
    rows, _ = run_sweep(code, ["viterbi", "sst-general", "sst-qli"], [1.0, 3.0, 5.0], 200, 100, 17, threads=4)
    for row in rows:
        assert row.metric_equal_rate in (None, 1.0)
    by_key = {(r.ebn0_db, r.decoder): r.bit_errors for r in rows}
    for snr in (1.0, 3.0, 5.0):
        assert by_key[(snr, "sst-qli")] == by_key[(snr, "viterbi")]


def test_reduced_state_decoding_degrades_gracefully(c2):
    """Test that 38 survivors out of 64 cost little BER at moderate SNR."""
    settings = SweepSettings(gva=GvaConfig.low_weight(c2.nu - 1), pss_states=42)
    rows, records = run_sweep(c2, ["viterbi", "gva", "pss"], [5.0], 300, 200, 5, settings=settings, threads=4)
    errors = {r.decoder: r.bit_errors for r in rows}
    assert errors["gva"] <= 1.5 * errors["viterbi"] + 10
    assert errors["pss"] <= 1.5 * errors["viterbi"] + 10
    complexity = {r.decoder: r.mean_complexity for r in rows}
    assert complexity["gva"] < complexity["viterbi"]
    assert complexity["pss"] == pytest.approx(200 * 42 / 64)
    assert np.mean([r.metric for r in records if r.decoder == "gva"]) <= np.mean(
        [r.metric for r in records if r.decoder == "viterbi"]
    )
