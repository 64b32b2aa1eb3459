"""Tests for the reference table builders."""

import pytest

from innoviterbi.core.config import ExperimentConfig
from innoviterbi.core.exceptions import ConfigurationError, UnsupportedCodeError
from innoviterbi.core.models import FrameRecord, SweepRow
from innoviterbi.core.tables import build_table, fmt, records_table, sweep_table, table_1


def test_worked_example_rows():
    """Test the noiseless C1 worked example."""
    doc = table_1()
    assert doc.columns == ["k", "i_k", "y_k", "e_k", "z_k^h", "ζ_k", "î(k-1|k)", "î(k-1|k-1)", "i_{k-1}"]
    assert len(doc.rows) == 8
    assert doc.rows[0] == ["1", "1", "11", "00", "11", "0", "0", "0", "0"]
    assert doc.rows[1] == ["2", "0", "10", "10", "00", "1", "0*", "1", "1"]
    assert doc.rows[3] == ["4", "1", "11", "01", "10", "0", "1*", "1*", "0"]
    assert doc.column("ζ_k") == ["0", "1", "0", "0", "1", "0", "0", "1"]
    assert doc.column("z_k^h") == ["11", "00", "11", "10", "10", "10", "10", "11"]


def test_filtered_entropy_table():
    """Test the first row of the filtered-estimate entropy table."""
    doc = build_table(2, ExperimentConfig(), snrs=[0.0, 4.0])
    assert doc.columns == ["Eb/N0 [dB]", "c", "ε", "α1", "α2", "Hr(1)", "Hr(2)", "Sum"]
    assert doc.rows[0] == ["0", "1.000", "0.1587", "0.4259", "0.4494", "0.0055", "0.0026", "0.0081"]
    assert doc.rows[1][:3] == ["4", "1.585", "0.0565"]


def test_state_table_defaults():
    """Test the default Eb/N0 grid and column labels of the state tables."""
    doc = build_table(5, ExperimentConfig())
    assert doc.columns == ["Eb/N0 [dB]", "P00", "P01", "P10", "P11", "H"]
    assert doc.column("Eb/N0 [dB]") == [str(x) for x in range(11)]
    assert float(doc.rows[0][1]) == pytest.approx(0.5372, abs=5e-4)
    error = build_table(6, ExperimentConfig(), snrs=[4.0])
    assert error.columns[1] == "P̃00"
    assert [float(x) for x in error.rows[0][1:4]] == pytest.approx([0.7956, 0.0533, 0.0978], abs=5e-4)


def test_smoothed_table_needs_qli():
    """Test that the smoothed-estimate table refuses non-QLI codes."""
    with pytest.raises(UnsupportedCodeError):
        build_table(3, ExperimentConfig(code="C3"), snrs=[4.0])


def test_unknown_table():
    """Test table number validation."""
    with pytest.raises(ConfigurationError):
        build_table(10, ExperimentConfig())


def test_zero_string_tables_are_reproducible():
    """Test that simulated tables depend on the seed only."""
    exp = ExperimentConfig(sim_blocks=3000, seed=5, threads=2)
    first = build_table(7, exp, snrs=[8.0, 10.0], l0s=[10, 20])
    second = build_table(7, exp.model_copy(update={"threads": 1}), snrs=[8.0, 10.0], l0s=[10, 20])
    assert first.rows == second.rows
    assert first.columns == ["Eb/N0 [dB]", "ℓ0=10", "ℓ0=20"]
    for row in first.rows:
        counts = [int(cell) for cell in row[1:]]
        assert counts == sorted(counts, reverse=True)
    lengths = build_table(8, exp, snrs=[8.0], l0s=[10, 20])
    assert float(lengths.rows[0][1]) <= float(lengths.rows[0][2])


def test_complexity_table_rows():
    """Test the normalized complexity table on a short simulation."""
    ticks = []
    doc = build_table(9, ExperimentConfig(sim_blocks=1500), snrs=[9.0], l0s=[20], on_row=lambda: ticks.append(1))
    assert doc.columns == ["Eb/N0 [dB]", "ℓ0=20"]
    assert 0 < float(doc.rows[0][1]) < 1
    assert ticks == [1]


def test_fmt():
    """Test cell formatting."""
    assert fmt(0.5) == "0.5000"
    assert fmt(0.0) == "0.0000"
    assert fmt(0.000003) == "0.000003"


def test_sweep_and_records_tables():
    """Test the sweep aggregate and per-frame layouts."""
    row = SweepRow(
        ebn0_db=4.0,
        decoder="viterbi",
        frames=2,
        info_bits=100,
        bit_errors=1,
        ber=0.01,
        ci_low=0.0,
        ci_high=0.03,
        mean_metric=50.5,
        mean_complexity=52.0,
    )
    doc = sweep_table([row])
    assert doc.rows[0][:6] == ["4", "viterbi", "2", "100", "1", "0.01"]
    assert doc.rows[0][-1] == ""
    record = FrameRecord(
        frame=0, decoder="degenerate", ebn0_db=4.0, metric=50.5, bit_errors=0, info_bits=50, complexity=40, q_c=40
    )
    records = records_table([record])
    assert records.columns[0] == "ebn0_db"
    assert records.rows[0] == ["4", "0", "degenerate", "50.5", "0", "50", "40", "40"]
