"""Report and configuration models using pydantic."""

import csv
import io
import json
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator


class ZeroString(BaseModel):
    """Maximal interval [t, t_end] with zero syndrome at times t+1 .. t_end."""

    model_config = ConfigDict(frozen=True)

    t: int = Field(ge=0)
    t_end: int

    @computed_field
    @property
    def length(self) -> int:
        return self.t_end - self.t


class DegenerationOutcome(BaseModel):
    """Probe result for one zero-string."""

    t: int
    t_end: int
    tau: int | None = None
    tau_prime: int | None = None
    success: bool = False
    probe_units: int = 0


class DegenerationReport(BaseModel):
    """Complexity accounting for one degenerate decoding run."""

    sections: int
    outcomes: list[DegenerationOutcome] = Field(default_factory=list)
    delta: int = 0
    delta_prime: int = 0

    @computed_field
    @property
    def q_c(self) -> int:
        return self.sections + self.delta_prime - self.delta

    @property
    def normalized(self) -> float:
        return self.q_c / self.sections if self.sections else 0.0

    @property
    def all_succeeded(self) -> bool:
        return all(o.success for o in self.outcomes)


class GvaConfig(BaseModel):
    """Reduced-state decoding setup.

    Decoder states are the latest nu_tilde inputs; survivor_budget maps a decoder state to
    the number of survivors kept for it (default 1).
    """

    nu_tilde: int = Field(ge=1)
    survivor_budget: dict[int, int] = Field(default_factory=dict)
    pss_keep: frozenset[int] | None = None

    @field_validator("survivor_budget")
    @classmethod
    def _positive(cls, value: dict[int, int]) -> dict[int, int]:
        for state, count in value.items():
            if count < 1:
                raise ValueError(f"survivor budget for state {state} must be at least 1")
        return value

    def budget(self, decoder_state: int) -> int:
        return self.survivor_budget.get(decoder_state, 1)

    @classmethod
    def low_weight(cls, nu_tilde: int, survivors: int = 2, max_weight: int = 1) -> "GvaConfig":
        """Extra survivors on decoder states holding at most max_weight ones."""
        budget = {s: survivors for s in range(1 << nu_tilde) if s.bit_count() <= max_weight}
        return cls(nu_tilde=nu_tilde, survivor_budget=budget)


class DistributionReport(BaseModel):
    """Input-distribution parameters and approximate entropy gaps (nats) at one SNR."""

    snr_db: float | None = None
    c: float
    epsilon: float
    kind: Literal["alpha", "beta"]
    params: list[float]
    entropy_gaps: list[float]
    total: float
    units: str = "nats"
    label: str = "approximate gap"


class StateDistReport(BaseModel):
    """Main-decoder or error-trellis state distribution at one SNR."""

    snr_db: float | None = None
    epsilon: float
    view: Literal["general", "qli", "error-trellis"]
    probs: dict[str, float]
    entropy: float
    units: str = "bits"


class ZeroStringRow(BaseModel):
    ebn0_db: float
    l0: int
    count: int
    mean_length: float


class FrameRecord(BaseModel):
    """Per-frame decoding outcome."""

    frame: int
    decoder: str
    ebn0_db: float
    metric: float
    bit_errors: int
    info_bits: int
    complexity: float
    q_c: int | None = None


class SweepRow(BaseModel):
    """Aggregate over the frames of one (SNR, decoder) cell."""

    ebn0_db: float
    decoder: str
    frames: int
    info_bits: int
    bit_errors: int
    ber: float
    ci_low: float
    ci_high: float
    mean_metric: float
    mean_complexity: float
    metric_equal_rate: float | None = None


class TableDocument(BaseModel):
    """A rendered table: header row plus formatted cells."""

    table: int | str
    title: str
    columns: list[str]
    rows: list[list[str]] = Field(default_factory=list)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buffer.getvalue()

    def to_json(self) -> str:
        records = [dict(zip(self.columns, row, strict=True)) for row in self.rows]
        return json.dumps({"table": self.table, "title": self.title, "rows": records}, indent=2)

    def column(self, name: str) -> list[str]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]
