"""innoviterbi core - codes, channel, decoders and analysis."""

from .blockcode import BlockCode, load_block_code, two_stage_decode
from .channel import ChannelConfig, SoftFrame, receive, transmit
from .config import Config, ExperimentConfig
from .convcode import ConvCode, HardFrame, encode, load_code, syndrome
from .degeneration import degenerate_decode, find_zero_strings
from .exceptions import (
    ConfigurationError,
    ConsistencyError,
    FrameError,
    InnoviterbiError,
    NoPolynomialInverseError,
    NumericGuardError,
    ShapeError,
    UnsupportedCodeError,
    ValidationError,
)
from .gf2poly import Gf2Poly, PolyMatrix
from .models import DegenerationReport, GvaConfig, TableDocument
from .reduced import gva_decode, pss_decode
from .viterbi import DecodeResult, sst_decode, viterbi

__all__ = [
    "BlockCode",
    "ChannelConfig",
    "Config",
    "ConvCode",
    "DecodeResult",
    "DegenerationReport",
    "ExperimentConfig",
    "Gf2Poly",
    "GvaConfig",
    "HardFrame",
    "PolyMatrix",
    "SoftFrame",
    "TableDocument",
    "degenerate_decode",
    "encode",
    "find_zero_strings",
    "gva_decode",
    "load_block_code",
    "load_code",
    "pss_decode",
    "receive",
    "sst_decode",
    "syndrome",
    "transmit",
    "two_stage_decode",
    "viterbi",
    "InnoviterbiError",
    "ValidationError",
    "ShapeError",
    "FrameError",
    "NoPolynomialInverseError",
    "UnsupportedCodeError",
    "ConsistencyError",
    "ConfigurationError",
    "NumericGuardError",
]
