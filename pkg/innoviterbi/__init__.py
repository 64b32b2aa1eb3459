"""innoviterbi - SST Viterbi decoding, innovations and trellis degeneration workbench."""

__version__ = "0.1.0"

from . import cli, core

__all__ = ["core", "cli"]
