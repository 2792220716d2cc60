"""Symmetry-based matching decoders for bivariate bicycle codes."""

__version__ = "0.1.0"

from .code import BBCode, build_code, syndrome
from .decoders import VARIANTS, Decoder, PipelineConfig, decode, decode_many
from .registry import get_code, names
from .symmetry import Symmetry, discover_symmetries_gauss, discover_symmetries_kernel

__all__ = [
    "__version__", "BBCode", "build_code", "syndrome", "VARIANTS", "Decoder", "PipelineConfig",
    "decode", "decode_many", "get_code", "names", "Symmetry", "discover_symmetries_gauss",
    "discover_symmetries_kernel",
]
