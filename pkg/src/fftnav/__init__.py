"""FFT-based scan filtering and decision fusion for swarm navigation.

The package turns raw range scans into provably safe motion directions
with two FFT-domain filters, compresses scans to their extrema for
cheap broadcast, fuses neighbor observations into a turn-direction
probability, and ships a deterministic swarm simulator plus evaluation
tools around that core.
"""

from . import kernels
from .filters import (
    FilterBank,
    FilterSpec,
    build_h1,
    build_h2,
    choose_fft_size,
    fft_forward,
    fft_inverse,
    filter_1d,
    filter_2d,
    filter_circular,
    load_bank,
    make_filter_bank,
    save_bank,
)
from .fusion import (
    FusionState,
    NeighborReading,
    decide_side,
    fuse,
    neighbor_threshold,
    p_neighbor,
    p_self,
    quadrant_areas,
    sigmoid,
)
from .geometry import (
    CutoffResult,
    ProtectiveModel,
    Quadrants,
    SensorConfig,
    angle_to_index,
    classify_quadrant,
    cutoff_frequency,
    derive_protective_model,
    index_to_angle,
    wrap_angle,
)
from .perception import (
    CompressedObservation,
    ReconstructedScan,
    SafeDirections,
    Scan,
    compress,
    decode_wire,
    encode_wire,
    extract_safe_directions,
    extract_safe_mask_3d,
    reconstruct,
    safe_index_mask,
    wire_length,
)

__version__ = "1.0.0"

__all__ = [
    "CompressedObservation",
    "CutoffResult",
    "FilterBank",
    "FilterSpec",
    "FusionState",
    "NeighborReading",
    "ProtectiveModel",
    "Quadrants",
    "ReconstructedScan",
    "SafeDirections",
    "Scan",
    "SensorConfig",
    "angle_to_index",
    "build_h1",
    "build_h2",
    "choose_fft_size",
    "classify_quadrant",
    "compress",
    "cutoff_frequency",
    "decide_side",
    "decode_wire",
    "derive_protective_model",
    "encode_wire",
    "extract_safe_directions",
    "extract_safe_mask_3d",
    "fft_forward",
    "fft_inverse",
    "filter_1d",
    "filter_2d",
    "filter_circular",
    "fuse",
    "index_to_angle",
    "kernels",
    "load_bank",
    "make_filter_bank",
    "neighbor_threshold",
    "p_neighbor",
    "p_self",
    "quadrant_areas",
    "reconstruct",
    "safe_index_mask",
    "save_bank",
    "sigmoid",
    "wire_length",
    "wrap_angle",
    "__version__",
]
