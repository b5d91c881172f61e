"""Wavelet transforms as circuits of local unitary and invertible gates."""

from .circuits import (
    CircuitSpec,
    CoefficientSequence,
    FilterBank,
    apply_circuit_periodic,
    build_layer_schedule,
    dual_circuit,
    extract_filter_bank,
)

__all__ = [
    "CircuitSpec",
    "CoefficientSequence",
    "FilterBank",
    "apply_circuit_periodic",
    "build_layer_schedule",
    "dual_circuit",
    "extract_filter_bank",
]

__version__ = "0.1.0"
