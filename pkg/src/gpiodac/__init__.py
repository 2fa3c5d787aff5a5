"""GPIO-based FPGA DAC design toolkit.

Simulates the shorted-GPIO DAC from a first-order transistor model, sizes the
external linearization resistors, quantifies DNL/INL/current trade-offs,
replays code sequences through a pin-skew glitch model, and emits
synthesizable Verilog plus iCE40 pin constraints for a physical build.
"""

from .devices import (
    DeviceError,
    DevicePair,
    LinearSwitch,
    MosfetParams,
    OperatingRegion,
    Polarity,
    calibrated_pair,
    classify_region,
    drain_current,
    midrange_resistance,
    on_resistance,
)
from .analytic import (
    SwitchModel,
    error_factor_output,
    ideal_output,
    stretched_output,
    switch_model_output,
    two_resistor_output,
)
from .network import (
    DacConfig,
    Encoding,
    FourResistor,
    NodeSolution,
    ParallelAttach,
    SolverError,
    Standalone,
    Topology,
    TransferCurve,
    TwoResistor,
    complement_check,
    solve_code,
    solve_units,
    transfer_curve,
)
from .metrics import LinearityReport, MetricsError, dnl, inl, summary
from .sizing import (
    ExtractedParams,
    ExtractionError,
    SizingError,
    SizingResult,
    check_saturation_window,
    extract_parameters,
    size_four_resistor,
    size_two_resistor,
)
from .transient import TimingParams, Waveform, detect_glitches, staircase_codes, synthesize
from .hdlgen import (
    GenerationError,
    HdlArtifact,
    HdlSpec,
    generate_constraints,
    generate_dac,
    generate_staircase,
    step_cycles_for,
)
from .explorer import SweepPoint, sweep_parallel

__version__ = "0.1.0"

__all__ = [
    "DacConfig",
    "DeviceError",
    "DevicePair",
    "Encoding",
    "ExtractedParams",
    "ExtractionError",
    "FourResistor",
    "GenerationError",
    "HdlArtifact",
    "HdlSpec",
    "LinearSwitch",
    "LinearityReport",
    "MetricsError",
    "MosfetParams",
    "NodeSolution",
    "OperatingRegion",
    "ParallelAttach",
    "Polarity",
    "SizingError",
    "SizingResult",
    "SolverError",
    "Standalone",
    "SweepPoint",
    "SwitchModel",
    "TimingParams",
    "Topology",
    "TransferCurve",
    "TwoResistor",
    "Waveform",
    "calibrated_pair",
    "check_saturation_window",
    "classify_region",
    "complement_check",
    "detect_glitches",
    "dnl",
    "drain_current",
    "error_factor_output",
    "extract_parameters",
    "generate_constraints",
    "generate_dac",
    "generate_staircase",
    "ideal_output",
    "inl",
    "midrange_resistance",
    "on_resistance",
    "size_four_resistor",
    "size_two_resistor",
    "solve_code",
    "solve_units",
    "staircase_codes",
    "step_cycles_for",
    "stretched_output",
    "summary",
    "sweep_parallel",
    "switch_model_output",
    "synthesize",
    "transfer_curve",
    "two_resistor_output",
]
