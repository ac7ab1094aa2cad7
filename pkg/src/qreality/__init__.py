"""Density-matrix toolkit for realism measures, a six-qubit optical
reality-eraser protocol, and simulated quantum state tomography."""

from .core import (
    ConfigurationError,
    DensityMatrix,
    InvalidStateError,
    LabelError,
    ObservableSpec,
    PureState,
    QubitRegister,
    ZeroProbabilityError,
    apply_unitary,
    dephasing_map,
    fidelity,
    partial_trace,
    post_select,
    purity,
    tensor,
)
from .eraser import (
    ProtocolConfig,
    ProtocolStage,
    SweepRecord,
    alice_and_bob_project,
    apply_beam_displacers,
    build_psi0,
    default_theta_grid,
    eraser_register,
    evolve_to_psi1,
    irreality_curve,
    omega_state,
    protocol_stage,
)
from .measures import (
    ComplementarityResult,
    IrrealityReport,
    binary_entropy,
    complementarity_check,
    conditional_information,
    entanglement_entropy,
    irreality,
    mutual_information,
    von_neumann_entropy,
)
from .mzi import (
    ExtendedOutputReport,
    MziConfig,
    detector_probabilities,
    extended_output_analysis,
    mzi_state,
    visibility,
)
from .tomography import (
    DatasetFormatError,
    IncompleteDataError,
    MeasurementSetting,
    ReconstructionResult,
    TomographyDataset,
    all_settings,
    born_probabilities,
    load_dataset,
    monte_carlo_irreality,
    project_to_physical,
    reconstruct_from_frequencies,
    reconstruct_linear,
    save_dataset,
    simulate_counts,
    tomography_end_to_end,
)

__version__ = "0.1.0"

__all__ = [
    "ComplementarityResult",
    "ConfigurationError",
    "DatasetFormatError",
    "DensityMatrix",
    "ExtendedOutputReport",
    "IncompleteDataError",
    "InvalidStateError",
    "IrrealityReport",
    "LabelError",
    "MeasurementSetting",
    "MziConfig",
    "ObservableSpec",
    "ProtocolConfig",
    "ProtocolStage",
    "PureState",
    "QubitRegister",
    "ReconstructionResult",
    "SweepRecord",
    "TomographyDataset",
    "ZeroProbabilityError",
    "alice_and_bob_project",
    "all_settings",
    "apply_beam_displacers",
    "apply_unitary",
    "binary_entropy",
    "born_probabilities",
    "build_psi0",
    "complementarity_check",
    "conditional_information",
    "default_theta_grid",
    "dephasing_map",
    "detector_probabilities",
    "entanglement_entropy",
    "eraser_register",
    "evolve_to_psi1",
    "extended_output_analysis",
    "fidelity",
    "irreality",
    "irreality_curve",
    "load_dataset",
    "monte_carlo_irreality",
    "mutual_information",
    "mzi_state",
    "omega_state",
    "partial_trace",
    "post_select",
    "project_to_physical",
    "protocol_stage",
    "purity",
    "reconstruct_from_frequencies",
    "reconstruct_linear",
    "save_dataset",
    "simulate_counts",
    "tensor",
    "tomography_end_to_end",
    "visibility",
    "von_neumann_entropy",
]
