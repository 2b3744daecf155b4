"""Simulation of a fully controllable, input-independent depolarizing channel
for a photonic polarization qubit, built from a displaced Sagnac splitter,
a multimode-fiber depolarizer and an incoherent beam-splitter combiner."""

from .channels import (
    ChannelParams,
    ChiMatrix,
    QuantumChannel,
    apply_channel,
    chi_depolarizing,
    chi_from_kraus,
    depolarize,
    depolarizing_channel,
    kraus_from_chi,
    process_fidelity,
    validate_channel,
)
from .montecarlo import (
    ExperimentConfig,
    bootstrap_errorbars,
    run_depolarization_sweep,
    run_process_tomography_experiment,
    run_splitting_scan,
    simulate_counts,
)
from .optics import (
    DepolarizerConfig,
    Imperfections,
    SagnacConfig,
    fiber_depolarize,
    full_apparatus,
    hwp,
    incoherent_combine,
    qwp,
    sagnac_split,
    sagnac_split_jones,
    splitting_parameter,
)
from .qstate import (
    BlochVector,
    DensityMatrix,
    JonesVector,
    StateLabel,
    bloch_from_density,
    density_from_bloch,
    density_from_pure,
    pure_from_label,
    purity,
    state_fidelity,
)
from .tomography import CountRecord, MeasurementBasis, measurement_probabilities, psd_project, qpt, qst_linear

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "ChannelParams",
    "ChiMatrix",
    "CountRecord",
    "DensityMatrix",
    "DepolarizerConfig",
    "ExperimentConfig",
    "Imperfections",
    "JonesVector",
    "MeasurementBasis",
    "QuantumChannel",
    "SagnacConfig",
    "StateLabel",
    "apply_channel",
    "bloch_from_density",
    "bootstrap_errorbars",
    "chi_depolarizing",
    "chi_from_kraus",
    "density_from_bloch",
    "density_from_pure",
    "depolarize",
    "depolarizing_channel",
    "fiber_depolarize",
    "full_apparatus",
    "hwp",
    "incoherent_combine",
    "kraus_from_chi",
    "measurement_probabilities",
    "process_fidelity",
    "psd_project",
    "pure_from_label",
    "purity",
    "qpt",
    "qst_linear",
    "qwp",
    "run_depolarization_sweep",
    "run_process_tomography_experiment",
    "run_splitting_scan",
    "sagnac_split",
    "sagnac_split_jones",
    "simulate_counts",
    "splitting_parameter",
    "state_fidelity",
    "validate_channel",
]
