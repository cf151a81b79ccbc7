"""Deterministic interference scans for coupled Mach-Zehnder systems fed by
spectrally distributed, phase-correlated photon-pair ensembles."""

from ._version import __version__
from .errors import ConfigurationError
from .source import (
    EnsembleSpec,
    PhaseMode,
    PhotonPairSample,
    Sampling,
    sample_ensemble,
)
from .correlator import I0, IntensityPair, PhaseContext
from .scenarios import (
    AOMSchedule,
    Scenario,
    ScanResult,
    ScanSpec,
    closed_form_hom,
    run_coherence_version,
    run_coupled_scan,
    run_hom_dip,
    run_scan,
)

__all__ = [
    "__version__",
    "ConfigurationError",
    "EnsembleSpec",
    "PhaseMode",
    "PhotonPairSample",
    "Sampling",
    "sample_ensemble",
    "I0",
    "IntensityPair",
    "PhaseContext",
    "AOMSchedule",
    "Scenario",
    "ScanResult",
    "ScanSpec",
    "closed_form_hom",
    "run_coherence_version",
    "run_coupled_scan",
    "run_hom_dip",
    "run_scan",
]
