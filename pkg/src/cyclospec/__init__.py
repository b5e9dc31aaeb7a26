"""Driven cyclic three-level emitters: dynamics, emission spectra, chirality.

The library propagates the rotating-frame amplitudes of three driven upper
levels, evaluates long-time spontaneous emission spectra from the resolvent
on the imaginary axis, and estimates the enantiomeric excess of a chiral
mixture from line strengths at phase-eliminated spectral lines.
"""

__version__ = "0.1.0"

from .chirality import (ChiralSample, Handedness, MixtureReport, assay_mixture,
                        calibrate_eta, effective_phase, estimate_ee,
                        mixture_spectrum, single_molecule_spectrum)
from .dynamics import Trajectory, evolve_exact, evolve_full, evolve_rk
from .model import (AmplitudeVector, CoefficientMatrix, NumericsError,
                    RegimeReport, SystemParams, Topology,
                    build_coefficient_matrix, validate_regime)
from .spectrum import (FeatureKind, LineFeature, SpectrumGrid,
                       build_detuning_grid, default_window, dk_consistency,
                       find_line_features, find_local_minimum, line_centers,
                       phase_sweep, resolvent, spectrum_at, spectrum_channels,
                       spectrum_common, spectrum_distinct,
                       spectrum_normalization)

__all__ = [
    "__version__",
    "AmplitudeVector", "CoefficientMatrix", "NumericsError", "RegimeReport",
    "SystemParams", "Topology", "build_coefficient_matrix", "validate_regime",
    "Trajectory", "evolve_exact", "evolve_full", "evolve_rk",
    "FeatureKind", "LineFeature", "SpectrumGrid", "build_detuning_grid",
    "default_window", "dk_consistency", "find_line_features",
    "find_local_minimum", "line_centers", "phase_sweep", "resolvent",
    "spectrum_at", "spectrum_channels", "spectrum_common", "spectrum_distinct",
    "spectrum_normalization",
    "ChiralSample", "Handedness", "MixtureReport", "assay_mixture",
    "calibrate_eta", "effective_phase", "estimate_ee", "mixture_spectrum",
    "single_molecule_spectrum",
]
