"""Bundled parameter sets and the datasets they generate.

Each preset reproduces one standard scenario end to end:

- ``fig2``   population transfer blocked in one loop-phase direction
             (populations vs time for phases pi/2 and 3pi/2)
- ``fig3``   emission spectra for both lower-level topologies and both
             phases, showing line elimination and the interference dip
- ``fig5``   handedness-resolved population dynamics (mirror pair)
- ``fig6a``  left/right single-molecule emission spectra
- ``fig6b``  line strength at the a line swept over the drive phase

Presets fully determine the physical parameters; only grid controls
(point counts, window) may be overridden from outside.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .chirality import ChiralSample, Handedness, single_molecule_spectrum
from .dynamics import evolve_exact
from .model import AmplitudeVector, SystemParams, Topology
from .spectrum import phase_sweep, spectrum_common, spectrum_distinct, spectrum_normalization

HALF_PI = np.pi / 2
THREE_HALF_PI = 3 * np.pi / 2

#: strongly damped c level, weak a-b drive; phases pi/2 vs 3pi/2
TRANSFER_BLOCKING_PARAMS = SystemParams(
    gamma_a=0.01, gamma_b=0.01, gamma_c=100.0,
    omega_ab_rabi=0.5, omega_bc_rabi=5.0, omega_ca_rabi=5.0,
    delta_ab=0.0, delta_ca=0.0,
    omega_ab_split=1.0e3, omega_ca_split=1.0e3,
)

#: fully symmetric rates and drives used by the chirality scenarios
SYMMETRIC_CHIRAL_PARAMS = SystemParams(
    gamma_a=1.0, gamma_b=1.0, gamma_c=1.0,
    omega_ab_rabi=0.5, omega_bc_rabi=0.5, omega_ca_rabi=0.5,
    delta_ab=0.0, delta_ca=0.0,
    omega_ab_split=1.0e3, omega_ca_split=1.0e3,
)

INITIAL_B = AmplitudeVector.basis("b")


@dataclass(frozen=True)
class Dataset:
    """One table of results: an x column plus named traces, with metadata."""

    kind: str                       # populations | spectrum | sweep
    x_name: str
    x: np.ndarray
    series: list[tuple[str, np.ndarray]]
    params: SystemParams
    notes: dict[str, str] = field(default_factory=dict)


def _populations_dataset(params: SystemParams, phis: list[tuple[str, float]],
                         t_end: float, n_points: int,
                         columns=("a", "b", "c")) -> Dataset:
    times = np.linspace(0.0, t_end, n_points)
    series = []
    method = ""
    for label, phi in phis:
        traj = evolve_exact(replace(params, phi=phi), INITIAL_B, times)
        method = traj.method
        pops = traj.populations
        for name, col in zip("abc", pops.T):
            if name in columns:
                series.append((f"pop_{name}({label})", col))
    return Dataset(kind="populations", x_name="time", x=times, series=series,
                   params=params, notes={"method": method})


def build_fig2(n_points: int | None = None, window=None) -> Dataset:
    n = n_points or 1000
    return _populations_dataset(
        TRANSFER_BLOCKING_PARAMS,
        [("phi=pi/2", HALF_PI), ("phi=3pi/2", THREE_HALF_PI)],
        t_end=5.0, n_points=n, columns=("a", "b"))


def build_fig5(n_points: int | None = None, window=None) -> Dataset:
    n = n_points or 1000
    params = SYMMETRIC_CHIRAL_PARAMS
    times = np.linspace(0.0, 10.0, n)
    series = []
    for label, handed in [("left", Handedness.LEFT), ("right", Handedness.RIGHT)]:
        sample = ChiralSample(handed, HALF_PI, params)
        traj = evolve_exact(sample.effective_params(), INITIAL_B, times)
        for name, col in zip("abc", traj.populations.T):
            series.append((f"pop_{name}({label})", col))
    return Dataset(kind="populations", x_name="time", x=times, series=series,
                   params=params, notes={"method": "eigendecomposition"})


def build_fig3(n_points: int | None = None, window=None) -> Dataset:
    # presets trade grid density for a manageable CSV; the library default
    # (200k base points) is still available through n_points
    n_points = n_points or 20_000
    params = TRANSFER_BLOCKING_PARAMS
    series = []
    norm_notes = {}
    grid_x = None
    for topology, builder, tag in [
            (Topology.COMMON_LOWER, spectrum_common, "common"),
            (Topology.DISTINCT_LOWER, spectrum_distinct, "distinct")]:
        for label, phi in [("phi=pi/2", HALF_PI), ("phi=3pi/2", THREE_HALF_PI)]:
            p = replace(params, topology=topology, phi=phi)
            grid = builder(p, INITIAL_B, window, n_points)
            grid_x = grid.detunings
            series.append((f"S_{tag}({label})", grid.values))
            norm_notes[f"normalization_{tag}_{label}"] = f"{spectrum_normalization(grid):.6f}"
    return Dataset(kind="spectrum", x_name="delta_k", x=grid_x, series=series,
                   params=params, notes=norm_notes)


def build_fig6a(n_points: int | None = None, window=None) -> Dataset:
    n_points = n_points or 50_000
    params = SYMMETRIC_CHIRAL_PARAMS
    series = []
    notes = {}
    grid_x = None
    for label, handed in [("left", Handedness.LEFT), ("right", Handedness.RIGHT)]:
        sample = ChiralSample(handed, HALF_PI, params)
        grid = single_molecule_spectrum(sample, INITIAL_B, window, n_points)
        grid_x = grid.detunings
        series.append((f"S({label})", grid.values))
        notes[f"normalization_{label}"] = f"{spectrum_normalization(grid):.6f}"
    return Dataset(kind="spectrum", x_name="delta_k", x=grid_x, series=series,
                   params=params, notes=notes)


def build_fig6b(n_points: int | None = None, window=None) -> Dataset:
    params = SYMMETRIC_CHIRAL_PARAMS
    n = n_points or 721
    phis = np.linspace(0.0, 2 * np.pi, n)
    series = []
    for label, offset in [("left", 0.0), ("right", -np.pi)]:
        sweep = phase_sweep(replace(params, phi=0.0), INITIAL_B, 0.0, phis + offset)
        series.append((f"S_at_a_line({label})", sweep[:, 1]))
    return Dataset(kind="sweep", x_name="phi", x=phis, series=series,
                   params=params, notes={"delta_k": "0"})


PRESETS = {
    "fig2": build_fig2,
    "fig3": build_fig3,
    "fig5": build_fig5,
    "fig6a": build_fig6a,
    "fig6b": build_fig6b,
}

PRESET_PARAMS = {
    "fig2": TRANSFER_BLOCKING_PARAMS,
    "fig3": TRANSFER_BLOCKING_PARAMS,
    "fig5": SYMMETRIC_CHIRAL_PARAMS,
    "fig6a": SYMMETRIC_CHIRAL_PARAMS,
    "fig6b": SYMMETRIC_CHIRAL_PARAMS,
}


def run_preset(name: str, n_points: int | None = None, window=None) -> Dataset:
    """Build the dataset for one named preset."""
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from "
                         f"{', '.join(sorted(PRESETS))}") from None
    return builder(n_points=n_points, window=window)
