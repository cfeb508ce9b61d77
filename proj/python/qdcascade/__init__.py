"""Quantum-dot biexciton-exciton cascade simulator.

Polarization-entangled pair states with fine-structure splitting, detector
time-resolution convolution, tomographic reconstruction, time-averaged
concurrence maps, and the rotating-waveplate splitting eraser.
"""

from ._core import (
    HBAR_UEV_NS,
    PLANCK_UEV_NS,
    Basis,
    CascadeParams,
    DetectorModel,
    apply_local,
    basis_ket,
    bell_rl_plus_lr,
    cbar,
    cbar_erased,
    compensating_omega,
    concurrence,
    contour,
    convolved_rate,
    envelope,
    erase,
    fidelity,
    jones_hwp,
    jones_qwp,
    linear_reconstruct,
    measure_projections,
    projection_rate,
    projector,
    psi,
    qwp_pair_transform,
    reconstruct,
    rf_frequency_MHz,
    rho_of_t,
    rotating_hwp,
    shift_photon,
    sweep,
    which_path_distinguishability,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR_UEV_NS",
    "PLANCK_UEV_NS",
    "Basis",
    "CascadeParams",
    "DetectorModel",
    "apply_local",
    "basis_ket",
    "bell_rl_plus_lr",
    "cbar",
    "cbar_erased",
    "compensating_omega",
    "concurrence",
    "contour",
    "convolved_rate",
    "envelope",
    "erase",
    "fidelity",
    "jones_hwp",
    "jones_qwp",
    "linear_reconstruct",
    "measure_projections",
    "projection_rate",
    "projector",
    "psi",
    "qwp_pair_transform",
    "reconstruct",
    "rf_frequency_MHz",
    "rho_of_t",
    "rotating_hwp",
    "shift_photon",
    "sweep",
    "which_path_distinguishability",
]
