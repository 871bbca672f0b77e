"""POD-ROM closure lengthscales (delta1, delta2), Galerkin ROMs and calibration."""

from ._core import (
    BurgersExperiment,
    NumericalError,
    ShapeError,
    ValidationError,
    __version__,
    bisect_threshold,
    burgers_snapshots,
    cli,
    delta2,
    energy_ratio,
    friction_velocity,
    golden_section,
    invert_delta2,
    pod,
    r12,
    u_rms,
)

__all__ = [
    "BurgersExperiment",
    "NumericalError",
    "ShapeError",
    "ValidationError",
    "__version__",
    "bisect_threshold",
    "burgers_snapshots",
    "cli",
    "delta2",
    "energy_ratio",
    "friction_velocity",
    "golden_section",
    "invert_delta2",
    "pod",
    "r12",
    "u_rms",
]
