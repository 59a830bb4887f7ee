"""MUSIC-type microwave imaging: Born data, imaging maps, series oracle and metrics."""

from ._core import (
    VACUUM_PERMEABILITY,
    VACUUM_PERMITTIVITY,
    Anomaly,
    Config,
    Grid,
    Medium,
    NumericalError,
    Split,
    ValidationError,
    arrangement_score,
    arrangement_spectrum,
    bessel_j,
    born_matrix,
    contrast,
    hankel0_2,
    imaging_maps,
    jaccard_curve,
    series_map,
    small_anomaly_check,
    wavenumber,
)

__all__ = [
    "VACUUM_PERMEABILITY",
    "VACUUM_PERMITTIVITY",
    "Anomaly",
    "Config",
    "Grid",
    "Medium",
    "NumericalError",
    "Split",
    "ValidationError",
    "arrangement_score",
    "arrangement_spectrum",
    "bessel_j",
    "born_matrix",
    "contrast",
    "hankel0_2",
    "imaging_maps",
    "jaccard_curve",
    "series_map",
    "small_anomaly_check",
    "wavenumber",
]
