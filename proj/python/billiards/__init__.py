"""Quantum billiard spectra, periodic orbits, spectral statistics and length spectra."""

from ._core import (
    BilliardShape,
    ConfigError,
    DomainError,
    NumericFailure,
    __version__,
    axis_orbits,
    cb_spectrum_below,
    confocal_conic,
    eb_catalog,
    eb_spectrum,
    eb_spectrum_below,
    ellipse_from_sigma,
    length_spectrum,
    number_variance,
    poisson_levels,
    rb_spectrum_below,
    rectangle_from_sigma,
    rigidity,
    run_cli,
)

__all__ = [
    "BilliardShape",
    "ConfigError",
    "DomainError",
    "NumericFailure",
    "__version__",
    "axis_orbits",
    "cb_spectrum_below",
    "confocal_conic",
    "eb_catalog",
    "eb_spectrum",
    "eb_spectrum_below",
    "ellipse_from_sigma",
    "length_spectrum",
    "number_variance",
    "poisson_levels",
    "rb_spectrum_below",
    "rectangle_from_sigma",
    "rigidity",
    "run_cli",
]
