"""Numerics for locally defined positive definite functions and their extensions."""

from .model import (CATALOG_IDS, ConfigurationError, DataError, Density, DomainError, GridSpec,
                    Interval, Kernel, PdFunction, SpectralMeasure, catalog_measure,
                    conjugate_reflect, evaluate, function_from_json, measure_from_json, product,
                    restrict, split_real_imag)

__version__ = "0.1.0"

__all__ = [
    "CATALOG_IDS", "ConfigurationError", "DataError", "Density", "DomainError", "GridSpec",
    "Interval", "Kernel", "PdFunction", "SpectralMeasure", "catalog_measure",
    "conjugate_reflect", "evaluate", "function_from_json", "measure_from_json", "product",
    "restrict", "split_real_imag",
]
