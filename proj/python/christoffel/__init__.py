"""Regularized Christoffel functions, kernel leverage scores and density estimates."""

from ._christoffel import (
    GramSystem,
    KernelSpec,
    NumericalError,
    ParseError,
    SpectralProfile,
    WeightedSample,
    bessel_k,
    density_names,
    density_value,
    estimate_density,
    evaluate_field,
    from_iid_sample,
    iid_sample,
    load_csv,
    rate_diagnostic,
    riemann_sample,
    support_indicator,
)

__all__ = [
    "GramSystem",
    "KernelSpec",
    "NumericalError",
    "ParseError",
    "SpectralProfile",
    "WeightedSample",
    "bessel_k",
    "density_names",
    "density_value",
    "estimate_density",
    "evaluate_field",
    "from_iid_sample",
    "iid_sample",
    "load_csv",
    "rate_diagnostic",
    "riemann_sample",
    "support_indicator",
]
