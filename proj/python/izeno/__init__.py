from ._core import (
    ConfigError,
    FormFactorModel,
    NumericalError,
    PoleResult,
    SystemParams,
    __doc__,
    __version__,
    b_from_power,
    chi_squared,
    default_config,
    derived_power_coefficient,
    gamma_of_B,
    gamma_ratio_closed_form,
    golden_rule_gamma,
    partial_fractions,
    pole_newton,
    pole_perturbative,
    run,
    spectrum_normalization,
    validate,
)

__all__ = [
    "ConfigError",
    "FormFactorModel",
    "NumericalError",
    "PoleResult",
    "SystemParams",
    "b_from_power",
    "chi_squared",
    "default_config",
    "derived_power_coefficient",
    "gamma_of_B",
    "gamma_ratio_closed_form",
    "golden_rule_gamma",
    "partial_fractions",
    "pole_newton",
    "pole_perturbative",
    "run",
    "spectrum_normalization",
    "validate",
]
