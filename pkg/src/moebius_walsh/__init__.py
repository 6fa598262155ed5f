"""Fourier-Walsh spectrum of the Moebius function at desk scale."""
from ._backend import BACKEND, available_backends
from .arith import FactorSummary, MoebiusTable, euler_phi, factor_toolkit, factorize, mobius_upto, mu_point, \
    sieve_moebius
from .cache import cache_roundtrip
from .characters import (DirichletCharacter, DirichletGroup, c_coefficient_closed, c_coefficient_direct,
                         characters_mod, conductor_and_primitive, exceptional_scan, expansion_identity_check,
                         gauss_sum, hurwitz_zeta, l_value_real_axis, l_values, mu_twisted_sum,
                         real_characters_mod, real_primitive_characters)
from .correlation import (BooleanFunction, CorrelationSplit, bt_level, correlate, correlation_split,
                          is_monotone, monotone_generate, spectral_concentration, spectral_pairing)
from .errors import CapacityError, ContractError, CorruptCacheError, DomainError, MWError, ParameterError
from .expsums import (ArcSet, BandlimitedStep, MajorArc, WalshApprox, WalshFourierExpansion, arc_inner_product,
                      bandlimited_step, exact_arc_integral, generating_sum, grid_sums, major_arcs,
                      minor_arc_scan, s_walsh_l1_report, walsh_approx, walsh_fourier_expansion)
from .noise import (Decomposition, NoiseParams, apply_noise_convolution, apply_noise_multiplier, kernel_K,
                    lemma1_decompose, tail_report)
from .walsh import (LevelProfile, WalshSpectrum, fwht, interval_cap, inverse_transform, level_profile,
                    low_degree_truncate, low_level_mass, naive_coefficient, real_transform,
                    select_good_interval, walsh_eval, walsh_table)

__all__ = [
    "BACKEND", "available_backends",
    "ArcSet", "BandlimitedStep", "BooleanFunction", "CorrelationSplit", "Decomposition", "DirichletCharacter",
    "DirichletGroup", "FactorSummary", "LevelProfile", "MajorArc", "MoebiusTable", "NoiseParams",
    "WalshApprox", "WalshFourierExpansion", "WalshSpectrum",
    "CapacityError", "ContractError", "CorruptCacheError", "DomainError", "MWError", "ParameterError",
    "apply_noise_convolution", "apply_noise_multiplier", "arc_inner_product", "bandlimited_step", "bt_level",
    "c_coefficient_closed", "c_coefficient_direct", "cache_roundtrip", "characters_mod",
    "conductor_and_primitive", "correlate", "correlation_split", "euler_phi", "exact_arc_integral",
    "exceptional_scan", "expansion_identity_check", "factor_toolkit", "factorize", "fwht", "gauss_sum",
    "generating_sum", "grid_sums", "hurwitz_zeta", "interval_cap", "inverse_transform", "is_monotone",
    "kernel_K", "l_value_real_axis", "l_values", "lemma1_decompose", "level_profile", "low_degree_truncate",
    "low_level_mass", "major_arcs", "minor_arc_scan", "mobius_upto", "monotone_generate", "mu_point",
    "mu_twisted_sum", "naive_coefficient", "real_characters_mod", "real_primitive_characters",
    "real_transform", "s_walsh_l1_report", "select_good_interval", "sieve_moebius", "spectral_concentration",
    "spectral_pairing", "tail_report", "walsh_approx", "walsh_eval", "walsh_fourier_expansion", "walsh_table",
]
