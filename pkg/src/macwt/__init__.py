"""Exact-arithmetic rate regions for K-user multiple-access wiretap channels.

The package is organised around five layers:

- :mod:`macwt.probability`: finite-alphabet channels, product inputs,
  entropies and conditional mutual informations.
- :mod:`macwt.geometry`: exact rational linear systems, Fourier-Motzkin
  projection, simplex LP with certificates, 2D hulls and separation.
- :mod:`macwt.regions`: the rate-region builders (secrecy structures,
  auxiliary-rate solving, extremal sum rates, containment checks).
- :mod:`macwt.adder`: the two-user binary-input adder-channel study
  (closed-form entropies, region cases, grid sweep, hull separation).
- :mod:`macwt.resolvability`: exact small-blocklength codebook experiments
  (output statistics, total-variation decay, information leakage).

The :mod:`macwt.cli` module wires everything to files.
"""

from macwt.probability import (
    InputDistribution,
    JointDistribution,
    MacWiretapChannel,
    conditional_mutual_information,
    entropy,
    joint_distribution,
)
from macwt.regions import (
    RegionDescriptor,
    build_lemma1_systems,
    build_lemma2_region,
    build_theorem1_structure,
    build_theorem3_region,
    check_condition_cond1,
    containment_theorem5,
    find_aux_rates,
    max_open_sum_at_secrecy_max,
    max_sum_secrecy_rate,
)

__all__ = [
    "InputDistribution",
    "JointDistribution",
    "MacWiretapChannel",
    "RegionDescriptor",
    "build_lemma1_systems",
    "build_lemma2_region",
    "build_theorem1_structure",
    "build_theorem3_region",
    "check_condition_cond1",
    "conditional_mutual_information",
    "containment_theorem5",
    "entropy",
    "find_aux_rates",
    "joint_distribution",
    "max_open_sum_at_secrecy_max",
    "max_sum_secrecy_rate",
]

__version__ = "0.1.0"
