"""Plug-in estimation of conditional Shannon, Renyi and Tsallis entropies."""

from ._backend import BACKEND
from .asymptotics import (
    AsymptoticProfile,
    bound_constant,
    confidence_interval,
    profile,
    sup_deviation,
    variance_delta,
    variance_paper,
)
from .estimation import (
    EntropyEstimate,
    SampleSet,
    empirical_joint,
    empirical_marginals,
    estimate_entropy,
    estimate_power_sums,
)
from .exact import (
    Direction,
    EntropyValue,
    Family,
    check_identities,
    conditional_renyi,
    conditional_shannon,
    conditional_tsallis,
    entropy,
    power_sum,
    shannon,
)
from .pmf import (
    Axis,
    DomainError,
    JointPmf,
    conditionals,
    flatten_index,
    marginals,
    unflatten_index,
    validate,
)
from .simulation import (
    CampaignConfig,
    ZipfSpec,
    run_convergence,
    run_normality,
    sample,
    zipf_joint,
    zipf_pmf,
)

__version__ = "0.1.0"
