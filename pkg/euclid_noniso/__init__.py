from .inequalities import Inequality, ClaimCertificate
from .discrepancy import DiscrepancyReport, discrepancy, max_discrepancy
from .claim_one import Claim1Config, build_claim1_config, verify_claim1_chain
from .claim_two import Claim2Config, build_claim2_config, verify_claim2_chain
from .good_enumeration import GoodEnumeration, good_enumeration
from .compatibility import (
    CompatibilityStats,
    RationalIsometry,
    analytic_bound,
    compatibility_mc,
    p_star,
    write_compatibility_csv,
)
from .delta_free import delta_free_filter, distance_profile, profiles_compatible, delta_free_demo
from .sampling import random_claim_inputs


__all__ = [
    "Inequality",
    "ClaimCertificate",
    "DiscrepancyReport",
    "discrepancy",
    "max_discrepancy",
    "Claim1Config",
    "build_claim1_config",
    "verify_claim1_chain",
    "Claim2Config",
    "build_claim2_config",
    "verify_claim2_chain",
    "GoodEnumeration",
    "good_enumeration",
    "CompatibilityStats",
    "RationalIsometry",
    "analytic_bound",
    "compatibility_mc",
    "p_star",
    "write_compatibility_csv",
    "delta_free_filter",
    "distance_profile",
    "profiles_compatible",
    "delta_free_demo",
    "random_claim_inputs",
]
