"""Tuple regular partition series: expansion, identities and congruence checks.

Thin wrapper over the C++ core. Coefficients come back as Python ints; reports
as dicts with the same keys as the command-line JSON output.
"""

from ._core import (
    RegulusError,
    b_series_check,
    claim_ids,
    count_tuple,
    density,
    discover,
    expand,
    family_claims,
    family_ids,
    identity_ids,
    modcheck,
    omega,
    run_cli,
    tau,
    verify_claim,
    verify_family,
    verify_identity,
)

__all__ = [
    "RegulusError",
    "b_series_check",
    "claim_ids",
    "count_tuple",
    "density",
    "discover",
    "expand",
    "family_claims",
    "family_ids",
    "identity_ids",
    "modcheck",
    "omega",
    "run_cli",
    "tau",
    "verify_claim",
    "verify_family",
    "verify_identity",
]
