"""Monte Carlo for SU(N) and SO(N) lattice gauge theory on finite boxes."""

from .config import RunConfig, load_config, parse_config
from .estimate import Estimate, InsufficientSamples, batch_means, merge_estimates
from .exact import factorization_deficit, su_plaquette_moments
from .field import GaugeField
from .groups import haar_sample, membership_error, proposal_matrix
from .observables import (correspondence, estimate_phi, factorization_ladder, master_residual_mc,
                          run_chain)
from .region import Region, RegionError

__all__ = [
    "Estimate", "GaugeField", "InsufficientSamples", "Region", "RegionError", "RunConfig",
    "batch_means", "correspondence", "estimate_phi", "factorization_deficit", "factorization_ladder",
    "haar_sample", "load_config", "master_residual_mc", "membership_error", "merge_estimates",
    "parse_config", "proposal_matrix", "run_chain", "su_plaquette_moments",
]
