"""Isoenergetic compression of infinite-square-well states and the Bayes cost
of telling two such states apart before and after the compression."""

from .compression import (CompressedState, compress, compressed_overlap, min_feasible_width,
                          probe_weight)
from .discrimination import (CostReport, cost_delta, discriminate_report, helstrom_cost,
                             make_general_pair, projective_probe_cost)
from .errors import ConfigError, InfeasibleError, InvariantError, SolverError
from .maxent import (CutoffPolicy, Feasibility, GibbsSolution, ProbabilityWeights,
                     classify_feasibility, mean_nsq, shannon_entropy, solve_gibbs)
from .well_basis import (StateVector, WellGeometry, cross_overlap, eigen_energy,
                         same_well_overlap, state_energy)

__version__ = "0.1.0"
