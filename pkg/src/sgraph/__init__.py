"""Random graphs whose vertex degrees are restricted to a set S.

Asymptotic quantities of the conditioned Erdos-Renyi graph, phase
transitions of mu*(lambda), giant-component and k-core predictions, and
Monte Carlo / exact oracles to check them.
"""

from .chareq import (CharEqError, TiedMaximizersError, mu_star, scan_phases,
                     solve_char_eq)
from .degree_set import DegreeSet, DegreeSetError, admissible_n, parse_degree_set
from .genfun import (eval_genfun, lambda_hat, pos_cdf, pos_mean, pos_pmf, psi, psi_check,
                     psi_tilde, q_value)
from .structure import (chi, core_prediction, giant_monotonicity_check, giant_prediction,
                        gw_extinction, h, h_bar, thinned_pmf)

__version__ = "0.1.0"
